#include "lpm/event_log.hpp"

#include <algorithm>
#include <unordered_set>

#include "lpm/error.hpp"

namespace lpm {

const PropertyValue* Event::property(std::string_view name) const {
  auto it = props.find(name);
  return it == props.end() ? nullptr : &it->second;
}

const PropertyValue* Trace::case_property(std::string_view name) const {
  auto it = case_props.find(name);
  return it == case_props.end() ? nullptr : &it->second;
}

EventLog::EventLog(std::vector<Trace> traces) : traces_(std::move(traces)) {
  std::unordered_set<std::string_view> ids;
  ActivitySet labels;
  for (const auto& trace : traces_) {
    if (trace.events.empty()) throw ParseError("event_log", "trace '" + trace.id + "' has no events");
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      const Event& e = trace.events[i];
      if (!ids.insert(e.id).second) {
        throw ParseError("event_log", "trace '" + trace.id + "' event " + std::to_string(i) + ": duplicate event id '" +
                                          e.id + "'");
      }
      if (i > 0 && e.time < trace.events[i - 1].time) {
        throw ParseError("event_log", "trace '" + trace.id + "' event " + std::to_string(i) +
                                          ": timestamp earlier than its predecessor");
      }
      labels.insert(e.activity);
      for (const auto& [name, value] : e.props) event_properties_.insert(name);
    }
    for (const auto& [name, value] : trace.case_props) case_properties_.insert(name);
    event_count_ += trace.events.size();
  }
  alphabet_.assign(labels.begin(), labels.end());
  for (ActivityCode c = 0; c < alphabet_.size(); ++c) code_index_.emplace(alphabet_[c], c);
  codes_.reserve(traces_.size());
  for (const auto& trace : traces_) {
    auto& row = codes_.emplace_back();
    row.reserve(trace.events.size());
    for (const auto& e : trace.events) row.push_back(code_index_.at(e.activity));
  }
}

std::optional<ActivityCode> EventLog::code_of(std::string_view activity) const {
  auto it = code_index_.find(std::string(activity));
  if (it == code_index_.end()) return std::nullopt;
  return it->second;
}

bool EventLog::has_event_property(std::string_view name) const {
  if (name == kActivityKey || name == kTimeKey) return !traces_.empty();
  return event_properties_.find(name) != event_properties_.end();
}

bool EventLog::has_case_property(std::string_view name) const {
  return case_properties_.find(name) != case_properties_.end();
}

Trace project(const Trace& trace, const ActivitySet& alphabet) {
  Trace out;
  out.id = trace.id;
  out.case_props = trace.case_props;
  for (const auto& e : trace.events) {
    if (alphabet.count(e.activity)) out.events.push_back(e);
  }
  return out;
}

namespace {

std::optional<PropertyValue> read(const Event& e, std::string_view property) {
  if (property == kActivityKey) return PropertyValue{e.activity};
  if (property == kTimeKey) return PropertyValue{e.time};
  if (auto v = e.property(property)) return *v;
  return std::nullopt;
}

}  // namespace

std::vector<PropertyValue> lift_property(std::span<const Event> events, std::string_view property) {
  std::vector<PropertyValue> out;
  for (const auto& e : events) {
    if (auto v = read(e, property)) out.push_back(std::move(*v));
  }
  return out;
}

std::vector<PropertyValue> lift_property(std::span<const Event* const> events, std::string_view property) {
  std::vector<PropertyValue> out;
  for (const Event* e : events) {
    if (auto v = read(*e, property)) out.push_back(std::move(*v));
  }
  return out;
}

ActivityCounts activities(const EventLog& log) {
  ActivityCounts counts;
  for (const auto& trace : log.traces())
    for (const auto& e : trace.events) ++counts[e.activity];
  return counts;
}

ActivityCounts activities(std::span<const Event* const> events) {
  ActivityCounts counts;
  for (const Event* e : events) ++counts[e->activity];
  return counts;
}

std::size_t activities_count(const EventLog& log, std::string_view activity) {
  std::size_t n = 0;
  for (const auto& trace : log.traces())
    n += static_cast<std::size_t>(std::count_if(trace.events.begin(), trace.events.end(),
                                                [&](const Event& e) { return e.activity == activity; }));
  return n;
}

std::size_t activities_count(std::span<const Event* const> events, std::string_view activity) {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const Event* e) { return e->activity == activity; }));
}

std::vector<const Event*> events_of(const EventLog& log) {
  std::vector<const Event*> out;
  out.reserve(log.event_count());
  for (const auto& trace : log.traces())
    for (const auto& e : trace.events) out.push_back(&e);
  return out;
}

}  // namespace lpm
