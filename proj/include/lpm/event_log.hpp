#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpm/property.hpp"
#include "lpm/timestamp.hpp"

namespace lpm {

/// Reserved property names that address the mandatory event attributes.
inline constexpr std::string_view kActivityKey = "activity";
inline constexpr std::string_view kTimeKey = "time";

struct Event {
  std::string id;
  std::string activity;
  Timestamp time{};
  PropertyMap props;

  /// Optional property lookup; "activity" and "time" are not stored here.
  const PropertyValue* property(std::string_view name) const;
};

struct Trace {
  std::string id;
  std::vector<Event> events;
  PropertyMap case_props;

  const PropertyValue* case_property(std::string_view name) const;
};

using ActivityCode = std::uint32_t;
using ActivitySet = std::set<std::string, std::less<>>;
using ActivityCounts = std::map<std::string, std::size_t, std::less<>>;

/// An immutable set of traces. Construction validates that traces are
/// non-empty, event ids are unique across the log, and timestamps never
/// decrease within a trace.
///
/// Besides the traces the log keeps a sorted alphabet and, per trace, the
/// activity of each event encoded as an index into that alphabet.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<Trace> traces);

  const std::vector<Trace>& traces() const { return traces_; }
  std::size_t size() const { return traces_.size(); }
  bool empty() const { return traces_.empty(); }
  std::size_t event_count() const { return event_count_; }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::optional<ActivityCode> code_of(std::string_view activity) const;
  std::span<const ActivityCode> codes(std::size_t trace_index) const { return codes_[trace_index]; }

  bool has_event_property(std::string_view name) const;
  bool has_case_property(std::string_view name) const;

 private:
  std::vector<Trace> traces_;
  std::vector<std::string> alphabet_;
  std::unordered_map<std::string, ActivityCode> code_index_;
  std::vector<std::vector<ActivityCode>> codes_;
  std::set<std::string, std::less<>> event_properties_;
  std::set<std::string, std::less<>> case_properties_;
  std::size_t event_count_ = 0;
};

/// Subsequence of `trace` with the events whose activity is in `alphabet`.
/// The result may be empty; case properties are carried over.
Trace project(const Trace& trace, const ActivitySet& alphabet);

/// Values of `property` along the trace, skipping events that lack it.
/// "activity" and "time" address the mandatory attributes.
std::vector<PropertyValue> lift_property(std::span<const Event> events, std::string_view property);
std::vector<PropertyValue> lift_property(std::span<const Event* const> events, std::string_view property);

ActivityCounts activities(const EventLog& log);
ActivityCounts activities(std::span<const Event* const> events);
std::size_t activities_count(const EventLog& log, std::string_view activity);
std::size_t activities_count(std::span<const Event* const> events, std::string_view activity);

/// All events of the log, in log order.
std::vector<const Event*> events_of(const EventLog& log);

}  // namespace lpm
