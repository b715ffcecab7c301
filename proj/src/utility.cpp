#include "lpm/utility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "utility";

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

}  // namespace

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::trace: return "trace";
    case Scope::event: return "event";
    case Scope::activity: return "activity";
    case Scope::model: return "model";
  }
  return "";
}

Scope scope_from_string(std::string_view name) {
  if (name == "trace" || name == "T") return Scope::trace;
  if (name == "event" || name == "E") return Scope::event;
  if (name == "activity" || name == "A") return Scope::activity;
  if (name == "model" || name == "M") return Scope::model;
  throw ConfigError(kModule, "unknown scope '" + std::string(name) + "'");
}

Warnings& Warnings::operator+=(const Warnings& o) {
  missing_property += o.missing_property;
  missing_case_property += o.missing_case_property;
  zero_case_property += o.zero_case_property;
  zero_duration += o.zero_duration;
  undecided_model += o.undecided_model;
  undefined_determinism += o.undefined_determinism;
  return *this;
}

std::size_t Warnings::total() const {
  return missing_property + missing_case_property + zero_case_property + zero_duration + undecided_model +
         undefined_determinism;
}

bool CompositeUtility::needs_fitting_sublog() const {
  return std::any_of(constraints.begin(), constraints.end(), [](const Constraint& c) { return c.scope() != Scope::model; }) ||
         std::any_of(utilities.begin(), utilities.end(),
                     [](const UtilityFunction& f) { return f.scope() != Scope::model; });
}

bool CompositeUtility::has_model_constraints() const {
  return std::any_of(constraints.begin(), constraints.end(), [](const Constraint& c) { return c.scope() == Scope::model; });
}

void CompositeUtility::check_properties(const EventLog& log) const {
  if (log.empty()) return;
  auto check = [&](const std::string& term, const std::vector<std::string>& event_props,
                   const std::vector<std::string>& case_props) {
    for (const auto& p : event_props)
      if (!log.has_event_property(p))
        throw ConfigError(kModule, "'" + term + "' references event property '" + p + "', which no event carries");
    for (const auto& p : case_props)
      if (!log.has_case_property(p))
        throw ConfigError(kModule, "'" + term + "' references case property '" + p + "', which no trace carries");
  };
  for (const auto& c : constraints) check(c.name, c.event_properties, c.case_properties);
  for (const auto& f : utilities) check(f.name, f.event_properties, f.case_properties);
}

LogContext::LogContext(const EventLog& l) : log(l), events(events_of(l)), counts(activities(l)) {}

namespace {

struct FittingViews {
  const FittingSubLog* sublog = nullptr;
  std::vector<const Event*> events;
  ActivityCounts counts;
};

template <class Result>
Result dispatch(const typename ScopedEvaluator<Result>::Any& evaluator, const LogContext& ctx,
                const FittingViews& fit, const Model& model, Warnings& warnings) {
  return std::visit(
      Overloaded{
          [&](const typename ScopedEvaluator<Result>::Trace& f) { return f(TraceArgs{ctx.log, *fit.sublog}, warnings); },
          [&](const typename ScopedEvaluator<Result>::Event& f) {
            return f(EventArgs{ctx.events, fit.events}, warnings);
          },
          [&](const typename ScopedEvaluator<Result>::Activity& f) {
            return f(ActivityArgs{ctx.counts, fit.counts}, warnings);
          },
          [&](const typename ScopedEvaluator<Result>::Model& f) { return f(model, warnings); },
          [&](const typename ScopedEvaluator<Result>::TraceAndModel& f) {
            return f(TraceArgs{ctx.log, *fit.sublog}, model, warnings);
          },
      },
      evaluator);
}

EvaluationResult run(const LogContext& ctx, const FittingSubLog* given, const Model& model,
                     const CompositeUtility& comp) {
  comp.check_properties(ctx.log);
  EvaluationResult result;
  for (const auto& c : comp.constraints) result.constraints.push_back({c.name, c.scope(), 0, false});
  for (const auto& f : comp.utilities) result.utilities.push_back({f.name, f.scope(), 0, false});

  FittingViews fit;
  std::optional<FittingSubLog> owned;
  auto ensure_fitting = [&] {
    if (fit.sublog) return;
    if (!given) {
      owned = gamma_log(ctx.log, *model.apn);
      given = &*owned;
    }
    fit.sublog = given;
    fit.events = given->events();
    fit.counts = activities(*given);
    result.fitting_events = fit.events.size();
  };

  // Model-level constraints need no replay; check them first.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < comp.constraints.size(); ++i) {
      const auto& c = comp.constraints[i];
      bool model_level = c.scope() == Scope::model;
      if ((pass == 0) != model_level) continue;
      if (!model_level) ensure_fitting();
      bool ok = dispatch<bool>(c.evaluator, ctx, fit, model, result.warnings);
      result.constraints[i].value = ok ? 1.0 : 0.0;
      result.constraints[i].evaluated = true;
      if (!ok) {
        result.score = 0.0;
        return result;
      }
    }
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < comp.utilities.size(); ++j) {
    const auto& f = comp.utilities[j];
    if (f.scope() != Scope::model) ensure_fitting();
    double v = f.weight * dispatch<double>(f.evaluator, ctx, fit, model, result.warnings);
    if (!std::isfinite(v)) throw Error(kModule, "'" + f.name + "' produced a non-finite value");
    result.utilities[j].value = v;
    result.utilities[j].evaluated = true;
    sum += v;
  }
  result.score = sum;
  return result;
}

}  // namespace

EvaluationResult evaluate(const EventLog& log, const Model& model, const CompositeUtility& comp) {
  LogContext ctx(log);
  return run(ctx, nullptr, model, comp);
}

EvaluationResult evaluate(const LogContext& context, const Model& model, const CompositeUtility& comp) {
  return run(context, nullptr, model, comp);
}

EvaluationResult evaluate(const LogContext& context, const FittingSubLog& fitting, const Model& model,
                          const CompositeUtility& comp) {
  return run(context, &fitting, model, comp);
}

bool satisfies_model_constraints(const Model& model, const CompositeUtility& comp, Warnings& warnings) {
  for (const auto& c : comp.constraints) {
    if (c.scope() != Scope::model) continue;
    if (!std::get<ScopedEvaluator<bool>::Model>(c.evaluator)(model, warnings)) return false;
  }
  return true;
}

OrdinalMap ordinal_map(const OrdinalScale& scale, std::map<std::string, double, std::less<>> assignment) {
  for (const auto& label : scale.labels) {
    if (!assignment.count(label)) {
      throw ConfigError(kModule, "ordinal map for scale '" + scale.name + "' has no value for label '" + label + "'");
    }
  }
  for (const auto& [label, value] : assignment) {
    if (!scale.rank_of(label)) {
      throw ConfigError(kModule, "ordinal map assigns '" + label + "', which is not on scale '" + scale.name + "'");
    }
  }
  return OrdinalMap{scale.name, std::move(assignment)};
}

std::optional<double> PropertyReader::read(const Event& e, Warnings& warnings) const {
  const PropertyValue* v = e.property(property);
  if (!v) {
    ++warnings.missing_property;
    return std::nullopt;
  }
  if (auto n = numeric_value(*v)) return n;
  if (auto o = std::get_if<Ordinal>(v)) {
    if (!ordinal) {
      throw ConfigError(kModule, "property '" + property + "' is ordinal; an ordinal map is required");
    }
    if (!ordinal->scale.empty() && ordinal->scale != o->scale) {
      throw ConfigError(kModule, "property '" + property + "' is on scale '" + o->scale + "', map is for '" +
                                     ordinal->scale + "'");
    }
    auto it = ordinal->values.find(o->label);
    if (it == ordinal->values.end()) {
      throw ConfigError(kModule, "ordinal label '" + o->label + "' of '" + property + "' has no mapped value");
    }
    return it->second;
  }
  throw ConfigError(kModule, "property '" + property + "' of event '" + e.id + "' is " +
                                 std::string(kind_name(*v)) + ", not numeric");
}

PropertyReader with_ordinal_map(PropertyReader reader, OrdinalMap map) {
  reader.ordinal = std::move(map);
  return reader;
}

std::optional<bool> net_ends_with(const AcceptingPetriNet& apn, std::string_view activity, std::size_t budget) {
  const PetriNet& net = apn.net();
  try {
    auto reaches_final = [&](const Marking& m) {
      for (const auto& c : tau_closure(net, m, budget))
        if (apn.is_final(c)) return true;
      return false;
    };
    if (reaches_final(apn.initial())) return false;  // the empty word does not end with anything
    std::unordered_set<Marking, MarkingHash> seen{apn.initial()};
    std::deque<Marking> queue{apn.initial()};
    while (!queue.empty()) {
      Marking m = std::move(queue.front());
      queue.pop_front();
      for (TransitionIndex t : enabled(net, m)) {
        Marking next = fire(net, m, t);
        const auto& label = net.transitions()[t].label;
        if (label && *label != activity && reaches_final(next)) return false;
        if (seen.insert(next).second) {
          if (seen.size() > budget) return std::nullopt;
          queue.push_back(std::move(next));
        }
      }
    }
    return true;
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

namespace builtin {

UtilityFunction event_cost_sum(PropertyReader property, double weight) {
  std::string name = "event_cost_sum(" + property.property + ")";
  std::vector<std::string> props{property.property};
  return {name, weight,
          ScopedEvaluator<double>::Event([property = std::move(property)](const EventArgs& a, Warnings& w) {
            double sum = 0;
            for (const Event* e : a.fitting_events)
              if (auto v = property.read(*e, w)) sum += *v;
            return sum;
          }),
          props, {}};
}

UtilityFunction share_per_activity(PropertyReader property, double weight) {
  std::string name = "share_per_activity(" + property.property + ")";
  std::vector<std::string> props{property.property};
  return {name, weight,
          ScopedEvaluator<double>::Event([property = std::move(property)](const EventArgs& a, Warnings& w) {
            std::map<std::string_view, double> total, fitting;
            Warnings ignored;  // log-wide gaps are not this model's concern
            for (const Event* e : a.log_events)
              if (auto v = property.read(*e, ignored)) total[e->activity] += *v;
            for (const Event* e : a.fitting_events)
              if (auto v = property.read(*e, w)) fitting[e->activity] += *v;
            double sum = 0;
            for (const auto& [activity, value] : fitting) {
              double denom = total[activity];
              if (denom != 0) sum += value / denom;
            }
            return sum;
          }),
          props, {}};
}

UtilityFunction trace_cost_share(PropertyReader event_property, std::string case_property, double weight) {
  std::string name = "trace_cost_share(" + event_property.property + "," + case_property + ")";
  std::vector<std::string> props{event_property.property};
  std::vector<std::string> case_props{case_property};
  return {name, weight,
          ScopedEvaluator<double>::Trace(
              [property = std::move(event_property), case_property](const TraceArgs& a, Warnings& w) {
                double sum = 0;
                for (const auto& sub : a.fitting.traces) {
                  if (sub.events.empty()) continue;
                  const PropertyValue* cp = sub.source->case_property(case_property);
                  if (!cp) {
                    ++w.missing_case_property;
                    continue;
                  }
                  auto denom = numeric_value(*cp);
                  if (!denom) {
                    throw ConfigError(kModule, "case property '" + case_property + "' of trace '" + sub.source->id +
                                                   "' is not numeric");
                  }
                  if (*denom == 0) {
                    ++w.zero_case_property;
                    continue;
                  }
                  for (const Event* e : sub.events)
                    if (auto v = property.read(*e, w)) sum += *v / *denom;
                }
                return sum;
              }),
          props, case_props};
}

UtilityFunction inverse_timespan(double ceiling, ZeroDurationPolicy policy, double weight) {
  if (!(ceiling > 0)) throw ConfigError(kModule, "inverse_timespan ceiling must be positive");
  return {"inverse_timespan", weight,
          ScopedEvaluator<double>::Trace([ceiling, policy](const TraceArgs& a, Warnings& w) {
            double sum = 0;
            for (const auto& sub : a.fitting.traces) {
              if (sub.events.empty()) continue;
              double span = seconds_between(sub.events.front()->time, sub.events.back()->time);
              if (span <= 0) {
                ++w.zero_duration;
                if (policy == ZeroDurationPolicy::cap) sum += ceiling;
                continue;
              }
              double v = 1.0 / span;
              if (v > ceiling) {
                ++w.zero_duration;
                v = ceiling;
              }
              sum += v;
            }
            return sum;
          }),
          {}, {}};
}

UtilityFunction support(double weight) {
  return {"support", weight,
          ScopedEvaluator<double>::Activity([](const ActivityArgs& a, Warnings&) {
            double n = 0;
            for (const auto& [activity, count] : a.fitting) n += static_cast<double>(count);
            return n;
          }),
          {}, {}};
}

UtilityFunction activity_interest(std::map<std::string, double, std::less<>> weights, double default_weight,
                                  double weight) {
  return {"activity_interest", weight,
          ScopedEvaluator<double>::Activity(
              [weights = std::move(weights), default_weight](const ActivityArgs& a, Warnings&) {
                double sum = 0;
                for (const auto& [activity, count] : a.fitting) {
                  auto it = weights.find(activity);
                  sum += (it == weights.end() ? default_weight : it->second) * static_cast<double>(count);
                }
                return sum;
              }),
          {}, {}};
}

UtilityFunction remaining_amount(std::string amount, std::string expense, std::string payment, double weight) {
  std::string name = "remaining_amount(" + amount + "," + expense + "," + payment + ")";
  std::vector<std::string> props{amount, payment};
  return {name, weight,
          ScopedEvaluator<double>::Trace([amount, expense, payment](const TraceArgs& a, Warnings&) {
            double sum = 0;
            for (const auto& sub : a.fitting.traces) {
              if (sub.events.empty()) continue;
              std::unordered_set<const Event*> fitting(sub.events.begin(), sub.events.end());
              double latest_amount = 0, expenses = 0, payments = 0;
              for (const Event& e : sub.source->events) {
                auto num = [&](const std::string& key) -> std::optional<double> {
                  const PropertyValue* v = e.property(key);
                  return v ? numeric_value(*v) : std::nullopt;
                };
                if (auto v = num(amount)) latest_amount = *v;
                if (auto v = num(expense)) expenses += *v;
                if (auto v = num(payment)) payments += *v;
                if (fitting.count(&e)) sum += latest_amount + expenses - payments;
              }
            }
            return sum;
          }),
          props, {}};
}

UtilityFunction determinism_metric(double weight) {
  return {"determinism", weight,
          ScopedEvaluator<double>::TraceAndModel([](const TraceArgs& a, const Model& m, Warnings& w) {
            auto stats = replay_choices(a.fitting, *m.apn);
            if (stats.moves == 0) {
              ++w.undefined_determinism;
              return 0.0;
            }
            return static_cast<double>(stats.moves) / static_cast<double>(stats.offered);
          }),
          {}, {}};
}

Constraint min_total(PropertyReader property, double threshold) {
  std::string name = "min_total(" + property.property + ">=" + to_string(PropertyValue{threshold}) + ")";
  auto sum = event_cost_sum(std::move(property));
  return {name,
          ScopedEvaluator<bool>::Event([f = std::get<ScopedEvaluator<double>::Event>(sum.evaluator), threshold](
                                           const EventArgs& a, Warnings& w) { return f(a, w) >= threshold; }),
          sum.event_properties, {}};
}

Constraint per_event_min(PropertyReader property, double threshold) {
  std::string name = "per_event_min(" + property.property + ">=" + to_string(PropertyValue{threshold}) + ")";
  std::vector<std::string> props{property.property};
  return {name,
          ScopedEvaluator<bool>::Event([property = std::move(property), threshold](const EventArgs& a, Warnings& w) {
            for (const Event* e : a.fitting_events) {
              auto v = property.read(*e, w);
              if (v && *v < threshold) return false;
            }
            return true;
          }),
          props, {}};
}

Constraint min_support(double threshold) {
  return {"min_support(" + to_string(PropertyValue{threshold}) + ")",
          ScopedEvaluator<bool>::Activity([threshold](const ActivityArgs& a, Warnings&) {
            double n = 0;
            for (const auto& [activity, count] : a.fitting) n += static_cast<double>(count);
            return n >= threshold;
          }),
          {}, {}};
}

Constraint ends_with(std::string activity) {
  std::string name = "ends_with(" + activity + ")";
  return {name,
          ScopedEvaluator<bool>::Model([activity = std::move(activity)](const Model& m, Warnings& w) {
            if (m.tree) {
              auto last = final_activities(*m.tree);
              return last.size() == 1 && *last.begin() == activity;
            }
            auto decided = net_ends_with(*m.apn, activity);
            if (!decided) {
              ++w.undecided_model;
              return false;
            }
            return *decided;
          }),
          {}, {}};
}

Constraint threshold(UtilityFunction function, std::optional<double> min, std::optional<double> max) {
  std::string name = function.name + " in [" + (min ? to_string(PropertyValue{*min}) : "-inf") + "," +
                     (max ? to_string(PropertyValue{*max}) : "inf") + "]";
  auto in_range = [min, max, weight = function.weight](double v) {
    v *= weight;
    return (!min || v >= *min) && (!max || v <= *max);
  };
  ScopedEvaluator<bool>::Any evaluator = std::visit(
      Overloaded{
          [&](const ScopedEvaluator<double>::Trace& f) -> ScopedEvaluator<bool>::Any {
            return ScopedEvaluator<bool>::Trace([f, in_range](const TraceArgs& a, Warnings& w) { return in_range(f(a, w)); });
          },
          [&](const ScopedEvaluator<double>::Event& f) -> ScopedEvaluator<bool>::Any {
            return ScopedEvaluator<bool>::Event([f, in_range](const EventArgs& a, Warnings& w) { return in_range(f(a, w)); });
          },
          [&](const ScopedEvaluator<double>::Activity& f) -> ScopedEvaluator<bool>::Any {
            return ScopedEvaluator<bool>::Activity(
                [f, in_range](const ActivityArgs& a, Warnings& w) { return in_range(f(a, w)); });
          },
          [&](const ScopedEvaluator<double>::Model& f) -> ScopedEvaluator<bool>::Any {
            return ScopedEvaluator<bool>::Model([f, in_range](const Model& m, Warnings& w) { return in_range(f(m, w)); });
          },
          [&](const ScopedEvaluator<double>::TraceAndModel& f) -> ScopedEvaluator<bool>::Any {
            return ScopedEvaluator<bool>::TraceAndModel(
                [f, in_range](const TraceArgs& a, const Model& m, Warnings& w) { return in_range(f(a, m, w)); });
          },
      },
      function.evaluator);
  return {name, std::move(evaluator), function.event_properties, function.case_properties};
}

}  // namespace builtin
}  // namespace lpm
