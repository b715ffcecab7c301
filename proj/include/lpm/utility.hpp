#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpm/event_log.hpp"
#include "lpm/petri.hpp"
#include "lpm/process_tree.hpp"
#include "lpm/segmentation.hpp"

namespace lpm {

/// Which view of (log, fitting sub-log, model) an evaluator receives.
enum class Scope { trace, event, activity, model };

std::string_view to_string(Scope scope);
Scope scope_from_string(std::string_view name);

/// The model under evaluation. `tree` is set when the net was generated from a
/// process tree; structural model-level checks use it.
struct Model {
  const AcceptingPetriNet* apn = nullptr;
  const ProcessTree* tree = nullptr;
};

/// Per-evaluation counters for recoverable data issues.
struct Warnings {
  std::size_t missing_property = 0;     // event lacked a referenced property
  std::size_t missing_case_property = 0;
  std::size_t zero_case_property = 0;   // trace_cost_share denominator was 0
  std::size_t zero_duration = 0;        // inverse_timespan hit the ceiling
  std::size_t undecided_model = 0;      // model-level check could not be certified
  std::size_t undefined_determinism = 0;

  Warnings& operator+=(const Warnings& other);
  std::size_t total() const;
};

struct TraceArgs {
  const EventLog& log;
  const FittingSubLog& fitting;
};

struct EventArgs {
  std::span<const Event* const> log_events;
  std::span<const Event* const> fitting_events;
};

struct ActivityArgs {
  const ActivityCounts& log;
  const ActivityCounts& fitting;
};

template <class Result>
struct ScopedEvaluator {
  using Trace = std::function<Result(const TraceArgs&, Warnings&)>;
  using Event = std::function<Result(const EventArgs&, Warnings&)>;
  using Activity = std::function<Result(const ActivityArgs&, Warnings&)>;
  using Model = std::function<Result(const lpm::Model&, Warnings&)>;
  /// Needs both the fitting sub-log and the model; carries the trace scope.
  using TraceAndModel = std::function<Result(const TraceArgs&, const lpm::Model&, Warnings&)>;
  using Any = std::variant<Trace, Event, Activity, Model, TraceAndModel>;
};

/// Scope implied by the evaluator's argument signature.
template <class Result>
Scope scope_of(const typename ScopedEvaluator<Result>::Any& e) {
  constexpr Scope by_index[] = {Scope::trace, Scope::event, Scope::activity, Scope::model, Scope::trace};
  return by_index[e.index()];
}

/// Real-valued term of the composite. `weight` multiplies the evaluator's value.
struct UtilityFunction {
  std::string name;
  double weight = 1.0;
  ScopedEvaluator<double>::Any evaluator;
  std::vector<std::string> event_properties;  // must exist somewhere in the log
  std::vector<std::string> case_properties;

  Scope scope() const { return scope_of<double>(evaluator); }
};

/// 0/1 term of the composite.
struct Constraint {
  std::string name;
  ScopedEvaluator<bool>::Any evaluator;
  std::vector<std::string> event_properties;
  std::vector<std::string> case_properties;

  Scope scope() const { return scope_of<bool>(evaluator); }
};

/// u(L, M) = prod(constraints) * sum(weight_j * f_j).
struct CompositeUtility {
  std::vector<Constraint> constraints;
  std::vector<UtilityFunction> utilities;

  bool needs_fitting_sublog() const;
  bool has_model_constraints() const;
  /// Throws ConfigError when a term references a property that no event (or
  /// trace) of a non-empty log carries.
  void check_properties(const EventLog& log) const;
};

struct TermValue {
  std::string name;
  Scope scope;
  double value = 0;
  bool evaluated = false;
};

struct EvaluationResult {
  double score = 0;
  std::vector<TermValue> constraints;
  std::vector<TermValue> utilities;
  std::size_t fitting_events = 0;
  Warnings warnings;
};

/// Log-wide views shared by every evaluation against one log.
struct LogContext {
  explicit LogContext(const EventLog& log);

  const EventLog& log;
  std::vector<const Event*> events;
  ActivityCounts counts;
};

/// Evaluates model-level constraints first and stops at the first violated
/// constraint. The fitting sub-log is computed at most once, and only when a
/// term needs it.
EvaluationResult evaluate(const EventLog& log, const Model& model, const CompositeUtility& comp);
EvaluationResult evaluate(const LogContext& context, const Model& model, const CompositeUtility& comp);

/// Same, with the fitting sub-log already at hand.
EvaluationResult evaluate(const LogContext& context, const FittingSubLog& fitting, const Model& model,
                          const CompositeUtility& comp);

/// Model-level constraints only; true when all hold.
bool satisfies_model_constraints(const Model& model, const CompositeUtility& comp, Warnings& warnings);

// ---------------------------------------------------------------------------
// Numeric property access

/// Replaces ordinal labels with reals before aggregation.
struct OrdinalMap {
  std::string scale;  // empty: accept any scale
  std::map<std::string, double, std::less<>> values;
};

/// Builds an ordinal map, checking that every label of `scale` is assigned.
OrdinalMap ordinal_map(const OrdinalScale& scale, std::map<std::string, double, std::less<>> assignment);

/// Reads a numeric event property. Missing values yield nullopt and count a
/// warning; text, dates and unmapped ordinals are configuration errors.
struct PropertyReader {
  std::string property;
  std::optional<OrdinalMap> ordinal;

  std::optional<double> read(const Event& e, Warnings& warnings) const;
};

/// Wraps `reader` so ordinal values go through `map`.
PropertyReader with_ordinal_map(PropertyReader reader, OrdinalMap map);

// ---------------------------------------------------------------------------
// Builtins

enum class ZeroDurationPolicy { cap, skip };

namespace builtin {

/// Sum of the property over fitting events.
UtilityFunction event_cost_sum(PropertyReader property, double weight = 1.0);
/// Sum over activities of (fitting property sum / log property sum); activities
/// whose log-wide sum is 0 contribute 0.
UtilityFunction share_per_activity(PropertyReader property, double weight = 1.0);
/// Sum over fitting sub-traces of sum(property) / case property. A missing or
/// zero case property makes that trace contribute 0.
UtilityFunction trace_cost_share(PropertyReader event_property, std::string case_property, double weight = 1.0);
/// Sum over fitting sub-traces of 1 / (seconds from first to last event),
/// never more than `ceiling` per sub-trace. With `skip`, zero-length spans
/// contribute nothing instead of the ceiling.
UtilityFunction inverse_timespan(double ceiling = 1.0, ZeroDurationPolicy policy = ZeroDurationPolicy::cap,
                                 double weight = 1.0);
/// Number of fitting events.
UtilityFunction support(double weight = 1.0);
/// Sum over activities of weight(a) * fitting count of a.
UtilityFunction activity_interest(std::map<std::string, double, std::less<>> weights, double default_weight = 0.0,
                                  double weight = 1.0);
/// Remaining amount due at each fitting event, summed: the latest `amount`
/// seen in the case, plus all `expense` so far, minus all `payment` so far.
UtilityFunction remaining_amount(std::string amount, std::string expense, std::string payment, double weight = 1.0);
/// Replay determinism of the model on its fitting behavior (0 when nothing fits).
UtilityFunction determinism_metric(double weight = 1.0);

Constraint min_total(PropertyReader property, double threshold);
Constraint per_event_min(PropertyReader property, double threshold);
Constraint min_support(double threshold);
/// Every accepted word ends with `activity`.
Constraint ends_with(std::string activity);
/// Turns a utility function into a constraint: 1 iff min <= value <= max.
Constraint threshold(UtilityFunction function, std::optional<double> min, std::optional<double> max);

}  // namespace builtin

/// Decides "every accepted word ends with `activity`" on the net's reachability
/// graph: no labeled transition other than `activity` can be followed by a
/// final marking through silent moves only. nullopt when the budget runs out.
std::optional<bool> net_ends_with(const AcceptingPetriNet& apn, std::string_view activity,
                                  std::size_t budget = kDefaultStateBudget);

}  // namespace lpm
