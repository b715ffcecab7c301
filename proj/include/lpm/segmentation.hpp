#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lpm/event_log.hpp"
#include "lpm/petri.hpp"

namespace lpm {

enum class SegmentKind { non_fitting, fitting };

/// Half-open span [begin, end) of Segmentation::projected.
struct Segment {
  SegmentKind kind;
  std::size_t begin;
  std::size_t end;

  std::size_t size() const { return end - begin; }
  bool operator==(const Segment&) const = default;
};

/// A projected trace split into λ1 γ1 λ2 ... γn λn+1. Segments alternate,
/// start and end with a (possibly empty) non-fitting segment, and every
/// fitting segment is a complete accepted run of the model.
struct Segmentation {
  std::vector<const Event*> projected;
  std::vector<Segment> segments;

  std::size_t fitting_count() const;
  /// Concatenation of the fitting segments (the fitting subsequence of the trace).
  std::vector<const Event*> fitting_events() const;
  std::vector<std::span<const Event* const>> fitting_runs() const;
};

/// Segments `trace` against `lpm`, maximizing the number of events covered by
/// fitting runs. Among optimal segmentations the one that starts a run as
/// early as possible, and then makes that run as long as possible, is chosen.
/// Throws BudgetExceeded when replay exceeds `budget` markings.
Segmentation segment_trace(const Trace& trace, const AcceptingPetriNet& lpm, std::size_t budget = kDefaultStateBudget);

std::vector<const Event*> gamma(const Trace& trace, const AcceptingPetriNet& lpm,
                                std::size_t budget = kDefaultStateBudget);

/// The fitting part of one trace. Keeps a pointer to the source trace so
/// case properties and context stay reachable.
struct SubTrace {
  const Trace* source = nullptr;
  std::vector<const Event*> events;
  /// Boundaries of the individual runs inside `events`.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
};

/// One SubTrace per trace of the log, in log order; traces without fitting
/// behavior contribute an empty SubTrace.
struct FittingSubLog {
  std::vector<SubTrace> traces;

  std::size_t event_count() const;
  std::vector<const Event*> events() const;
};

ActivityCounts activities(const FittingSubLog& sublog);
std::size_t activities_count(const FittingSubLog& sublog, std::string_view activity);
std::vector<const Event*> events_of(const FittingSubLog& sublog);

/// Applies segmentation to every trace. The net and log are only read.
FittingSubLog gamma_log(const EventLog& log, const AcceptingPetriNet& lpm, std::size_t budget = kDefaultStateBudget);

/// Replay statistics over all fitting runs of the log: how many labeled moves
/// were consumed and how many label-distinct moves were on offer in total.
struct ReplayChoiceStats {
  std::size_t moves = 0;
  std::size_t offered = 0;
};

ReplayChoiceStats replay_choices(const FittingSubLog& sublog, const AcceptingPetriNet& lpm,
                                 std::size_t budget = kDefaultStateBudget);

/// moves / offered over the fitting runs of the log. Throws lpm::Error when
/// nothing in the log fits the model.
double determinism(const AcceptingPetriNet& lpm, const EventLog& log, std::size_t budget = kDefaultStateBudget);
double determinism(const AcceptingPetriNet& lpm, const FittingSubLog& sublog, std::size_t budget = kDefaultStateBudget);

/// One line per trace, e.g. `λ1=⟨⟩ γ1=⟨A,B,B,C⟩ λ2=⟨C⟩ γ2=⟨A,B,C,B,B⟩ λ3=⟨⟩`,
/// followed by the same bracketing over event ids.
std::string render_segmentation(const Segmentation& s);

}  // namespace lpm
