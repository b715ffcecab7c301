#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lpm/petri.hpp"

namespace lpm {

/// Block-structured model: activity leaves, a silent leaf, and the operators
/// sequence, exclusive choice, concurrency and loop. A loop has exactly two
/// children: the body, and the redo part executed between repetitions.
class ProcessTree {
 public:
  enum class Kind { activity, tau, sequence, exclusive, concurrent, loop };

  static ProcessTree leaf(std::string activity);
  static ProcessTree tau();
  static ProcessTree node(Kind kind, std::vector<ProcessTree> children);
  /// loop(activity, tau): one or more repetitions of `activity`.
  static ProcessTree repeat(std::string activity);

  Kind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == Kind::activity || kind_ == Kind::tau; }
  /// An activity leaf, or a loop of an activity leaf with a silent redo.
  bool is_repeat() const;
  const std::string& activity() const { return activity_; }
  const std::vector<ProcessTree>& children() const { return children_; }

  /// Number of activity leaves.
  std::size_t activity_count() const;
  std::set<std::string> activities() const;

  /// Flattens nested sequence/choice/concurrency nodes of the same kind and
  /// orders the children of the commutative operators.
  ProcessTree canonical() const;

  /// `seq(A,and(loop(B,tau),C))`. Activities that are not plain identifiers,
  /// or collide with an operator keyword, are single-quoted.
  std::string to_string() const;

  bool operator==(const ProcessTree&) const = default;

 private:
  Kind kind_ = Kind::tau;
  std::string activity_;
  std::vector<ProcessTree> children_;
};

/// Inverse of ProcessTree::to_string. Also accepts `->`, `X`, `+`, `*` as
/// operator names. Throws ParseError.
ProcessTree parse_process_tree(std::string_view text);

/// Whether the tree stays within the candidate grammar: operators have at least
/// two children, loops exactly two; a loop's redo child is an activity or tau;
/// a tau-redo loop wraps a single activity; activities are pairwise distinct.
bool is_candidate_tree(const ProcessTree& tree);

/// Workflow net with one source place (initially marked) and one sink place
/// (the only final marking). Sequences chain places, choices share their
/// entry and exit places, concurrency uses a silent split and join, loops use
/// silent entry/exit transitions around a private body place.
AcceptingPetriNet tree_to_apn(const ProcessTree& tree);

/// Activities that can end an accepted word of the tree.
std::set<std::string> final_activities(const ProcessTree& tree);

}  // namespace lpm
