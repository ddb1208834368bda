#pragma once

#include <string>
#include <vector>

#include "lamopt/problem.hpp"

// Inner stage: retrieve a stacking sequence whose xi^D is closest to the
// outer target while satisfying the manufacturing rules S(theta). The xi^A
// term of the matching objective is constant at fixed counts, so only the
// xi^D distance is minimized.

namespace lamopt {

struct RuleViolation {
  std::string rule;       ///< "max_contiguous" | "outer_ply" | "max_disorientation"
  int from = 0;           ///< 1-based ply position, mid-plane -> skin
  int to = 0;
  double observed = 0.0;  ///< run length, skin angle, or angle jump
};

/// Every rule violation of the sequence, with positions and observed values.
std::vector<RuleViolation> checkRules(const StackingSequence& seq, const RuleSetInner& rules,
                                      const AngleSet& angles);

enum class RetrievalMethod { automatic, exhaustive, branch_and_bound, local_search };

struct InnerResult {
  StackingSequence sequence;
  double residual = 0.0;  ///< |xi^D_target - xi^D(sequence)|^2
  std::vector<RuleViolation> violations;  ///< empty on success
  RetrievalMethod method = RetrievalMethod::exhaustive;
  bool rule_feasible = true;  ///< false = best-effort result, rules unsatisfiable
};

/// Global minimizer of the xi^D residual among rule-satisfying sequences.
/// Exhaustive scan when the multiset-permutation count is <= 1e5, otherwise
/// branch-and-bound from the skin inward with an interval bound on the
/// remaining z^2-weights, followed by a pairwise-swap polish. If no sequence
/// satisfies the rules the best-residual sequence is returned flagged with
/// its violations. Ties break to the lexicographically smallest sequence
/// read from the skin inward; both methods share that tie-break exactly.
InnerResult retrieveStacking(const PlyCounts& counts, const Vec4& xiD_target,
                             const RuleSetInner& rules, const AngleSet& angles, XiMode mode,
                             RetrievalMethod force = RetrievalMethod::automatic,
                             int threads = 1);

/// Monotone-descent pairwise-swap polish; accepts only strict residual
/// decreases (and rule-preserving swaps when respect_rules is set).
StackingSequence polishBySwaps(StackingSequence seq, const Vec4& target,
                               const RuleSetInner& rules, const AngleSet& angles, XiMode mode,
                               bool respect_rules);

}  // namespace lamopt
