#pragma once

// Joint brute-force reference for the bi-level pipeline: enumerate every
// (counts, stacking sequence) pair by total ply count ascending and evaluate
// it with the SAME constraint functions the solver uses. The first total with
// any fully feasible design is the weight optimum.

#include <algorithm>
#include <optional>
#include <vector>

#include "lamopt/inner.hpp"
#include "lamopt/outer.hpp"
#include "lamopt/problem.hpp"
#include "lamopt/region.hpp"

namespace oracles {

struct BiLevelOptimum {
  int total_plies = 0;
  lamopt::PlyCounts counts;
  lamopt::StackingSequence sequence;
};

inline std::optional<BiLevelOptimum> bruteForceBiLevel(const lamopt::DesignProblem& problem) {
  const lamopt::AngleSet angles = problem.angleSet();
  const bool buckling_applies = problem.loads.Nx < 0.0 || problem.loads.Ny < 0.0;

  for (int n_total = 1; n_total <= problem.outer_rules.max_total_plies; ++n_total) {
    for (const std::vector<int>& cvec : lamopt::compositionsOf(n_total, angles.size())) {
      const lamopt::PlyCounts counts(cvec);
      const lamopt::OuterMargins margins = lamopt::checkPlyConstraints(
          counts, problem.outer_rules, problem.material, problem.loads, angles);
      if (margins.worstPly() < 0.0) continue;

      for (const auto& [seq, xi] : lamopt::bruteForceCloud(counts, angles, problem.options.mode)) {
        if (!lamopt::checkRules(seq, problem.inner_rules, angles).empty()) continue;
        if (buckling_applies) {
          const lamopt::Mat3 d = lamopt::dMatrix(xi, n_total, problem.material);
          const lamopt::BucklingResult buck = lamopt::bucklingFactor(d, problem.loads);
          if (buck.factor - 1.0 < 0.0) continue;
        }
        return BiLevelOptimum{n_total, counts, seq};
      }
    }
  }
  return std::nullopt;
}

}  // namespace oracles
