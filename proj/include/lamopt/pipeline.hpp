#pragma once

#include <optional>
#include <string>

#include "lamopt/inner.hpp"
#include "lamopt/outer.hpp"
#include "lamopt/problem.hpp"

namespace lamopt {

/// Everything cmd optimize reports. design_margins are recomputed at the
/// retrieved sequence, so a result file re-validates from the stated stack.
struct DesignResult {
  std::string status;  ///< "optimal" | "infeasible-up-to-cap" | "rule-infeasible"
  int exit_code = 0;   ///< 0 success, 3 outer infeasible, 4 rule infeasible
  bool has_design = false;

  PlyCounts counts;
  Vec4 xi_a = Vec4::Zero();
  Vec4 xi_d_target = Vec4::Zero();
  Vec4 xi_d_achieved = Vec4::Zero();
  StackingSequence half;  ///< mid-plane -> skin
  double inner_residual = 0.0;
  RetrievalMethod method = RetrievalMethod::exhaustive;
  std::vector<RuleViolation> violations;

  OuterMargins outer_margins;   ///< at (counts, xi_d_target), from the outer LP
  OuterMargins design_margins;  ///< at the achieved sequence
  std::optional<double> buckling_factor;  ///< lambda_cr at the achieved D
  int buckling_m = 0;
  int buckling_p = 0;

  double outer_ms = 0.0;
  double inner_ms = 0.0;
};

/// solveOuter then retrieveStacking, margins recomputed at the result.
DesignResult runPipeline(const DesignProblem& problem);

}  // namespace lamopt
