#pragma once

#include <cstdint>
#include <vector>

#include "lamopt/clt.hpp"

namespace lamopt {

/// "Universal" count-level rules P(n): percentage bounds per angle plus the
/// search cap. Empty percentage vectors mean no bound (0 / 1).
struct RuleSetOuter {
  std::vector<double> min_pct;
  std::vector<double> max_pct;
  int max_total_plies = 32;

  double minPct(int k) const { return min_pct.empty() ? 0.0 : min_pct[static_cast<size_t>(k)]; }
  double maxPct(int k) const { return max_pct.empty() ? 1.0 : max_pct[static_cast<size_t>(k)]; }
  void validate(int n_angles) const;
};

/// "Non-universal" sequence-level rules S(theta). All optional; zero means
/// unlimited and an empty skin-angle list means unrestricted.
struct RuleSetInner {
  int max_contiguous = 0;                ///< max identical adjacent plies
  std::vector<double> outer_ply_angles;  ///< allowed skin-ply angles (degrees)
  double max_disorientation = 0.0;       ///< max adjacent-ply angle jump (degrees)

  void validate() const;
};

struct SolveOptions {
  XiMode mode = XiMode::midpoint;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// One complete design task: what the CLI reads from a problem file.
struct DesignProblem {
  Material material;
  std::vector<double> angles;  ///< degrees; validated via AngleSet
  LoadCase loads;
  RuleSetOuter outer_rules;
  RuleSetInner inner_rules;
  SolveOptions options;

  AngleSet angleSet() const { return AngleSet(angles); }
  void validate() const;
};

}  // namespace lamopt
