#pragma once

#include <optional>
#include <vector>

#include "lamopt/geometry.hpp"
#include "lamopt/problem.hpp"

// Outer stage: minimize the total ply count over (n, xi^D) with xi^D free
// inside Omega_xi(n), subject to percentage, strain and buckling constraints.
// Candidates are enumerated by total N ascending, counts lexicographic
// ascending; the first feasible candidate is the global weight optimum.

namespace lamopt {

struct OuterMargins {
  std::vector<double> pct_min;  ///< n_k/N - min_pct_k
  std::vector<double> pct_max;  ///< max_pct_k - n_k/N
  Vec3 strain = Vec3::Zero();   ///< (allowable - |eps_j|)/allowable
  std::optional<double> buckling;  ///< slack s = lambda_cr - 1; empty if N/A

  /// Worst count-level margin (percentage + strain, buckling excluded).
  double worstPly() const;
};

/// Signed slacks of the ply-number-dependent constraints; feasible iff all
/// are >= 0. Buckling is left unset here.
OuterMargins checkPlyConstraints(const PlyCounts& counts, const RuleSetOuter& rules,
                                 const Material& mat, const LoadCase& loads,
                                 const AngleSet& angles);

struct BestXiD {
  Vec4 xi = Vec4::Zero();
  std::optional<double> margin;  ///< max-slack s*; empty when no mode applies
};

/// Max-slack LP over the vertex-weight simplex of Omega_xi(counts): maximize
/// s with lambda_buck(m, p; xi) >= 1 + s for every applicable mode. If a
/// vertex attains the optimal slack the vertex is returned (exactly
/// realizable downstream); otherwise the optimal mixture.
BestXiD bestXiD(const PlyCounts& counts, const LoadCase& loads, const Material& mat,
                const AngleSet& angles, XiMode mode);

enum class OuterStatus { optimal, infeasible_up_to_cap };

struct OuterResult {
  OuterStatus status = OuterStatus::infeasible_up_to_cap;
  PlyCounts counts;
  Vec4 xiD = Vec4::Zero();
  OuterMargins margins;
};

OuterResult solveOuter(const DesignProblem& problem);

/// All compositions of `total` into `n_parts` non-negative parts,
/// lexicographic ascending.
std::vector<std::vector<int>> compositionsOf(int total, int n_parts);

}  // namespace lamopt
