#pragma once

#include <vector>

#include "lamopt/types.hpp"

// Low-dimensional computational geometry and linear programming: affine
// hulls, convex hulls with degeneracy handling in up to 4 dimensions, point
// membership, and a small dense simplex solver. All functions are pure and
// use plain floating point; the geometry here lives in the unit box with a
// few dozen points, so tolerances suffice.

namespace lamopt {

/// The feasible region Omega_xi(n) as a convex polytope in 4-space.
/// Degenerate directions are explicit equality constraints, not thin facets.
struct FeasiblePolytope {
  /// Extreme points only, carrying the exact input coordinates.
  std::vector<Vec4> vertices;
  /// Facet system A*xi <= b in the ambient space (unit row normals).
  Eigen::Matrix<double, Eigen::Dynamic, 4> facet_normals;
  Eigen::VectorXd facet_offsets;
  /// Equality system C*xi = d spanning the orthogonal complement of the
  /// affine hull (orthonormal rows); affine_dim + rows(C) = 4.
  Eigen::Matrix<double, Eigen::Dynamic, 4> eq_normals;
  Eigen::VectorXd eq_offsets;
  int affine_dim = 0;
};

struct AffineHull {
  Eigen::Matrix<double, 4, Eigen::Dynamic> basis;       ///< orthonormal, 4 x dim
  Eigen::Matrix<double, Eigen::Dynamic, 4> complement;  ///< orthonormal rows, (4-dim) x 4
  Vec4 centroid = Vec4::Zero();
  int dim = 0;
};

/// Orthonormal basis of the span of the centered points; singular directions
/// below tol * (largest singular value) are discarded.
AffineHull affineHull(const std::vector<Vec4>& points, double tol = 1e-9);

/// Convex hull of 4-space points: dedup at 1e-12, project onto the affine
/// hull, enumerate facets in the reduced dimension (quickhull for dim >= 2),
/// lift back, attach equalities for the orthogonal complement.
FeasiblePolytope convexHull(const std::vector<Vec4>& points);

/// true iff A*xi <= b + tol and |C*xi - d| <= tol componentwise.
bool contains(const FeasiblePolytope& poly, const Vec4& xi, double tol);

/// Indices of points that are NOT convex combinations of the other points
/// (exact extremality via LP feasibility), in ascending order.
std::vector<int> extremePointIndices(const std::vector<Vec4>& points);

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;          ///< primal solution (free variables)
  double value = 0.0;         ///< objective c.x at the optimum
  Eigen::VectorXd dual_ineq;  ///< multipliers for A x <= b rows (>= 0)
  Eigen::VectorXd dual_eq;    ///< multipliers for C x = d rows
};

/// maximize c.x subject to A x <= b and C x = d, x free. Dense two-phase
/// simplex with Bland's rule; deterministic. Either system may be empty
/// (0 rows). Throws invalid_argument on dimension mismatch.
LpResult solveLP(const Eigen::VectorXd& objective, const Eigen::MatrixXd& A,
                 const Eigen::VectorXd& b, const Eigen::MatrixXd& C,
                 const Eigen::VectorXd& d);

}  // namespace lamopt
