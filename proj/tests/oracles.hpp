#pragma once

// Independent oracles for the test suites. Everything here recomputes results
// through a different route than the library: transformed-stiffness CLT
// summation over physical z coordinates, literal lamination-parameter sums
// with a real ply thickness, brute-force supporting-plane enumeration, and
// vertex-enumeration LP solving. Oracles stay independent of the code they
// check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lamopt/clt.hpp"

namespace oracles {

inline lamopt::Material fixtureMaterial() {
  lamopt::Material m;
  m.E1 = 135000.0;
  m.E2 = 10000.0;
  m.G12 = 5000.0;
  m.nu12 = 0.3;
  m.ply_thickness = 0.184;
  m.allowables.tension = 0.004;
  m.allowables.compression = 0.0035;
  m.allowables.shear = 0.007;
  return m;
}

/// Transformed reduced stiffness by the classic power formulas (independent
/// of the invariant route used in the library).
inline Eigen::Matrix3d qBar(const lamopt::Material& mat, double angle_deg) {
  const double nu21 = mat.nu12 * mat.E2 / mat.E1;
  const double denom = 1.0 - mat.nu12 * nu21;
  const double q11 = mat.E1 / denom;
  const double q22 = mat.E2 / denom;
  const double q12 = mat.nu12 * mat.E2 / denom;
  const double q66 = mat.G12;

  const double t = angle_deg * M_PI / 180.0;
  const double m = std::cos(t), n = std::sin(t);
  const double m2 = m * m, n2 = n * n, m4 = m2 * m2, n4 = n2 * n2, m2n2 = m2 * n2;

  Eigen::Matrix3d q;
  q(0, 0) = q11 * m4 + 2.0 * (q12 + 2.0 * q66) * m2n2 + q22 * n4;
  q(1, 1) = q11 * n4 + 2.0 * (q12 + 2.0 * q66) * m2n2 + q22 * m4;
  q(0, 1) = q(1, 0) = (q11 + q22 - 4.0 * q66) * m2n2 + q12 * (m4 + n4);
  q(0, 2) = q(2, 0) = (q11 - q12 - 2.0 * q66) * m2 * m * n + (q12 - q22 + 2.0 * q66) * m * n2 * n;
  q(1, 2) = q(2, 1) = (q11 - q12 - 2.0 * q66) * m * n2 * n + (q12 - q22 + 2.0 * q66) * m2 * m * n;
  q(2, 2) = (q11 + q22 - 2.0 * q12 - 2.0 * q66) * m2n2 + q66 * (m4 + n4);
  return q;
}

struct AbdOracle {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
};

/// Ply-by-ply ABD of the full symmetric laminate built from one half
/// (mid-plane -> skin), physical z coordinates, real ply thickness.
inline AbdOracle plyByPlyABD(const lamopt::StackingSequence& half, const lamopt::AngleSet& angles,
                             const lamopt::Material& mat) {
  std::vector<double> stack_angles;  // bottom skin -> top skin
  for (int i = half.size() - 1; i >= 0; --i) {
    stack_angles.push_back(angles.angle(half.plies[static_cast<size_t>(i)]));
  }
  for (int i = 0; i < half.size(); ++i) {
    stack_angles.push_back(angles.angle(half.plies[static_cast<size_t>(i)]));
  }
  const double dz = mat.ply_thickness;
  const double h_total = static_cast<double>(stack_angles.size()) * dz;
  AbdOracle out;
  double z_bot = -h_total / 2.0;
  for (double a : stack_angles) {
    const double z_top = z_bot + dz;
    const Eigen::Matrix3d q = qBar(mat, a);
    out.A += q * (z_top - z_bot);
    out.B += 0.5 * q * (z_top * z_top - z_bot * z_bot);
    out.D += (1.0 / 3.0) * q * (z_top * z_top * z_top - z_bot * z_bot * z_bot);
    z_bot = z_top;
  }
  return out;
}

/// xi^A and xi^D by the literal definition with a real ply thickness dz,
/// half-thickness h = N dz, z_i = (i - 1/2) dz (midpoint) or the cubic
/// difference (exact). A genuinely different arithmetic path than the
/// library's dz = 1 normalization.
inline Eigen::Vector4d xiDLiteral(const lamopt::StackingSequence& half,
                                  const lamopt::AngleSet& angles, double dz,
                                  lamopt::XiMode mode) {
  const int n = half.size();
  const double h = n * dz;
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (int i = 1; i <= n; ++i) {
    const Eigen::Vector4d zeta_i = angles.signature(half.plies[static_cast<size_t>(i - 1)]);
    if (mode == lamopt::XiMode::midpoint) {
      const double z = (i - 0.5) * dz;
      acc += 3.0 / (h * h * h) * zeta_i * z * z * dz;
    } else {
      const double zt = i * dz, zb = (i - 1) * dz;
      acc += 3.0 / (h * h * h) * zeta_i * (zt * zt * zt - zb * zb * zb) / 3.0;
    }
  }
  return acc;
}

inline Eigen::Vector4d xiALiteral(const lamopt::StackingSequence& half,
                                  const lamopt::AngleSet& angles, double dz) {
  const int n = half.size();
  const double h = n * dz;
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (int i = 0; i < n; ++i) {
    acc += angles.signature(half.plies[static_cast<size_t>(i)]) * dz / h;
  }
  return acc;
}

/// Exhaustive (m, p) scan of the simply supported orthotropic plate formula.
inline std::optional<double> bucklingScan(const Eigen::Matrix3d& d, const lamopt::LoadCase& lc) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int m = 1; m <= lc.max_mode; ++m) {
    for (int p = 1; p <= lc.max_mode; ++p) {
      const double u = (m / lc.plate_a) * (m / lc.plate_a);
      const double v = (p / lc.plate_b) * (p / lc.plate_b);
      const double denom = -lc.Nx * u - lc.Ny * v;
      if (denom <= 0.0) continue;
      const double num = M_PI * M_PI *
                         (d(0, 0) * u * u + 2.0 * (d(0, 1) + 2.0 * d(2, 2)) * u * v +
                          d(1, 1) * v * v);
      best = std::min(best, num / denom);
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return best;
}

/// Brute-force facet oracle: every hyperplane through affinely independent
/// point subsets that supports the whole set on one side. Points are given in
/// reduced coordinates of dimension r.
struct SupportingPlane {
  Eigen::VectorXd normal;
  double offset;
};

inline std::vector<SupportingPlane> supportingPlanes(const std::vector<Eigen::VectorXd>& pts,
                                                     int r, double tol = 1e-9) {
  std::vector<SupportingPlane> out;
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(static_cast<size_t>(r));
  const auto try_plane = [&]() {
    Eigen::MatrixXd edges(r - 1, r);
    for (int k = 1; k < r; ++k) {
      edges.row(k - 1) =
          (pts[static_cast<size_t>(idx[static_cast<size_t>(k)])] -
           pts[static_cast<size_t>(idx[0])])
              .transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges, Eigen::ComputeFullV);
    if (r > 1 && svd.singularValues()(r - 2) < 1e-9) return;  // affinely dependent
    Eigen::VectorXd normal = svd.matrixV().col(r - 1);
    const double offset = normal.dot(pts[static_cast<size_t>(idx[0])]);
    bool above = false, below = false;
    for (const Eigen::VectorXd& p : pts) {
      const double s = normal.dot(p) - offset;
      if (s > tol) above = true;
      if (s < -tol) below = true;
    }
    if (above && below) return;
    if (above) {
      normal = -normal;
    }
    SupportingPlane sp{normal, normal.dot(pts[static_cast<size_t>(idx[0])])};
    for (const SupportingPlane& q : out) {
      if ((q.normal - sp.normal).cwiseAbs().maxCoeff() <= 1e-7 &&
          std::abs(q.offset - sp.offset) <= 1e-7) {
        return;
      }
    }
    out.push_back(std::move(sp));
  };
  const auto recurse = [&](auto&& self, int pos, int start) -> void {
    if (pos == r) {
      try_plane();
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[static_cast<size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

/// Vertex-enumeration LP oracle: maximize c.x over { A x <= b } by solving
/// every n-subset of rows and keeping the best feasible intersection. Assumes
/// a bounded feasible region (callers add box rows).
inline std::optional<double> lpVertexEnumeration(const Eigen::VectorXd& c,
                                                 const Eigen::MatrixXd& a,
                                                 const Eigen::VectorXd& b, double tol = 1e-7) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  std::optional<double> best;
  std::vector<int> idx(static_cast<size_t>(n));
  const auto try_vertex = [&]() {
    Eigen::MatrixXd sub(n, n);
    Eigen::VectorXd rhs(n);
    for (int k = 0; k < n; ++k) {
      sub.row(k) = a.row(idx[static_cast<size_t>(k)]);
      rhs(k) = b(idx[static_cast<size_t>(k)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (((a * x - b).array() > tol).any()) return;
    const double v = c.dot(x);
    if (!best || v > *best) best = v;
  };
  const auto recurse = [&](auto&& self, int pos, int start) -> void {
    if (pos == n) {
      try_vertex();
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[static_cast<size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace oracles
