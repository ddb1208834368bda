#include "lamopt/clt.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lamopt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double normalizeAngle(double deg) {
  double t = std::fmod(deg, 180.0);
  if (t <= -90.0) t += 180.0;
  if (t > 90.0) t -= 180.0;
  return t;
}

AngleSet::AngleSet(std::vector<double> angles_deg) {
  if (angles_deg.empty() || angles_deg.size() > 8) {
    throw Error(errc::invalid_argument,
                "angle set must contain between 1 and 8 angles, got " +
                    std::to_string(angles_deg.size()));
  }
  angles_.reserve(angles_deg.size());
  for (double a : angles_deg) {
    if (!std::isfinite(a)) throw Error(errc::invalid_argument, "non-finite ply angle");
    angles_.push_back(normalizeAngle(a));
  }
  for (size_t i = 0; i < angles_.size(); ++i) {
    for (size_t j = i + 1; j < angles_.size(); ++j) {
      if (angles_[i] == angles_[j]) {
        std::ostringstream os;
        os << "duplicate ply angle after normalization to (-90, 90]: " << angles_[i];
        throw Error(errc::invalid_argument, os.str());
      }
    }
  }
  signatures_.reserve(angles_.size());
  for (double a : angles_) signatures_.push_back(zeta(a));
}

void Material::validate() const {
  if (!(E1 > 0.0) || !(E2 > 0.0) || !(G12 > 0.0)) {
    throw Error(errc::material_error, "elastic moduli must be positive");
  }
  if (!(ply_thickness > 0.0)) {
    throw Error(errc::material_error, "ply thickness must be positive");
  }
  if (!(nu12 >= 0.0) || !(nu12 < std::sqrt(E1 / E2))) {
    throw Error(errc::material_error, "nu12 must satisfy 0 <= nu12 < sqrt(E1/E2)");
  }
  if (!(allowables.tension > 0.0) || !(allowables.compression > 0.0) ||
      !(allowables.shear > 0.0)) {
    throw Error(errc::material_error, "strain allowables must be positive");
  }
}

void LoadCase::validate() const {
  if (!(plate_a > 0.0) || !(plate_b > 0.0)) {
    throw Error(errc::invalid_argument, "plate dimensions must be positive");
  }
  if (max_mode < 1) throw Error(errc::invalid_argument, "max_mode must be >= 1");
  if (!std::isfinite(Nx) || !std::isfinite(Ny) || !std::isfinite(Nxy)) {
    throw Error(errc::invalid_argument, "non-finite running load");
  }
}

int PlyCounts::total() const {
  int n = 0;
  for (int c : counts) {
    if (c < 0) throw Error(errc::invalid_argument, "negative ply count");
    n += c;
  }
  return n;
}

PlyCounts countsOf(const StackingSequence& seq, int n_angles) {
  PlyCounts out(std::vector<int>(static_cast<size_t>(n_angles), 0));
  for (int k : seq.plies) {
    if (k < 0 || k >= n_angles) throw Error(errc::invalid_argument, "ply index out of range");
    ++out.counts[static_cast<size_t>(k)];
  }
  return out;
}

TrigSignature zeta(double angle_deg) {
  const double rad2 = 2.0 * normalizeAngle(angle_deg) * kPi / 180.0;
  const double c2 = std::cos(rad2);
  const double s2 = std::sin(rad2);
  // cos4/sin4 via double-angle keeps the signature identities exact.
  return TrigSignature(c2, 2.0 * c2 * c2 - 1.0, s2, 2.0 * c2 * s2);
}

Vec4 xiA(const PlyCounts& counts, const AngleSet& angles) {
  if (counts.size() != angles.size()) {
    throw Error(errc::invalid_argument, "ply counts and angle set size mismatch");
  }
  const int n_total = counts.total();
  if (n_total < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");
  Vec4 acc = Vec4::Zero();
  for (int k = 0; k < counts.size(); ++k) {
    acc += static_cast<double>(counts.counts[static_cast<size_t>(k)]) * angles.signature(k);
  }
  return acc / static_cast<double>(n_total);
}

Vec4 xiD(const StackingSequence& seq, const AngleSet& angles, XiMode mode) {
  const int n = seq.size();
  if (n < 1) throw Error(errc::degenerate_laminate, "empty stacking sequence");
  const double n3 = static_cast<double>(n) * n * n;
  Vec4 acc = Vec4::Zero();
  if (mode == XiMode::midpoint) {
    // 3 h^-3 sum zeta_i z_i^2 dz with dz = 1, z_i = i - 1/2.
    for (int i = 1; i <= n; ++i) {
      const double z = static_cast<double>(i) - 0.5;
      acc += (z * z) * angles.signature(seq.plies[static_cast<size_t>(i - 1)]);
    }
    return acc * (3.0 / n3);
  }
  // Exact: weight i^3 - (i-1)^3 = 3 i (i-1) + 1 telescopes to h^3.
  for (int i = 1; i <= n; ++i) {
    const double w = 3.0 * static_cast<double>(i) * (i - 1.0) + 1.0;
    acc += w * angles.signature(seq.plies[static_cast<size_t>(i - 1)]);
  }
  return acc / n3;
}

LamParams lamParams(const StackingSequence& seq, const AngleSet& angles, XiMode mode) {
  LamParams out;
  out.xiA = xiA(countsOf(seq, angles.size()), angles);
  out.xiD = xiD(seq, angles, mode);
  return out;
}

Mat3 reducedStiffness(const Material& mat) {
  mat.validate();
  const double nu21 = mat.nu12 * mat.E2 / mat.E1;
  const double denom = 1.0 - mat.nu12 * nu21;
  Mat3 q = Mat3::Zero();
  q(0, 0) = mat.E1 / denom;
  q(1, 1) = mat.E2 / denom;
  q(0, 1) = q(1, 0) = mat.nu12 * mat.E2 / denom;
  q(2, 2) = mat.G12;
  return q;
}

Eigen::Matrix<double, 5, 1> materialInvariants(const Material& mat) {
  const Mat3 q = reducedStiffness(mat);
  const double q11 = q(0, 0), q22 = q(1, 1), q12 = q(0, 1), q66 = q(2, 2);
  Eigen::Matrix<double, 5, 1> u;
  u(0) = (3.0 * q11 + 3.0 * q22 + 2.0 * q12 + 4.0 * q66) / 8.0;
  u(1) = (q11 - q22) / 2.0;
  u(2) = (q11 + q22 - 2.0 * q12 - 4.0 * q66) / 8.0;
  u(3) = (q11 + q22 + 6.0 * q12 - 4.0 * q66) / 8.0;
  u(4) = (q11 + q22 - 2.0 * q12 + 4.0 * q66) / 8.0;
  return u;
}

namespace {

// Shared U-combination: both A and D are this matrix scaled by a thickness
// factor, with the respective lamination parameters.
Mat3 invariantCombination(const Vec4& xi, const Eigen::Matrix<double, 5, 1>& u) {
  for (int j = 0; j < 4; ++j) {
    if (!(std::abs(xi(j)) <= 1.0 + 1e-9)) {
      throw Error(errc::invalid_argument, "lamination parameter outside [-1, 1]");
    }
  }
  Mat3 m;
  m(0, 0) = u(0) + u(1) * xi(0) + u(2) * xi(1);
  m(1, 1) = u(0) - u(1) * xi(0) + u(2) * xi(1);
  m(0, 1) = m(1, 0) = u(3) - u(2) * xi(1);
  m(2, 2) = u(4) - u(2) * xi(1);
  m(0, 2) = m(2, 0) = u(1) * xi(2) / 2.0 + u(2) * xi(3);
  m(1, 2) = m(2, 1) = u(1) * xi(2) / 2.0 - u(2) * xi(3);
  return m;
}

}  // namespace

Mat3 aMatrix(const Vec4& xi_a, int half_ply_count, const Material& mat) {
  if (half_ply_count < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");
  const double h_full = 2.0 * half_ply_count * mat.ply_thickness;
  return h_full * invariantCombination(xi_a, materialInvariants(mat));
}

Mat3 dMatrix(const Vec4& xi_d, int half_ply_count, const Material& mat) {
  if (half_ply_count < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");
  const double h_full = 2.0 * half_ply_count * mat.ply_thickness;
  return (h_full * h_full * h_full / 12.0) * invariantCombination(xi_d, materialInvariants(mat));
}

Vec3 membraneStrain(const Mat3& A, const LoadCase& loads) {
  loads.validate();
  Eigen::LLT<Mat3> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(errc::ill_conditioned, "membrane stiffness is not positive definite");
  }
  return llt.solve(Vec3(loads.Nx, loads.Ny, loads.Nxy));
}

std::optional<double> bucklingModeFactor(const Mat3& D, const LoadCase& loads, int m, int p) {
  const double u = (m / loads.plate_a) * (m / loads.plate_a);
  const double v = (p / loads.plate_b) * (p / loads.plate_b);
  const double work = -loads.Nx * u - loads.Ny * v;
  if (!(work > 0.0)) return std::nullopt;
  const double bend =
      D(0, 0) * u * u + 2.0 * (D(0, 1) + 2.0 * D(2, 2)) * u * v + D(1, 1) * v * v;
  return kPi * kPi * bend / work;
}

BucklingResult bucklingFactor(const Mat3& D, const LoadCase& loads) {
  loads.validate();
  if (loads.Nx >= 0.0 && loads.Ny >= 0.0) {
    throw Error(errc::not_applicable, "buckling requires a compressive load component");
  }
  BucklingResult best;
  best.factor = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= loads.max_mode; ++m) {
    for (int p = 1; p <= loads.max_mode; ++p) {
      const auto lambda = bucklingModeFactor(D, loads, m, p);
      if (lambda && *lambda < best.factor) {
        best.factor = *lambda;
        best.m = m;
        best.p = p;
      }
    }
  }
  return best;
}

}  // namespace lamopt
