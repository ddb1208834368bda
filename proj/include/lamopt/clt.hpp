#pragma once

#include <optional>
#include <vector>

#include "lamopt/types.hpp"

// Classical-laminate-theory kernels for symmetric laminates under membrane
// loading. Units are fixed to N, mm, MPa throughout. Only one symmetric half
// of the laminate is represented (position 1 at the mid-plane, position N at
// the skin); the mirrored full thickness H = 2*N*dz enters only in aMatrix /
// dMatrix.

namespace lamopt {

/// Trigonometric signature [cos 2t, cos 4t, sin 2t, sin 4t] of a ply angle.
using TrigSignature = Vec4;

/// z^2-weight rule used for the bending lamination parameters.
/// `midpoint` evaluates the literal sum with z_i = (i - 1/2)*dz;
/// `exact` uses the cubic-difference weight (z_top^3 - z_bot^3)/3, which
/// reproduces the ply-by-ply D integral bit-tightly.
enum class XiMode { midpoint, exact };

/// Maps an angle in degrees into the half-open interval (-90, 90].
double normalizeAngle(double deg);

/// The allowed ply orientation set Theta_1..Theta_{N_Theta} (degrees).
/// Angles are normalized on construction; duplicates after normalization and
/// sets outside 1..8 angles are rejected.
class AngleSet {
 public:
  explicit AngleSet(std::vector<double> angles_deg);

  int size() const { return static_cast<int>(angles_.size()); }
  double angle(int k) const { return angles_[static_cast<size_t>(k)]; }
  const std::vector<double>& angles() const { return angles_; }
  const TrigSignature& signature(int k) const { return signatures_[static_cast<size_t>(k)]; }

 private:
  std::vector<double> angles_;
  std::vector<TrigSignature> signatures_;
};

struct StrainAllowables {
  double tension = 0.0;      ///< allowable tensile strain (dimensionless, > 0)
  double compression = 0.0;  ///< allowable compressive strain magnitude (> 0)
  double shear = 0.0;        ///< allowable engineering shear strain (> 0)
};

/// Orthotropic ply material, plane stress. Moduli in MPa, thickness in mm.
struct Material {
  double E1 = 0.0;
  double E2 = 0.0;
  double G12 = 0.0;
  double nu12 = 0.0;
  double ply_thickness = 0.0;  ///< dz, one ply (mm)
  StrainAllowables allowables;

  /// Throws material_error unless E1,E2,G12,dz > 0 and 0 <= nu12 < sqrt(E1/E2).
  void validate() const;
};

/// Plies per angle for one symmetric half (the n vector).
struct PlyCounts {
  std::vector<int> counts;

  PlyCounts() = default;
  explicit PlyCounts(std::vector<int> c) : counts(std::move(c)) {}

  int size() const { return static_cast<int>(counts.size()); }
  int total() const;  ///< N = sum n_k
};

/// Ordered angle indices of one symmetric half. plies.front() sits next to
/// the mid-plane, plies.back() is the skin ply.
struct StackingSequence {
  std::vector<int> plies;

  StackingSequence() = default;
  explicit StackingSequence(std::vector<int> p) : plies(std::move(p)) {}

  int size() const { return static_cast<int>(plies.size()); }
  bool operator==(const StackingSequence& o) const { return plies == o.plies; }
};

/// Multiset of angle indices in `seq` as a PlyCounts over `n_angles` slots.
PlyCounts countsOf(const StackingSequence& seq, int n_angles);

struct LamParams {
  Vec4 xiA = Vec4::Zero();
  Vec4 xiD = Vec4::Zero();
};

/// Both lamination parameter vectors of one half.
LamParams lamParams(const StackingSequence& seq, const AngleSet& angles, XiMode mode);

/// Membrane running loads and panel geometry. Compression is negative.
struct LoadCase {
  double Nx = 0.0;   ///< N/mm
  double Ny = 0.0;   ///< N/mm
  double Nxy = 0.0;  ///< N/mm
  double plate_a = 1.0;  ///< panel length along x (mm)
  double plate_b = 1.0;  ///< panel width along y (mm)
  int max_mode = 4;      ///< highest buckling half-wave number per direction

  void validate() const;
};

/// Trig signature of one ply angle (degrees; normalized internally).
/// cos4/sin4 are built from the double-angle identities so the signature
/// satisfies them exactly.
TrigSignature zeta(double angle_deg);

/// In-plane lamination parameters xi^A = (1/N) sum_k n_k zeta(Theta_k).
/// Ordering-independent by construction. Throws degenerate_laminate for N = 0.
Vec4 xiA(const PlyCounts& counts, const AngleSet& angles);

/// Bending lamination parameters xi^D of one half. dz cancels and is fixed
/// to 1 internally. Throws degenerate_laminate for an empty sequence.
Vec4 xiD(const StackingSequence& seq, const AngleSet& angles, XiMode mode);

/// Plane-stress reduced stiffness Q (MPa), symmetric positive definite.
Mat3 reducedStiffness(const Material& mat);

/// Tsai-Pagano material invariants U1..U5 (MPa); U5 = (U1 - U4)/2 identically.
Eigen::Matrix<double, 5, 1> materialInvariants(const Material& mat);

/// Membrane stiffness A (N/mm) of the full symmetric laminate,
/// H = 2*N*dz, linear in xi^A.
Mat3 aMatrix(const Vec4& xi_a, int half_ply_count, const Material& mat);

/// Bending stiffness D (N*mm) of the full symmetric laminate,
/// prefactor H^3/12, linear in xi^D.
Mat3 dMatrix(const Vec4& xi_d, int half_ply_count, const Material& mat);

/// Mid-plane strains eps = A^{-1} [Nx, Ny, Nxy]. B = 0 for symmetric
/// laminates, so the membrane channel decouples. Throws ill_conditioned if A
/// is not positive definite.
Vec3 membraneStrain(const Mat3& A, const LoadCase& loads);

struct BucklingResult {
  double factor = 0.0;  ///< lambda_cr; +inf when no mode can buckle
  int m = 0;            ///< critical half-waves along x
  int p = 0;            ///< critical half-waves along y
};

/// Load factor of one (m, p) mode of the simply supported orthotropic plate
/// model (D16, D26 dropped). Empty when the mode's membrane work is not
/// compressive (non-positive denominator).
std::optional<double> bucklingModeFactor(const Mat3& D, const LoadCase& loads, int m, int p);

/// Critical buckling factor: min over m, p in [1, max_mode]. Requires at
/// least one of Nx, Ny negative (throws not_applicable otherwise). Linear in
/// D, hence linear in xi^D at fixed loads.
BucklingResult bucklingFactor(const Mat3& D, const LoadCase& loads);

}  // namespace lamopt
