#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lamopt {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// Error categories surfaced by the library. The CLI maps these to exit codes.
enum class errc {
  invalid_argument,     ///< contract violation (sizes, ranges, malformed input)
  degenerate_laminate,  ///< zero plies where at least one is required
  material_error,       ///< thermodynamically inadmissible elastic constants
  ill_conditioned,      ///< singular/indefinite stiffness where a solve is needed
  not_applicable,       ///< operation undefined for the given loads
  size_guard,           ///< combinatorial enumeration would exceed its guard
  schema_error,         ///< JSON schema violation
  internal,             ///< invariant broken inside the library
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace lamopt
