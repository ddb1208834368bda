#include "lamopt/problem.hpp"

#include <cmath>

namespace lamopt {

void RuleSetInner::validate() const {
  if (max_contiguous < 0) {
    throw Error(errc::invalid_argument, "max_contiguous must be >= 0 (0 = unlimited)");
  }
  if (!(max_disorientation >= 0.0)) {
    throw Error(errc::invalid_argument, "max_disorientation must be >= 0 (0 = unlimited)");
  }
  for (double a : outer_ply_angles) {
    if (!std::isfinite(a)) throw Error(errc::invalid_argument, "non-finite skin-ply angle");
  }
}

void DesignProblem::validate() const {
  material.validate();
  loads.validate();
  const AngleSet set = angleSet();  // validates angle count, duplicates
  outer_rules.validate(set.size());
  inner_rules.validate();
  if (!(options.tol > 0.0)) throw Error(errc::invalid_argument, "tol must be positive");
  if (options.threads < 1) throw Error(errc::invalid_argument, "threads must be >= 1");
}

}  // namespace lamopt
