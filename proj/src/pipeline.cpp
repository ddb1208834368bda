#include "lamopt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lamopt/region.hpp"

namespace lamopt {

namespace {

double msSince(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

DesignResult runPipeline(const DesignProblem& problem) {
  problem.validate();
  const AngleSet angles = problem.angleSet();

  DesignResult out;
  const auto t_outer = std::chrono::steady_clock::now();
  const OuterResult outer = solveOuter(problem);
  out.outer_ms = msSince(t_outer);

  if (outer.status == OuterStatus::infeasible_up_to_cap) {
    out.status = "infeasible-up-to-cap";
    out.exit_code = 3;
    out.counts = outer.counts;
    return out;
  }

  out.has_design = true;
  out.counts = outer.counts;
  out.xi_a = xiA(outer.counts, angles);
  out.xi_d_target = outer.xiD;
  out.outer_margins = outer.margins;

  // Postcondition of the outer stage: the target stays inside Omega_xi(n*).
  const double tol = std::max(problem.options.tol, 1e-7);
  if (!contains(feasibleRegion(outer.counts, angles, problem.options.mode), outer.xiD, tol)) {
    throw Error(errc::internal, "outer stage produced an infeasible lamination parameter target");
  }

  const auto t_inner = std::chrono::steady_clock::now();
  const InnerResult inner =
      retrieveStacking(outer.counts, outer.xiD, problem.inner_rules, angles,
                       problem.options.mode, RetrievalMethod::automatic,
                       problem.options.threads);
  out.inner_ms = msSince(t_inner);

  out.half = inner.sequence;
  out.inner_residual = inner.residual;
  out.method = inner.method;
  out.violations = inner.violations;
  out.xi_d_achieved = xiD(inner.sequence, angles, problem.options.mode);

  // Margins of the design as built: counts-level slacks plus buckling at the
  // achieved sequence.
  out.design_margins = checkPlyConstraints(outer.counts, problem.outer_rules, problem.material,
                                           problem.loads, angles);
  if (problem.loads.Nx < 0.0 || problem.loads.Ny < 0.0) {
    const Mat3 d = dMatrix(out.xi_d_achieved, outer.counts.total(), problem.material);
    const BucklingResult buck = bucklingFactor(d, problem.loads);
    out.buckling_factor = buck.factor;
    out.buckling_m = buck.m;
    out.buckling_p = buck.p;
    out.design_margins.buckling = buck.factor - 1.0;
  }

  if (!inner.rule_feasible) {
    out.status = "rule-infeasible";
    out.exit_code = 4;
  } else {
    out.status = "optimal";
    out.exit_code = 0;
  }
  return out;
}

}  // namespace lamopt
