#include "lamopt/outer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "lamopt/region.hpp"

namespace lamopt {

void RuleSetOuter::validate(int n_angles) const {
  if (!min_pct.empty() && static_cast<int>(min_pct.size()) != n_angles) {
    throw Error(errc::invalid_argument, "min_pct size does not match the angle set");
  }
  if (!max_pct.empty() && static_cast<int>(max_pct.size()) != n_angles) {
    throw Error(errc::invalid_argument, "max_pct size does not match the angle set");
  }
  double min_sum = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const double lo = minPct(k), hi = maxPct(k);
    if (!(lo >= 0.0) || !(lo <= hi) || !(hi <= 1.0)) {
      throw Error(errc::invalid_argument, "percentage bounds must satisfy 0 <= min <= max <= 1");
    }
    min_sum += lo;
  }
  if (min_sum > 1.0 + 1e-12) {
    throw Error(errc::invalid_argument, "sum of min_pct exceeds 1");
  }
  if (max_total_plies < 1) {
    throw Error(errc::invalid_argument, "max_total_plies must be >= 1");
  }
}

double OuterMargins::worstPly() const {
  double worst = strain.minCoeff();
  for (double m : pct_min) worst = std::min(worst, m);
  for (double m : pct_max) worst = std::min(worst, m);
  return worst;
}

OuterMargins checkPlyConstraints(const PlyCounts& counts, const RuleSetOuter& rules,
                                 const Material& mat, const LoadCase& loads,
                                 const AngleSet& angles) {
  const int n_angles = counts.size();
  rules.validate(n_angles);
  const int n_total = counts.total();
  if (n_total < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");

  OuterMargins out;
  for (int k = 0; k < n_angles; ++k) {
    const double frac = static_cast<double>(counts.counts[static_cast<size_t>(k)]) / n_total;
    out.pct_min.push_back(frac - rules.minPct(k));
    out.pct_max.push_back(rules.maxPct(k) - frac);
  }

  const Vec3 eps = membraneStrain(aMatrix(xiA(counts, angles), n_total, mat), loads);
  const StrainAllowables& lim = mat.allowables;
  const double ax = eps(0) >= 0.0 ? lim.tension : lim.compression;
  const double ay = eps(1) >= 0.0 ? lim.tension : lim.compression;
  out.strain(0) = (ax - std::abs(eps(0))) / ax;
  out.strain(1) = (ay - std::abs(eps(1))) / ay;
  out.strain(2) = (lim.shear - std::abs(eps(2))) / lim.shear;
  return out;
}

namespace {

std::vector<std::pair<int, int>> applicableModes(const LoadCase& loads) {
  std::vector<std::pair<int, int>> modes;
  for (int m = 1; m <= loads.max_mode; ++m) {
    for (int p = 1; p <= loads.max_mode; ++p) {
      const double u = (m / loads.plate_a) * (m / loads.plate_a);
      const double v = (p / loads.plate_b) * (p / loads.plate_b);
      if (-loads.Nx * u - loads.Ny * v > 0.0) modes.emplace_back(m, p);
    }
  }
  return modes;
}

double minModeSlack(const Vec4& xi, int n_total, const Material& mat, const LoadCase& loads,
                    const std::vector<std::pair<int, int>>& modes) {
  const Mat3 d = dMatrix(xi, n_total, mat);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [m, p] : modes) {
    const auto lambda = bucklingModeFactor(d, loads, m, p);
    worst = std::min(worst, *lambda - 1.0);
  }
  return worst;
}

}  // namespace

BestXiD bestXiD(const PlyCounts& counts, const LoadCase& loads, const Material& mat,
                const AngleSet& angles, XiMode mode) {
  const FeasiblePolytope poly = feasibleRegion(counts, angles, mode);
  const std::vector<std::pair<int, int>> modes = applicableModes(loads);
  const int n_total = counts.total();

  BestXiD out;
  if (modes.empty()) {
    // Nothing can buckle under these loads; any feasible point works and a
    // vertex keeps the inner problem exactly realizable.
    out.xi = poly.vertices.front();
    return out;
  }
  const int n_v = static_cast<int>(poly.vertices.size());
  if (n_v == 1) {
    out.xi = poly.vertices.front();
    out.margin = minModeSlack(out.xi, n_total, mat, loads, modes);
    return out;
  }

  // Slack of every vertex per mode; each buckling constraint is linear in
  // xi, hence in the convex weights.
  Eigen::MatrixXd lambda_table(static_cast<Eigen::Index>(modes.size()), n_v);
  for (int v = 0; v < n_v; ++v) {
    const Mat3 d = dMatrix(poly.vertices[static_cast<size_t>(v)], n_total, mat);
    for (size_t r = 0; r < modes.size(); ++r) {
      lambda_table(static_cast<Eigen::Index>(r), v) =
          *bucklingModeFactor(d, loads, modes[r].first, modes[r].second);
    }
  }

  // maximize s  s.t.  sum_mu w_mu lambda_mode(v_mu) >= 1 + s,
  //                   w >= 0, sum w = 1.
  const int n_vars = n_v + 1;
  const int n_modes = static_cast<int>(modes.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_modes + n_v, n_vars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_modes + n_v);
  for (int r = 0; r < n_modes; ++r) {
    a.block(r, 0, 1, n_v) = -lambda_table.row(r);
    a(r, n_v) = 1.0;
    b(r) = -1.0;
  }
  for (int v = 0; v < n_v; ++v) a(n_modes + v, v) = -1.0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(1, n_vars);
  c(0, n_v) = 0.0;
  Eigen::VectorXd d_eq = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(n_vars);
  objective(n_v) = 1.0;

  const LpResult lp = solveLP(objective, a, b, c, d_eq);
  if (lp.status != LpStatus::optimal) {
    throw Error(errc::internal, "bestXiD: max-slack LP failed");
  }

  // Prefer a vertex that attains the optimal slack.
  for (int v = 0; v < n_v; ++v) {
    const double sv = lambda_table.col(v).minCoeff() - 1.0;
    if (sv >= lp.value - 1e-9) {
      out.xi = poly.vertices[static_cast<size_t>(v)];
      out.margin = sv;
      return out;
    }
  }
  Eigen::VectorXd w = lp.x.head(n_v).cwiseMax(0.0);
  w /= w.sum();
  Vec4 xi = Vec4::Zero();
  for (int v = 0; v < n_v; ++v) xi += w(v) * poly.vertices[static_cast<size_t>(v)];
  out.xi = xi;
  out.margin = minModeSlack(xi, n_total, mat, loads, modes);
  return out;
}

std::vector<std::vector<int>> compositionsOf(int total, int n_parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(n_parts), 0);
  const auto recurse = [&](auto&& self, int pos, int rem) -> void {
    if (pos == n_parts - 1) {
      cur[static_cast<size_t>(pos)] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      self(self, pos + 1, rem - v);
    }
  };
  if (n_parts >= 1 && total >= 0) recurse(recurse, 0, total);
  return out;
}

namespace {

struct CandidateOutcome {
  bool feasible = false;
  OuterMargins margins;
  Vec4 xi = Vec4::Zero();
};

CandidateOutcome evaluateCandidate(const std::vector<int>& counts_vec,
                                   const DesignProblem& problem, const AngleSet& angles) {
  CandidateOutcome out;
  const PlyCounts counts(counts_vec);
  out.margins =
      checkPlyConstraints(counts, problem.outer_rules, problem.material, problem.loads, angles);
  if (out.margins.worstPly() < 0.0) return out;
  const BestXiD bx =
      bestXiD(counts, problem.loads, problem.material, angles, problem.options.mode);
  out.margins.buckling = bx.margin;
  out.xi = bx.xi;
  out.feasible = !bx.margin.has_value() || *bx.margin >= 0.0;
  return out;
}

}  // namespace

OuterResult solveOuter(const DesignProblem& problem) {
  problem.validate();
  const AngleSet angles = problem.angleSet();
  const int n_angles = angles.size();
  const int threads = std::max(1, problem.options.threads);

  for (int n_total = 1; n_total <= problem.outer_rules.max_total_plies; ++n_total) {
    const std::vector<std::vector<int>> candidates = compositionsOf(n_total, n_angles);
    std::vector<CandidateOutcome> outcomes(candidates.size());

    if (threads == 1 || candidates.size() < 2) {
      // Serial path short-circuits at the first feasible candidate.
      for (size_t i = 0; i < candidates.size(); ++i) {
        outcomes[i] = evaluateCandidate(candidates[i], problem, angles);
        if (outcomes[i].feasible) {
          return OuterResult{OuterStatus::optimal, PlyCounts(candidates[i]), outcomes[i].xi,
                             outcomes[i].margins};
        }
      }
      continue;
    }

    // Parallel path: evaluate the whole level, then pick the first feasible
    // candidate in enumeration order (identical to the serial result).
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const int n_workers = std::min<int>(threads, static_cast<int>(candidates.size()));
    for (int t = 0; t < n_workers; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (size_t i = static_cast<size_t>(t); i < candidates.size();
               i += static_cast<size_t>(n_workers)) {
            outcomes[i] = evaluateCandidate(candidates[i], problem, angles);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (outcomes[i].feasible) {
        return OuterResult{OuterStatus::optimal, PlyCounts(candidates[i]), outcomes[i].xi,
                           outcomes[i].margins};
      }
    }
  }

  OuterResult out;
  out.status = OuterStatus::infeasible_up_to_cap;
  out.counts = PlyCounts(std::vector<int>(static_cast<size_t>(n_angles), 0));
  return out;
}

}  // namespace lamopt
