#include "lamopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace lamopt {

namespace {

constexpr double kDedupTol = 1e-12;   // absolute, on vertex coordinates
constexpr double kHullEps = 1e-10;    // quickhull outside-distance threshold
constexpr double kReducedCost = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Feas = 1e-8;
constexpr int kExtremeFilterMax = 1024;

// ---------------------------------------------------------------------------
// Dense two-phase simplex on the standard form  min c.z  s.t.  M z = r, z >= 0.
// Bland's rule in both phases. Row multipliers are returned for the system as
// given (internal sign flips undone); redundant rows get multiplier 0.
// ---------------------------------------------------------------------------

struct StandardResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd z;
  double value = 0.0;
  Eigen::VectorXd row_duals;
};

StandardResult solveStandardForm(Eigen::MatrixXd M, Eigen::VectorXd rhs,
                                 const Eigen::VectorXd& cost) {
  const int n = static_cast<int>(M.cols());
  int m = static_cast<int>(M.rows());
  std::vector<double> row_sign(static_cast<size_t>(m), 1.0);
  for (int i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      M.row(i) = -M.row(i);
      rhs(i) = -rhs(i);
      row_sign[static_cast<size_t>(i)] = -1.0;
    }
  }
  const Eigen::MatrixXd m_flipped = M;  // pristine copy for dual extraction
  std::vector<int> row_origin(static_cast<size_t>(m));
  std::iota(row_origin.begin(), row_origin.end(), 0);

  // Tableau [M | I_art | rhs]; artificial columns n..n+m-1.
  Eigen::MatrixXd tab(m, n + m + 1);
  tab.leftCols(n) = M;
  tab.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
  tab.col(n + m) = rhs;
  std::vector<int> basis(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = n + i;

  const auto pivot = [&](int prow, int pcol) {
    tab.row(prow) /= tab(prow, pcol);
    for (int i = 0; i < static_cast<int>(tab.rows()); ++i) {
      if (i != prow && tab(i, pcol) != 0.0) tab.row(i) -= tab(i, pcol) * tab.row(prow);
    }
    basis[static_cast<size_t>(prow)] = pcol;
  };

  const auto run_phase = [&](const Eigen::VectorXd& phase_cost, int ncols) -> bool {
    // Returns false on unboundedness. ncols limits the eligible columns.
    for (int iter = 0; iter < 100000; ++iter) {
      const int rows = static_cast<int>(tab.rows());
      Eigen::VectorXd cb(rows);
      for (int i = 0; i < rows; ++i) cb(i) = phase_cost(basis[static_cast<size_t>(i)]);
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        const double reduced = phase_cost(j) - cb.dot(tab.col(j));
        if (reduced < -kReducedCost) {
          enter = j;
          break;  // Bland: smallest eligible index
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < rows; ++i) {
        const double a = tab(i, enter);
        if (a > kPivotTol) {
          const double ratio = tab(i, n + m) / a;
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 &&
               basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(errc::internal, "simplex iteration guard exceeded");
  };

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  if (!run_phase(phase1, n + m)) throw Error(errc::internal, "phase-1 LP unbounded");
  double art_sum = 0.0;
  for (int i = 0; i < static_cast<int>(tab.rows()); ++i) {
    if (basis[static_cast<size_t>(i)] >= n) art_sum += tab(i, n + m);
  }
  StandardResult out;
  if (art_sum > kPhase1Feas) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<int> keep_rows;
  for (int i = 0; i < static_cast<int>(tab.rows()); ++i) {
    if (basis[static_cast<size_t>(i)] < n) {
      keep_rows.push_back(i);
      continue;
    }
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter >= 0) {
      pivot(i, enter);
      keep_rows.push_back(i);
    }
    // else: redundant row, dropped below
  }
  if (static_cast<int>(keep_rows.size()) != static_cast<int>(tab.rows())) {
    Eigen::MatrixXd tab2(keep_rows.size(), tab.cols());
    std::vector<int> basis2, origin2;
    for (size_t t = 0; t < keep_rows.size(); ++t) {
      tab2.row(static_cast<int>(t)) = tab.row(keep_rows[t]);
      basis2.push_back(basis[static_cast<size_t>(keep_rows[t])]);
      origin2.push_back(row_origin[static_cast<size_t>(keep_rows[t])]);
    }
    tab = std::move(tab2);
    basis = std::move(basis2);
    row_origin = std::move(origin2);
  }

  // Phase 2 on the original cost; artificial columns are no longer eligible.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = cost;
  if (!run_phase(phase2, n)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.z = Eigen::VectorXd::Zero(n);
  const int rows = static_cast<int>(tab.rows());
  for (int i = 0; i < rows; ++i) {
    if (basis[static_cast<size_t>(i)] < n) out.z(basis[static_cast<size_t>(i)]) = tab(i, n + m);
  }
  out.value = cost.dot(out.z);

  // Duals: solve B^T y = c_B on the surviving rows of the pristine matrix.
  Eigen::MatrixXd bmat(rows, rows);
  Eigen::VectorXd cb(rows);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < rows; ++k) {
      bmat(k, i) = m_flipped(row_origin[static_cast<size_t>(k)], basis[static_cast<size_t>(i)]);
    }
    cb(i) = cost(basis[static_cast<size_t>(i)]);
  }
  Eigen::VectorXd y_rows = bmat.transpose().fullPivLu().solve(cb);
  out.row_duals = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < rows; ++k) {
    const int orig = row_origin[static_cast<size_t>(k)];
    out.row_duals(orig) = row_sign[static_cast<size_t>(orig)] * y_rows(k);
  }
  return out;
}

}  // namespace

LpResult solveLP(const Eigen::VectorXd& objective, const Eigen::MatrixXd& A,
                 const Eigen::VectorXd& b, const Eigen::MatrixXd& C,
                 const Eigen::VectorXd& d) {
  const int nvars = static_cast<int>(objective.size());
  const int ma = static_cast<int>(A.rows());
  const int mc = static_cast<int>(C.rows());
  if (nvars < 1) throw Error(errc::invalid_argument, "LP needs at least one variable");
  if (ma != b.size() || mc != d.size() || (ma > 0 && A.cols() != nvars) ||
      (mc > 0 && C.cols() != nvars)) {
    throw Error(errc::invalid_argument, "LP dimension mismatch");
  }

  // x = u - v with u, v >= 0; slacks on the inequality rows.
  const int ncols = 2 * nvars + ma;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ma + mc, ncols);
  Eigen::VectorXd rhs(ma + mc);
  if (ma > 0) {
    M.block(0, 0, ma, nvars) = A;
    M.block(0, nvars, ma, nvars) = -A;
    M.block(0, 2 * nvars, ma, ma) = Eigen::MatrixXd::Identity(ma, ma);
    rhs.head(ma) = b;
  }
  if (mc > 0) {
    M.block(ma, 0, mc, nvars) = C;
    M.block(ma, nvars, mc, nvars) = -C;
    rhs.tail(mc) = d;
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
  cost.head(nvars) = -objective;           // maximize <=> minimize the negation
  cost.segment(nvars, nvars) = objective;

  const StandardResult std_res = solveStandardForm(M, rhs, cost);
  LpResult out;
  out.status = std_res.status;
  if (std_res.status != LpStatus::optimal) return out;
  out.x = std_res.z.head(nvars) - std_res.z.segment(nvars, nvars);
  out.value = objective.dot(out.x);
  out.dual_ineq = -std_res.row_duals.head(ma);
  out.dual_eq = -std_res.row_duals.tail(mc);
  return out;
}

std::vector<int> extremePointIndices(const std::vector<Vec4>& points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw Error(errc::invalid_argument, "extremePointIndices: empty input");
  std::vector<bool> alive(static_cast<size_t>(n), true);
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
      if (j != i && alive[static_cast<size_t>(j)]) others.push_back(j);
    }
    if (others.empty()) continue;
    // Feasibility of  sum w_j p_j = p_i, sum w_j = 1, w >= 0  (phase 1 only).
    const int k = static_cast<int>(others.size());
    Eigen::MatrixXd M(5, k);
    for (int c = 0; c < k; ++c) {
      M.block<4, 1>(0, c) = points[static_cast<size_t>(others[static_cast<size_t>(c)])];
      M(4, c) = 1.0;
    }
    Eigen::VectorXd rhs(5);
    rhs.head<4>() = points[static_cast<size_t>(i)];
    rhs(4) = 1.0;
    const StandardResult r = solveStandardForm(M, rhs, Eigen::VectorXd::Zero(k));
    if (r.status == LpStatus::optimal) alive[static_cast<size_t>(i)] = false;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (alive[static_cast<size_t>(i)]) out.push_back(i);
  }
  return out;
}

AffineHull affineHull(const std::vector<Vec4>& points, double tol) {
  if (points.empty()) throw Error(errc::invalid_argument, "affineHull: empty input");
  AffineHull out;
  out.centroid = Vec4::Zero();
  for (const Vec4& p : points) out.centroid += p;
  out.centroid /= static_cast<double>(points.size());

  Eigen::MatrixXd x(points.size(), 4);
  for (size_t i = 0; i < points.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = (points[i] - out.centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int dim = 0;
  if (smax > 1e-14) {
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > tol * smax) ++dim;
    }
  }
  const Eigen::MatrixXd v = svd.matrixV();
  out.dim = dim;
  out.basis = v.leftCols(dim);
  out.complement = v.rightCols(4 - dim).transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Quickhull in the reduced dimension r in {2, 3, 4}. Facets are simplicial;
// coplanar duplicates are merged when lifting. The interior reference point
// (initial simplex centroid) stays interior for the whole run, which fixes
// every facet orientation.
// ---------------------------------------------------------------------------

namespace {

struct ReducedFacet {
  std::vector<int> verts;  // r point indices, sorted
  Eigen::VectorXd normal;
  double offset = 0.0;
  std::vector<int> neighbors;  // may contain dead ids; filtered on use
  std::vector<int> outside;
  bool alive = true;
};

struct ReducedHull {
  std::vector<ReducedFacet> facets;
  std::vector<int> vertex_indices;
};

void fitHyperplane(const std::vector<Eigen::VectorXd>& pts, ReducedFacet& f, int r,
                   const Eigen::VectorXd& interior) {
  Eigen::MatrixXd edges(r - 1, r);
  const Eigen::VectorXd& p0 = pts[static_cast<size_t>(f.verts[0])];
  for (int k = 1; k < r; ++k) {
    edges.row(k - 1) = (pts[static_cast<size_t>(f.verts[static_cast<size_t>(k)])] - p0).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges, Eigen::ComputeFullV);
  f.normal = svd.matrixV().col(r - 1);
  double off = 0.0;
  for (int vid : f.verts) off += f.normal.dot(pts[static_cast<size_t>(vid)]);
  f.offset = off / static_cast<double>(r);
  if (f.normal.dot(interior) > f.offset) {
    f.normal = -f.normal;
    f.offset = -f.offset;
  }
}

ReducedHull quickhull(const std::vector<Eigen::VectorXd>& pts, int r) {
  const int n = static_cast<int>(pts.size());
  // Initial simplex: lexicographic minimum, farthest point, then greedy
  // span growth.
  const auto lex_less = [&](int a, int b) {
    const auto& pa = pts[static_cast<size_t>(a)];
    const auto& pb = pts[static_cast<size_t>(b)];
    for (int c = 0; c < r; ++c) {
      if (pa(c) != pb(c)) return pa(c) < pb(c);
    }
    return a < b;
  };
  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (lex_less(i, i0)) i0 = i;
  }
  int i1 = -1;
  double best_d = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0) continue;
    const double d = (pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(i0)]).squaredNorm();
    if (d > best_d) {
      best_d = d;
      i1 = i;
    }
  }
  std::vector<int> simplex = {i0, i1};
  Eigen::MatrixXd q(r, r);  // orthonormal columns grown one at a time
  int ncols = 0;
  q.col(ncols++) = (pts[static_cast<size_t>(i1)] - pts[static_cast<size_t>(i0)]).normalized();
  while (static_cast<int>(simplex.size()) < r + 1) {
    int best = -1;
    double best_res = 0.0;
    Eigen::VectorXd best_vec;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd v = pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(i0)];
      const Eigen::VectorXd res = v - q.leftCols(ncols) * (q.leftCols(ncols).transpose() * v);
      const double rn = res.norm();
      if (rn > best_res) {
        best_res = rn;
        best = i;
        best_vec = res;
      }
    }
    if (best < 0 || best_res < 1e-12) {
      throw Error(errc::internal, "quickhull: degenerate initial simplex");
    }
    simplex.push_back(best);
    q.col(ncols++) = best_vec / best_res;
  }

  Eigen::VectorXd interior = Eigen::VectorXd::Zero(r);
  for (int vid : simplex) interior += pts[static_cast<size_t>(vid)];
  interior /= static_cast<double>(r + 1);

  std::vector<ReducedFacet> facets;
  for (int k = 0; k <= r; ++k) {
    ReducedFacet f;
    for (int j = 0; j <= r; ++j) {
      if (j != k) f.verts.push_back(simplex[static_cast<size_t>(j)]);
    }
    std::sort(f.verts.begin(), f.verts.end());
    fitHyperplane(pts, f, r, interior);
    facets.push_back(std::move(f));
  }
  for (int a = 0; a <= r; ++a) {
    for (int b = 0; b <= r; ++b) {
      if (a != b) facets[static_cast<size_t>(a)].neighbors.push_back(b);
    }
  }
  std::vector<bool> in_simplex(static_cast<size_t>(n), false);
  for (int vid : simplex) in_simplex[static_cast<size_t>(vid)] = true;
  for (int i = 0; i < n; ++i) {
    if (in_simplex[static_cast<size_t>(i)]) continue;
    for (ReducedFacet& f : facets) {
      if (f.normal.dot(pts[static_cast<size_t>(i)]) - f.offset > kHullEps) {
        f.outside.push_back(i);
        break;
      }
    }
  }

  for (int round = 0; round < 100000; ++round) {
    int fid = -1;
    for (int i = 0; i < static_cast<int>(facets.size()); ++i) {
      if (facets[static_cast<size_t>(i)].alive && !facets[static_cast<size_t>(i)].outside.empty()) {
        fid = i;
        break;
      }
    }
    if (fid < 0) break;

    int apex = -1;
    double apex_d = -1.0;
    for (int pid : facets[static_cast<size_t>(fid)].outside) {
      const double d =
          facets[static_cast<size_t>(fid)].normal.dot(pts[static_cast<size_t>(pid)]) -
          facets[static_cast<size_t>(fid)].offset;
      if (d > apex_d) {
        apex_d = d;
        apex = pid;
      }
    }
    const Eigen::VectorXd& apex_pt = pts[static_cast<size_t>(apex)];

    // Visible set, grown through facet adjacency.
    std::vector<int> visible;
    std::vector<bool> seen(facets.size(), false);
    std::vector<int> stack = {fid};
    seen[static_cast<size_t>(fid)] = true;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      visible.push_back(cur);
      for (int nb : facets[static_cast<size_t>(cur)].neighbors) {
        if (nb >= static_cast<int>(facets.size()) || !facets[static_cast<size_t>(nb)].alive ||
            seen[static_cast<size_t>(nb)]) {
          continue;
        }
        if (facets[static_cast<size_t>(nb)].normal.dot(apex_pt) -
                facets[static_cast<size_t>(nb)].offset > kHullEps) {
          seen[static_cast<size_t>(nb)] = true;
          stack.push_back(nb);
        }
      }
    }
    std::sort(visible.begin(), visible.end());

    // Horizon ridges: shared (r-1)-sets between a visible facet and a live
    // non-visible neighbor.
    std::map<std::vector<int>, int> horizon;  // ridge -> outer facet id
    for (int vf : visible) {
      for (int nb : facets[static_cast<size_t>(vf)].neighbors) {
        if (nb >= static_cast<int>(facets.size()) || !facets[static_cast<size_t>(nb)].alive ||
            seen[static_cast<size_t>(nb)]) {
          continue;
        }
        std::vector<int> ridge;
        std::set_intersection(facets[static_cast<size_t>(vf)].verts.begin(),
                              facets[static_cast<size_t>(vf)].verts.end(),
                              facets[static_cast<size_t>(nb)].verts.begin(),
                              facets[static_cast<size_t>(nb)].verts.end(),
                              std::back_inserter(ridge));
        if (static_cast<int>(ridge.size()) != r - 1) continue;
        horizon.emplace(std::move(ridge), nb);
      }
    }
    if (horizon.empty()) throw Error(errc::internal, "quickhull: empty horizon");

    // Build the cone from the apex over the horizon.
    std::vector<int> fresh;
    std::map<std::vector<int>, std::vector<int>> subridges;
    for (const auto& [ridge, outer] : horizon) {
      ReducedFacet f;
      f.verts = ridge;
      f.verts.push_back(apex);
      std::sort(f.verts.begin(), f.verts.end());
      fitHyperplane(pts, f, r, interior);
      f.neighbors.push_back(outer);
      const int nid = static_cast<int>(facets.size());
      facets[static_cast<size_t>(outer)].neighbors.push_back(nid);
      for (int w : ridge) {
        std::vector<int> key;
        for (int vtx : f.verts) {
          if (vtx != w) key.push_back(vtx);
        }
        subridges[key].push_back(nid);
      }
      fresh.push_back(nid);
      facets.push_back(std::move(f));
    }
    for (const auto& [key, ids] : subridges) {
      if (ids.size() != 2) throw Error(errc::internal, "quickhull: unmatched cone ridge");
      facets[static_cast<size_t>(ids[0])].neighbors.push_back(ids[1]);
      facets[static_cast<size_t>(ids[1])].neighbors.push_back(ids[0]);
    }

    std::vector<int> pool;
    for (int vf : visible) {
      for (int pid : facets[static_cast<size_t>(vf)].outside) {
        if (pid != apex) pool.push_back(pid);
      }
      facets[static_cast<size_t>(vf)].outside.clear();
      facets[static_cast<size_t>(vf)].alive = false;
    }
    std::sort(pool.begin(), pool.end());
    for (int pid : pool) {
      for (int nf : fresh) {
        if (facets[static_cast<size_t>(nf)].normal.dot(pts[static_cast<size_t>(pid)]) -
                facets[static_cast<size_t>(nf)].offset > kHullEps) {
          facets[static_cast<size_t>(nf)].outside.push_back(pid);
          break;
        }
      }
    }
  }

  ReducedHull out;
  std::vector<bool> is_vertex(static_cast<size_t>(n), false);
  for (ReducedFacet& f : facets) {
    if (!f.alive) continue;
    for (int vid : f.verts) is_vertex[static_cast<size_t>(vid)] = true;
    out.facets.push_back(std::move(f));
  }
  for (int i = 0; i < n; ++i) {
    if (is_vertex[static_cast<size_t>(i)]) out.vertex_indices.push_back(i);
  }
  return out;
}

std::vector<Vec4> dedupPoints(const std::vector<Vec4>& points) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec4& pa = points[static_cast<size_t>(a)];
    const Vec4& pb = points[static_cast<size_t>(b)];
    for (int c = 0; c < 4; ++c) {
      if (pa(c) != pb(c)) return pa(c) < pb(c);
    }
    return a < b;
  });
  std::vector<bool> dup(points.size(), false);
  for (size_t s = 0; s < order.size(); ++s) {
    if (dup[static_cast<size_t>(order[s])]) continue;
    const Vec4& p = points[static_cast<size_t>(order[s])];
    for (size_t t = s + 1; t < order.size(); ++t) {
      const Vec4& q = points[static_cast<size_t>(order[t])];
      if (q(0) - p(0) > kDedupTol) break;
      if ((q - p).cwiseAbs().maxCoeff() <= kDedupTol) dup[static_cast<size_t>(order[t])] = true;
    }
  }
  std::vector<Vec4> out;  // keep first occurrences, input order
  for (size_t i = 0; i < points.size(); ++i) {
    if (!dup[i]) out.push_back(points[i]);
  }
  return out;
}

}  // namespace

FeasiblePolytope convexHull(const std::vector<Vec4>& points) {
  if (points.empty()) throw Error(errc::invalid_argument, "convexHull: empty input");
  std::vector<Vec4> pts = dedupPoints(points);

  // Exact-extremality prefilter: the survivors span the same hull, and they
  // are the vertex list we report. Skipped only for very large inputs.
  if (static_cast<int>(pts.size()) <= kExtremeFilterMax && pts.size() > 2) {
    const std::vector<int> keep = extremePointIndices(pts);
    std::vector<Vec4> filtered;
    filtered.reserve(keep.size());
    for (int idx : keep) filtered.push_back(pts[static_cast<size_t>(idx)]);
    pts = std::move(filtered);
  }

  const AffineHull hull = affineHull(pts);
  FeasiblePolytope poly;
  poly.affine_dim = hull.dim;
  const int n_eq = 4 - hull.dim;
  poly.eq_normals.resize(n_eq, 4);
  poly.eq_offsets.resize(n_eq);
  for (int i = 0; i < n_eq; ++i) {
    poly.eq_normals.row(i) = hull.complement.row(i);
    poly.eq_offsets(i) = hull.complement.row(i).dot(hull.centroid);
  }

  if (hull.dim == 0) {
    poly.vertices.push_back(pts.front());
    poly.facet_normals.resize(0, 4);
    poly.facet_offsets.resize(0);
    return poly;
  }

  // Reduced coordinates.
  std::vector<Eigen::VectorXd> reduced;
  reduced.reserve(pts.size());
  for (const Vec4& p : pts) reduced.push_back(hull.basis.transpose() * (p - hull.centroid));

  if (hull.dim == 1) {
    int lo = 0, hi = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
      if (reduced[static_cast<size_t>(i)](0) < reduced[static_cast<size_t>(lo)](0)) lo = i;
      if (reduced[static_cast<size_t>(i)](0) > reduced[static_cast<size_t>(hi)](0)) hi = i;
    }
    poly.vertices.push_back(pts[static_cast<size_t>(std::min(lo, hi))]);
    poly.vertices.push_back(pts[static_cast<size_t>(std::max(lo, hi))]);
    const Vec4 axis = hull.basis.col(0);
    poly.facet_normals.resize(2, 4);
    poly.facet_offsets.resize(2);
    poly.facet_normals.row(0) = axis.transpose();
    poly.facet_offsets(0) = reduced[static_cast<size_t>(hi)](0) + axis.dot(hull.centroid);
    poly.facet_normals.row(1) = -axis.transpose();
    poly.facet_offsets(1) = -(reduced[static_cast<size_t>(lo)](0) + axis.dot(hull.centroid));
    return poly;
  }

  const ReducedHull rh = quickhull(reduced, hull.dim);

  // Vertices: the prefiltered set is exactly the extreme points when the
  // filter ran; otherwise fall back to the facet vertex union.
  if (static_cast<int>(pts.size()) <= kExtremeFilterMax) {
    poly.vertices = pts;
  } else {
    for (int vid : rh.vertex_indices) poly.vertices.push_back(pts[static_cast<size_t>(vid)]);
  }

  // Lift facet planes to 4-space and merge coplanar duplicates.
  std::vector<Vec4> normals;
  std::vector<double> offsets;
  for (const ReducedFacet& f : rh.facets) {
    const Vec4 nrm = hull.basis * f.normal;
    const double off = f.offset + nrm.dot(hull.centroid);
    bool dup = false;
    for (size_t k = 0; k < normals.size(); ++k) {
      if ((normals[k] - nrm).cwiseAbs().maxCoeff() <= 1e-9 &&
          std::abs(offsets[k] - off) <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      normals.push_back(nrm);
      offsets.push_back(off);
    }
  }
  poly.facet_normals.resize(static_cast<Eigen::Index>(normals.size()), 4);
  poly.facet_offsets.resize(static_cast<Eigen::Index>(normals.size()));
  for (size_t k = 0; k < normals.size(); ++k) {
    poly.facet_normals.row(static_cast<Eigen::Index>(k)) = normals[k].transpose();
    poly.facet_offsets(static_cast<Eigen::Index>(k)) = offsets[k];
  }

  // Every input point must land inside the lifted system.
  for (const Vec4& p : pts) {
    if (!contains(poly, p, 1e-9)) {
      throw Error(errc::internal, "convexHull: facet system does not enclose its input");
    }
  }
  return poly;
}

bool contains(const FeasiblePolytope& poly, const Vec4& xi, double tol) {
  for (int i = 0; i < poly.facet_normals.rows(); ++i) {
    if (poly.facet_normals.row(i).dot(xi) > poly.facet_offsets(i) + tol) return false;
  }
  for (int i = 0; i < poly.eq_normals.rows(); ++i) {
    if (std::abs(poly.eq_normals.row(i).dot(xi) - poly.eq_offsets(i)) > tol) return false;
  }
  return true;
}

}  // namespace lamopt
