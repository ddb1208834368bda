#include <doctest.h>

#include <random>

#include "lamopt/outer.hpp"
#include "lamopt/pipeline.hpp"
#include "lamopt/region.hpp"
#include "bilevel_oracle.hpp"
#include "oracles.hpp"

using namespace lamopt;

namespace {

AngleSet quadAngles() { return AngleSet({0.0, 45.0, -45.0, 90.0}); }

DesignProblem baseProblem() {
  DesignProblem p;
  p.material = oracles::fixtureMaterial();
  p.angles = {0.0, 45.0, -45.0, 90.0};
  p.loads.Nx = -10.0;
  p.loads.Ny = 0.0;
  p.loads.Nxy = 0.0;
  p.loads.plate_a = 500.0;
  p.loads.plate_b = 400.0;
  p.loads.max_mode = 4;
  p.outer_rules.max_total_plies = 12;
  return p;
}

}  // namespace

TEST_CASE("rule set validation") {
  RuleSetOuter rules;
  rules.min_pct = {0.5, 0.6, 0.0, 0.0};  // sums to 1.1
  CHECK_THROWS_AS(rules.validate(4), Error);
  rules.min_pct = {0.3, 0.2, 0.0, 0.0};
  rules.max_pct = {0.2, 1.0, 1.0, 1.0};  // min > max in slot 0
  CHECK_THROWS_AS(rules.validate(4), Error);
  rules.max_pct = {0.9, 1.0, 1.0, 1.0};
  CHECK_NOTHROW(rules.validate(4));
  rules.max_total_plies = 0;
  CHECK_THROWS_AS(rules.validate(4), Error);
}

TEST_CASE("checkPlyConstraints margins") {
  const AngleSet angles = quadAngles();
  const Material mat = oracles::fixtureMaterial();
  LoadCase loads;
  loads.plate_a = 500.0;
  loads.plate_b = 400.0;

  SUBCASE("ten percent rule on a quasi-isotropic half") {
    RuleSetOuter rules;
    rules.min_pct = {0.1, 0.1, 0.1, 0.1};
    const OuterMargins m =
        checkPlyConstraints(PlyCounts({1, 1, 1, 1}), rules, mat, loads, angles);
    for (double v : m.pct_min) CHECK(v == doctest::Approx(0.15).epsilon(1e-14));
    for (double v : m.pct_max) CHECK(v == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("zero loads give unit strain margins") {
    const OuterMargins m =
        checkPlyConstraints(PlyCounts({1, 1, 1, 1}), RuleSetOuter{}, mat, loads, angles);
    for (int c = 0; c < 3; ++c) CHECK(m.strain(c) == 1.0);
    CHECK_FALSE(m.buckling.has_value());
  }
  SUBCASE("a banned angle with plies goes negative") {
    RuleSetOuter rules;
    rules.max_pct = {1.0, 0.0, 1.0, 1.0};
    const OuterMargins m =
        checkPlyConstraints(PlyCounts({1, 1, 1, 1}), rules, mat, loads, angles);
    CHECK(m.pct_max[1] < 0.0);
    CHECK(m.worstPly() < 0.0);
  }
}

TEST_CASE("bestXiD") {
  const AngleSet angles = quadAngles();
  const Material mat = oracles::fixtureMaterial();
  LoadCase loads;
  loads.Nx = -10.0;
  loads.plate_a = 500.0;
  loads.plate_b = 400.0;
  loads.max_mode = 4;

  SUBCASE("single-vertex region returns that vertex") {
    const PlyCounts counts({4, 0, 0, 0});
    const BestXiD r = bestXiD(counts, loads, mat, angles, XiMode::midpoint);
    const FeasiblePolytope poly = feasibleRegion(counts, angles, XiMode::midpoint);
    CHECK((r.xi - poly.vertices[0]).norm() == 0.0);
    REQUIRE(r.margin.has_value());
  }
  SUBCASE("no compressive load leaves the margin unset") {
    LoadCase tensile = loads;
    tensile.Nx = 10.0;
    const BestXiD r = bestXiD(PlyCounts({2, 1, 1, 0}), tensile, mat, angles, XiMode::midpoint);
    CHECK_FALSE(r.margin.has_value());
  }
  SUBCASE("doubling the compression lowers the slack") {
    const PlyCounts counts({2, 2, 1, 1});
    const BestXiD r1 = bestXiD(counts, loads, mat, angles, XiMode::midpoint);
    LoadCase harder = loads;
    harder.Nx *= 2.0;
    const BestXiD r2 = bestXiD(counts, harder, mat, angles, XiMode::midpoint);
    REQUIRE(r1.margin.has_value());
    REQUIRE(r2.margin.has_value());
    CHECK(*r2.margin < *r1.margin);
  }
  SUBCASE("two-vertex region matches a fine barycentric grid") {
    const AngleSet two({0.0, 90.0});
    const PlyCounts counts({1, 1});
    const BestXiD r = bestXiD(counts, loads, mat, two, XiMode::midpoint);
    REQUIRE(r.margin.has_value());

    const FeasiblePolytope poly = feasibleRegion(counts, two, XiMode::midpoint);
    REQUIRE(poly.vertices.size() == 2);
    double grid_best = -1e300;
    const int steps = 1000000;
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      const Vec4 xi = (1.0 - t) * poly.vertices[0] + t * poly.vertices[1];
      const Mat3 d = dMatrix(xi, counts.total(), mat);
      double worst = 1e300;
      for (int m = 1; m <= loads.max_mode; ++m) {
        for (int p = 1; p <= loads.max_mode; ++p) {
          const auto lambda = bucklingModeFactor(d, loads, m, p);
          if (lambda) worst = std::min(worst, *lambda - 1.0);
        }
      }
      grid_best = std::max(grid_best, worst);
    }
    CHECK(std::abs(*r.margin - grid_best) < 1e-4);
    CHECK(grid_best <= *r.margin + 1e-9);  // grid points are feasible
  }
  SUBCASE("multi-vertex region dominates a coarse grid") {
    const PlyCounts counts({2, 1, 1, 0});
    const BestXiD r = bestXiD(counts, loads, mat, angles, XiMode::midpoint);
    REQUIRE(r.margin.has_value());
    const FeasiblePolytope poly = feasibleRegion(counts, angles, XiMode::midpoint);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 3000; ++trial) {
      Eigen::VectorXd w(poly.vertices.size());
      for (int i = 0; i < w.size(); ++i) w(i) = -std::log(unit(rng));
      w /= w.sum();
      Vec4 xi = Vec4::Zero();
      for (int i = 0; i < w.size(); ++i) xi += w(i) * poly.vertices[static_cast<size_t>(i)];
      const Mat3 d = dMatrix(xi, counts.total(), mat);
      double worst = 1e300;
      for (int m = 1; m <= loads.max_mode; ++m) {
        for (int p = 1; p <= loads.max_mode; ++p) {
          const auto lambda = bucklingModeFactor(d, loads, m, p);
          if (lambda) worst = std::min(worst, *lambda - 1.0);
        }
      }
      CHECK(worst <= *r.margin + 1e-9);
    }
  }
}

TEST_CASE("compositionsOf is lexicographic and complete") {
  const auto comps = compositionsOf(3, 2);
  REQUIRE(comps.size() == 4);
  CHECK(comps[0] == std::vector<int>{0, 3});
  CHECK(comps[3] == std::vector<int>{3, 0});
  CHECK(compositionsOf(8, 4).size() == 165);
}

TEST_CASE("solveOuter") {
  SUBCASE("tensile loads with loose allowables take one ply") {
    DesignProblem p = baseProblem();
    p.loads.Nx = 1.0;
    const OuterResult r = solveOuter(p);
    REQUIRE(r.status == OuterStatus::optimal);
    CHECK(r.counts.total() == 1);
    CHECK(r.counts.counts == std::vector<int>{0, 0, 0, 1});  // lex order: last slot first
  }
  SUBCASE("matches the joint brute-force optimum") {
    DesignProblem p = baseProblem();
    const OuterResult r = solveOuter(p);
    REQUIRE(r.status == OuterStatus::optimal);
    const auto ref = oracles::bruteForceBiLevel(p);
    REQUIRE(ref.has_value());
    CHECK(r.counts.total() == ref->total_plies);
  }
  SUBCASE("tightening max_pct never lowers the optimum") {
    DesignProblem p = baseProblem();
    int last = 0;
    for (const double cap : {1.0, 0.9, 0.8, 0.7, 0.6}) {
      p.outer_rules.max_pct = {cap, cap, cap, cap};
      const OuterResult r = solveOuter(p);
      REQUIRE(r.status == OuterStatus::optimal);
      CHECK(r.counts.total() >= last);
      last = r.counts.total();
    }
  }
  SUBCASE("cap exhaustion reports a status, not an exception") {
    DesignProblem p = baseProblem();
    p.loads.Nx = -500.0;  // needs far more than the cap
    p.outer_rules.max_total_plies = 4;
    const OuterResult r = solveOuter(p);
    CHECK(r.status == OuterStatus::infeasible_up_to_cap);
  }
  SUBCASE("feasibility postcondition") {
    DesignProblem p = baseProblem();
    const OuterResult r = solveOuter(p);
    REQUIRE(r.status == OuterStatus::optimal);
    const FeasiblePolytope poly =
        feasibleRegion(r.counts, p.angleSet(), p.options.mode);
    CHECK(contains(poly, r.xiD, 1e-7));
    CHECK(r.margins.worstPly() >= -1e-7);
    REQUIRE(r.margins.buckling.has_value());
    CHECK(*r.margins.buckling >= -1e-7);
  }
  SUBCASE("thread count does not change the answer") {
    DesignProblem p = baseProblem();
    p.outer_rules.min_pct = {0.1, 0.1, 0.1, 0.1};
    const OuterResult serial = solveOuter(p);
    p.options.threads = 4;
    const OuterResult parallel = solveOuter(p);
    REQUIRE(serial.status == OuterStatus::optimal);
    REQUIRE(parallel.status == OuterStatus::optimal);
    CHECK(serial.counts.counts == parallel.counts.counts);
    CHECK((serial.xiD - parallel.xiD).norm() == 0.0);
  }
}
