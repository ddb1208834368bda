#include <doctest.h>

#include <random>
#include <set>

#include "lamopt/region.hpp"

using namespace lamopt;

namespace {

AngleSet quadAngles() { return AngleSet({0.0, 45.0, -45.0, 90.0}); }

Vec4 randomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec4 v;
  do {
    for (int c = 0; c < 4; ++c) v(c) = gauss(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

TEST_CASE("extremeSequences block orders") {
  SUBCASE("two angles, one ply each") {
    const AngleSet angles({0.0, 90.0});
    const ExtremeSequenceSet set = extremeSequences(PlyCounts({1, 1}), angles);
    CHECK(set.orders.size() == 2);
    REQUIRE(set.distinct.size() == 2);
    // Order (0, 90): 0 at the skin, 90 at the mid-plane.
    CHECK(set.distinct[0].plies == std::vector<int>{1, 0});
    CHECK(set.distinct[1].plies == std::vector<int>{0, 1});
  }
  SUBCASE("zero-count blocks deduplicate") {
    const ExtremeSequenceSet set = extremeSequences(PlyCounts({2, 1, 1, 0}), quadAngles());
    CHECK(set.orders.size() == 24);
    CHECK(set.distinct.size() == 6);  // 3! orders of nonempty blocks
    for (const StackingSequence& seq : set.distinct) {
      CHECK(isBlockContiguous(seq));
      CHECK(countsOf(seq, 4).counts == std::vector<int>{2, 1, 1, 0});
    }
  }
  SUBCASE("single nonempty block") {
    const ExtremeSequenceSet set = extremeSequences(PlyCounts({3, 0, 0, 0}), quadAngles());
    CHECK(set.distinct.size() == 1);
    CHECK(set.distinct[0].plies == std::vector<int>{0, 0, 0});
  }
  SUBCASE("zero plies is degenerate") {
    CHECK_THROWS_AS(extremeSequences(PlyCounts({0, 0, 0, 0}), quadAngles()), Error);
  }
}

TEST_CASE("feasibleRegion shapes") {
  const AngleSet angles = quadAngles();
  SUBCASE("single block is a point") {
    for (int n : {1, 3, 5}) {
      const FeasiblePolytope poly =
          feasibleRegion(PlyCounts({n, 0, 0, 0}), angles, XiMode::midpoint);
      CHECK(poly.affine_dim == 0);
      REQUIRE(poly.vertices.size() == 1);
      const Vec4 expected = (1.0 - 1.0 / (4.0 * n * n)) * angles.signature(0);
      CHECK((poly.vertices[0] - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("two blocks give a segment") {
    const AngleSet two({0.0, 90.0});
    const FeasiblePolytope poly = feasibleRegion(PlyCounts({1, 1}), two, XiMode::midpoint);
    CHECK(poly.affine_dim == 1);
    REQUIRE(poly.vertices.size() == 2);
    std::set<double> first_coords = {poly.vertices[0](0), poly.vertices[1](0)};
    CHECK(*first_coords.begin() == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(*first_coords.rbegin() == doctest::Approx(0.75).epsilon(1e-14));
    for (const Vec4& v : poly.vertices) {
      CHECK(v(1) == doctest::Approx(0.9375).epsilon(1e-14));
    }
  }
  SUBCASE("quasi-isotropic counts live in dimension <= 3") {
    // sin(4 theta) = 0 for all four angles, so the fourth coordinate is flat.
    const FeasiblePolytope poly =
        feasibleRegion(PlyCounts({1, 1, 1, 1}), angles, XiMode::midpoint);
    CHECK(poly.affine_dim <= 3);
    const auto cloud = bruteForceCloud(PlyCounts({1, 1, 1, 1}), angles, XiMode::midpoint);
    for (const auto& [seq, xi] : cloud) CHECK(contains(poly, xi, 1e-9));
  }
}

TEST_CASE("supportMax") {
  const AngleSet two({0.0, 90.0});
  SUBCASE("prefers the stiff angle at the skin") {
    const SupportResult r = supportMax(PlyCounts({1, 1}), two, Vec4(1, 0, 0, 0));
    CHECK(r.value == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.argmax.plies == std::vector<int>{1, 0});  // 0 deg at the skin
  }
  SUBCASE("zero direction ties break lexicographically from the skin") {
    const SupportResult r = supportMax(PlyCounts({1, 1}), two, Vec4::Zero());
    CHECK(r.value == 0.0);
    CHECK(r.argmax.plies == std::vector<int>{1, 0});  // skin-read (0, 90)
  }
  SUBCASE("matches the brute-force cloud on random directions") {
    const AngleSet angles = quadAngles();
    std::mt19937_64 rng(2024);
    for (const auto& counts :
         {PlyCounts({2, 1, 1, 0}), PlyCounts({1, 2, 2, 1}), PlyCounts({3, 1, 0, 2})}) {
      for (const XiMode mode : {XiMode::midpoint, XiMode::exact}) {
        const auto cloud = bruteForceCloud(counts, angles, mode);
        for (int s = 0; s < 25; ++s) {
          const Vec4 lambda = randomUnit(rng);
          const SupportResult sup = supportMax(counts, angles, lambda, mode);
          double brute = -1e300;
          for (const auto& [seq, xi] : cloud) brute = std::max(brute, lambda.dot(xi));
          CHECK(std::abs(brute - sup.value) <= 1e-9);
          CHECK(isBlockContiguous(sup.argmax));
        }
      }
    }
  }
}

TEST_CASE("bruteForceCloud sizes and the guard") {
  const AngleSet angles = quadAngles();
  CHECK(bruteForceCloud(PlyCounts({1, 1, 0, 0}), angles, XiMode::midpoint).size() == 2);
  CHECK(bruteForceCloud(PlyCounts({2, 2, 0, 0}), angles, XiMode::midpoint).size() == 6);
  CHECK(bruteForceCloud(PlyCounts({2, 2, 2, 2}), angles, XiMode::midpoint).size() == 2520);
  CHECK(sequencePermutationCount(PlyCounts({2, 2, 2, 2})) == 2520.0);

  // 24!/(6!^4) is far beyond the guard.
  CHECK_THROWS_AS(bruteForceCloud(PlyCounts({6, 6, 6, 6}), angles, XiMode::midpoint), Error);
}

TEST_CASE("hull theorem at desk scale") {
  const AngleSet angles = quadAngles();
  std::mt19937_64 rng(555);
  const std::vector<PlyCounts> cases = {PlyCounts({2, 1, 1, 0}), PlyCounts({1, 1, 1, 1}),
                                        PlyCounts({3, 2, 0, 1}), PlyCounts({2, 2, 2, 0}),
                                        PlyCounts({4, 1, 1, 2})};
  for (const PlyCounts& counts : cases) {
    for (const XiMode mode : {XiMode::midpoint, XiMode::exact}) {
      const FeasiblePolytope poly = feasibleRegion(counts, angles, mode);
      const auto cloud = bruteForceCloud(counts, angles, mode);
      for (const auto& [seq, xi] : cloud) CHECK(contains(poly, xi, 1e-9));

      // Vertex realizability: every vertex is the xi^D of some extreme
      // sequence, bit-identical.
      const ExtremeSequenceSet set = extremeSequences(counts, angles);
      const std::vector<Vec4> pts = extremePoints(set, angles, mode);
      for (const Vec4& v : poly.vertices) {
        bool hit = false;
        for (const Vec4& p : pts) {
          hit = hit || (p(0) == v(0) && p(1) == v(1) && p(2) == v(2) && p(3) == v(3));
        }
        CHECK(hit);
      }
    }
  }
}

TEST_CASE("zero-count angle does not change the region") {
  const AngleSet three({0.0, 45.0, 90.0});
  const AngleSet four({0.0, 45.0, 90.0, -30.0});
  const PlyCounts c3({2, 1, 1});
  const PlyCounts c4({2, 1, 1, 0});

  const ExtremeSequenceSet s3 = extremeSequences(c3, three);
  const ExtremeSequenceSet s4 = extremeSequences(c4, four);
  REQUIRE(s3.distinct.size() == s4.distinct.size());
  // Same sequences up to the enlarged signature table (indices coincide here).
  std::set<std::vector<int>> seqs3, seqs4;
  for (const auto& s : s3.distinct) seqs3.insert(s.plies);
  for (const auto& s : s4.distinct) seqs4.insert(s.plies);
  CHECK(seqs3 == seqs4);

  const FeasiblePolytope p3 = feasibleRegion(c3, three, XiMode::midpoint);
  const FeasiblePolytope p4 = feasibleRegion(c4, four, XiMode::midpoint);
  CHECK(p3.affine_dim == p4.affine_dim);
  REQUIRE(p3.vertices.size() == p4.vertices.size());
  for (size_t i = 0; i < p3.vertices.size(); ++i) {
    CHECK((p3.vertices[i] - p4.vertices[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("skinLexLess orders from the skin inward") {
  const StackingSequence a({1, 0});  // skin-read (0, 1)
  const StackingSequence b({0, 1});  // skin-read (1, 0)
  CHECK(skinLexLess(a, b));
  CHECK_FALSE(skinLexLess(b, a));
  CHECK_FALSE(skinLexLess(a, a));
}
