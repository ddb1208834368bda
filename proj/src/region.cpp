#include "lamopt/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

namespace lamopt {

namespace {

constexpr double kCloudGuard = 1e6;

StackingSequence sequenceFromOrder(const std::vector<int>& order, const PlyCounts& counts) {
  std::vector<int> skin_first;
  for (int k : order) {
    for (int c = 0; c < counts.counts[static_cast<size_t>(k)]; ++c) skin_first.push_back(k);
  }
  std::reverse(skin_first.begin(), skin_first.end());
  return StackingSequence(std::move(skin_first));
}

}  // namespace

bool isBlockContiguous(const StackingSequence& seq) {
  std::vector<bool> closed(16, false);
  int prev = -1;
  for (int k : seq.plies) {
    if (k != prev) {
      if (static_cast<size_t>(k) >= closed.size()) closed.resize(static_cast<size_t>(k) + 1, false);
      if (closed[static_cast<size_t>(k)]) return false;
      if (prev >= 0) closed[static_cast<size_t>(prev)] = true;
      prev = k;
    }
  }
  return true;
}

bool skinLexLess(const StackingSequence& a, const StackingSequence& b) {
  const int n = std::min(a.size(), b.size());
  for (int i = 0; i < n; ++i) {
    const int ai = a.plies[static_cast<size_t>(a.size() - 1 - i)];
    const int bi = b.plies[static_cast<size_t>(b.size() - 1 - i)];
    if (ai != bi) return ai < bi;
  }
  return a.size() < b.size();
}

ExtremeSequenceSet extremeSequences(const PlyCounts& counts, const AngleSet& angles) {
  if (counts.size() != angles.size()) {
    throw Error(errc::invalid_argument, "ply counts and angle set size mismatch");
  }
  if (counts.total() < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");

  ExtremeSequenceSet out;
  std::vector<int> order(static_cast<size_t>(angles.size()));
  std::iota(order.begin(), order.end(), 0);
  std::map<std::vector<int>, int> seen;
  do {
    StackingSequence seq = sequenceFromOrder(order, counts);
    auto [it, inserted] = seen.emplace(seq.plies, static_cast<int>(out.distinct.size()));
    if (inserted) out.distinct.push_back(std::move(seq));
    out.orders.push_back(order);
    out.sequence_of_order.push_back(it->second);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::vector<Vec4> extremePoints(const ExtremeSequenceSet& set, const AngleSet& angles,
                                XiMode mode) {
  std::vector<Vec4> pts;
  pts.reserve(set.distinct.size());
  for (const StackingSequence& seq : set.distinct) pts.push_back(xiD(seq, angles, mode));
  return pts;
}

FeasiblePolytope feasibleRegion(const PlyCounts& counts, const AngleSet& angles, XiMode mode) {
  return convexHull(extremePoints(extremeSequences(counts, angles), angles, mode));
}

SupportResult supportMax(const PlyCounts& counts, const AngleSet& angles, const Vec4& lambda,
                         XiMode mode) {
  const ExtremeSequenceSet set = extremeSequences(counts, angles);
  SupportResult best;
  bool first = true;
  for (const StackingSequence& seq : set.distinct) {
    const double value = lambda.dot(xiD(seq, angles, mode));
    if (first || value > best.value ||
        (value == best.value && skinLexLess(seq, best.argmax))) {
      best.value = value;
      best.argmax = seq;
      first = false;
    }
  }
  return best;
}

double sequencePermutationCount(const PlyCounts& counts) {
  // Product of binomials C(rem, n_k); exact in double well past the guards.
  double result = 1.0;
  int rem = counts.total();
  for (int nk : counts.counts) {
    for (int j = 1; j <= nk; ++j) {
      result *= static_cast<double>(rem - nk + j) / static_cast<double>(j);
    }
    rem -= nk;
    if (result > 1e18) return std::numeric_limits<double>::infinity();
  }
  return std::round(result);
}

std::vector<std::pair<StackingSequence, Vec4>> bruteForceCloud(const PlyCounts& counts,
                                                               const AngleSet& angles,
                                                               XiMode mode) {
  if (counts.size() != angles.size()) {
    throw Error(errc::invalid_argument, "ply counts and angle set size mismatch");
  }
  if (counts.total() < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");
  const double n_seq = sequencePermutationCount(counts);
  if (!(n_seq <= kCloudGuard)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "brute-force cloud would hold %.0f sequences (guard: %.0f)", n_seq,
                  kCloudGuard);
    throw Error(errc::size_guard, buf);
  }

  std::vector<int> plies;
  for (int k = 0; k < counts.size(); ++k) {
    for (int c = 0; c < counts.counts[static_cast<size_t>(k)]; ++c) plies.push_back(k);
  }
  std::vector<std::pair<StackingSequence, Vec4>> out;
  out.reserve(static_cast<size_t>(n_seq));
  do {
    StackingSequence seq(plies);
    Vec4 xi = xiD(seq, angles, mode);
    out.emplace_back(std::move(seq), xi);
  } while (std::next_permutation(plies.begin(), plies.end()));
  return out;
}

}  // namespace lamopt
