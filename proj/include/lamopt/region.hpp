#pragma once

#include <utility>
#include <vector>

#include "lamopt/clt.hpp"
#include "lamopt/geometry.hpp"

// Construction of the feasible region Omega_xi(n) of bending lamination
// parameters at fixed ply counts: enumerate the extreme stacking sequences
// (plies of equal orientation in contiguous blocks, one block order per
// permutation of the angle set), evaluate their xi^D, take the convex hull.
// A brute-force enumerator over all multiset permutations serves as the
// desk-scale oracle for the hull property.

namespace lamopt {

struct ExtremeSequenceSet {
  /// All N_Theta! block orders (angle indices, outermost block first),
  /// lexicographic.
  std::vector<std::vector<int>> orders;
  /// orders[i] realizes distinct[sequence_of_order[i]].
  std::vector<int> sequence_of_order;
  /// Deduplicated sequences in first-occurrence order. Orders differing only
  /// in zero-count blocks collapse, so the size is (#nonempty blocks)!.
  std::vector<StackingSequence> distinct;
};

ExtremeSequenceSet extremeSequences(const PlyCounts& counts, const AngleSet& angles);

/// xi^D of every distinct extreme sequence, in distinct order.
std::vector<Vec4> extremePoints(const ExtremeSequenceSet& set, const AngleSet& angles,
                                XiMode mode);

/// Omega_xi(n) = Conv({xi^D of extreme sequences}); at most N_Theta! vertices
/// survive dedup and extremality filtering.
FeasiblePolytope feasibleRegion(const PlyCounts& counts, const AngleSet& angles, XiMode mode);

struct SupportResult {
  double value = 0.0;
  StackingSequence argmax;
};

/// max of lambda . xi^D over the extreme sequences; ties break to the
/// lexicographically smallest sequence read from skin inward.
SupportResult supportMax(const PlyCounts& counts, const AngleSet& angles, const Vec4& lambda,
                         XiMode mode = XiMode::midpoint);

/// Number of distinct stacking sequences N!/(prod n_k!), as a double.
double sequencePermutationCount(const PlyCounts& counts);

/// Every distinct stacking sequence compatible with the counts paired with
/// its xi^D. Guarded at 1e6 sequences (size error carries the count).
std::vector<std::pair<StackingSequence, Vec4>> bruteForceCloud(const PlyCounts& counts,
                                                               const AngleSet& angles,
                                                               XiMode mode);

/// true iff plies of the same orientation are adjacent.
bool isBlockContiguous(const StackingSequence& seq);

/// Lexicographic comparison reading both sequences from the skin inward.
bool skinLexLess(const StackingSequence& a, const StackingSequence& b);

}  // namespace lamopt
