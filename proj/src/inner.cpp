#include "lamopt/inner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "lamopt/region.hpp"

namespace lamopt {

namespace {

constexpr double kExhaustiveLimit = 1e5;
constexpr double kHardEnumerationLimit = 2e6;

/// 180deg-periodic distance between two fiber orientations.
double fiberAngleDistance(double a_deg, double b_deg) {
  double d = std::abs(std::fmod(a_deg - b_deg, 180.0));
  return std::min(d, 180.0 - d);
}

double residualOf(const StackingSequence& seq, const Vec4& target, const AngleSet& angles,
                  XiMode mode) {
  return (target - xiD(seq, angles, mode)).squaredNorm();
}

/// (residual, skin-inward lex) strict ordering shared by every search path.
bool betterThan(double res_a, const StackingSequence& a, double res_b,
                const StackingSequence& b) {
  if (res_a != res_b) return res_a < res_b;
  return skinLexLess(a, b);
}

struct ScanBest {
  bool found = false;
  double residual = std::numeric_limits<double>::infinity();
  StackingSequence seq;

  void offer(double res, const StackingSequence& s) {
    if (!found || betterThan(res, s, residual, seq)) {
      found = true;
      residual = res;
      seq = s;
    }
  }
  void merge(const ScanBest& o) {
    if (o.found) offer(o.residual, o.seq);
  }
};

struct ExhaustiveOutcome {
  ScanBest rule_ok;
  ScanBest any;
};

ExhaustiveOutcome scanChunk(const std::vector<std::vector<int>>& sequences, size_t begin,
                            size_t end, const Vec4& target, const RuleSetInner& rules,
                            const AngleSet& angles, XiMode mode, bool rules_active) {
  ExhaustiveOutcome out;
  for (size_t i = begin; i < end; ++i) {
    StackingSequence seq(sequences[i]);
    const double res = residualOf(seq, target, angles, mode);
    out.any.offer(res, seq);
    if (!rules_active || checkRules(seq, rules, angles).empty()) out.rule_ok.offer(res, seq);
  }
  return out;
}

InnerResult exhaustiveRetrieve(const PlyCounts& counts, const Vec4& target,
                               const RuleSetInner& rules, const AngleSet& angles, XiMode mode,
                               int threads) {
  std::vector<int> plies;
  for (int k = 0; k < counts.size(); ++k) {
    for (int c = 0; c < counts.counts[static_cast<size_t>(k)]; ++c) plies.push_back(k);
  }
  std::vector<std::vector<int>> sequences;
  do {
    sequences.push_back(plies);
  } while (std::next_permutation(plies.begin(), plies.end()));

  const bool rules_active = rules.max_contiguous > 0 || !rules.outer_ply_angles.empty() ||
                            rules.max_disorientation > 0.0;
  ExhaustiveOutcome total;
  const int n_workers =
      std::max(1, std::min<int>(threads, static_cast<int>(sequences.size() / 256 + 1)));
  if (n_workers == 1) {
    total = scanChunk(sequences, 0, sequences.size(), target, rules, angles, mode, rules_active);
  } else {
    // The (residual, skin-lex) order is total, so the chunked minimum equals
    // the serial one regardless of the split.
    std::vector<ExhaustiveOutcome> parts(static_cast<size_t>(n_workers));
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const size_t chunk = (sequences.size() + static_cast<size_t>(n_workers) - 1) /
                         static_cast<size_t>(n_workers);
    for (int t = 0; t < n_workers; ++t) {
      pool.emplace_back([&, t]() {
        try {
          const size_t lo = static_cast<size_t>(t) * chunk;
          const size_t hi = std::min(sequences.size(), lo + chunk);
          parts[static_cast<size_t>(t)] =
              scanChunk(sequences, lo, hi, target, rules, angles, mode, rules_active);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    for (const ExhaustiveOutcome& part : parts) {
      total.rule_ok.merge(part.rule_ok);
      total.any.merge(part.any);
    }
  }

  InnerResult out;
  out.method = RetrievalMethod::exhaustive;
  if (total.rule_ok.found) {
    out.sequence = total.rule_ok.seq;
    out.residual = total.rule_ok.residual;
    out.rule_feasible = true;
  } else {
    out.sequence = total.any.seq;
    out.residual = total.any.residual;
    out.rule_feasible = false;
    out.violations = checkRules(out.sequence, rules, angles);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Branch-and-bound, skin inward. The z^2-weights decrease toward the
// mid-plane, so early placements dominate the residual and the interval
// bound on the unplaced weight tightens quickly.
// ---------------------------------------------------------------------------

class BoundedSearch {
 public:
  BoundedSearch(const PlyCounts& counts, const Vec4& target, const RuleSetInner& rules,
                const AngleSet& angles, XiMode mode, bool respect_rules)
      : target_(target),
        rules_(rules),
        angles_(angles),
        mode_(mode),
        respect_rules_(respect_rules),
        n_(counts.total()),
        n_angles_(counts.size()) {
    const double n3 = static_cast<double>(n_) * n_ * n_;
    weights_.resize(static_cast<size_t>(n_));
    for (int i = 1; i <= n_; ++i) {
      const double w = mode_ == XiMode::midpoint
                           ? 3.0 * (i - 0.5) * (i - 0.5) / n3
                           : (3.0 * static_cast<double>(i) * (i - 1.0) + 1.0) / n3;
      weights_[static_cast<size_t>(i - 1)] = w;
    }
    prefix_.assign(static_cast<size_t>(n_) + 1, 0.0);
    for (int i = 0; i < n_; ++i) {
      prefix_[static_cast<size_t>(i) + 1] = prefix_[static_cast<size_t>(i)] +
                                            weights_[static_cast<size_t>(i)];
    }
    assigned_.assign(static_cast<size_t>(n_), -1);
    remaining_ = counts.counts;
  }

  ScanBest run() {
    best_ = ScanBest{};
    descend(n_ - 1, Vec4::Zero(), -1, 0);
    return best_;
  }

 private:
  bool ruleAllows(int pos, int angle_idx, int prev_idx, int run_len) const {
    if (!respect_rules_) return true;
    if (pos == n_ - 1 && !rules_.outer_ply_angles.empty()) {
      const double skin = angles_.angle(angle_idx);
      bool ok = false;
      for (double a : rules_.outer_ply_angles) {
        if (std::abs(normalizeAngle(a) - skin) <= 1e-9) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    if (prev_idx >= 0) {
      if (rules_.max_disorientation > 0.0 &&
          fiberAngleDistance(angles_.angle(angle_idx), angles_.angle(prev_idx)) >
              rules_.max_disorientation + 1e-12) {
        return false;
      }
      if (rules_.max_contiguous > 0 && angle_idx == prev_idx &&
          run_len + 1 > rules_.max_contiguous) {
        return false;
      }
    }
    return true;
  }

  double lowerBound(const Vec4& acc, double w_rem) const {
    double lb = 0.0;
    for (int c = 0; c < 4; ++c) {
      double zmin = std::numeric_limits<double>::infinity();
      double zmax = -zmin;
      for (int k = 0; k < n_angles_; ++k) {
        if (remaining_[static_cast<size_t>(k)] > 0) {
          zmin = std::min(zmin, angles_.signature(k)(c));
          zmax = std::max(zmax, angles_.signature(k)(c));
        }
      }
      const double lo = acc(c) + w_rem * zmin;
      const double hi = acc(c) + w_rem * zmax;
      if (target_(c) < lo) {
        lb += (lo - target_(c)) * (lo - target_(c));
      } else if (target_(c) > hi) {
        lb += (target_(c) - hi) * (target_(c) - hi);
      }
    }
    return lb;
  }

  void descend(int pos, const Vec4& acc, int prev_idx, int run_len) {
    if (pos < 0) {
      StackingSequence seq(assigned_);
      // Canonical residual, bit-identical to the exhaustive path.
      best_.offer(residualOf(seq, target_, angles_, mode_), seq);
      return;
    }
    if (best_.found) {
      const double lb = lowerBound(acc, prefix_[static_cast<size_t>(pos) + 1]);
      // Deflate so float slop in the bound can never prune the optimum.
      if (lb - (1e-12 + 1e-9 * lb) >= best_.residual) return;
    }
    for (int k = 0; k < n_angles_; ++k) {
      if (remaining_[static_cast<size_t>(k)] == 0) continue;
      if (!ruleAllows(pos, k, prev_idx, run_len)) continue;
      --remaining_[static_cast<size_t>(k)];
      assigned_[static_cast<size_t>(pos)] = k;
      const Vec4 acc2 = acc + weights_[static_cast<size_t>(pos)] * angles_.signature(k);
      descend(pos - 1, acc2, k, k == prev_idx ? run_len + 1 : 1);
      ++remaining_[static_cast<size_t>(k)];
      assigned_[static_cast<size_t>(pos)] = -1;
    }
  }

  const Vec4& target_;
  const RuleSetInner& rules_;
  const AngleSet& angles_;
  XiMode mode_;
  bool respect_rules_;
  int n_;
  int n_angles_;
  std::vector<double> weights_;  // scaled, position 1 (mid) .. N (skin)
  std::vector<double> prefix_;
  std::vector<int> assigned_;
  std::vector<int> remaining_;
  ScanBest best_;
};

InnerResult branchAndBoundRetrieve(const PlyCounts& counts, const Vec4& target,
                                   const RuleSetInner& rules, const AngleSet& angles,
                                   XiMode mode) {
  const bool rules_active = rules.max_contiguous > 0 || !rules.outer_ply_angles.empty() ||
                            rules.max_disorientation > 0.0;
  InnerResult out;
  out.method = RetrievalMethod::branch_and_bound;

  ScanBest best;
  if (rules_active) {
    best = BoundedSearch(counts, target, rules, angles, mode, true).run();
  }
  if (rules_active && best.found) {
    out.sequence = best.seq;
    out.residual = best.residual;
    out.rule_feasible = true;
  } else if (!rules_active) {
    best = BoundedSearch(counts, target, rules, angles, mode, false).run();
    out.sequence = best.seq;
    out.residual = best.residual;
    out.rule_feasible = true;
  } else {
    // No rule-satisfying sequence exists: best-effort result with diagnostics.
    best = BoundedSearch(counts, target, rules, angles, mode, false).run();
    out.sequence = best.seq;
    out.residual = best.residual;
    out.rule_feasible = false;
    out.violations = checkRules(out.sequence, rules, angles);
  }

  const StackingSequence polished =
      polishBySwaps(out.sequence, target, rules, angles, mode, out.rule_feasible && rules_active);
  const double polished_res = residualOf(polished, target, angles, mode);
  if (polished_res < out.residual) {  // complete search: this should be a no-op
    out.sequence = polished;
    out.residual = polished_res;
  }
  return out;
}

}  // namespace

std::vector<RuleViolation> checkRules(const StackingSequence& seq, const RuleSetInner& rules,
                                      const AngleSet& angles) {
  std::vector<RuleViolation> out;
  const int n = seq.size();
  if (n == 0) return out;

  if (rules.max_contiguous > 0) {
    int run_start = 0;
    for (int i = 1; i <= n; ++i) {
      if (i == n || seq.plies[static_cast<size_t>(i)] != seq.plies[static_cast<size_t>(run_start)]) {
        const int len = i - run_start;
        if (len > rules.max_contiguous) {
          out.push_back({"max_contiguous", run_start + 1, i, static_cast<double>(len)});
        }
        run_start = i;
      }
    }
  }

  if (!rules.outer_ply_angles.empty()) {
    const double skin = angles.angle(seq.plies.back());
    bool ok = false;
    for (double a : rules.outer_ply_angles) {
      if (std::abs(normalizeAngle(a) - skin) <= 1e-9) {
        ok = true;
        break;
      }
    }
    if (!ok) out.push_back({"outer_ply", n, n, skin});
  }

  if (rules.max_disorientation > 0.0) {
    for (int i = 0; i + 1 < n; ++i) {
      const double jump = fiberAngleDistance(angles.angle(seq.plies[static_cast<size_t>(i)]),
                                             angles.angle(seq.plies[static_cast<size_t>(i) + 1]));
      if (jump > rules.max_disorientation + 1e-12) {
        out.push_back({"max_disorientation", i + 1, i + 2, jump});
      }
    }
  }
  return out;
}

StackingSequence polishBySwaps(StackingSequence seq, const Vec4& target,
                               const RuleSetInner& rules, const AngleSet& angles, XiMode mode,
                               bool respect_rules) {
  double current = residualOf(seq, target, angles, mode);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < seq.size(); ++i) {
      for (int j = i + 1; j < seq.size(); ++j) {
        if (seq.plies[static_cast<size_t>(i)] == seq.plies[static_cast<size_t>(j)]) continue;
        std::swap(seq.plies[static_cast<size_t>(i)], seq.plies[static_cast<size_t>(j)]);
        const bool rules_ok = !respect_rules || checkRules(seq, rules, angles).empty();
        const double trial = rules_ok ? residualOf(seq, target, angles, mode)
                                      : std::numeric_limits<double>::infinity();
        if (trial < current) {
          current = trial;
          improved = true;
        } else {
          std::swap(seq.plies[static_cast<size_t>(i)], seq.plies[static_cast<size_t>(j)]);
        }
      }
    }
  }
  return seq;
}

InnerResult retrieveStacking(const PlyCounts& counts, const Vec4& xiD_target,
                             const RuleSetInner& rules, const AngleSet& angles, XiMode mode,
                             RetrievalMethod force, int threads) {
  if (counts.size() != angles.size()) {
    throw Error(errc::invalid_argument, "ply counts and angle set size mismatch");
  }
  for (int c = 0; c < 4; ++c) {
    if (!std::isfinite(xiD_target(c))) {
      throw Error(errc::invalid_argument, "non-finite xi^D target");
    }
  }
  rules.validate();
  if (counts.total() < 1) throw Error(errc::degenerate_laminate, "laminate has zero plies");

  const double n_seq = sequencePermutationCount(counts);
  RetrievalMethod method = force;
  if (method == RetrievalMethod::automatic) {
    method = n_seq <= kExhaustiveLimit ? RetrievalMethod::exhaustive
                                       : RetrievalMethod::branch_and_bound;
  }
  switch (method) {
    case RetrievalMethod::exhaustive: {
      if (n_seq > kHardEnumerationLimit) {
        throw Error(errc::size_guard, "exhaustive retrieval forced beyond the enumeration guard");
      }
      return exhaustiveRetrieve(counts, xiD_target, rules, angles, mode, std::max(1, threads));
    }
    case RetrievalMethod::branch_and_bound:
      return branchAndBoundRetrieve(counts, xiD_target, rules, angles, mode);
    case RetrievalMethod::local_search: {
      // Diagnostic method: descend from the canonical sorted stack.
      std::vector<int> plies;
      for (int k = 0; k < counts.size(); ++k) {
        for (int c = 0; c < counts.counts[static_cast<size_t>(k)]; ++c) plies.push_back(k);
      }
      StackingSequence start(plies);
      const bool start_ok = checkRules(start, rules, angles).empty();
      InnerResult out;
      out.method = RetrievalMethod::local_search;
      out.sequence = polishBySwaps(start, xiD_target, rules, angles, mode, start_ok);
      out.residual = residualOf(out.sequence, xiD_target, angles, mode);
      out.violations = checkRules(out.sequence, rules, angles);
      out.rule_feasible = out.violations.empty();
      return out;
    }
    case RetrievalMethod::automatic:
      break;
  }
  throw Error(errc::internal, "unreachable retrieval method");
}

}  // namespace lamopt
