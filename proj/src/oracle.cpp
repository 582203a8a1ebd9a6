#include "hnflow/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hnflow/hn.hpp"

namespace hnflow {

void validate_config(const SweepConfig& cfg) {
  const auto fail = [](const char* msg) {
    throw std::invalid_argument(std::string("invalid sweep config: ") + msg);
  };
  if (cfg.max_rank < 1) fail("max_rank must be at least 1");
  if (cfg.twist_min > cfg.twist_max) fail("empty twist range");
  if (!(cfg.grid_resolution > 0.0)) fail("grid_resolution must be positive");
  if (cfg.grid_resolution > 1e-2) fail("grid_resolution must be <= 1e-2");
  if (cfg.degree_slack < 0) fail("degree_slack must be nonnegative");
  if (cfg.grid_samples < 0) fail("grid_samples must be nonnegative");
}

std::vector<SplitBundle> enumerate_bundles(int max_rank, int twist_min,
                                           int twist_max) {
  if (max_rank < 1 || twist_min > twist_max)
    throw std::invalid_argument("enumerate_bundles: empty range");
  std::vector<SplitBundle> out;
  std::vector<int> twists;
  // descending multisets: each entry bounded above by its predecessor
  auto rec = [&](auto&& self, int remaining, int hi) -> void {
    if (remaining == 0) {
      out.emplace_back(twists);
      return;
    }
    for (int t = hi; t >= twist_min; --t) {
      twists.push_back(t);
      self(self, remaining - 1, t);
      twists.pop_back();
    }
  };
  for (int r = 1; r <= max_rank; ++r) rec(rec, r, twist_max);
  return out;
}

std::optional<std::vector<std::vector<int>>> find_witness_chain(
    const SplitBundle& b, const std::vector<SlopePoint>& steps) {
  const int r = b.rank();
  std::vector<std::vector<int>> chain;
  std::vector<char> used(static_cast<size_t>(r), 0);
  std::vector<int> current;

  // depth-first over the steps, extending the current set by index
  // combinations in lex order; the first complete chain found is lex-least
  auto extend = [&](auto&& self, size_t step) -> bool {
    if (step == steps.size()) return true;
    const int need = steps[step].rank - static_cast<int>(current.size());
    const long long target = steps[step].degree - b.subset_sum(current);
    std::vector<int> picked;
    auto choose = [&](auto&& pick_self, int from, int left,
                      long long sum) -> bool {
      if (left == 0) {
        if (sum != target) return false;
        for (int i : picked) {
          current.insert(
              std::upper_bound(current.begin(), current.end(), i), i);
          used[static_cast<size_t>(i)] = 1;
        }
        chain.push_back(current);
        if (self(self, step + 1)) return true;
        chain.pop_back();
        for (int i : picked) {
          current.erase(
              std::find(current.begin(), current.end(), i));
          used[static_cast<size_t>(i)] = 0;
        }
        return false;
      }
      for (int i = from; i < r; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        picked.push_back(i);
        if (pick_self(pick_self, i + 1, left - 1, sum + b.twist(i)))
          return true;
        picked.pop_back();
      }
      return false;
    };
    return choose(choose, 0, need, 0);
  };
  if (!extend(extend, 0)) return std::nullopt;
  return chain;
}

std::vector<Flag> enumerate_flags(const SplitBundle& b, int slack) {
  if (slack < 0) throw std::invalid_argument("enumerate_flags: slack < 0");
  const int r = b.rank();
  std::vector<Flag> out;
  // rank chains = subsets of {1, ..., r-1}, final step pinned to (r, deg)
  const unsigned chains = 1u << (r - 1);
  for (unsigned mask = 0; mask < chains; ++mask) {
    std::vector<int> ranks;
    for (int k = 1; k < r; ++k)
      if (mask & (1u << (k - 1))) ranks.push_back(k);
    ranks.push_back(r);
    std::vector<SlopePoint> steps(ranks.size());
    auto emit = [&](auto&& self, size_t pos) -> void {
      if (pos == ranks.size() - 1) {
        steps[pos] = {r, b.degree()};
        Flag f;
        f.steps = steps;
        if (auto w = find_witness_chain(b, f.steps)) f.witnesses = std::move(*w);
        out.push_back(std::move(f));
        return;
      }
      const int k = ranks[pos];
      const long long top = b.topsum(k);
      for (long long d = top - slack; d <= top; ++d) {
        steps[pos] = {k, d};
        self(self, pos + 1);
      }
    };
    emit(emit, 0);
  }
  return out;
}

std::vector<Flag> enumerate_split_flags(const SplitBundle& b) {
  const int r = b.rank();
  std::vector<Flag> out;
  std::vector<std::vector<int>> chain;
  std::vector<int> remaining(static_cast<size_t>(r));
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> current;
  auto rec = [&](auto&& self, const std::vector<int>& rest) -> void {
    if (rest.empty()) {
      out.push_back(flag_from_witnesses(b, chain));
      return;
    }
    const unsigned n = static_cast<unsigned>(rest.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> added;
      std::vector<int> next_rest;
      for (unsigned j = 0; j < n; ++j)
        (mask & (1u << j) ? added : next_rest)
            .push_back(rest[j]);
      std::vector<int> merged = current;
      for (int i : added)
        merged.insert(std::upper_bound(merged.begin(), merged.end(), i), i);
      chain.push_back(merged);
      std::swap(current, merged);
      self(self, next_rest);
      std::swap(current, merged);
      chain.pop_back();
    }
  };
  rec(rec, remaining);
  return out;
}

unsigned long long count_subset_chains(int n) {
  // chains(n) = sum_j C(n, j) chains(n - j), chains(0) = 1
  std::vector<unsigned long long> chains(static_cast<size_t>(n) + 1, 0);
  chains[0] = 1;
  std::vector<std::vector<unsigned long long>> binom(
      static_cast<size_t>(n) + 1,
      std::vector<unsigned long long>(static_cast<size_t>(n) + 1, 0));
  for (int i = 0; i <= n; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j)
      chains[static_cast<size_t>(i)] +=
          binom[i][j] * chains[static_cast<size_t>(i - j)];
  return chains[static_cast<size_t>(n)];
}

std::vector<std::vector<Rat>> integer_spectra(int k) {
  constexpr int kLo = -3;
  constexpr int kHi = 3;
  std::vector<std::vector<Rat>> out;
  std::vector<Rat> tuple;
  auto rec = [&](auto&& self, int from, int left) -> void {
    if (left == 0) {
      out.push_back(tuple);
      return;
    }
    for (int v = from; v <= kHi - left + 1; ++v) {
      tuple.emplace_back(v);
      self(self, v + 1, left - 1);
      tuple.pop_back();
    }
  };
  rec(rec, kLo, k);
  return out;
}

namespace {

// Weighted pool-adjacent-violators: least-squares increasing fit.
std::vector<double> pava_increasing(const std::vector<double>& v,
                                    const std::vector<double>& w) {
  struct Block {
    double sum, weight;
    int count;
  };
  std::vector<Block> blocks;
  for (size_t i = 0; i < v.size(); ++i) {
    blocks.push_back({v[i] * w[i], w[i], 1});
    while (blocks.size() > 1) {
      const auto& a = blocks[blocks.size() - 2];
      const auto& c = blocks.back();
      if (a.sum / a.weight <= c.sum / c.weight) break;
      Block merged{a.sum + c.sum, a.weight + c.weight, a.count + c.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const Block& bl : blocks)
    for (int i = 0; i < bl.count; ++i) out.push_back(bl.sum / bl.weight);
  return out;
}

struct GridProblem {
  int k = 0;
  std::vector<double> weights;  // r_i
  std::vector<double> coefs;    // r_i (m_i - baseline)
  int pinned = -1;              // eigenvalue forced to zero (kZero)
  int nonpositive = -1;         // eigenvalue forced <= 0 (kNonPositive)

  double eval(const std::vector<double>& lam) const {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += coefs[static_cast<size_t>(i)] * lam[static_cast<size_t>(i)];
    return s;
  }
  bool feasible(const std::vector<double>& lam) const {
    constexpr double tol = 1e-9;
    for (int i = 1; i < k; ++i)
      if (lam[static_cast<size_t>(i)] < lam[static_cast<size_t>(i - 1)] - tol)
        return false;
    if (nonpositive >= 0 && lam[static_cast<size_t>(nonpositive)] > tol)
      return false;
    if (pinned >= 0 && std::abs(lam[static_cast<size_t>(pinned)]) > tol)
      return false;
    return true;
  }
  // Rescale onto the ellipsoid sum r_i lam_i^2 = 1; false when degenerate.
  bool normalize(std::vector<double>* lam) const {
    double s = 0.0;
    for (int i = 0; i < k; ++i)
      s += weights[static_cast<size_t>(i)] * (*lam)[static_cast<size_t>(i)] *
           (*lam)[static_cast<size_t>(i)];
    if (s < 1e-15) return false;
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : *lam) x *= inv;
    return true;
  }
  // Monotone repair + constraint pin + normalization of a raw vector.
  std::optional<std::vector<double>> repair(std::vector<double> lam) const {
    lam = pava_increasing(lam, weights);
    const int pin = pinned >= 0 ? pinned : nonpositive;
    if (pin >= 0) {
      if (pinned >= 0)
        lam[static_cast<size_t>(pin)] = 0.0;
      else
        lam[static_cast<size_t>(pin)] =
            std::min(lam[static_cast<size_t>(pin)], 0.0);
      for (int i = pin - 1; i >= 0; --i)
        lam[static_cast<size_t>(i)] = std::min(lam[static_cast<size_t>(i)],
                                               lam[static_cast<size_t>(i + 1)]);
      for (int i = pin + 1; i < k; ++i)
        lam[static_cast<size_t>(i)] = std::max(lam[static_cast<size_t>(i)],
                                               lam[static_cast<size_t>(i - 1)]);
    }
    if (!normalize(&lam)) return std::nullopt;
    if (!feasible(lam)) return std::nullopt;
    return lam;
  }
};

// Hyperspherical coordinates over the free (non-pinned) indices.
std::vector<double> angles_to_lambda(const GridProblem& pb,
                                     const std::vector<int>& free_idx,
                                     const std::vector<double>& theta) {
  const size_t d = free_idx.size();
  std::vector<double> x(d, 1.0);
  double sines = 1.0;
  for (size_t j = 0; j < d; ++j) {
    x[j] = sines;
    if (j < d - 1) {
      x[j] *= std::cos(theta[j]);
      sines *= std::sin(theta[j]);
    }
  }
  std::vector<double> lam(static_cast<size_t>(pb.k), 0.0);
  for (size_t j = 0; j < d; ++j)
    lam[static_cast<size_t>(free_idx[j])] =
        x[j] / std::sqrt(pb.weights[static_cast<size_t>(free_idx[j])]);
  return lam;
}

std::vector<double> lambda_to_angles(const GridProblem& pb,
                                     const std::vector<int>& free_idx,
                                     const std::vector<double>& lam) {
  const size_t d = free_idx.size();
  std::vector<double> x(d);
  for (size_t j = 0; j < d; ++j)
    x[j] = lam[static_cast<size_t>(free_idx[j])] *
           std::sqrt(pb.weights[static_cast<size_t>(free_idx[j])]);
  std::vector<double> theta(d > 0 ? d - 1 : 0, 0.0);
  double sines = 1.0;
  for (size_t j = 0; j + 1 < d; ++j) {
    double c = sines > 1e-14 ? x[j] / sines : 1.0;
    c = std::clamp(c, -1.0, 1.0);
    theta[j] = std::acos(c);
    sines *= std::sin(theta[j]);
  }
  // fix the sign of the last coordinate
  if (d >= 2 && x[d - 1] < 0.0) theta[d - 2] = -theta[d - 2];
  return theta;
}

}  // namespace

GridResult grid_minimize(const SplitBundle& b, const Flag& f,
                         const Rat& baseline, double resolution,
                         std::optional<GridConstraint> constraint) {
  validate_flag(b, f);
  if (!(resolution > 0.0))
    throw std::invalid_argument("grid_minimize: resolution must be positive");
  const auto qd = quotient_data(f);
  GridProblem pb;
  pb.k = static_cast<int>(qd.size());
  for (const Quotient& q : qd) {
    pb.weights.push_back(static_cast<double>(q.rank));
    pb.coefs.push_back(q.rank * (q.slope - baseline).to_double());
  }
  if (constraint) {
    if (constraint->step < 0 || constraint->step >= pb.k)
      throw std::invalid_argument("grid_minimize: constraint step out of range");
    if (constraint->mode == GridConstraint::Mode::kZero)
      pb.pinned = constraint->step;
    else
      pb.nonpositive = constraint->step;
  }

  std::vector<int> free_idx;
  for (int i = 0; i < pb.k; ++i)
    if (i != pb.pinned) free_idx.push_back(i);
  const size_t d = free_idx.size();
  if (d == 0) return {};  // single step pinned to zero: off the ellipsoid

  GridResult best;
  auto consider = [&](const std::vector<double>& lam) {
    if (!pb.feasible(lam)) return;
    const double v = pb.eval(lam);
    if (!best.feasible || v < best.value) {
      best.feasible = true;
      best.value = v;
      best.argmin = lam;
    }
  };

  if (d == 1) {
    std::vector<double> lam(static_cast<size_t>(pb.k), 0.0);
    const int i = free_idx[0];
    for (double s : {1.0, -1.0}) {
      lam[static_cast<size_t>(i)] = s / std::sqrt(pb.weights[static_cast<size_t>(i)]);
      consider(lam);
    }
    return best;
  }

  // starting points: the order-projected steepest direction, a plain ramp,
  // and the best order-projected samples of a coarse angular grid
  std::vector<std::vector<double>> starts;
  {
    std::vector<double> target(static_cast<size_t>(pb.k));
    for (int i = 0; i < pb.k; ++i)
      target[static_cast<size_t>(i)] =
          -pb.coefs[static_cast<size_t>(i)] / pb.weights[static_cast<size_t>(i)];
    if (auto s = pb.repair(target)) starts.push_back(*s);
    std::vector<double> ramp(static_cast<size_t>(pb.k));
    for (int i = 0; i < pb.k; ++i)
      ramp[static_cast<size_t>(i)] = i - 0.5 * (pb.k - 1);
    const int pin = pb.pinned >= 0 ? pb.pinned : pb.nonpositive;
    if (pin >= 0)
      for (double& x : ramp) x -= (pin - 0.5 * (pb.k - 1));
    if (auto s = pb.repair(ramp)) starts.push_back(*s);
  }
  {
    const double coarse = d <= 3 ? M_PI / 12 : (d <= 4 ? M_PI / 8 : M_PI / 4);
    std::vector<double> theta(d - 1, 0.0);
    std::vector<std::pair<double, std::vector<double>>> pool;
    auto sweep = [&](auto&& self, size_t j) -> void {
      if (j == d - 1) {
        const auto lam = angles_to_lambda(pb, free_idx, theta);
        if (auto s = pb.repair(lam)) pool.emplace_back(pb.eval(*s), *s);
        return;
      }
      const double hi = (j == d - 2) ? 2 * M_PI : M_PI;
      for (double t = 0.0; t < hi + 1e-12; t += coarse) {
        theta[j] = t;
        self(self, j + 1);
      }
    };
    sweep(sweep, 0);
    std::sort(pool.begin(), pool.end(),
              [](const auto& a, const auto& c) { return a.first < c.first; });
    for (size_t i = 0; i < pool.size() && i < 8; ++i)
      starts.push_back(pool[i].second);
  }

  for (const auto& start : starts) {
    consider(start);
    std::vector<double> theta = lambda_to_angles(pb, free_idx, start);
    double cur = pb.eval(start);
    {
      // the start may not be exactly representable; resync
      const auto lam = angles_to_lambda(pb, free_idx, theta);
      if (pb.feasible(lam)) cur = pb.eval(lam);
    }
    double step = M_PI / 8;
    while (step > resolution / 16) {
      bool improved = false;
      for (size_t j = 0; j < theta.size(); ++j) {
        for (double delta : {step, -step}) {
          std::vector<double> cand = theta;
          cand[j] += delta;
          const auto lam = angles_to_lambda(pb, free_idx, cand);
          if (!pb.feasible(lam)) continue;
          const double v = pb.eval(lam);
          if (v < cur - 1e-15) {
            cur = v;
            theta = cand;
            consider(lam);
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return best;
}

std::optional<PairCase> check_pair_filtration_clauses(const PairModel& p,
                                                      const Flag& flag,
                                                      int m, std::string* why,
                                                      const Flag* classical_hn) {
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (!flag.witnesses) return fail("flag carries no witnesses");
  const auto qd = quotient_data(flag);
  const int k = static_cast<int>(qd.size());
  const Rat& tau = p.tau;
  if (m < 0 || m > k) return fail("m out of range");

  // slope chain with the tau gap at m
  for (int i = 1; i < m; ++i)
    if (!(qd[static_cast<size_t>(i - 1)].slope > qd[static_cast<size_t>(i)].slope))
      return fail("leading slopes not strictly decreasing");
  if (m >= 1 && !(qd[static_cast<size_t>(m - 1)].slope > tau))
    return fail("m-th slope not above tau");
  if (m + 1 <= k && !(tau >= qd[static_cast<size_t>(m)].slope))
    return fail("tau below slope of step m+1");
  if (m + 2 <= k && !(tau > qd[static_cast<size_t>(m + 1)].slope))
    return fail("tau not above slope of step m+2");
  for (int i = m + 2; i < k; ++i)
    if (!(qd[static_cast<size_t>(i - 1)].slope > qd[static_cast<size_t>(i)].slope))
      return fail("trailing slopes not strictly decreasing");

  // semistable quotients away from m+1
  const auto block_semistable = [&](int i) {  // 1-based block index
    const auto qp = quotient_pair(p, flag, i - 1);
    return is_semistable(qp.bundle);
  };
  for (int i = 1; i <= k; ++i)
    if (i != m + 1 && !block_semistable(i))
      return fail("quotient " + std::to_string(i) + " not semistable");

  const auto& w = *flag.witnesses;
  const bool image_in_m =
      m == 0 ? p.image.empty()
             : subset_includes(w[static_cast<size_t>(m - 1)], p.image);

  const auto equals_classical = [&] {
    if (classical_hn) return flag.steps == classical_hn->steps;
    return flag.steps == hn_filtration(p.bundle).steps;
  };

  if (image_in_m) {
    if (m + 1 <= k && !block_semistable(m + 1))
      return fail("case C: quotient m+1 not semistable");
    if (!equals_classical())
      return fail("case C: flag differs from the classical filtration");
    if (m + 2 <= k &&
        !(qd[static_cast<size_t>(m)].slope > qd[static_cast<size_t>(m + 1)].slope))
      return fail("case C: slopes m+1, m+2 not strictly decreasing");
    return PairCase::C;
  }

  if (m + 1 > k) return fail("image outside every admissible step");
  if (!subset_includes(w[static_cast<size_t>(m)], p.image))
    return fail("image not contained in step m+1");
  const Rat& q_next = qd[static_cast<size_t>(m)].slope;
  if (tau > q_next) {
    if (!is_tau_semistable(quotient_pair(p, flag, m)))
      return fail("case A: quotient pair at m+1 not tau-semistable");
    return PairCase::A;
  }
  // tau == q_next here (chain already rejected tau < q_next)
  if (!block_semistable(m + 1))
    return fail("case B: quotient m+1 not semistable");
  if (!equals_classical())
    return fail("case B: flag differs from the classical filtration");
  if (m + 2 <= k &&
      !(qd[static_cast<size_t>(m)].slope > qd[static_cast<size_t>(m + 1)].slope))
    return fail("case B: slopes m+1, m+2 not strictly decreasing");
  if (!is_tau_semistable(quotient_pair(p, flag, m)))
    return fail("case B: quotient pair at m+1 not tau-semistable");
  return PairCase::B;
}

std::optional<AdmissibleCandidate> admissible_candidate(const PairModel& p,
                                                        const Flag& flag) {
  if (!flag.witnesses) return std::nullopt;
  const auto qd = quotient_data(flag);
  const int k = static_cast<int>(qd.size());
  const Rat& tau = p.tau;
  // the tau gap pins l: leading slopes above tau, slope l+1 at most tau
  int l = 0;
  while (l < k && qd[static_cast<size_t>(l)].slope > tau) ++l;
  for (int i = 1; i < l; ++i)
    if (!(qd[static_cast<size_t>(i - 1)].slope > qd[static_cast<size_t>(i)].slope))
      return std::nullopt;
  if (l + 2 <= k && !(tau > qd[static_cast<size_t>(l + 1)].slope))
    return std::nullopt;
  for (int i = l + 2; i < k; ++i)
    if (!(qd[static_cast<size_t>(i - 1)].slope > qd[static_cast<size_t>(i)].slope))
      return std::nullopt;

  const auto& w = *flag.witnesses;
  const auto in_step = [&](int step) {  // 1-based; 0 = the zero subobject
    if (p.image.empty()) return true;
    if (step == 0) return false;
    return subset_includes(w[static_cast<size_t>(step - 1)], p.image);
  };
  if (l + 1 <= k && !in_step(l + 1)) return std::nullopt;

  AdmissibleCandidate cand;
  cand.l = l;
  cand.skip = !in_step(l);
  if (cand.skip && l + 1 > k) return std::nullopt;
  if (!cand.skip && l + 2 <= k &&
      !(qd[static_cast<size_t>(l)].slope > qd[static_cast<size_t>(l + 1)].slope))
    return std::nullopt;
  for (int i = 0; i < k; ++i) {
    const bool skipped = cand.skip && i == l;
    const Rat dir = skipped ? Rat() : tau - qd[static_cast<size_t>(i)].slope;
    cand.direction.push_back(dir);
    if (!skipped)
      cand.value_sq +=
          Rat(qd[static_cast<size_t>(i)].rank) *
          (qd[static_cast<size_t>(i)].slope - tau).squared();
  }
  for (size_t i = 1; i < cand.direction.size(); ++i)
    if (!(cand.direction[i - 1] < cand.direction[i])) return std::nullopt;
  if (cand.value_sq.is_zero()) return std::nullopt;  // the zero direction
  return cand;
}

}  // namespace hnflow
