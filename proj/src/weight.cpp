#include "hnflow/weight.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "hnflow/hn.hpp"

namespace hnflow {

Rat maximal_weight(const SplitBundle& b, const Spectrum& s) {
  validate_spectrum(b, s);
  const auto qd = quotient_data(s.flag);
  const size_t k = qd.size();
  const auto& lam = s.eigenvalues;

  Rat trace;
  for (size_t i = 0; i < k; ++i) trace += Rat(qd[i].rank) * lam[i];

  Rat displayed = lam[k - 1] * Rat(b.degree());
  for (size_t i = 0; i + 1 < k; ++i)
    displayed += (lam[i] - lam[i + 1]) * Rat(s.flag.steps[i].degree);
  displayed -= b.slope() * trace;

#ifndef NDEBUG
  Rat alternate;
  for (size_t i = 0; i < k; ++i)
    alternate += lam[i] * Rat(qd[i].rank) * (qd[i].slope - b.slope());
  assert(displayed == alternate);
#endif
  return displayed;
}

std::optional<Destabilizer> optimal_destabilizer(const SplitBundle& b) {
  if (is_semistable(b)) return std::nullopt;
  Destabilizer d;
  d.flag = hn_filtration(b);
  const Rat m = b.slope();
  Rat weighted_sum;  // sum r_i direction_i, must vanish (s_op is trace free)
  for (const Quotient& q : quotient_data(d.flag)) {
    const Rat dir = m - q.slope;
    d.direction.push_back(dir);
    d.norm_sq += Rat(q.rank) * dir.squared();
    weighted_sum += Rat(q.rank) * dir;
  }
  d.weight_sq = d.norm_sq;
  assert(weighted_sum.is_zero());
  assert(d.norm_sq.sign() > 0);
  for (size_t i = 1; i < d.direction.size(); ++i)
    assert(d.direction[i - 1] < d.direction[i]);
  const double scale = std::sqrt(d.norm_sq.to_double());
  for (const Rat& dir : d.direction)
    d.float_view.push_back(dir.to_double() / scale);
  return d;
}

std::optional<LagrangeSolution> lagrange_minimum(const Flag& f,
                                                 const Rat& baseline) {
  const auto qd = quotient_data(f);
  for (size_t i = 1; i < qd.size(); ++i)
    if (!(qd[i - 1].slope > qd[i].slope)) return std::nullopt;
  LagrangeSolution sol;
  for (const Quotient& q : qd) {
    sol.direction.push_back(baseline - q.slope);
    sol.value_sq += Rat(q.rank) * (q.slope - baseline).squared();
  }
  return sol;
}

std::vector<SplitBundle> limit_object(const SplitBundle& b,
                                      const Destabilizer& d) {
  if (!d.flag.witnesses)
    throw std::invalid_argument("limit_object: flag carries no witnesses");
  validate_flag(b, d.flag);
  std::vector<SplitBundle> blocks;
  const auto& w = *d.flag.witnesses;
  std::vector<char> in_prev(static_cast<size_t>(b.rank()), 0);
  for (const auto& step : w) {
    std::vector<int> block_twists;
    for (int idx : step)
      if (!in_prev[static_cast<size_t>(idx)]) {
        block_twists.push_back(b.twist(idx));
        in_prev[static_cast<size_t>(idx)] = 1;
      }
    blocks.emplace_back(std::move(block_twists));
  }
  return blocks;
}

std::vector<std::vector<Rat>> flow_decay_exponents(const Destabilizer& d) {
  const size_t k = d.direction.size();
  std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      m[i][j] = d.direction[i] - d.direction[j];
  return m;
}

}  // namespace hnflow
