#include "hnflow/pairs.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hnflow {

const char* to_string(PairCase c) {
  switch (c) {
    case PairCase::A: return "A";
    case PairCase::B: return "B";
    case PairCase::C: return "C";
  }
  return "?";
}

int image_step_of(const Flag& f, const std::vector<int>& image) {
  if (image.empty()) return 0;
  if (!f.witnesses)
    throw std::invalid_argument("image_step_of: flag carries no witnesses");
  const auto& w = *f.witnesses;
  for (size_t i = 0; i < w.size(); ++i)
    if (subset_includes(w[i], image)) return static_cast<int>(i) + 1;
  throw std::invalid_argument("image_step_of: image not inside the bundle");
}

bool is_tau_semistable(const PairModel& p) {
  const SplitBundle& b = p.bundle;
  const int r = b.rank();
  if (r == 1) return true;  // no subobjects of intermediate rank

  // (1) subobject slopes bounded by tau
  for (int k = 1; k < r; ++k)
    if (Rat(b.topsum(k), k) > p.tau) return false;

  // (2) image-containing subobjects have quotient slope at least tau; per
  // rank it is enough to test the maximal-degree representative, which is
  // the image topped up greedily with the largest remaining twists.
  long long image_sum = b.subset_sum(p.image);
  const int isz = static_cast<int>(p.image.size());
  std::vector<int> spare;  // twists not claimed by the image, descending
  {
    std::vector<char> in_image(static_cast<size_t>(r), 0);
    for (int i : p.image) in_image[static_cast<size_t>(i)] = 1;
    for (int i = 0; i < r; ++i)
      if (!in_image[static_cast<size_t>(i)]) spare.push_back(b.twist(i));
  }
  long long sum = image_sum;
  for (int k = std::max(isz, 1); k < r; ++k) {
    if (k > isz) sum += spare[static_cast<size_t>(k - isz - 1)];
    if (Rat(b.degree() - sum, r - k) < p.tau) return false;
  }
  return true;
}

namespace {

// Proper subobject of `ambient` containing `image`, of minimal quotient
// slope; ties go to the subobject of minimal rank, i.e. the quotient of
// maximal rank. Realized on maximal-degree representatives (image plus
// greedy top twists). Anything else breaks the strict slope chain: a
// larger-rank minimizer leaves an equal-slope minimizer inside it, and the
// recursion would emit two steps of the same slope.
struct TopPick {
  std::vector<int> subset;
  Rat quotient_slope;
  bool found = false;
};

TopPick min_quotient_slope_pick(const SplitBundle& b,
                                const std::vector<int>& ambient,
                                const std::vector<int>& image) {
  TopPick pick;
  const int n = static_cast<int>(ambient.size());
  const int isz = static_cast<int>(image.size());
  std::vector<int> spare;  // ambient minus image, ascending index
  for (int i : ambient)
    if (!std::binary_search(image.begin(), image.end(), i))
      spare.push_back(i);
  const long long ambient_sum = b.subset_sum(ambient);
  long long sum = b.subset_sum(image);
  std::vector<int> current = image;
  for (int ks = std::max(isz, 1); ks < n; ++ks) {
    if (ks > isz) {
      // ascending index order means descending twist order
      const int idx = spare[static_cast<size_t>(ks - isz - 1)];
      current.insert(std::upper_bound(current.begin(), current.end(), idx),
                     idx);
      sum += b.twist(idx);
    }
    const Rat q(ambient_sum - sum, n - ks);
    if (!pick.found || q < pick.quotient_slope) {
      pick.found = true;
      pick.quotient_slope = q;
      pick.subset = current;
    }
  }
  return pick;
}

GeneralizedHN classical_case(const PairModel& p) {
  GeneralizedHN g;
  g.flag = hn_filtration(p.bundle);
  g.case_tag = PairCase::C;
  g.m_index = 0;
  for (const Quotient& q : quotient_data(g.flag))
    if (q.slope > p.tau) ++g.m_index;
  g.image_step = image_step_of(g.flag, p.image);
  return g;
}

}  // namespace

GeneralizedHN generalized_hn(const PairModel& p) {
  if (is_tau_semistable(p))
    throw std::invalid_argument("generalized_hn: pair is tau-semistable");
  const SplitBundle& b = p.bundle;
  const int r = b.rank();
  const auto& tw = b.twists();

  if (p.image.empty()) return classical_case(p);

  // Phase 1: repeatedly take the maximal destabilizing subobject of slope
  // above tau -- the top isotypic block of what is left. If the image gets
  // absorbed, the filtration is the classical one.
  std::vector<std::vector<int>> chain;
  std::vector<int> cur;
  int next = 0;
  while (next < r && Rat(tw[static_cast<size_t>(next)]) > p.tau) {
    const int value = tw[static_cast<size_t>(next)];
    while (next < r && tw[static_cast<size_t>(next)] == value)
      cur.push_back(next++);
    chain.push_back(cur);
    if (subset_includes(cur, p.image)) return classical_case(p);
  }
  const int m = static_cast<int>(chain.size());

  // Phase 2: from the top, repeatedly take the image-containing subobject
  // whose quotient has minimal slope and maximal rank, while it
  // destabilizes, i.e. while that slope stays below tau.
  std::vector<std::vector<int>> upper;  // F_1 over F_2 over ...
  std::vector<int> ambient(static_cast<size_t>(r));
  std::iota(ambient.begin(), ambient.end(), 0);
  for (;;) {
    const TopPick pick = min_quotient_slope_pick(b, ambient, p.image);
    if (!pick.found || !(pick.quotient_slope < p.tau)) break;
    // the picked subobject always contains the phase-1 part
    assert(subset_includes(pick.subset, cur));
    upper.push_back(pick.subset);
    ambient = pick.subset;
  }

  std::vector<std::vector<int>> witnesses = chain;
  for (auto it = upper.rbegin(); it != upper.rend(); ++it)
    witnesses.push_back(*it);
  std::vector<int> all(static_cast<size_t>(r));
  std::iota(all.begin(), all.end(), 0);
  witnesses.push_back(std::move(all));

  GeneralizedHN g;
  g.flag = flag_from_witnesses(b, std::move(witnesses));
  g.m_index = m;
  const auto qd = quotient_data(g.flag);
  const Rat& q_next = qd[static_cast<size_t>(m)].slope;  // slope of step m+1
  assert(p.tau >= q_next);
  g.case_tag = (q_next == p.tau) ? PairCase::B : PairCase::A;
  g.image_step = image_step_of(g.flag, p.image);
  assert(g.image_step == m + 1);
  return g;
}

PairWeight pair_maximal_weight(const PairModel& p, const Spectrum& s) {
  validate_spectrum(p.bundle, s);
  const auto qd = quotient_data(s.flag);
  const auto& lam = s.eigenvalues;
  const size_t k = qd.size();

  if (!p.image.empty()) {
    if (!s.flag.witnesses)
      throw std::invalid_argument(
          "pair_maximal_weight: witnesses required to test image containment");
    int j0 = -1;  // largest step of nonpositive eigenvalue
    for (size_t i = 0; i < k; ++i)
      if (lam[i].sign() <= 0) j0 = static_cast<int>(i);
    if (j0 < 0 ||
        !subset_includes((*s.flag.witnesses)[static_cast<size_t>(j0)],
                         p.image))
      return PairWeight::infinite();
  }

  Rat trace;
  for (size_t i = 0; i < k; ++i) trace += Rat(qd[i].rank) * lam[i];
  Rat displayed = lam[k - 1] * Rat(p.bundle.degree());
  for (size_t i = 0; i + 1 < k; ++i)
    displayed += (lam[i] - lam[i + 1]) * Rat(s.flag.steps[i].degree);
  displayed -= p.tau * trace;

#ifndef NDEBUG
  Rat alternate;
  for (size_t i = 0; i < k; ++i)
    alternate += lam[i] * Rat(qd[i].rank) * (qd[i].slope - p.tau);
  assert(displayed == alternate);
#endif
  return {true, displayed};
}

std::optional<PairDestabilizer> pair_optimal_destabilizer(const PairModel& p) {
  if (is_tau_semistable(p)) return std::nullopt;
  const GeneralizedHN g = generalized_hn(p);
  PairDestabilizer d;
  d.flag = g.flag;
  d.m_index = g.m_index;
  d.skip = g.case_tag != PairCase::C;
  const auto qd = quotient_data(g.flag);
  for (size_t i = 0; i < qd.size(); ++i) {
    const bool skipped = d.skip && static_cast<int>(i) == g.m_index;
    const Rat dir = skipped ? Rat() : p.tau - qd[i].slope;
    d.direction.push_back(dir);
    if (!skipped) d.norm_sq += Rat(qd[i].rank) * (qd[i].slope - p.tau).squared();
  }
  assert(d.norm_sq.sign() > 0);
  for (size_t i = 1; i < d.direction.size(); ++i)
    assert(d.direction[i - 1] < d.direction[i]);
  return d;
}

PairLimitObject pair_limit_object(const PairModel& p,
                                  const PairDestabilizer& d) {
  if (!d.flag.witnesses)
    throw std::invalid_argument("pair_limit_object: flag carries no witnesses");
  validate_flag(p.bundle, d.flag);
  PairLimitObject out;
  const auto& w = *d.flag.witnesses;
  std::vector<char> used(static_cast<size_t>(p.bundle.rank()), 0);
  for (const auto& step : w) {
    std::vector<int> block;
    for (int idx : step)
      if (!used[static_cast<size_t>(idx)]) {
        block.push_back(p.bundle.twist(idx));
        used[static_cast<size_t>(idx)] = 1;
      }
    out.blocks.emplace_back(std::move(block));
  }
  if (d.skip) out.phi_block = d.m_index;
  return out;
}

EnergyComparison compare_tau_energy(const Polygon& f, const Polygon& g,
                                    const Rat& tau) {
  EnergyComparison out;
  const auto refuse = [&](const std::string& why) {
    out.comparable = false;
    out.diagnostic = why;
    return out;
  };
  try {
    validate_polygon(f);
    validate_polygon(g);
  } catch (const std::invalid_argument& e) {
    return refuse(e.what());
  }
  if (!polygon_concave(f)) return refuse("f is not concave");
  if (!polygon_concave(g)) return refuse("g is not concave");
  const auto min_slope = [](const Polygon& p) {
    // concave, so the last segment has the smallest slope
    const auto& [x0, y0] = p.vertices[p.vertices.size() - 2];
    const auto& [x1, y1] = p.vertices.back();
    return Rat(y1 - y0, x1 - x0);
  };
  if (min_slope(f) < tau) return refuse("f has a segment slope below tau");
  if (min_slope(g) < tau) return refuse("g has a segment slope below tau");
  const int rf = f.vertices.back().first;
  const int rg = g.vertices.back().first;
  const int common = std::min(rf, rg);
  std::set<int> xs;
  for (const auto& v : f.vertices)
    if (v.first <= common) xs.insert(v.first);
  for (const auto& v : g.vertices)
    if (v.first <= common) xs.insert(v.first);
  xs.insert(common);
  for (int x : xs)
    if (polygon_value(f, x) < polygon_value(g, x))
      return refuse("f < g at x = " + std::to_string(x));
  if (rf != rg) {
    const Rat chord(f.vertices.back().second - g.vertices.back().second,
                    rf - rg);
    if (chord > tau) return refuse("endpoint chord slope above tau");
  }
  out.comparable = true;
  out.difference = energy(f, tau) - energy(g, tau);
  out.equal =
      rf == rg && normalize_collinear(f) == normalize_collinear(g);
  return out;
}

bool tau_extension_equal(const Polygon& f, const Polygon& g, const Rat& tau) {
  const int rf = f.vertices.back().first;
  const int rg = g.vertices.back().first;
  if (rf == rg) return normalize_collinear(f) == normalize_collinear(g);
  const Polygon& shorter = rf < rg ? f : g;
  const Polygon& longer = rf < rg ? g : f;
  const int dx = longer.vertices.back().first - shorter.vertices.back().first;
  const Rat extended_y =
      Rat(shorter.vertices.back().second) + tau * Rat(dx);
  if (extended_y != Rat(longer.vertices.back().second)) return false;
  Polygon ext = shorter;
  ext.vertices.push_back(longer.vertices.back());
  return normalize_collinear(ext) == normalize_collinear(longer);
}

PairModel quotient_pair(const PairModel& p, const Flag& f, int step) {
  if (!f.witnesses)
    throw std::invalid_argument("quotient_pair: flag carries no witnesses");
  const auto& w = *f.witnesses;
  if (step < 0 || step >= static_cast<int>(w.size()))
    throw std::out_of_range("quotient_pair: step out of range");
  const std::vector<int> empty;
  const std::vector<int>& lower =
      step == 0 ? empty : w[static_cast<size_t>(step - 1)];
  std::vector<int> block;
  for (int idx : w[static_cast<size_t>(step)])
    if (!std::binary_search(lower.begin(), lower.end(), idx))
      block.push_back(idx);
  // global twists are sorted descending, so the block's twists taken in
  // ascending index order are already descending
  std::vector<int> twists;
  std::vector<int> image_local;
  for (size_t j = 0; j < block.size(); ++j) {
    twists.push_back(p.bundle.twist(block[j]));
    if (std::binary_search(p.image.begin(), p.image.end(), block[j]))
      image_local.push_back(static_cast<int>(j));
  }
  return PairModel(SplitBundle(std::move(twists)), std::move(image_local),
                   p.tau);
}

}  // namespace hnflow
