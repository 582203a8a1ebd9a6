#include "hnflow/model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hnflow {

Rat SlopePoint::slope() const {
  if (rank <= 0) throw std::domain_error("SlopePoint: rank must be positive");
  return Rat(degree, rank);
}

Rat slope(const SlopePoint& p) { return p.slope(); }

SplitBundle::SplitBundle(std::vector<int> twists) : twists_(std::move(twists)) {
  if (twists_.empty())
    throw std::invalid_argument("SplitBundle: twists must be non-empty");
  std::sort(twists_.begin(), twists_.end(), std::greater<int>());
  degree_ = std::accumulate(twists_.begin(), twists_.end(), 0LL);
}

long long SplitBundle::topsum(int k) const {
  if (k < 1 || k > rank())
    throw std::out_of_range("topsum: k out of range [1, rank]");
  return std::accumulate(twists_.begin(), twists_.begin() + k, 0LL);
}

long long SplitBundle::bottomsum(int k) const {
  if (k < 1 || k > rank())
    throw std::out_of_range("bottomsum: k out of range [1, rank]");
  return std::accumulate(twists_.end() - k, twists_.end(), 0LL);
}

long long SplitBundle::subset_sum(const std::vector<int>& indices) const {
  long long s = 0;
  for (int i : indices) s += twist(i);
  return s;
}

bool SplitBundle::valid_point(const SlopePoint& p) const {
  return p.rank > 0 && p.rank <= rank() && p.degree <= topsum(p.rank);
}

std::vector<Quotient> quotient_data(const Flag& f) {
  if (f.steps.empty())
    throw std::invalid_argument("quotient_data: empty flag");
  std::vector<Quotient> out;
  out.reserve(f.steps.size());
  int prev_rank = 0;
  long long prev_deg = 0;
  for (const SlopePoint& s : f.steps) {
    const int dr = s.rank - prev_rank;
    if (dr <= 0)
      throw std::invalid_argument(
          "quotient_data: ranks must be strictly increasing");
    const long long dd = s.degree - prev_deg;
    out.push_back({dr, dd, Rat(dd, dr)});
    prev_rank = s.rank;
    prev_deg = s.degree;
  }
  return out;
}

void validate_flag(const SplitBundle& b, const Flag& f) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("invalid flag: " + msg);
  };
  if (f.steps.empty()) fail("no steps");
  int prev_rank = 0;
  for (const SlopePoint& s : f.steps) {
    if (s.rank <= prev_rank) fail("ranks not strictly increasing");
    if (s.rank > b.rank()) fail("step rank exceeds bundle rank");
    if (s.degree > b.topsum(s.rank)) fail("step degree exceeds topsum bound");
    prev_rank = s.rank;
  }
  if (f.steps.back().rank != b.rank() || f.steps.back().degree != b.degree())
    fail("final step is not the full bundle");
  if (!f.witnesses) return;
  const auto& w = *f.witnesses;
  if (w.size() != f.steps.size()) fail("witness count mismatch");
  std::vector<char> seen(static_cast<size_t>(b.rank()), 0);
  for (size_t i = 0; i < w.size(); ++i) {
    if (static_cast<int>(w[i].size()) != f.steps[i].rank)
      fail("witness size does not match step rank");
    if (!std::is_sorted(w[i].begin(), w[i].end())) fail("witness not sorted");
    for (int idx : w[i])
      if (idx < 0 || idx >= b.rank()) fail("witness index out of range");
    if (std::adjacent_find(w[i].begin(), w[i].end()) != w[i].end())
      fail("witness has duplicate index");
    if (i > 0 && !std::includes(w[i].begin(), w[i].end(), w[i - 1].begin(),
                                w[i - 1].end()))
      fail("witnesses not nested");
    if (b.subset_sum(w[i]) != f.steps[i].degree)
      fail("witness twist sum does not match step degree");
  }
}

Flag flag_from_witnesses(const SplitBundle& b,
                         std::vector<std::vector<int>> chain) {
  Flag f;
  f.steps.reserve(chain.size());
  for (const auto& s : chain)
    f.steps.push_back(
        {static_cast<int>(s.size()), b.subset_sum(s)});
  f.witnesses = std::move(chain);
  validate_flag(b, f);
  return f;
}

void validate_spectrum(const SplitBundle& b, const Spectrum& s) {
  validate_flag(b, s.flag);
  if (s.eigenvalues.size() != s.flag.steps.size())
    throw std::invalid_argument(
        "invalid spectrum: one eigenvalue per flag step required");
  for (size_t i = 1; i < s.eigenvalues.size(); ++i)
    if (!(s.eigenvalues[i - 1] < s.eigenvalues[i]))
      throw std::invalid_argument(
          "invalid spectrum: eigenvalues must be strictly increasing");
}

bool subset_includes(const std::vector<int>& super,
                     const std::vector<int>& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

PairModel::PairModel(SplitBundle bundle_in, std::vector<int> image_in, Rat t)
    : bundle(std::move(bundle_in)), image(std::move(image_in)), tau(t) {
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  for (int i : image)
    if (i < 0 || i >= bundle.rank())
      throw std::invalid_argument("PairModel: image index out of range");
}

}  // namespace hnflow
