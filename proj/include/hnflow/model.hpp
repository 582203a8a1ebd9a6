#pragma once

#include <optional>
#include <vector>

#include "hnflow/rat.hpp"

namespace hnflow {

// The whole library works on a discrete model of a holomorphic bundle over
// a curve: the bundle is identified with the multiset of its line-bundle
// twists. Ranks, degrees and slopes of subobjects are then exact integer /
// rational data, and every filtration statement becomes decidable.
//
// The base volume is normalised to 1 throughout; it only ever enters the
// theory as a global scale factor on eigenvalues.
inline constexpr int kUnitVolume = 1;

// A point (rank, degree) standing for a subobject of known rank and degree.
struct SlopePoint {
  int rank = 0;
  long long degree = 0;

  Rat slope() const;
  friend bool operator==(const SlopePoint&, const SlopePoint&) = default;
};

// deg/rank. The rank must be positive.
Rat slope(const SlopePoint& p);

// Bundle modeled by its twists, stored sorted descending.
class SplitBundle {
 public:
  explicit SplitBundle(std::vector<int> twists);

  int rank() const { return static_cast<int>(twists_.size()); }
  long long degree() const { return degree_; }
  Rat slope() const { return Rat(degree_, rank()); }
  int twist(int i) const { return twists_.at(static_cast<size_t>(i)); }
  const std::vector<int>& twists() const { return twists_; }

  // Sum of the k largest twists: the maximal degree of a rank-k subobject.
  // Throws std::out_of_range unless 1 <= k <= rank.
  long long topsum(int k) const;
  // Sum of the k smallest twists (minimal degree of a rank-k split
  // subobject); same range contract as topsum.
  long long bottomsum(int k) const;

  // Twist sum over a set of 0-based indices.
  long long subset_sum(const std::vector<int>& indices) const;

  bool valid_point(const SlopePoint& p) const;

  friend bool operator==(const SplitBundle&, const SplitBundle&) = default;

 private:
  std::vector<int> twists_;
  long long degree_ = 0;
};

// Increasing chain of subobjects, each recorded as a SlopePoint; the last
// step is the full bundle. When the flag is split, `witnesses` holds the
// nested sets of twist indices realising each step.
struct Flag {
  std::vector<SlopePoint> steps;
  std::optional<std::vector<std::vector<int>>> witnesses;

  int size() const { return static_cast<int>(steps.size()); }
  friend bool operator==(const Flag&, const Flag&) = default;
};

// Rank and slope of one quotient E_i/E_{i-1} of a flag.
struct Quotient {
  int rank = 0;
  long long degree = 0;
  Rat slope;
  friend bool operator==(const Quotient&, const Quotient&) = default;
};

// Successive differences (r_i, m_i) of a flag; ranks and degrees telescope
// back to the original steps.
std::vector<Quotient> quotient_data(const Flag& f);

// Full validity check of a flag against its ambient bundle: ranks strictly
// increasing, final step equal to the bundle, step degrees within topsum
// bounds, and witnesses (when present) nested with matching sizes and twist
// sums. Throws std::invalid_argument on the first violation.
void validate_flag(const SplitBundle& b, const Flag& f);

// Builds a witnessed flag from a nested chain of index sets (each sorted
// ascending, last one the full index range). Validates as it goes.
Flag flag_from_witnesses(const SplitBundle& b,
                         std::vector<std::vector<int>> chain);

// Constant-eigenvalue Hermitian direction: one strictly increasing
// eigenvalue per flag step.
struct Spectrum {
  Flag flag;
  std::vector<Rat> eigenvalues;
};

// Throws std::invalid_argument unless the flag is valid for the bundle and
// the eigenvalues are strictly increasing, one per step.
void validate_spectrum(const SplitBundle& b, const Spectrum& s);

// Whether `sub` is contained in `super`; both sorted ascending.
bool subset_includes(const std::vector<int>& super, const std::vector<int>& sub);

// A bundle together with the smallest split subobject containing the image
// of the coupled morphism (empty when the morphism is zero) and the
// stability parameter tau.
struct PairModel {
  PairModel(SplitBundle bundle, std::vector<int> image, Rat tau);

  SplitBundle bundle;
  std::vector<int> image;  // sorted ascending, 0-based twist indices
  Rat tau;

  // The standing slope(E) >= tau assumption; callers that care (the CLI by
  // default) check it, the library operations themselves do not.
  bool satisfies_slope_bound() const { return bundle.slope() >= tau; }
};

}  // namespace hnflow
