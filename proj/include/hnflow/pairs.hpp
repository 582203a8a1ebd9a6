#pragma once

#include <optional>
#include <vector>

#include "hnflow/hn.hpp"
#include "hnflow/model.hpp"

namespace hnflow {

// Terminal configurations of the generalized Harder-Narasimhan filtration
// of a pair, distinguished by where the image sits relative to step m and
// by the slope of quotient m+1:
//   A: image not in E_m, tau >  m_{m+1}, quotient pair at m+1 tau-semistable
//   B: image not in E_m, tau == m_{m+1}, quotient m+1 semistable
//   C: image contained in E_m
// In cases B and C the filtration is the classical one.
enum class PairCase { A, B, C };

const char* to_string(PairCase c);

struct GeneralizedHN {
  Flag flag;           // witnessed
  int m_index = 0;     // the m of the slope chain m_1 > ... > m_m > tau
  PairCase case_tag = PairCase::C;
  int image_step = 0;  // smallest 1-based step containing the image; 0 = E_0
};

// Optimal destabilizing direction for a pair. In cases A and B the
// eigenvalue of the image-carrying step m+1 is pinned to zero ("skip") and
// that step does not contribute to the norm.
struct PairDestabilizer {
  Flag flag;
  int m_index = 0;
  bool skip = false;
  std::vector<Rat> direction;  // tau - m_i, entry m+1 zeroed when skip
  Rat norm_sq;                 // minimal pair weight is -sqrt(norm_sq)
};

// tau-semistability of the pair:
//   (1) every subobject of intermediate rank has slope <= tau, and
//   (2) every image-containing subobject of intermediate rank has quotient
//       slope >= tau.
// Both conditions are decided on maximal-degree representatives, i.e. on
// top twist sums.
bool is_tau_semistable(const PairModel& p);

// The generalized Harder-Narasimhan filtration of a non-tau-semistable
// pair, built the constructive way: first peel maximal subobjects of slope
// above tau off the bottom (stopping early if the image gets absorbed, in
// which case the classical filtration wins), then peel image-containing
// subobjects of minimal quotient slope off the top. Throws
// std::invalid_argument on a tau-semistable input.
GeneralizedHN generalized_hn(const PairModel& p);

// Weight of the pair against a direction, finite only when the image sits
// inside the largest step of nonpositive eigenvalue; the flag must carry
// witnesses for that containment test whenever the image is non-empty.
struct PairWeight {
  bool finite = true;
  Rat value;  // meaningful only when finite

  static PairWeight infinite() { return {false, Rat()}; }
};

PairWeight pair_maximal_weight(const PairModel& p, const Spectrum& s);

// std::nullopt iff the pair is tau-semistable; otherwise the destabilizer
// read off generalized_hn: direction_i = tau - m_i with the step m+1 zeroed
// out in cases A and B.
std::optional<PairDestabilizer> pair_optimal_destabilizer(const PairModel& p);

// Graded limit of the pair under the flow: the quotient blocks of the
// destabilizing flag, with `phi_block` naming the block (0-based) that
// keeps carrying the induced morphism when the skip rule applied. Without
// skip the image sits in blocks of strictly negative eigenvalue and no
// morphism survives at level zero.
struct PairLimitObject {
  std::vector<SplitBundle> blocks;
  std::optional<int> phi_block;
};

PairLimitObject pair_limit_object(const PairModel& p,
                                  const PairDestabilizer& d);

// Energy ordering for two distinct concave lines on possibly different
// domains, all slopes at least tau, f above g on the common domain, and the
// chord between the right endpoints of slope at most tau. Under these
// conditions E(f) >= E(g) with equality only in degenerate boundary
// configurations (see tau_extension_equal).
EnergyComparison compare_tau_energy(const Polygon& f, const Polygon& g,
                                    const Rat& tau);

// Boundary signature of compare_tau_energy equality: extending the
// shorter-domain polygon along slope tau makes the two lines coincide.
bool tau_extension_equal(const Polygon& f, const Polygon& g, const Rat& tau);

// Quotient pair induced on block `step` (0-based) of a witnessed flag: the
// block's twists with the image indices that land in it, re-indexed.
PairModel quotient_pair(const PairModel& p, const Flag& f, int step);

// Smallest 1-based flag step whose witness contains the image; 0 when the
// image is empty (it sits in E_0 already).
int image_step_of(const Flag& f, const std::vector<int>& image);

}  // namespace hnflow
