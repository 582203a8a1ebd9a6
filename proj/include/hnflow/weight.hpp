#pragma once

#include <optional>
#include <vector>

#include "hnflow/model.hpp"

namespace hnflow {

// The optimal destabilizing direction of a non-semistable bundle. The
// direction is kept unnormalized and exact: direction_i = m - m_i over the
// Harder-Narasimhan quotients, with squared norm (and squared weight)
// norm_sq = sum r_i direction_i^2. The actual minimal weight is
// -sqrt(norm_sq); `float_view` holds the normalized eigenvalues
// direction_i / sqrt(norm_sq) for presentation only (doubles, good to
// ~1e-12; every comparison in the library uses the exact fields).
struct Destabilizer {
  Flag flag;
  std::vector<Rat> direction;
  Rat norm_sq;
  Rat weight_sq;
  std::vector<double> float_view;
};

// Maximal weight of the bundle against a constant-eigenvalue direction:
//   lambda_k deg(E) + sum_{i<k} (lambda_i - lambda_{i+1}) deg(E_i)
//     - (deg(E)/r) Tr(s),  Tr(s) = sum r_i lambda_i.
// Every spectrum in this model encodes a holomorphic eigenfiltration, so
// the infinite branch of the weight map is unreachable by construction.
// The equivalent form sum lambda_i r_i (m_i - m) is computed alongside and
// asserted equal. Malformed spectra throw std::invalid_argument.
Rat maximal_weight(const SplitBundle& b, const Spectrum& s);

// std::nullopt iff the bundle is semistable; otherwise the destabilizer
// built on the Harder-Narasimhan flag. The minimum of the weight map over
// the unit sphere of directions is -sqrt(norm_sq).
std::optional<Destabilizer> optimal_destabilizer(const SplitBundle& b);

struct LagrangeSolution {
  std::vector<Rat> direction;  // baseline - m_i, strictly increasing
  Rat value_sq;                // flag-wise minimum is -sqrt(value_sq)
};

// Critical point of the weight restricted to a fixed flag, over the
// ellipsoid sum r_i lambda_i^2 = 1. std::nullopt when the negative critical
// point violates the open ordering condition, i.e. when the quotient
// slopes are not strictly decreasing.
std::optional<LagrangeSolution> lagrange_minimum(const Flag& f,
                                                 const Rat& baseline);

// Graded quotients of the destabilizer's flag, read off the witnesses:
// the limit of the bundle under the flow in the destabilizing direction.
// Throws std::invalid_argument when the flag carries no witnesses.
std::vector<SplitBundle> limit_object(const SplitBundle& b,
                                      const Destabilizer& d);

// Antisymmetric matrix of pairwise eigenvalue gaps: entry (i, j) is
// direction_i - direction_j, the scaling exponent of the block
// Hom(F_j, F_i) under the flow. Entries above the diagonal are strictly
// negative, which is what makes the off-diagonal part of the semiconnection
// decay.
std::vector<std::vector<Rat>> flow_decay_exponents(const Destabilizer& d);

}  // namespace hnflow
