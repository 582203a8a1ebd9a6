#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hnflow/model.hpp"

namespace hnflow {

// Piecewise affine line through integer points, starting at (0, 0) with
// strictly increasing x. The segment slopes are the quotient slopes of the
// flag the polygon came from.
struct Polygon {
  std::vector<std::pair<int, long long>> vertices;  // (rank, degree)

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// Throws std::invalid_argument unless the vertex list starts at (0, 0) with
// strictly increasing x.
void validate_polygon(const Polygon& p);

// Exact value of the polygon's function at an integer abscissa in [0, r].
Rat polygon_value(const Polygon& p, int x);

// Merges vertices lying on the interior of a segment. Two polygons are
// equal as functions iff their normalized vertex lists coincide.
Polygon normalize_collinear(const Polygon& p);

// Segment slopes weakly decreasing (concavity of the function; flags with
// repeated slopes draw concave but non-normalized lines).
bool polygon_concave(const Polygon& p);

// Harder-Narasimhan filtration of a split bundle: one step per distinct
// twist value, witnessed by prefixes of the descending twist list. The
// quotients are twist-isotypic, hence semistable, with strictly decreasing
// slopes.
Flag hn_filtration(const SplitBundle& b);

// No subobject of intermediate rank has slope above the bundle slope; in
// the split model this happens exactly when all twists are equal.
bool is_semistable(const SplitBundle& b);

// (0, 0) followed by the flag steps.
Polygon polygon_of(const Flag& f);

// Whether the point lies on or below the Harder-Narasimhan polygonal line,
// evaluated exactly. Throws std::invalid_argument when p is not a valid
// subobject point of b (rank out of range or degree above the topsum
// bound).
bool dominates(const SplitBundle& b, const SlopePoint& p);

// Strictly decreasing quotient slopes. Collinear refinements of a concave
// flag fail this on purpose; normalize first when that matters.
bool is_concave(const Flag& f);

// Sum of r_i (m_i - baseline)^2 over the quotients: the energy of the
// polygonal line relative to the straight line of slope `baseline`.
Rat energy(const Flag& f, const Rat& baseline);
Rat energy(const Polygon& p, const Rat& baseline);

// Outcome of an energy comparison between two polygonal lines. When the
// inputs do not satisfy the comparison preconditions the result is marked
// not comparable and `diagnostic` says why; `difference` is meaningless
// then.
struct EnergyComparison {
  bool comparable = false;
  std::string diagnostic;
  Rat difference;     // E(f) - E(g)
  bool equal = false;  // f == g as functions (collinear-normalized)
};

// Energy ordering for two concave lines with equal endpoints and f >= g
// pointwise: E(f) - E(g) >= 0, zero exactly when f == g as functions.
// Pointwise domination is checked at the merged breakpoint set, which is
// enough for piecewise affine functions.
EnergyComparison compare_concave_energy(const Polygon& f, const Polygon& g,
                                        const Rat& baseline);

}  // namespace hnflow
