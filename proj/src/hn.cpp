#include "hnflow/hn.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hnflow {

void validate_polygon(const Polygon& p) {
  const auto fail = [](const char* msg) {
    throw std::invalid_argument(std::string("invalid polygon: ") + msg);
  };
  if (p.vertices.size() < 2) fail("needs at least two vertices");
  if (p.vertices.front() != std::pair<int, long long>{0, 0})
    fail("must start at (0,0)");
  for (size_t i = 1; i < p.vertices.size(); ++i)
    if (p.vertices[i].first <= p.vertices[i - 1].first)
      fail("x coordinates must be strictly increasing");
}

Rat polygon_value(const Polygon& p, int x) {
  if (x < 0 || x > p.vertices.back().first)
    throw std::out_of_range("polygon_value: x outside domain");
  for (size_t i = 1; i < p.vertices.size(); ++i) {
    const auto& [x0, y0] = p.vertices[i - 1];
    const auto& [x1, y1] = p.vertices[i];
    if (x <= x1)
      return Rat(y0) + Rat(y1 - y0, x1 - x0) * Rat(x - x0);
  }
  return Rat(p.vertices.back().second);
}

Polygon normalize_collinear(const Polygon& p) {
  validate_polygon(p);
  Polygon out;
  out.vertices.push_back(p.vertices.front());
  for (size_t i = 1; i + 1 < p.vertices.size(); ++i) {
    const auto& [xa, ya] = out.vertices.back();
    const auto& [xb, yb] = p.vertices[i];
    const auto& [xc, yc] = p.vertices[i + 1];
    // keep (xb, yb) unless it lies on the segment (xa,ya)-(xc,yc)
    const bool collinear =
        static_cast<__int128>(yb - ya) * (xc - xb) ==
        static_cast<__int128>(yc - yb) * (xb - xa);
    if (!collinear) out.vertices.push_back(p.vertices[i]);
  }
  out.vertices.push_back(p.vertices.back());
  return out;
}

bool polygon_concave(const Polygon& p) {
  validate_polygon(p);
  for (size_t i = 1; i + 1 < p.vertices.size(); ++i) {
    const auto& [xa, ya] = p.vertices[i - 1];
    const auto& [xb, yb] = p.vertices[i];
    const auto& [xc, yc] = p.vertices[i + 1];
    if (Rat(yb - ya, xb - xa) < Rat(yc - yb, xc - xb)) return false;
  }
  return true;
}

Flag hn_filtration(const SplitBundle& b) {
  Flag f;
  std::vector<std::vector<int>> witnesses;
  std::vector<int> current;
  const auto& tw = b.twists();
  for (int i = 0; i < b.rank(); ++i) {
    current.push_back(i);
    const bool last_of_value = (i + 1 == b.rank() || tw[i + 1] != tw[i]);
    if (last_of_value) {
      f.steps.push_back({static_cast<int>(current.size()),
                         b.subset_sum(current)});
      witnesses.push_back(current);
    }
  }
  f.witnesses = std::move(witnesses);
  return f;
}

bool is_semistable(const SplitBundle& b) {
  return b.twists().front() == b.twists().back();
}

Polygon polygon_of(const Flag& f) {
  Polygon p;
  p.vertices.emplace_back(0, 0);
  for (const SlopePoint& s : f.steps) p.vertices.emplace_back(s.rank, s.degree);
  validate_polygon(p);
  return p;
}

bool dominates(const SplitBundle& b, const SlopePoint& p) {
  if (!b.valid_point(p))
    throw std::invalid_argument(
        "dominates: point is not a valid subobject point of the bundle");
  const Polygon hn = polygon_of(hn_filtration(b));
  return Rat(p.degree) <= polygon_value(hn, p.rank);
}

bool is_concave(const Flag& f) {
  const auto qd = quotient_data(f);
  for (size_t i = 1; i < qd.size(); ++i)
    if (!(qd[i - 1].slope > qd[i].slope)) return false;
  return true;
}

Rat energy(const Flag& f, const Rat& baseline) {
  Rat e;
  for (const Quotient& q : quotient_data(f))
    e += Rat(q.rank) * (q.slope - baseline).squared();
  return e;
}

Rat energy(const Polygon& p, const Rat& baseline) {
  validate_polygon(p);
  Rat e;
  for (size_t i = 1; i < p.vertices.size(); ++i) {
    const auto& [x0, y0] = p.vertices[i - 1];
    const auto& [x1, y1] = p.vertices[i];
    e += Rat(x1 - x0) * (Rat(y1 - y0, x1 - x0) - baseline).squared();
  }
  return e;
}

EnergyComparison compare_concave_energy(const Polygon& f, const Polygon& g,
                                        const Rat& baseline) {
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
  if (f.vertices.back().first != g.vertices.back().first)
    return refuse("domains differ");
  if (f.vertices.back().second != g.vertices.back().second)
    return refuse("right endpoints differ");
  std::set<int> xs;
  for (const auto& v : f.vertices) xs.insert(v.first);
  for (const auto& v : g.vertices) xs.insert(v.first);
  for (int x : xs)
    if (polygon_value(f, x) < polygon_value(g, x))
      return refuse("f < g at x = " + std::to_string(x));
  out.comparable = true;
  out.difference = energy(f, baseline) - energy(g, baseline);
  out.equal = normalize_collinear(f) == normalize_collinear(g);
  return out;
}

}  // namespace hnflow
