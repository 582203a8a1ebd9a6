#include <doctest.h>

#include "hnflow/oracle.hpp"
#include "hnflow/pairs.hpp"

using namespace hnflow;

namespace {

Polygon poly(std::vector<std::pair<int, long long>> v) {
  Polygon p;
  p.vertices = std::move(v);
  return p;
}

PairModel make_pair(std::vector<int> twists, std::vector<int> image_1based,
                    Rat tau) {
  std::vector<int> image;
  for (int i : image_1based) image.push_back(i - 1);
  return PairModel(SplitBundle(std::move(twists)), std::move(image), tau);
}

}  // namespace

TEST_CASE("tau semistability") {
  CHECK(is_tau_semistable(make_pair({1, 1}, {1}, Rat(1))));
  CHECK_FALSE(is_tau_semistable(make_pair({2, 0}, {2}, Rat(1, 2))));
  // slope condition on the quotient fails; this input also violates the
  // standing slope(E) >= tau assumption and exists for diagnostics
  CHECK_FALSE(is_tau_semistable(make_pair({0, 0}, {1}, Rat(1))));
  // rank one is vacuously stable
  CHECK(is_tau_semistable(make_pair({5}, {1}, Rat(-3))));
}

TEST_CASE("tau semistability agrees with the exhaustive subset check") {
  for (const SplitBundle& b : enumerate_bundles(5, -2, 2)) {
    const int r = b.rank();
    for (unsigned imask = 0; imask < (1u << r); ++imask) {
      std::vector<int> image;
      for (int i = 0; i < r; ++i)
        if (imask & (1u << i)) image.push_back(i);
      for (const Rat& tau : {Rat(-1), Rat(0), Rat(1, 2), Rat(1), Rat(2)}) {
        const PairModel p(b, image, tau);
        bool ok = true;
        if (r > 1) {
          for (unsigned mask = 1; mask + 1 < (1u << r) && ok; ++mask) {
            std::vector<int> s;
            for (int i = 0; i < r; ++i)
              if (mask & (1u << i)) s.push_back(i);
            if (Rat(b.subset_sum(s), static_cast<int>(s.size())) > tau)
              ok = false;
            if (subset_includes(s, image) &&
                Rat(b.degree() - b.subset_sum(s),
                    r - static_cast<int>(s.size())) < tau)
              ok = false;
          }
        }
        CHECK(is_tau_semistable(p) == ok);
      }
    }
  }
}

TEST_CASE("generalized filtration on the worked examples") {
  {
    const auto g = generalized_hn(make_pair({2, 0}, {2}, Rat(1, 2)));
    CHECK(g.flag.steps == std::vector<SlopePoint>{{1, 2}, {2, 2}});
    CHECK(*g.flag.witnesses == std::vector<std::vector<int>>{{0}, {0, 1}});
    CHECK(g.m_index == 1);
    CHECK(g.case_tag == PairCase::A);
    CHECK(g.image_step == 2);
  }
  {
    const auto g = generalized_hn(make_pair({2, 0}, {1}, Rat(1, 2)));
    CHECK(g.flag.steps == hn_filtration(SplitBundle({2, 0})).steps);
    CHECK(g.m_index == 1);
    CHECK(g.case_tag == PairCase::C);
    CHECK(g.image_step == 1);
  }
  {
    // image on the middle summand: phase 2 picks the subobject {1,2} of
    // minimal quotient slope, giving the slope chain 3 > tau=2 >= 1 > 0
    const auto g = generalized_hn(make_pair({3, 1, 0}, {2}, Rat(2)));
    CHECK(g.flag.steps == std::vector<SlopePoint>{{1, 3}, {2, 4}, {3, 4}});
    CHECK(*g.flag.witnesses ==
          std::vector<std::vector<int>>{{0}, {0, 1}, {0, 1, 2}});
    CHECK(g.m_index == 1);
    CHECK(g.case_tag == PairCase::A);
  }
  {
    // image on the lowest summand instead: the minimal-quotient-slope
    // subobject containing it is {1,3}, of degree 3
    const auto g = generalized_hn(make_pair({3, 1, 0}, {3}, Rat(2)));
    CHECK(g.flag.steps == std::vector<SlopePoint>{{1, 3}, {2, 3}, {3, 4}});
    CHECK(*g.flag.witnesses ==
          std::vector<std::vector<int>>{{0}, {0, 2}, {0, 1, 2}});
    CHECK(g.m_index == 1);
    CHECK(g.case_tag == PairCase::A);
  }
  CHECK_THROWS_AS(generalized_hn(make_pair({1, 1}, {1}, Rat(1))),
                  std::invalid_argument);
}

TEST_CASE("generalized filtration case B") {
  const auto g = generalized_hn(make_pair({2, 1}, {2}, Rat(1)));
  CHECK(g.flag.steps == hn_filtration(SplitBundle({2, 1})).steps);
  CHECK(g.m_index == 1);
  CHECK(g.case_tag == PairCase::B);
}

TEST_CASE("generalized filtration with empty image is classical") {
  const auto g = generalized_hn(make_pair({2, 0}, {}, Rat(1, 2)));
  CHECK(g.flag.steps == hn_filtration(SplitBundle({2, 0})).steps);
  CHECK(g.case_tag == PairCase::C);
  CHECK(g.image_step == 0);
  CHECK(g.m_index == 1);
}

TEST_CASE("theorem clauses hold on the construction at small scale") {
  for (const SplitBundle& b : enumerate_bundles(4, -1, 2)) {
    if (b.rank() == 1) continue;
    const Flag hn = hn_filtration(b);
    const int r = b.rank();
    for (unsigned imask = 1; imask < (1u << r); ++imask) {
      std::vector<int> image;
      for (int i = 0; i < r; ++i)
        if (imask & (1u << i)) image.push_back(i);
      for (const Rat& tau : {Rat(0), Rat(1, 2), Rat(1)}) {
        if (b.slope() < tau) continue;
        const PairModel p(b, image, tau);
        if (is_tau_semistable(p)) continue;
        const auto g = generalized_hn(p);
        std::string why;
        const auto tag =
            check_pair_filtration_clauses(p, g.flag, g.m_index, &why, &hn);
        REQUIRE_MESSAGE(tag.has_value(), why);
        CHECK(*tag == g.case_tag);
        // uniqueness among all witnessed split flags
        int count = 0;
        for (const Flag& f : enumerate_split_flags(b)) {
          const auto qd = quotient_data(f);
          for (int m = 0; m <= f.size(); ++m)
            if (check_pair_filtration_clauses(p, f, m, nullptr, &hn) &&
                (f.steps != g.flag.steps || m != g.m_index))
              ++count;
        }
        CHECK(count == 0);
      }
    }
  }
}

TEST_CASE("pair maximal weight") {
  const PairModel p = make_pair({2, 0}, {2}, Rat(1, 2));
  Flag f;
  f.steps = {{1, 2}, {2, 2}};
  f.witnesses = std::vector<std::vector<int>>{{0}, {0, 1}};
  {
    const auto w = pair_maximal_weight(p, {f, {Rat(-1), Rat(0)}});
    REQUIRE(w.finite);
    CHECK(w.value == Rat(-3, 2));
  }
  {
    const auto w = pair_maximal_weight(p, {f, {Rat(-1), Rat(1)}});
    CHECK_FALSE(w.finite);  // the image escapes E_s(0)
  }
  {
    Flag single;
    single.steps = {{2, 2}};
    single.witnesses = std::vector<std::vector<int>>{{0, 1}};
    const auto w = pair_maximal_weight(p, {single, {Rat(0)}});
    REQUIRE(w.finite);
    CHECK(w.value == Rat(0));
  }
  // witnesses are required whenever the image is non-empty
  Flag bare;
  bare.steps = {{1, 2}, {2, 2}};
  CHECK_THROWS_AS(pair_maximal_weight(p, {bare, {Rat(-1), Rat(0)}}),
                  std::invalid_argument);
}

TEST_CASE("pair optimal destabilizer on the worked examples") {
  {
    const auto d = pair_optimal_destabilizer(make_pair({2, 0}, {2}, Rat(1, 2)));
    REQUIRE(d);
    CHECK(d->skip);
    CHECK(d->m_index == 1);
    CHECK(d->direction == std::vector<Rat>{Rat(-3, 2), Rat(0)});
    CHECK(d->norm_sq == Rat(9, 4));
  }
  {
    const auto d = pair_optimal_destabilizer(make_pair({2, 0}, {1}, Rat(1, 2)));
    REQUIRE(d);
    CHECK_FALSE(d->skip);
    CHECK(d->direction == std::vector<Rat>{Rat(-3, 2), Rat(1, 2)});
    CHECK(d->norm_sq == Rat(5, 2));
  }
  CHECK_FALSE(pair_optimal_destabilizer(make_pair({1, 1}, {1}, Rat(1))));
}

TEST_CASE("pair destabilizer identities at small scale") {
  for (const SplitBundle& b : enumerate_bundles(4, -1, 2)) {
    if (b.rank() == 1) continue;
    const int r = b.rank();
    for (unsigned imask = 1; imask < (1u << r); ++imask) {
      std::vector<int> image;
      for (int i = 0; i < r; ++i)
        if (imask & (1u << i)) image.push_back(i);
      for (const Rat& tau : {Rat(0), Rat(1, 2), Rat(1)}) {
        if (b.slope() < tau) continue;
        const PairModel p(b, image, tau);
        const auto d = pair_optimal_destabilizer(p);
        CHECK(static_cast<bool>(d) == !is_tau_semistable(p));
        if (!d) continue;
        const auto qd = quotient_data(d->flag);
        Rat pairing;
        for (size_t i = 0; i < qd.size(); ++i)
          pairing += Rat(qd[i].rank) * d->direction[i] * (qd[i].slope - tau);
        CHECK(pairing == -d->norm_sq);
        const auto w = pair_maximal_weight(p, {d->flag, d->direction});
        REQUIRE(w.finite);
        CHECK(w.value == -d->norm_sq);
      }
    }
  }
}

TEST_CASE("pair limit objects") {
  {
    const PairModel p = make_pair({2, 0}, {2}, Rat(1, 2));
    const auto lim = pair_limit_object(p, *pair_optimal_destabilizer(p));
    REQUIRE(lim.blocks.size() == 2);
    CHECK(lim.blocks[0].twists() == std::vector<int>{2});
    CHECK(lim.blocks[1].twists() == std::vector<int>{0});
    REQUIRE(lim.phi_block);
    CHECK(*lim.phi_block == 1);  // the second block carries the morphism
  }
  {
    const PairModel p = make_pair({2, 0}, {1}, Rat(1, 2));
    const auto lim = pair_limit_object(p, *pair_optimal_destabilizer(p));
    CHECK_FALSE(lim.phi_block);
  }
  {
    const PairModel p = make_pair({3, 1, 0}, {2}, Rat(2));
    const auto lim = pair_limit_object(p, *pair_optimal_destabilizer(p));
    REQUIRE(lim.blocks.size() == 3);
    CHECK(lim.blocks[0].twists() == std::vector<int>{3});
    CHECK(lim.blocks[1].twists() == std::vector<int>{1});
    CHECK(lim.blocks[2].twists() == std::vector<int>{0});
    REQUIRE(lim.phi_block);
    CHECK(*lim.phi_block == 1);
  }
}

TEST_CASE("quotient pair at the skipped step is tau-semistable") {
  for (const SplitBundle& b : enumerate_bundles(4, -1, 2)) {
    if (b.rank() == 1) continue;
    const int r = b.rank();
    for (unsigned imask = 1; imask < (1u << r); ++imask) {
      std::vector<int> image;
      for (int i = 0; i < r; ++i)
        if (imask & (1u << i)) image.push_back(i);
      for (const Rat& tau : {Rat(0), Rat(1, 2), Rat(1)}) {
        if (b.slope() < tau) continue;
        const PairModel p(b, image, tau);
        if (is_tau_semistable(p)) continue;
        const auto g = generalized_hn(p);
        if (g.case_tag == PairCase::C) continue;
        CHECK(is_tau_semistable(quotient_pair(p, g.flag, g.m_index)));
      }
    }
  }
}

TEST_CASE("tau energy comparison on the worked examples") {
  const Rat one(1);
  {
    // boundary case: every precondition holds with equality and the
    // energies agree
    const Polygon f = poly({{0, 0}, {1, 3}, {2, 4}});
    const Polygon g = poly({{0, 0}, {1, 3}});
    const auto r = compare_tau_energy(f, g, one);
    REQUIRE(r.comparable);
    CHECK(r.difference == Rat(0));
    CHECK_FALSE(r.equal);
    CHECK(tau_extension_equal(f, g, one));
  }
  {
    const Polygon f = poly({{0, 0}, {1, 3}});
    const auto r = compare_tau_energy(f, f, one);
    REQUIRE(r.comparable);
    CHECK(r.difference == Rat(0));
    CHECK(r.equal);
  }
  {
    const Polygon f = poly({{0, 0}, {1, 3}, {2, 4}});
    const Polygon g = poly({{0, 0}, {1, 2}, {2, 4}});
    // g has both slopes equal to 2: concave but not strictly; accepted
    const auto r = compare_tau_energy(f, g, one);
    REQUIRE(r.comparable);
    CHECK(r.difference == Rat(2));  // 4 - 2
    CHECK_FALSE(tau_extension_equal(f, g, one));
  }
}

TEST_CASE("tau energy comparison rejects precondition violations") {
  const Rat one(1);
  {
    // a slope below tau
    const auto r = compare_tau_energy(poly({{0, 0}, {1, 3}, {2, 3}}),
                                      poly({{0, 0}, {1, 3}}), one);
    CHECK_FALSE(r.comparable);
    CHECK(r.diagnostic == "f has a segment slope below tau");
  }
  {
    // endpoint chord too steep
    const auto r = compare_tau_energy(poly({{0, 0}, {1, 3}, {2, 6}}),
                                      poly({{0, 0}, {1, 3}}), one);
    CHECK_FALSE(r.comparable);
    CHECK(r.diagnostic == "endpoint chord slope above tau");
  }
  {
    const auto r = compare_tau_energy(poly({{0, 0}, {1, 1}}),
                                      poly({{0, 0}, {1, 3}}), one);
    CHECK_FALSE(r.comparable);
    CHECK(r.diagnostic.find("f < g") == 0);
  }
}
