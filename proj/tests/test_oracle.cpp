#include <doctest.h>

#include <cmath>
#include <set>

#include "hnflow/hn.hpp"
#include "hnflow/oracle.hpp"
#include "hnflow/weight.hpp"

using namespace hnflow;

TEST_CASE("bundle enumeration") {
  const auto all = enumerate_bundles(2, 0, 1);
  // rank 1: [0], [1]; rank 2: [0,0], [1,0], [1,1]
  CHECK(all.size() == 5);
  const auto big = enumerate_bundles(6, -3, 3);
  std::set<std::vector<int>> seen;
  for (const auto& b : big) seen.insert(b.twists());
  CHECK(seen.size() == big.size());  // deduplicated by construction
  CHECK(big.size() == 7 + 28 + 84 + 210 + 462 + 924);
}

TEST_CASE("flag enumeration windows") {
  const SplitBundle b({2, 0});
  {
    const auto flags = enumerate_flags(b, 0);
    REQUIRE(flags.size() == 2);
    CHECK(flags[0].steps == std::vector<SlopePoint>{{2, 2}});
    CHECK(flags[1].steps == std::vector<SlopePoint>{{1, 2}, {2, 2}});
  }
  {
    // slack 2 widens the rank-1 window to degrees 0, 1, 2
    const auto flags = enumerate_flags(b, 2);
    std::set<long long> degrees;
    for (const Flag& f : flags)
      if (f.size() == 2) degrees.insert(f.steps[0].degree);
    CHECK(degrees == std::set<long long>{0, 1, 2});
  }
  {
    const auto flags = enumerate_flags(SplitBundle({1}), 3);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].steps == std::vector<SlopePoint>{{1, 1}});
  }
}

TEST_CASE("window flags carry witnesses exactly when split-realizable") {
  const SplitBundle b({2, 0});
  for (const Flag& f : enumerate_flags(b, 2)) {
    if (f.size() == 2 && f.steps[0].degree == 1) {
      CHECK_FALSE(f.witnesses);  // no subset of {2, 0} sums to 1
    } else {
      REQUIRE(f.witnesses);
      CHECK_NOTHROW(validate_flag(b, f));
    }
  }
}

TEST_CASE("split flag enumeration matches the chain count") {
  for (const SplitBundle& b :
       {SplitBundle({2, 0}), SplitBundle({3, 1, 0}), SplitBundle({1, 1, 0, -1})}) {
    const auto flags = enumerate_split_flags(b);
    CHECK(flags.size() == count_subset_chains(b.rank()));
    for (const Flag& f : flags) CHECK_NOTHROW(validate_flag(b, f));
  }
  CHECK(count_subset_chains(1) == 1);
  CHECK(count_subset_chains(2) == 3);
  CHECK(count_subset_chains(3) == 13);
  CHECK(count_subset_chains(4) == 75);
  CHECK(count_subset_chains(5) == 541);
  CHECK(count_subset_chains(6) == 4683);
}

TEST_CASE("integer spectra are strictly increasing tuples") {
  const auto tuples = integer_spectra(2);
  CHECK(tuples.size() == 21);  // C(7, 2)
  for (const auto& t : tuples) CHECK(t[0] < t[1]);
  CHECK(integer_spectra(1).size() == 7);
}

TEST_CASE("grid minimization agrees with the closed form") {
  {
    const SplitBundle b({2, 0});
    const auto res =
        grid_minimize(b, hn_filtration(b), Rat(1), 1e-3);
    REQUIRE(res.feasible);
    CHECK(res.value == doctest::Approx(-std::sqrt(2.0)).epsilon(5e-3));
  }
  {
    // pinning the second eigenvalue to zero reproduces the pair optimum
    const SplitBundle b({2, 0});
    Flag f;
    f.steps = {{1, 2}, {2, 2}};
    const auto res = grid_minimize(
        b, f, Rat(1, 2), 1e-3,
        GridConstraint{1, GridConstraint::Mode::kZero});
    REQUIRE(res.feasible);
    CHECK(res.value == doctest::Approx(-1.5).epsilon(5e-3));
  }
  {
    // a single-step flag only offers the two poles; at baseline m the
    // objective is identically zero
    const SplitBundle b({1, 1});
    Flag f;
    f.steps = {{2, 2}};
    const auto res = grid_minimize(b, f, b.slope(), 1e-3);
    REQUIRE(res.feasible);
    CHECK(res.value == doctest::Approx(0.0));
  }
  {
    // a single step pinned to zero leaves nothing on the ellipsoid
    const SplitBundle b({1, 1});
    Flag f;
    f.steps = {{2, 2}};
    const auto res = grid_minimize(
        b, f, b.slope(), 1e-3, GridConstraint{0, GridConstraint::Mode::kZero});
    CHECK_FALSE(res.feasible);
  }
  {
    const SplitBundle b({3, 1, 0});
    const auto res = grid_minimize(b, hn_filtration(b), b.slope(), 1e-3);
    REQUIRE(res.feasible);
    CHECK(res.value == doctest::Approx(-std::sqrt(14.0 / 3.0)).epsilon(5e-3));
    // the argmin matches the normalized closed-form direction
    const auto d = optimal_destabilizer(b);
    const double scale = std::sqrt(d->norm_sq.to_double());
    for (size_t i = 0; i < res.argmin.size(); ++i)
      CHECK(res.argmin[i] ==
            doctest::Approx(d->direction[i].to_double() / scale).epsilon(1e-2));
  }
}

TEST_CASE("grid minimization respects the order cone") {
  // on a flag with increasing quotient slopes the unconstrained optimum is
  // infeasible and the minimum sits on the boundary, at value 0
  const SplitBundle b({2, 0});
  Flag f;
  f.steps = {{1, 0}, {2, 2}};
  const auto res = grid_minimize(b, f, Rat(1), 1e-3);
  REQUIRE(res.feasible);
  CHECK(res.value == doctest::Approx(0.0).epsilon(5e-3));
}

TEST_CASE("slack beyond zero never changes the argmax flag") {
  for (const SplitBundle& b : enumerate_bundles(3, -2, 2)) {
    if (is_semistable(b)) continue;
    std::vector<SlopePoint> argmax[3];
    for (int slack = 0; slack <= 2; ++slack) {
      Rat best;
      bool any = false;
      for (const Flag& f : enumerate_flags(b, slack)) {
        const auto sol = lagrange_minimum(f, b.slope());
        if (!sol) continue;
        if (!any || sol->value_sq > best) {
          best = sol->value_sq;
          argmax[slack] = f.steps;
          any = true;
        }
      }
      REQUIRE(any);
    }
    CHECK(argmax[0] == argmax[1]);
    CHECK(argmax[1] == argmax[2]);
  }
}

TEST_CASE("certify_classical is trivial at rank one") {
  SweepConfig cfg;
  cfg.max_rank = 1;
  cfg.twist_min = -2;
  cfg.twist_max = 2;
  cfg.grid_samples = 5;
  const auto rep = certify_classical(cfg);
  CHECK(rep.ok());
  CHECK(rep.bundles == 5);
}

TEST_CASE("certify_classical on the default box") {
  SweepConfig cfg;
  cfg.max_rank = 3;
  cfg.twist_min = -2;
  cfg.twist_max = 2;
  cfg.grid_samples = 40;
  const auto rep = certify_classical(cfg);
  CHECK(rep.ok());
  CHECK(rep.bundles == 5 + 15 + 35);
  CHECK(rep.grid_checks == 40);
}

TEST_CASE("certify_classical flags a corrupted closed form") {
  SweepConfig cfg;
  cfg.max_rank = 2;
  cfg.twist_min = -1;
  cfg.twist_max = 1;
  cfg.grid_samples = 10;
  cfg.negative_control = true;
  const auto rep = certify_classical(cfg);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("certify_pairs on a small box") {
  SweepConfig cfg;
  cfg.max_rank = 3;
  cfg.twist_min = -1;
  cfg.twist_max = 2;
  cfg.tau_grid = {Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1)};
  cfg.grid_samples = 40;
  const auto rep = certify_pairs(cfg);
  for (const auto& v : rep.violations)
    MESSAGE(v.kind, ": ", v.detail);
  CHECK(rep.ok());
  CHECK(rep.instances > 0);
  CHECK(rep.skipped > 0);  // rank-1 bundles are recorded, not certified
}

TEST_CASE("certify_pairs flags a corrupted closed form") {
  SweepConfig cfg;
  cfg.max_rank = 2;
  cfg.twist_min = -1;
  cfg.twist_max = 1;
  cfg.tau_grid = {Rat(0), Rat(1, 2)};
  cfg.grid_samples = 10;
  cfg.negative_control = true;
  const auto rep = certify_pairs(cfg);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("config validation") {
  SweepConfig cfg;
  cfg.grid_resolution = 0.5;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg.grid_resolution = 1e-3;
  cfg.max_rank = 0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}
