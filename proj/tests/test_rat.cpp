#include <doctest.h>

#include <random>

#include "hnflow/rat.hpp"

using hnflow::Rat;

TEST_CASE("construction reduces and normalizes signs") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(-1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(0, 17) == Rat(0));
  CHECK(Rat(0, -17).den() == 1);
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) - Rat(1, 3) == Rat(1, 6));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(1, 2) / Rat(1, 4) == Rat(2));
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
  CHECK(-Rat(3, 7) == Rat(-3, 7));
  CHECK(Rat(-5, 3).squared() == Rat(25, 9));
}

TEST_CASE("ordering is exact") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(-1, 3));
  CHECK(Rat(7, 3) > Rat(2));
  CHECK(Rat(4, 2) == Rat(2));
  CHECK(hnflow::abs(Rat(-3, 4)) == Rat(3, 4));
}

TEST_CASE("string round trip") {
  CHECK(Rat(-3, 2).str() == "-3/2");
  CHECK(Rat(5).str() == "5");
  CHECK(Rat::parse("14/3") == Rat(14, 3));
  CHECK(Rat::parse("-7") == Rat(-7));
  CHECK(Rat::parse("4/6") == Rat(2, 3));
  CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("a/b"), std::invalid_argument);

  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> num(-1000, 1000);
  std::uniform_int_distribution<long long> den(1, 1000);
  for (int i = 0; i < 1000; ++i) {
    const Rat x(num(rng), den(rng));
    CHECK(Rat::parse(x.str()) == x);
  }
}

TEST_CASE("exact square roots") {
  CHECK(Rat(9, 4).sqrt_exact() == Rat(3, 2));
  CHECK(Rat(0).sqrt_exact() == Rat(0));
  CHECK(Rat(49).sqrt_exact() == Rat(7));
  CHECK_FALSE(Rat(2).sqrt_exact());
  CHECK_FALSE(Rat(14, 3).sqrt_exact());
  CHECK_FALSE(Rat(-1).sqrt_exact());
}

TEST_CASE("overflow is detected, not wrapped") {
  const Rat big(1LL << 62, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}
