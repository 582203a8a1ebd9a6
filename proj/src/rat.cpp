#include "hnflow/rat.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace hnflow {

void Rat::assign128(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("Rat: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    num_ = 0;
    den_ = 1;
    return;
  }
  const i128 g = gcd128(n, d);
  n /= g;
  d /= g;
  constexpr i128 lo = std::numeric_limits<long long>::min();
  constexpr i128 hi = std::numeric_limits<long long>::max();
  if (n < lo || n > hi || d > hi)
    throw std::overflow_error("Rat: value does not fit in 64 bits");
  num_ = static_cast<long long>(n);
  den_ = static_cast<long long>(d);
}

std::string Rat::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) {
    s += '/';
    s += std::to_string(den_);
  }
  return s;
}

Rat Rat::parse(std::string_view s) {
  const auto fail = [&] {
    throw std::invalid_argument("Rat: cannot parse \"" + std::string(s) +
                                "\"");
  };
  if (s.empty()) fail();
  long long num = 0;
  long long den = 1;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(begin, end, num);
  if (ec != std::errc()) fail();
  if (p != end) {
    if (*p != '/') fail();
    ++p;
    auto [q, ec2] = std::from_chars(p, end, den);
    if (ec2 != std::errc() || q != end || den <= 0) fail();
  }
  return Rat(num, den);
}

namespace {
std::optional<long long> isqrt_exact(long long x) {
  if (x < 0) return std::nullopt;
  auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(x))));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  if (r * r != x) return std::nullopt;
  return r;
}
}  // namespace

std::optional<Rat> Rat::sqrt_exact() const {
  const auto n = isqrt_exact(num_);
  if (!n) return std::nullopt;
  const auto d = isqrt_exact(den_);
  if (!d) return std::nullopt;
  return Rat(*n, *d);
}

std::ostream& operator<<(std::ostream& os, const Rat& x) {
  return os << x.str();
}

}  // namespace hnflow
