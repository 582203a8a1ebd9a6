#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hnflow {

// Exact rational number: 64-bit numerator over a positive 64-bit
// denominator, always stored reduced. Intermediate products are taken in
// 128 bits; a result that does not fit back into 64 bits throws
// std::overflow_error. There is no floating point anywhere in here;
// to_double() is a presentation helper only.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(long long n) : num_(n) {}  // NOLINT: integers are rationals
  Rat(long long n, long long d) { assign(n, d); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  friend Rat operator-(const Rat& a) { return make(-i128(a.num_), a.den_); }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  // Reduced forms are canonical, so field-wise equality is exact equality.
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const i128 l = i128(a.num_) * b.den_;
    const i128 r = i128(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
           : l > r ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  Rat squared() const { return *this * *this; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "p" for integers, "p/q" otherwise.
  std::string str() const;

  // Accepts "p" or "p/q" with an optional leading minus; reduces on input.
  // Throws std::invalid_argument on anything else.
  static Rat parse(std::string_view s);

  // Rational square root when one exists (numerator and denominator both
  // perfect squares), std::nullopt otherwise.
  std::optional<Rat> sqrt_exact() const;

 private:
  using i128 = __int128;
  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static Rat make(i128 n, i128 d) {
    Rat r;
    r.assign128(n, d);
    return r;
  }
  void assign(long long n, long long d) { assign128(n, d); }
  void assign128(i128 n, i128 d);

  long long num_ = 0;
  long long den_ = 1;
};

inline Rat abs(const Rat& x) { return x.sign() < 0 ? -x : x; }

std::ostream& operator<<(std::ostream& os, const Rat& x);

}  // namespace hnflow
