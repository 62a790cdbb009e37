#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace csn {

// Exact rational with 64-bit numerator and denominator. Intermediates go
// through 128-bit arithmetic; a reduced result that no longer fits throws
// std::overflow_error. Every quantity handled by this library (weights,
// embedding coordinates, isolation indices) stays far below the bound.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d);

  // Accepts "p/q", integers, plain decimals ("3.25") and scientific
  // notation ("2.5e-3"), all converted exactly.
  static Rat parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b);
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  Rat abs() const { return num_ < 0 ? -*this : *this; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "p" when integral, else "p/q".
  std::string str() const;

 private:
  static Rat make_reduced(__int128 n, __int128 d);

  std::int64_t num_;
  std::int64_t den_;  // > 0
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace csn
