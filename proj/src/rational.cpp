#include "csn/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "csn/errors.hpp"

namespace csn {

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rat Rat::make_reduced(i128 n, i128 d) {
  if (d == 0) throw std::overflow_error("rational: division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rat();
  i128 g = gcd128(n, d);
  n /= g;
  d /= g;
  if (n > kMax || n < -kMax || d > kMax)
    throw std::overflow_error("rational: 64-bit overflow");
  Rat r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rat::Rat(std::int64_t n, std::int64_t d) {
  *this = make_reduced(n, d);
}

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rat& Rat::operator+=(const Rat& o) {
  *this = make_reduced(i128(num_) * o.den_ + i128(o.num_) * den_,
                       i128(den_) * o.den_);
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  *this = make_reduced(i128(num_) * o.den_ - i128(o.num_) * den_,
                       i128(den_) * o.den_);
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  *this = make_reduced(i128(num_) * o.num_, i128(den_) * o.den_);
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.num_ == 0) throw std::overflow_error("rational: division by zero");
  *this = make_reduced(i128(num_) * o.den_, i128(den_) * o.num_);
  return *this;
}

bool operator<(const Rat& a, const Rat& b) {
  return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

std::string Rat::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  fail(ErrKind::malformed_input,
       "not a rational number: '" + std::string(text) + "'");
}

// Parses an optionally signed decimal integer; advances pos.
i128 parse_int(std::string_view s, size_t& pos, std::string_view whole) {
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = s[pos] == '-';
    ++pos;
  }
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
    bad_number(whole);
  i128 v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + (s[pos] - '0');
    if (v > i128(1) << 100) throw std::overflow_error("rational: parse overflow");
    ++pos;
  }
  return neg ? -v : v;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) bad_number(text);

  size_t slash = s.find('/');
  if (slash != std::string_view::npos) {
    size_t pos = 0;
    i128 p = parse_int(s, pos, text);
    if (pos != slash) bad_number(text);
    pos = slash + 1;
    i128 q = parse_int(s, pos, text);
    if (pos != s.size()) bad_number(text);
    if (q == 0) bad_number(text);
    return make_reduced(p, q);
  }

  size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = s[pos] == '-';
    ++pos;
  }
  i128 mantissa = 0;
  int frac_digits = 0;
  bool any_digit = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    mantissa = mantissa * 10 + (s[pos] - '0');
    if (mantissa > i128(1) << 100)
      throw std::overflow_error("rational: parse overflow");
    any_digit = true;
    ++pos;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      mantissa = mantissa * 10 + (s[pos] - '0');
      if (mantissa > i128(1) << 100)
        throw std::overflow_error("rational: parse overflow");
      ++frac_digits;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit) bad_number(text);
  i128 exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    exp10 = parse_int(s, pos, text);
  }
  if (pos != s.size()) bad_number(text);

  i128 num = neg ? -mantissa : mantissa;
  i128 den = 1;
  i128 shift = exp10 - frac_digits;
  for (i128 i = 0; i < (shift > 0 ? shift : -shift); ++i) {
    if (shift > 0)
      num *= 10;
    else
      den *= 10;
    if (abs128(num) > i128(1) << 120 || den > i128(1) << 120)
      throw std::overflow_error("rational: parse overflow");
  }
  return make_reduced(num, den);
}

}  // namespace csn
