#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stalloc {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator. Every quantity in the library (quotas, capacities,
/// allocation values, step amounts) is a Rational; nothing is ever rounded.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);

  /// Parses "7", "-3", "2.8", "0.125" or "14/5". Decimals are converted
  /// exactly ("2.8" becomes 14/5). Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  /// "p/q" form, always with an explicit denominator ("3/1" for 3).
  std::string str() const;
  /// "p" for integers, "p/q" otherwise.
  std::string pretty() const;
  double to_double() const { return value_.get_d(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_positive() const { return sgn(value_) > 0; }
  bool is_negative() const { return sgn(value_) < 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  std::string numerator_str() const { return value_.get_num().get_str(); }
  std::string denominator_str() const { return value_.get_den().get_str(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.value_ = -a.value_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Least common multiple of the denominators of the given values, as a Rational.
Rational denominator_lcm(const Rational& a, const Rational& b);

}  // namespace stalloc

template <>
struct std::hash<stalloc::Rational> {
  std::size_t operator()(const stalloc::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
