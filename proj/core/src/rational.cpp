#include "stalloc/rational.hpp"

#include <cctype>

namespace stalloc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("invalid number '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) bad(text);
    result.value_ = mpq_class(mpz_class(std::string(num), 10), d);
    result.value_.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      bad(text);
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string digits = std::string(whole.empty() ? "0" : whole) + std::string(frac);
    result.value_ = mpq_class(mpz_class(digits, 10), scale);
    result.value_.canonicalize();
  } else {
    if (!all_digits(body)) bad(text);
    result.value_ = mpq_class(mpz_class(std::string(body), 10));
  }
  if (negative) result.value_ = -result.value_;
  return result;
}

std::string Rational::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::pretty() const {
  return is_integer() ? value_.get_num().get_str() : str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational denominator_lcm(const Rational& a, const Rational& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.raw().get_den_mpz_t(), b.raw().get_den_mpz_t());
  Rational r = Rational::parse(l.get_str());
  return r;
}

}  // namespace stalloc
