#ifndef THETAROUTE_RATIONAL_HPP
#define THETAROUTE_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace thetaroute {

// Exact rational number. Always stored in canonical reduced form with a
// positive denominator, so structural equality is value equality.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t v) : value_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  // Builds num/den from decimal integer strings (arbitrary size).
  static Rational from_parts(std::string_view num, std::string_view den) {
    mpz_class n, d;
    if (n.set_str(std::string(num), 10) != 0 || d.set_str(std::string(den), 10) != 0)
      throw std::invalid_argument("malformed integer in rational");
    if (d == 0) throw std::domain_error("rational with zero denominator");
    return Rational(mpq_class(n, d));
  }

  // Accepts "p", "p/q", or a plain decimal "[-]ddd.ddd"; conversion is exact.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    if (auto slash = s.find('/'); slash != std::string::npos) {
      return from_parts(strip_plus(s.substr(0, slash)), strip_plus(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return from_parts(strip_plus(s), "1");
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed decimal '" + s + "'");
    bool neg = !whole.empty() && whole[0] == '-';
    std::string digits = strip_plus(whole);
    if (neg) digits = digits.substr(1);
    if (digits.empty()) digits = "0";
    if (digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed decimal '" + s + "'");
    std::string den = "1" + std::string(frac.size(), '0');
    return from_parts((neg ? "-" : "") + digits + frac, den);
  }

  const mpq_class& raw() const { return value_; }

  std::string numerator_str() const { return value_.get_num().get_str(); }
  std::string denominator_str() const { return value_.get_den().get_str(); }
  bool is_integer() const { return value_.get_den() == 1; }

  // "p" for integers, "p/q" otherwise.
  std::string to_string() const {
    return is_integer() ? numerator_str() : numerator_str() + "/" + denominator_str();
  }

  double to_double() const { return value_.get_d(); }
  long double to_long_double() const {
    // mpq_get_d truncates to double; split to keep extra bits for long double.
    long double hi = value_.get_d();
    mpq_class rest = value_ - mpq_class(static_cast<double>(hi));
    return hi + static_cast<long double>(rest.get_d());
  }

  int sign() const { return sgn(value_); }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  static std::string strip_plus(std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return s;
  }

  mpq_class value_;
};

}  // namespace thetaroute

#endif  // THETAROUTE_RATIONAL_HPP
