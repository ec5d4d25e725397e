#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace radlab {

// Exact rational number, arbitrary precision. Hypothesis checks compare these
// so that boundary equalities are decided exactly.
class Rational {
 public:
  using Value = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den);
  explicit Rational(Value v) : v_(std::move(v)) {}

  // Accepts "7", "-3/4", "0.125", "1e-3", "2.5e2". Decimal input is converted
  // exactly (0.1 is 1/10, not the nearest double). SchemaError otherwise.
  static Rational parse(const std::string& text);

  const Value& value() const noexcept { return v_; }
  double to_double() const;
  std::string str() const;  // "a/b" or "a"
  int sign() const;
  bool is_integer() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Value(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Value(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Value(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(Value(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

 private:
  Value v_{0};
};

// A rational or +infinity (exponents such as q = inf).
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational r) : r_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ExtRational(long long v) : r_(v) {}            // NOLINT(google-explicit-constructor)
  static ExtRational infinity();
  // Rational::parse plus "inf".
  static ExtRational parse(const std::string& text);

  bool is_infinite() const noexcept { return inf_; }
  // Throws DomainError when infinite.
  const Rational& finite() const;
  // 1/x with 1/inf = 0; DomainError for x = 0.
  Rational reciprocal() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend bool operator<(const ExtRational& a, const ExtRational& b);
  friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }

 private:
  Rational r_;
  bool inf_ = false;
};

}  // namespace radlab
