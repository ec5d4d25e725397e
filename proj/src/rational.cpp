#include "radlab/rational.hpp"

#include <cctype>
#include <limits>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

using Int = boost::multiprecision::cpp_int;

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Int pow10(long e) {
  Int out = 1;
  for (long i = 0; i < e; ++i) out *= 10;
  return out;
}

// [+-]digits[.digits][e[+-]digits]
Rational::Value parse_decimal(const std::string& text) {
  std::string body = text;
  bool neg = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    neg = body[0] == '-';
    body.erase(0, 1);
  }
  long exponent = 0;
  auto epos = body.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string ex = body.substr(epos + 1);
    body.resize(epos);
    bool eneg = false;
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
      eneg = ex[0] == '-';
      ex.erase(0, 1);
    }
    if (!all_digits(ex) || ex.size() > 4) throw SchemaError("bad exponent in number '" + text + "'");
    exponent = std::stol(ex) * (eneg ? -1 : 1);
  }
  std::string ip = body, fp;
  auto dot = body.find('.');
  if (dot != std::string::npos) {
    ip = body.substr(0, dot);
    fp = body.substr(dot + 1);
  }
  if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
    throw SchemaError("not a number: '" + text + "'");
  Int mant(ip.empty() ? std::string("0") : ip);
  if (!fp.empty()) mant = mant * pow10(static_cast<long>(fp.size())) + Int(fp);
  exponent -= static_cast<long>(fp.size());
  Rational::Value v = exponent >= 0 ? Rational::Value(mant * pow10(exponent))
                                    : Rational::Value(mant, pow10(-exponent));
  return neg ? Rational::Value(-v) : v;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = Value(Int(num), Int(den));
}

Rational Rational::parse(const std::string& raw) {
  const std::string text = trim(raw);
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_decimal(text));
  std::string a = trim(text.substr(0, slash)), b = trim(text.substr(slash + 1));
  std::string bd = b;
  if (!bd.empty() && bd[0] == '+') bd.erase(0, 1);
  if (!all_digits(bd)) throw SchemaError("bad denominator in '" + raw + "'");
  Int den(bd);
  if (den == 0) throw SchemaError("zero denominator in '" + raw + "'");
  Value num = parse_decimal(a);
  if (denominator(num) != 1) throw SchemaError("numerator of '" + raw + "' must be an integer");
  return Rational(Value(numerator(num), den));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.v_ == 0) throw DomainError("rational division by zero");
  return Rational(Rational::Value(a.v_ / b.v_));
}

double Rational::to_double() const { return v_.convert_to<double>(); }

std::string Rational::str() const {
  if (denominator(v_) == 1) return numerator(v_).str();
  return numerator(v_).str() + "/" + denominator(v_).str();
}

int Rational::sign() const { return v_ > 0 ? 1 : (v_ < 0 ? -1 : 0); }

bool Rational::is_integer() const { return denominator(v_) == 1; }

ExtRational ExtRational::infinity() {
  ExtRational e;
  e.inf_ = true;
  return e;
}

ExtRational ExtRational::parse(const std::string& raw) {
  std::string t = trim(raw);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "\xE2\x88\x9E") return infinity();
  return ExtRational(Rational::parse(t));
}

const Rational& ExtRational::finite() const {
  if (inf_) throw DomainError("exponent is infinite");
  return r_;
}

Rational ExtRational::reciprocal() const {
  if (inf_) return Rational(0);
  return Rational(1) / r_;
}

double ExtRational::to_double() const {
  return inf_ ? std::numeric_limits<double>::infinity() : r_.to_double();
}

std::string ExtRational::str() const { return inf_ ? "inf" : r_.str(); }

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
  return a.r_ == b.r_;
}

bool operator<(const ExtRational& a, const ExtRational& b) {
  if (a.inf_) return false;
  if (b.inf_) return true;
  return a.r_ < b.r_;
}

}  // namespace radlab
