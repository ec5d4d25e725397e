#include "radlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

void check_order(double nu) {
  if (!std::isfinite(nu) || nu < -0.5) throw DomainError("Bessel order must be >= -1/2");
}

void check_arg(double x) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("Bessel argument must be finite and >= 0");
}

// sum_k (-x^2/4)^k / (k! Gamma(nu+k+1)), i.e. (x/2)^{-nu} J_nu(x).
double lambda_series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0 / gamma_fn(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_fn: pole at nonpositive integer");
  return boost::math::tgamma(x);
}

double bessel_j(double nu, double x) {
  check_order(nu);
  check_arg(x);
  if (nu == 0.0) return ::j0(x);
  if (nu == 1.0) return ::j1(x);
  if (nu == -0.5) return x == 0.0 ? HUGE_VAL : kSqrt2OverPi * std::cos(x) / std::sqrt(x);
  if (nu == 0.5) return x == 0.0 ? 0.0 : kSqrt2OverPi * std::sin(x) / std::sqrt(x);
  if (x == 0.0) return 0.0;
  return boost::math::cyl_bessel_j(nu, x);
}

double bessel_lambda(double nu, double x) {
  check_order(nu);
  check_arg(x);
  if (nu == -0.5) return kSqrt2OverPi * std::cos(x);
  if (nu == 0.5) return x < 1e-4 ? kSqrt2OverPi * (1.0 - x * x / 6.0) : kSqrt2OverPi * std::sin(x) / x;
  if (nu == 0.0) return ::j0(x);
  if (x <= 2.0) return std::pow(0.5, nu) * lambda_series(nu, x);
  if (nu == 1.0) return ::j1(x) / x;
  if (nu == 1.5) return kSqrt2OverPi * (std::sin(x) - x * std::cos(x)) / (x * x * x);
  return boost::math::cyl_bessel_j(nu, x) * std::pow(x, -nu);
}

double bessel_zero(double nu, int k) {
  check_order(nu);
  if (k < 1) throw DomainError("bessel_zero: k must be >= 1");
  if (nu == -0.5) return (k - 0.5) * kPi;
  if (nu == 0.5) return k * kPi;
  double z = boost::math::cyl_bessel_j_zero(nu, k);
  if (!std::isfinite(z) || !(z > 0.0)) throw NumericError("bessel_zero: root bracketing failed");
  return z;
}

std::vector<double> bessel_zeros(double nu, int first, int count) {
  check_order(nu);
  if (first < 1 || count < 0) throw DomainError("bessel_zeros: invalid range");
  std::vector<double> z(count);
  if (nu == -0.5 || nu == 0.5) {
    for (int i = 0; i < count; ++i) z[i] = bessel_zero(nu, first + i);
    return z;
  }
  boost::math::cyl_bessel_j_zero(nu, first, static_cast<unsigned>(count), z.begin());
  return z;
}

double kernel_gs(int n, double s, double r) {
  if (n < 1) throw DomainError("kernel_gs: dimension must be >= 1");
  if (!(s > 0.0) || !(s < n)) throw DomainError("kernel_gs: requires 0 < s < n");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("kernel_gs: requires finite r > 0");
  // integrand in u = log t: exp(phi(u)), phi = -e^u - r^2 e^{-u}/4 + a u, a = (s-n)/2
  const double a = 0.5 * (s - n);
  const double r2 = r * r;
  auto phi = [&](double u) { return -std::exp(u) - 0.25 * r2 * std::exp(-u) + a * u; };
  const double y = r2 / (2.0 * (std::sqrt(a * a + r2) - a));  // e^{u*} at the mode
  const double u0 = std::log(y);
  const double curv = y + 0.25 * r2 / y;
  const double h = std::min(0.25, 1.0 / (3.0 * std::sqrt(curv)));
  const double pmax = phi(u0);
  double sum = 1.0;
  for (int dir : {-1, 1}) {
    for (int j = 1; j < 100000; ++j) {
      double d = phi(u0 + dir * j * h) - pmax;
      sum += std::exp(d);
      if (d < -42.0) break;
    }
  }
  const double log_pref = -n * std::log(2.0 * std::sqrt(kPi)) - std::lgamma(0.5 * s);
  return std::exp(log_pref + pmax) * sum * h;
}

KernelGs::KernelGs(int n, double s, const Grid& grid) : n_(n), s_(s), grid_(grid) {
  if (n < 1 || !(s > 0.0) || !(s < n)) throw DomainError("KernelGs: requires 0 < s < n");
  logr_.reserve(grid_.size());
  logv_.reserve(grid_.size());
  for (double r : grid_) {
    double v = kernel_gs(n, s, r);
    if (!(v > 0.0)) break;  // underflow: the tail is evaluated directly
    logr_.push_back(std::log(r));
    logv_.push_back(std::log(v));
  }
  if (logr_.size() < 4) throw DomainError("KernelGs: grid too short for interpolation");
}

KernelGs::KernelGs(int n, double s) : KernelGs(n, s, Grid::log_uniform(1e-5, 60.0, 2400)) {}

double KernelGs::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("KernelGs: r must be positive");
  const double x = std::log(r);
  if (x <= logr_.front()) return std::exp(logv_.front() + (s_ - n_) * (x - logr_.front()));
  if (x > logr_.back()) return r > 745.0 ? 0.0 : kernel_gs(n_, s_, r);
  auto it = std::upper_bound(logr_.begin(), logr_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - logr_.begin());
  std::size_t i0 = hi >= 2 ? hi - 2 : 0;
  if (i0 + 4 > logr_.size()) i0 = logr_.size() - 4;
  double acc = 0.0;
  for (std::size_t i = i0; i < i0 + 4; ++i) {
    double L = 1.0;
    for (std::size_t j = i0; j < i0 + 4; ++j)
      if (j != i) L *= (x - logr_[j]) / (logr_[i] - logr_[j]);
    acc += L * logv_[i];
  }
  return std::exp(acc);
}

}  // namespace radlab
