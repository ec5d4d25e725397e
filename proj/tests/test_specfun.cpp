#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "radlab/errors.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/specfun.hpp"
#include "radlab/sphere.hpp"

using namespace radlab;
constexpr double kPi = std::numbers::pi;

namespace {

// Power-series oracle for J_nu in long double (reliable for x <= 12).
long double series_j(long double nu, long double x) {
  long double term = std::pow(x / 2, nu) / std::tgamma(nu + 1);
  long double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= -(x * x / 4) / (k * (nu + k));
    sum += term;
    if (std::fabs(term) < 1e-24L) break;
  }
  return sum;
}

double bisect_zero(double nu, double a, double b) {
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    if ((series_j(nu, a) > 0) == (series_j(nu, m) > 0)) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

double gs_closed(int n, double s, double r) {
  double nu = 0.5 * (n - s);
  return boost::math::cyl_bessel_k(nu, r) * std::pow(r, -nu) /
         (std::pow(2.0, 0.5 * (n + s - 2)) * std::pow(kPi, 0.5 * n) * std::tgamma(0.5 * s));
}

}  // namespace

TEST_CASE("gamma_fn values and poles") {
  CHECK(gamma_fn(1.0) == 1.0);
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)));
  // factorials and half-integers on (0, 50] to 1e-12 relative
  long double fact = 1;
  for (int k = 1; k <= 49; ++k) {
    CHECK(std::fabs(gamma_fn(k) / static_cast<double>(fact) - 1.0) < 1e-12);
    fact *= k;
  }
  long double half = std::sqrt(static_cast<long double>(kPi));  // Gamma(1/2)
  for (int k = 0; k < 49; ++k) {
    CHECK(std::fabs(gamma_fn(k + 0.5) / static_cast<double>(half) - 1.0) < 1e-12);
    half *= (k + 0.5L);
  }
  for (double x = 0.013; x < 49.0; x += 0.731)
    CHECK(std::fabs(gamma_fn(x + 1.0) / (x * gamma_fn(x)) - 1.0) < 1e-13);
}

TEST_CASE("bessel_j examples") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(std::fabs(bessel_j(0.5, kPi)) < 1e-15);
  CHECK(std::fabs(bessel_j(0.0, 2.404825557695773)) < 1e-10);
  CHECK_THROWS_AS(bessel_j(-0.7, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0.0, NAN), DomainError);
}

TEST_CASE("bessel_j and bessel_lambda against the series oracle") {
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.7}) {
    for (double x = 0.05; x <= 12.0; x += 0.173) {
      CAPTURE(nu);
      CAPTURE(x);
      double ref = static_cast<double>(series_j(nu, x));
      CHECK(std::fabs(bessel_j(nu, x) - ref) < 1e-13);
      CHECK(std::fabs(bessel_lambda(nu, x) - ref * std::pow(x, -nu)) < 1e-12 * std::max(1.0, std::pow(x, -nu)));
    }
    CHECK(bessel_lambda(nu, 0.0) == doctest::Approx(std::pow(0.5, nu) / std::tgamma(nu + 1)).epsilon(1e-14));
  }
}

TEST_CASE("sqrt(x) |J_nu(x)| stays bounded and its sup is grid-stable") {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    auto sup = [&](double step) {
      double m = 0.0;
      for (double x = 0.5; x <= 1000.0; x += step) m = std::max(m, std::sqrt(x) * std::fabs(bessel_j(nu, x)));
      return m;
    };
    double a = sup(0.05), b = sup(0.025);
    CHECK(std::isfinite(a));
    CHECK(std::fabs(a - b) <= 0.01 * b);
    CHECK(b < 1.0);
  }
}

TEST_CASE("bessel_zero examples, accuracy and interlacing") {
  CHECK(bessel_zero(0.5, 1) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(bessel_zero(0.5, 3) == doctest::Approx(3 * kPi).epsilon(1e-15));
  double j01 = bisect_zero(0.0, 2.0, 3.0);
  CHECK(std::fabs(bessel_zero(0.0, 1) - j01) < 1e-12 * j01);
  CHECK(std::fabs(j01 - 2.404825557695773) < 1e-14);
  for (double nu : {0.0, 1.0, 1.5, 2.0}) {
    for (int k = 1; k <= 3; ++k) {
      double z = bessel_zero(nu, k);
      if (z > 11.0) break;
      double lo = z * (1 - 1e-6), hi = z * (1 + 1e-6);
      double ref = bisect_zero(nu, lo, hi);
      CHECK(std::fabs(z - ref) < 1e-12 * ref);
    }
  }
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) {
    auto z0 = bessel_zeros(nu, 1, 60);
    auto z1 = bessel_zeros(nu + 1.0, 1, 60);
    for (int k = 0; k + 1 < 60; ++k) {
      CHECK(z0[k] < z1[k]);
      CHECK(z1[k] < z0[k + 1]);
      CHECK(z0[k] == bessel_zero(nu, k + 1));
      CHECK(std::fabs(bessel_j(nu, z0[k])) < 1e-13);
    }
  }
  CHECK_THROWS_AS(bessel_zero(0.0, 0), DomainError);
}

TEST_CASE("kernel_gs: closed form in R^3 for s = 2") {
  for (double r = 0.01; r <= 10.0; r *= 1.09) {
    double ref = std::exp(-r) / (4 * kPi * r);
    CHECK(std::fabs(kernel_gs(3, 2.0, r) / ref - 1.0) < 1e-8);
  }
  CHECK(kernel_gs(3, 2.0, 1.0) == doctest::Approx(0.029276).epsilon(1e-4));
}

TEST_CASE("kernel_gs: modified-Bessel oracle for other orders") {
  for (auto [n, s] : {std::pair{2, 1.0}, {3, 1.0}, {4, 1.5}, {2, 0.5}, {5, 3.3}}) {
    for (double r : {1e-3, 0.05, 0.7, 3.0, 20.0}) {
      CAPTURE(n);
      CAPTURE(s);
      CAPTURE(r);
      CHECK(std::fabs(kernel_gs(n, s, r) / gs_closed(n, s, r) - 1.0) < 1e-9);
    }
  }
  CHECK_THROWS_AS(kernel_gs(3, 3.0, 1.0), DomainError);
  CHECK_THROWS_AS(kernel_gs(3, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(kernel_gs(3, 1.0, 0.0), DomainError);
}

TEST_CASE("kernel_gs: unit mass and monotonicity") {
  QuadratureSpec spec;
  spec.endpoint_rule = EndpointRule::double_exponential;
  spec.rel_tol = 1e-10;
  for (auto [n, s] : {std::pair{2, 1.0}, {3, 1.0}, {3, 2.0}, {4, 1.5}}) {
    KernelGs K(n, s);
    double w = surface_area(n);
    auto f = [&](double r) { return K(r) * w * std::pow(r, n - 1); };
    double m = integrate(f, 0.0, std::numeric_limits<double>::infinity(), spec, std::vector<double>{1.0}).value;
    CHECK(std::fabs(m - 1.0) < 1e-6);
    double prev = HUGE_VAL;
    for (double r = 1e-3; r < 40.0; r *= 1.3) {
      double v = kernel_gs(n, s, r);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("kernel_gs: near-origin power law and exponential upper bound") {
  const int n = 3;
  const double s = 1.0;
  // r^{n-s} G_s(r) -> Gamma((n-s)/2) / (2^s pi^{n/2} Gamma(s/2)); Richardson on r = 1e-3, 1e-4
  double a = std::pow(1e-3, n - s) * kernel_gs(n, s, 1e-3);
  double b = std::pow(1e-4, n - s) * kernel_gs(n, s, 1e-4);
  double limit = std::tgamma(0.5 * (n - s)) / (std::pow(2.0, s) * std::pow(kPi, 0.5 * n) * std::tgamma(0.5 * s));
  CHECK(b == doctest::Approx(limit).epsilon(1e-3));
  CHECK(std::fabs(b - limit) < std::fabs(a - limit));
  for (auto [nn, ss] : {std::pair{2, 1.0}, {3, 1.0}, {3, 2.0}, {4, 1.5}}) {
    double c0 = 0.0, c1 = 0.0;
    for (double r = 1e-4; r <= 2.0; r *= 1.1) c0 = std::max(c0, kernel_gs(nn, ss, r) * std::pow(r, nn - ss));
    for (double r = 2.0; r <= 200.0; r *= 1.1) c1 = std::max(c1, kernel_gs(nn, ss, r) * std::exp(0.5 * r));
    CHECK(std::isfinite(c0));
    CHECK(std::isfinite(c1));
    CHECK(c1 <= kernel_gs(nn, ss, 2.0) * std::exp(1.0) * (1 + 1e-12));  // G e^{r/2} decreasing beyond 2
  }
}

TEST_CASE("KernelGs cache interpolates to 1e-8") {
  KernelGs K(4, 1.5);
  for (double r = 2e-5; r < 80.0; r *= 1.0371) CHECK(std::fabs(K(r) / kernel_gs(4, 1.5, r) - 1.0) < 1e-8);
  CHECK(K(1e-7) == doctest::Approx(kernel_gs(4, 1.5, 1e-7)).epsilon(1e-4));
}
