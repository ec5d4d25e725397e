#include <cmath>
#include <vector>

#include "doctest.h"
#include "radlab/ball.hpp"
#include "radlab/errors.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/specfun.hpp"
#include "radlab/sphere.hpp"

using namespace radlab;

namespace {

// Two-point boundary-value oracle for -u'' - (n-1)/r u' = f, u'(0) = 0,
// u(R) = 0: u(r) = int_r^R t^{1-n} int_0^t f(x) x^{n-1} dx dt.
double poisson_oracle(const RadialProfile& f, double R, double r) {
  const int n = f.dim();
  QuadratureSpec q;
  q.rel_tol = 1e-12;
  auto inner = [&](double t) {
    if (t == 0.0) return 0.0;
    double m = integrate([&](double x) { return f(x) * std::pow(x, n - 1.0); }, 0.0, t, q).value;
    return m * std::pow(t, 1.0 - n);
  };
  return integrate(inner, r, R, q).value;
}

}  // namespace

TEST_CASE("Dirichlet spectrum of the ball") {
  BallSpectrum s = build_spectrum(3, 1.0, 16);
  for (int k = 1; k <= 16; ++k) CHECK(s.eigenvalues[k - 1] == doctest::Approx(k * k * M_PI * M_PI).epsilon(1e-12));
  CHECK(s.orthonormality_residual < 1e-8);
  CHECK(s.eigen_residual < 1e-5);
  CHECK(build_spectrum(3, 2.0, 4).eigenvalues[0] == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-12));
  CHECK(build_spectrum(2, 1.0, 3).eigenvalues[0] == doctest::Approx(2.404825557695773 * 2.404825557695773).epsilon(1e-12));
  for (int n : {2, 4, 5}) {
    BallSpectrum b = build_spectrum(n, 1.5, 32);
    CHECK(b.eigenvalues[0] > 0.0);
    for (int k = 1; k < 32; ++k) CHECK(b.eigenvalues[k] > b.eigenvalues[k - 1]);
    CHECK(b.orthonormality_residual < 1e-8);
    CHECK(b.eigen_residual < 1e-5);
  }
  CHECK_THROWS_AS(build_spectrum(1, 1.0, 4), DomainError);
  CHECK_THROWS_AS(build_spectrum(3, 0.0, 4), DomainError);
  CHECK_THROWS_AS(build_spectrum(3, 1.0, 0), DomainError);
}

TEST_CASE("normalizers: quadrature, panel doubling and the Bessel identity") {
  // int_0^R r J_nu(j r / R)^2 dr = R^2 J_{nu+1}(j)^2 / 2 serves as the oracle
  for (int n : {2, 3, 4}) {
    BallSpectrum b = build_spectrum(n, 1.3, 12);
    auto g2 = ball_gram(b, 2 * (b.K + 4));
    for (int k = 1; k <= b.K; ++k) {
      CHECK(g2[k - 1][k - 1] == doctest::Approx(1.0).epsilon(1e-13));
      double j = b.zeros[k - 1];
      double closed = surface_area(n) * b.R * b.R * 0.5 * std::pow(bessel_j(b.nu + 1.0, j), 2.0);
      CHECK(b.normalizers[k - 1] == doctest::Approx(1.0 / std::sqrt(closed)).epsilon(1e-11));
    }
  }
}

TEST_CASE("fractional inverse on the ball") {
  BallSpectrum s = build_spectrum(3, 1.0, 64);
  // a single mode is scaled by lambda^{-s/2}
  RadialProfile phi1 = s.mode(1);
  for (double sv : {0.5, 1.0, 2.0}) {
    RadialProfile u = ball_frac_inverse(phi1, sv, s);
    for (double r : {0.0, 0.2, 0.5, 0.9})
      CHECK(u(r) == doctest::Approx(std::pow(s.eigenvalues[0], -0.5 * sv) * phi1(r)).epsilon(1e-10));
  }
  // f = 1, s = 2: -Laplace u = 1 with u(1) = 0 is (1 - r^2)/6
  RadialProfile one = RadialProfile::constant(3, 1.0);
  BallExpansion e = ball_expand(one, 2.0, s);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double r = i / 400.0;
    worst = std::max(worst, std::fabs(e.u(r) - (1.0 - r * r) / 6.0));
  }
  CHECK(worst < 1e-4);
  CHECK(e.tail_estimate > 0.0);
  // self-convergence in K at s = 1
  BallSpectrum s128 = build_spectrum(3, 1.0, 128);
  CHECK(std::fabs(ball_frac_inverse(one, 1.0, s)(0.5) - ball_frac_inverse(one, 1.0, s128)(0.5)) < 1e-4);
  // s = 2 against the boundary-value oracle for a bump in n = 2, 4
  for (int n : {2, 4}) {
    BallSpectrum b = build_spectrum(n, 1.0, 64);
    RadialProfile f = RadialProfile::smooth_bump(n, 0.0, 0.7);
    RadialProfile u = ball_frac_inverse(f, 2.0, b);
    for (double r : {0.1, 0.4, 0.8}) CHECK(u(r) == doctest::Approx(poisson_oracle(f, 1.0, r)).epsilon(1e-6));
  }
  // the warning is data, not an exception: K = 4 cannot resolve f = 1
  BallExpansion coarse = ball_expand(one, 1.0, build_spectrum(3, 1.0, 4));
  CHECK(coarse.truncation_warning);
  CHECK_FALSE(coarse.u.notes().empty());
  CHECK_THROWS_AS(ball_frac_inverse(one, 0.0, s), DomainError);
  CHECK(ball_frac_inverse(RadialProfile::zero(3), 1.0, s).is_zero());
}

TEST_CASE("the inverse depends continuously on s") {
  BallSpectrum s = build_spectrum(3, 1.0, 64);
  RadialProfile f = RadialProfile::smooth_bump(3, 0.0, 0.8);
  for (double s0 : {0.5, 1.0, 1.5, 2.0}) {
    double base = ball_frac_inverse(f, s0, s)(0.3);
    double d1 = std::fabs(ball_frac_inverse(f, s0 + 0.02, s)(0.3) - base);
    double d2 = std::fabs(ball_frac_inverse(f, s0 + 0.01, s)(0.3) - base);
    CAPTURE(s0);
    CHECK(d1 > 0.0);
    // first-order behaviour: halving the step halves the change
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("Ni inequality on the ball") {
  BallSpectrum s = build_spectrum(3, 1.0, 64);
  const double bound = 1.0 / std::sqrt(4.0 * M_PI);
  for (const RadialProfile& f : {s.mode(1), RadialProfile::smooth_bump(3, 0.0, 0.5), RadialProfile::smooth_bump(3, 0.5, 0.3),
                                 RadialProfile::constant(3, 1.0)}) {
    NiBallRatio r = ni_ball_ratio(f, 1.0, 2.0, s);
    CHECK_FALSE(r.degenerate);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.gradient_ratio <= bound);
    CHECK(r.gradient_ratio > 0.3 * bound);
  }
  // ||grad u||_2 = ||f||_2 for s = 1 when f lies in the span of the modes
  NiBallRatio m = ni_ball_ratio(s.mode(2), 1.0, 2.0, s);
  CHECK(m.gradient_ratio == doctest::Approx(m.ratio).epsilon(1e-8));
  CHECK(ni_ball_ratio(RadialProfile::zero(3), 1.0, 2.0, s).degenerate);
  CHECK_THROWS_AS(ni_ball_ratio(RadialProfile::constant(3, 1.0), 2.0, 2.0, s), ContractError);
  CHECK_THROWS_AS(ni_ball_ratio(RadialProfile::constant(3, 1.0), 0.5, 2.0, s), ContractError);
  // p != 2: finite ratio, no gradient form
  NiBallRatio p3 = ni_ball_ratio(RadialProfile::smooth_bump(3, 0.0, 0.6), 0.8, 3.0, s);
  CHECK(std::isfinite(p3.ratio));
  CHECK(std::isnan(p3.gradient_ratio));
}

TEST_CASE("truncated kernel is dominated by the Riesz bound") {
  BallSpectrum s = build_spectrum(3, 1.0, 64);
  std::vector<std::pair<double, double>> pairs{{0.1, 0.5}, {0.2, 0.8}, {0.3, 0.6}, {0.5, 0.9}, {0.7, 0.2}};
  for (double sv : {1.0, 2.0}) {
    KernelDomination d = kernel_domination(s, sv, pairs);
    CHECK(std::isfinite(d.constant));
    CHECK(d.constant > 0.0);
    CHECK_FALSE(d.caveat.empty());
    for (const auto& [a, b] : pairs) CHECK(ball_kernel(s, sv, a, b) <= d.constant * std::pow(std::fabs(a - b), sv - 3.0) * (1 + 1e-12));
    // symmetric kernel
    CHECK(ball_kernel(s, sv, 0.2, 0.7) == doctest::Approx(ball_kernel(s, sv, 0.7, 0.2)).epsilon(1e-14));
  }
}
