#include <cmath>
#include <vector>

#include "doctest.h"
#include "radlab/errors.hpp"
#include "radlab/potentials.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/specfun.hpp"
#include "radlab/sphere.hpp"

using namespace radlab;

namespace {

struct Case {
  int n;
  double s;
};
const Case kFamily[] = {{2, 0.5}, {3, 1.0}, {3, 1.5}, {4, 2.0}};

RadialProfile family_member(int n, int which) {
  return which == 0 ? RadialProfile::gaussian(n, 1.0) : RadialProfile::smooth_bump(n, 0.0, 1.0);
}

Grid probe_grid() { return Grid::log_uniform(0.01, 8.0, 25); }

// Relative L2 distance of radial functions on R^n, truncated at hi.
double l2_relative(const RadialProfile& a, const RadialProfile& b, double hi) {
  const int n = a.dim();
  QuadratureSpec q;
  q.rel_tol = 1e-9;
  auto diff = [&](double r) {
    double d = a(r) - b(r);
    return d * d * std::pow(r, n - 1);
  };
  auto ref = [&](double r) { return b(r) * b(r) * std::pow(r, n - 1); };
  return std::sqrt(integrate(diff, 0.0, hi, q).value / integrate(ref, 0.0, hi, q).value);
}

// Normalisation of the unscaled hypersingular integral for 0 < s < 2: its
// symbol is -kappa A |w|^s with the finite-difference sum A below.
double difference_symbol_constant(int n, double s, int l) {
  double kappa = std::pow(M_PI, 0.5 * n) * std::fabs(gamma_fn(-0.5 * s)) /
                 (std::pow(2.0, s) * gamma_fn(0.5 * (n + s)));
  double A = 0.0, binom = 1.0;
  for (int k = 0; k <= l; ++k) {
    A += ((l - k) % 2 ? -1.0 : 1.0) * binom * std::pow(k, s);
    binom = binom * (l - k) / (k + 1);
  }
  return 1.0 / (-kappa * A);
}

}  // namespace

TEST_CASE("ring weight of the constant kernel is the sphere area") {
  for (int n = 1; n <= 5; ++n) {
    RingKernel one = RingKernel::constant(n);
    for (double r : {0.0, 0.3, 1.0, 2.5})
      CHECK(ring_weight(one, 1.0, r) == doctest::Approx(surface_area(n)).epsilon(1e-12));
  }
}

TEST_CASE("ring weight matches closed forms in three dimensions") {
  // W = 2 pi / (rho r) int_{|rho-r|}^{rho+r} k(d) d dd
  for (double s : {0.5, 1.5}) {
    RingKernel K = RingKernel::riesz(3, s);
    double c = riesz_constant(3, s);
    for (auto [rho, r] : {std::pair{1.0, 0.4}, {1.0, 0.999}, {0.2, 3.0}}) {
      double d0 = std::fabs(rho - r), d1 = rho + r;
      double expect = 2.0 * M_PI * c / (rho * r) * (std::pow(d1, s - 1.0) - std::pow(d0, s - 1.0)) / (s - 1.0);
      CHECK(ring_weight(K, rho, r) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  RingKernel ind = RingKernel::indicator(3, 1.2);
  for (auto [rho, r] : {std::pair{1.0, 0.5}, {0.5, 0.6}, {2.0, 1.0}}) {
    double d0 = std::fabs(rho - r), d1 = std::min(rho + r, 1.2);
    double expect = d1 > d0 ? M_PI / (rho * r) * (d1 * d1 - d0 * d0) : 0.0;
    CHECK(ring_weight(ind, rho, r) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("constant kernel returns the total mass everywhere") {
  for (int n : {2, 3, 4}) {
    RadialProfile f = RadialProfile::annulus(n, 0.5, 1.5);
    double mass = surface_area(n) / n * (std::pow(1.5, n) - std::pow(0.5, n));
    for (double rho : {0.0, 0.7, 3.0})
      CHECK(radial_convolve_at(RingKernel::constant(n), f, rho) == doctest::Approx(mass).epsilon(1e-9));
  }
}

TEST_CASE("indicator convolution: volumes and disjoint supports") {
  const int n = 3;
  RadialProfile shell = RadialProfile::annulus(n, 1.0, 2.0);
  CHECK(indicator_convolve(shell, 1.5, 0.0) ==
        doctest::Approx(surface_area(n) / n * (std::pow(1.5, n) - 1.0)).epsilon(1e-10));
  RadialProfile big = RadialProfile::annulus(n, 0.0, 50.0);
  for (int m : {2, 3, 4}) {
    RadialProfile b = RadialProfile::annulus(m, 0.0, 50.0);
    CHECK(indicator_convolve(b, 1.3, 0.4) == doctest::Approx(ball_volume(m) * std::pow(1.3, m)).epsilon(1e-10));
  }
  RadialProfile unit = RadialProfile::annulus(n, 0.0, 1.0).scaled(3.0);
  CHECK(indicator_convolve(unit, 0.5, 4.0) == 0.0);
  CHECK(indicator_convolve(big, 2.0, 10.0) == doctest::Approx(ball_volume(n) * 8.0).epsilon(1e-10));
}

TEST_CASE("Gaussian convolved with Gaussian") {
  RingKernel K;
  K.n = 3;
  K.k = [](double t) { return std::exp(-0.5 * t * t); };
  RadialProfile f = RadialProfile::gaussian(3, 1.0);
  for (double rho : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    double expect = std::pow(M_PI, 1.5) * std::exp(-0.25 * rho * rho);
    CHECK(radial_convolve_at(K, f, rho) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("kernel contracts") {
  RingKernel K;
  K.n = 3;
  K.k = [](double t) { return std::pow(t, -3.0); };
  K.singularity = SingularityClass::power;
  K.sigma = 3.0;
  CHECK_THROWS_AS(K.validate(), DomainError);
  CHECK_THROWS_AS(radial_convolve_at(K, RadialProfile::gaussian(3, 1.0), 1.0), DomainError);
  CHECK_THROWS_AS(RingKernel::riesz(3, 3.0), DomainError);
  CHECK_THROWS_AS(RingKernel::bessel(2, 0.0), DomainError);
  CHECK_THROWS_AS(riesz_potential(RadialProfile::gaussian(3, 1.0), 3.5), DomainError);
  // tail r^{-1/2}: int |f| r^{s-1} diverges for s = 1
  Grid g = Grid::log_uniform(0.1, 10.0, 30);
  std::vector<double> v;
  for (double r : g.radii()) v.push_back(std::pow(1.0 + r, -0.5));
  RadialProfile slow = RadialProfile::sampled(3, g, v, -0.5);
  CHECK_THROWS_AS(riesz_potential(slow, 1.0, g), DomainError);
}

TEST_CASE("Riesz potential dilation law") {
  const double lambda = 2.0, s = 1.0;
  RadialProfile f = RadialProfile::gaussian(3, 1.0);
  RadialProfile fl = f.dilated(lambda);
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    double lhs = radial_convolve_at(RingKernel::riesz(3, s), fl, x);
    double rhs = std::pow(lambda, -s) * radial_convolve_at(RingKernel::riesz(3, s), f, lambda * x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("ring and spectral routes agree for Riesz and Bessel potentials") {
  Grid g = probe_grid();
  for (const Case& c : kFamily) {
    for (int which = 0; which < 2; ++which) {
      CAPTURE(c.n);
      CAPTURE(c.s);
      CAPTURE(which);
      RadialProfile f = family_member(c.n, which);
      RadialProfile ring = riesz_potential(f, c.s, g);
      RadialProfile spec = riesz_potential_spectral(f, c.s, g);
      CHECK(sup_relative_error(ring, spec, g.radii()) < 1e-6);
      RadialProfile bring = bessel_convolve(f, c.s, g);
      RadialProfile bspec = bessel_convolve_spectral(f, c.s, g);
      CHECK(sup_relative_error(bring, bspec, g.radii()) < 1e-6);
    }
  }
}

TEST_CASE("Riesz potential tail is declared as r^{s-n}") {
  RadialProfile f = RadialProfile::smooth_bump(3, 0.0, 1.0);
  RadialProfile v = riesz_potential(f, 1.0, probe_grid());
  CHECK(v.tail().kind == TailKind::power);
  CHECK(v.tail().exponent == doctest::Approx(-2.0));
  // far field: I^s f ~ c(n,s) (int f) r^{s-n}
  double mass = radial_convolve_at(RingKernel::constant(3), f, 0.0);
  double r = 200.0;
  CHECK(v(r) == doctest::Approx(riesz_constant(3, 1.0) * mass * std::pow(r, -2.0)).epsilon(1e-3));
}

TEST_CASE("semigroup I^1 I^1 = I^2 on a bump in four dimensions") {
  RadialProfile f = RadialProfile::smooth_bump(4, 0.0, 1.0);
  Grid dense = Grid::log_uniform(1e-3, 1e3, 241);
  RadialProfile once = riesz_potential(f, 1.0, dense);
  Grid g = Grid::log_uniform(0.02, 6.0, 12);
  RadialProfile twice = riesz_potential(once, 1.0, g);
  RadialProfile direct = riesz_potential(f, 2.0, g);
  CHECK(sup_relative_error(twice, direct, g.radii()) < 1e-3);
}

TEST_CASE("Bessel potential: zero input, mass, positivity, domination") {
  Grid g = probe_grid();
  RadialProfile z = bessel_convolve(RadialProfile::zero(3), 1.0, g);
  for (double r : g.radii()) CHECK(z(r) == 0.0);

  RadialProfile f = RadialProfile::smooth_bump(3, 0.0, 1.0);
  Grid wide = Grid::log_uniform(1e-3, 60.0, 600);
  RadialProfile b = bessel_convolve(f, 1.0, wide);
  QuadratureSpec q;
  q.rel_tol = 1e-10;
  auto mass_of = [&](const RadialProfile& p, double hi) {
    return surface_area(3) * integrate([&](double r) { return p(r) * r * r; }, 0.0, hi, q).value;
  };
  CHECK(mass_of(b, 60.0) == doctest::Approx(mass_of(f, 1.0)).epsilon(1e-6));

  for (const Case& c : kFamily) {
    RadialProfile u = RadialProfile::gaussian(c.n, 1.0);
    RadialProfile bs = bessel_convolve(u, c.s, g);
    RadialProfile rs = riesz_potential(u, c.s, g);
    // G_s <= c(n,s) |x|^{s-n} pointwise, so the domination constant is 1.
    double worst = 0.0;
    for (double r : g.radii()) {
      CHECK(bs(r) > 0.0);
      CHECK(rs(r) > 0.0);
      worst = std::max(worst, bs(r) / rs(r));
    }
    CHECK(worst <= 1.0 + 1e-9);
    CHECK(worst > 0.0);
  }
}

TEST_CASE("difference order defaults and scheme contracts") {
  CHECK(default_difference_order(0.5) == 1);
  CHECK(default_difference_order(1.0) == 1);
  CHECK(default_difference_order(1.5) == 2);
  CHECK(default_difference_order(2.0) == 3);
  CHECK(default_difference_order(3.0) == 3);
  CHECK_THROWS_AS(FracDiffScheme::make(3, 1.5, 1), DomainError);
  CHECK_THROWS_AS(FracDiffScheme::make(3, 2.0, 2), DomainError);
  CHECK_THROWS_AS(FracDiffScheme::make(3, 0.5, 1, {1e-2, 1e-1}), DomainError);
  FracDiffScheme raw = FracDiffScheme::make(3, 1.0);
  CHECK_FALSE(raw.calibrated());
  CHECK_THROWS_AS(frac_derivative(RadialProfile::gaussian(3, 1.0), 1.0, raw, DiffMethod::hypersingular, probe_grid()),
                  StateError);
  // l = 2 annihilates |w|^1: the integral carries no information about D^1
  CHECK_THROWS_AS(calibrate(FracDiffScheme::make(3, 1.0, 2)), DomainError);
}

TEST_CASE("calibrated constant matches the finite-difference symbol") {
  struct Row {
    int n;
    double s;
    int l;
  };
  for (Row r : {Row{2, 0.5, 1}, Row{3, 1.0, 1}, Row{3, 1.5, 2}, Row{3, 1.5, 3}, Row{5, 0.7, 1}}) {
    CAPTURE(r.n);
    CAPTURE(r.s);
    CAPTURE(r.l);
    FracDiffScheme sc = calibrate(FracDiffScheme::make(r.n, r.s, r.l));
    REQUIRE(sc.calibrated());
    CHECK(sc.calibration_residual < 1e-6);
    CHECK(*sc.calibration_constant == doctest::Approx(difference_symbol_constant(r.n, r.s, r.l)).epsilon(1e-7));
  }
}

TEST_CASE("hypersingular and spectral derivatives agree") {
  Grid g = probe_grid();
  for (const Case& c : kFamily) {
    FracDiffScheme sc = calibrate(FracDiffScheme::make(c.n, c.s));
    for (int which = 0; which < 2; ++which) {
      CAPTURE(c.n);
      CAPTURE(c.s);
      CAPTURE(which);
      RadialProfile u = family_member(c.n, which);
      RadialProfile h = frac_derivative(u, c.s, sc, DiffMethod::hypersingular, g);
      RadialProfile sp = frac_derivative(u, c.s, sc, DiffMethod::spectral, g);
      CHECK(sup_relative_error(h, sp, g.radii()) < 1e-4);
    }
  }
  RadialProfile z = frac_derivative(RadialProfile::zero(3), 1.0, calibrate(FracDiffScheme::make(3, 1.0)),
                                    DiffMethod::hypersingular, g);
  for (double r : g.radii()) CHECK(z(r) == 0.0);
}

TEST_CASE("second-order hypersingular derivative is the negative Laplacian") {
  // -Delta e^{-r^2/2} = (n - r^2) e^{-r^2/2}
  FracDiffScheme sc = calibrate(FracDiffScheme::make(4, 2.0));
  RadialProfile u = RadialProfile::gaussian(4, 1.0);
  Grid g = probe_grid();
  RadialProfile h = frac_derivative(u, 2.0, sc, DiffMethod::hypersingular, g);
  for (double r : g.radii()) CHECK(h(r) == doctest::Approx((4.0 - r * r) * std::exp(-0.5 * r * r)).epsilon(1e-8).scale(1.0));
}

TEST_CASE("hypersingular derivative does not depend on the difference order") {
  Grid g = probe_grid();
  RadialProfile u = RadialProfile::gaussian(3, 1.0);
  RadialProfile a = frac_derivative(u, 1.5, calibrate(FracDiffScheme::make(3, 1.5, 2)), DiffMethod::hypersingular, g);
  RadialProfile b = frac_derivative(u, 1.5, calibrate(FracDiffScheme::make(3, 1.5, 3)), DiffMethod::hypersingular, g);
  CHECK(sup_relative_error(a, b, g.radii()) < 1e-6);
}

TEST_CASE("truncated derivative tends to the full derivative") {
  FracDiffScheme sc = calibrate(FracDiffScheme::make(3, 1.0));
  RadialProfile u = RadialProfile::gaussian(3, 1.0);
  Grid g = probe_grid();
  RadialProfile full = frac_derivative(u, 1.0, sc, DiffMethod::hypersingular, g);
  double prev = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double e = sup_relative_error(truncated_derivative(u, 1.0, eps, sc, g), full, g.radii());
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("truncated inversion converges at first order in eps") {
  struct Row {
    int n;
    double s;
    int which;
  };
  Grid g = Grid::log_uniform(1e-3, 8.0, 100);
  for (Row r : {Row{3, 1.0, 0}, Row{2, 0.5, 1}}) {
    CAPTURE(r.n);
    RadialProfile u = family_member(r.n, r.which);
    FracDiffScheme sc = calibrate(FracDiffScheme::make(r.n, r.s));
    std::vector<RadialProfile> seq = truncated_inversion_sequence(u, r.s, sc, g);
    std::vector<double> err;
    for (const RadialProfile& v : seq) err.push_back(l2_relative(v, u, 8.0));
    for (std::size_t i = 1; i < err.size(); ++i) {
      CHECK(err[i] < err[i - 1]);
      // error / eps stays roughly constant: first-order convergence
      double ratio = (err[i] / sc.eps_sequence[i]) / (err[i - 1] / sc.eps_sequence[i - 1]);
      CHECK(ratio > 0.5);
      CHECK(ratio < 2.0);
    }
  }
  FracDiffScheme sc = calibrate(FracDiffScheme::make(3, 1.0));
  for (const RadialProfile& v : truncated_inversion_sequence(RadialProfile::zero(3), 1.0, sc, g))
    for (double r : g.radii()) CHECK(v(r) == 0.0);
}
