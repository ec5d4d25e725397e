#include <cstring>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radlab/errors.hpp"
#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/sphere.hpp"

using namespace radlab;
constexpr double kPi = std::numbers::pi;

TEST_CASE("analytic families evaluate per their formulas") {
  CHECK(eval_profile(RadialProfile::gaussian(3, 1.0), 0.0) == 1.0);
  CHECK(eval_profile(RadialProfile::gaussian(3, 2.0), 2.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(eval_profile(RadialProfile::annulus(2, 1.0, 2.0), 3.0) == 0.0);
  CHECK(eval_profile(RadialProfile::annulus(2, 1.0, 2.0), 1.5) == 1.0);
  CHECK(eval_profile(RadialProfile::smooth_bump(2, 0.0, 1.0), 0.0) == 1.0);
  CHECK(eval_profile(RadialProfile::smooth_bump(2, 0.0, 1.0), 1.0) == 0.0);
  CHECK(eval_profile(RadialProfile::smooth_bump(2, 3.0, 1.0), 3.0) == 1.0);
  auto pc = RadialProfile::power_cutoff(3, 1.5, 1.0);
  CHECK(pc(0.5) == doctest::Approx(std::pow(0.5, 1.5)));
  CHECK(pc(2.5) == 0.0);
  CHECK(pc(1.5) < std::pow(1.5, 1.5));
  CHECK(pc(1.5) > 0.0);
  CHECK(RadialProfile::constant(4, 2.5)(17.0) == 2.5);
  CHECK(RadialProfile::zero(4)(1.0) == 0.0);
}

TEST_CASE("sampled profiles honour the extrapolation contract") {
  auto u = RadialProfile::sampled(3, Grid::explicit_radii({1.0, 2.0}), {1.0, 0.5}, -1.0);
  CHECK(u(4.0) == doctest::Approx(0.25));
  CHECK(u(0.0) == 1.0);
  CHECK(u(0.3) == 1.0);
  CHECK(u(2.0) == 0.5);
  auto z = RadialProfile::sampled(3, Grid::explicit_radii({1.0, 2.0}), {1.0, 0.5},
                                  -std::numeric_limits<double>::infinity());
  CHECK(z(2.5) == 0.0);
  CHECK(z.support_radius() == 2.0);
}

TEST_CASE("sampled interpolation is exact for power laws and accurate for smooth data") {
  Grid g = Grid::log_uniform(0.01, 10.0, 61);
  std::vector<double> v;
  for (double r : g) v.push_back(3.0 * std::pow(r, -1.7));
  auto p = RadialProfile::sampled(3, g, v, -1.7);
  for (double r : {0.013, 0.5, 3.3, 9.99, 20.0}) CHECK(p(r) == doctest::Approx(3.0 * std::pow(r, -1.7)).epsilon(1e-12));
  // sign-changing data falls back to value-space interpolation
  Grid h = Grid::log_uniform(0.1, 10.0, 2000);
  std::vector<double> w;
  for (double r : h) w.push_back(std::cos(r));
  auto q = RadialProfile::sampled(2, h, w, -std::numeric_limits<double>::infinity());
  double worst = 0.0;
  for (double r = 0.11; r < 9.9; r += 0.0137) worst = std::max(worst, std::fabs(q(r) - std::cos(r)));
  CHECK(worst < 1e-7);
  CHECK(q.derivative(1.0) == doctest::Approx(-std::sin(1.0)).epsilon(1e-5));
}

TEST_CASE("sampled validation") {
  CHECK_THROWS_AS(Grid::explicit_radii({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(Grid::explicit_radii({0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(RadialProfile::sampled(1, Grid::explicit_radii({1.0}), {NAN}, -1.0), DomainError);
  CHECK_THROWS_AS(RadialProfile::sampled(1, Grid::explicit_radii({1.0, 2.0}), {1.0}, -1.0), DomainError);
  CHECK_THROWS_AS(RadialProfile::gaussian(0, 1.0), DomainError);
  CHECK_THROWS_AS(RadialProfile::smooth_bump(2, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(eval_profile(RadialProfile::gaussian(2, 1.0), NAN), DomainError);
  CHECK_THROWS_AS(eval_profile(RadialProfile::gaussian(2, 1.0), -1.0), DomainError);
}

TEST_CASE("evaluation is pure") {
  auto u = RadialProfile::combination(
      3, {{0.5, RadialProfile::gaussian(3, 0.7)}, {-2.0, RadialProfile::smooth_bump(3, 0.0, 2.0)}});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    double r = d(rng);
    double a = u(r), b = u(r);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
}

TEST_CASE("dilation maps u to u(lambda .)") {
  std::vector<RadialProfile> fam{RadialProfile::gaussian(3, 1.3), RadialProfile::smooth_bump(3, 2.0, 1.0),
                                 RadialProfile::power_cutoff(3, 0.7, 1.0), RadialProfile::annulus(3, 0.5, 1.0),
                                 RadialProfile::bessel_mode(3, 0.5, kPi, 1.0)};
  for (const auto& u : fam) {
    for (double lam : {0.5, 3.0}) {
      auto v = u.dilated(lam);
      for (double r : {0.05, 0.3, 0.77, 1.9}) CHECK(v(r) == doctest::Approx(u(lam * r)).epsilon(1e-13));
    }
  }
}

TEST_CASE("derivatives agree with central differences") {
  std::vector<RadialProfile> fam{RadialProfile::gaussian(3, 1.3), RadialProfile::smooth_bump(3, 0.0, 1.0),
                                 RadialProfile::power_cutoff(3, 0.7, 1.0), RadialProfile::bessel_mode(2, 0.0, 2.404825557695773, 1.0)};
  for (const auto& u : fam) {
    for (double r : {0.2, 0.6, 0.9, 1.4}) {
      double h = 1e-6;
      double fd = (u(r + h) - u(r - h)) / (2 * h);
      CHECK(u.derivative(r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("behaviour descriptors") {
  auto g = RadialProfile::gaussian(3, 2.0);
  CHECK(g.tail().kind == TailKind::rapid);
  CHECK(g.smooth());
  CHECK(g.origin_exponent() == 0.0);
  CHECK(g.effective_radius(1e-16) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(1e16))));
  auto pc = RadialProfile::power_cutoff(3, -0.5, 1.0);
  CHECK(pc.origin_exponent() == -0.5);
  CHECK_FALSE(pc.smooth());
  CHECK(pc.support_radius() == 2.0);
  CHECK(RadialProfile::annulus(3, 1.0, 2.0).has_jump());
  CHECK(RadialProfile::annulus(3, 1.0, 2.0).inner_radius() == 1.0);
  CHECK(RadialProfile::constant(3, 1.0).tail().kind == TailKind::power);
  CHECK(RadialProfile::gaussian(3, 0.125).descriptor() == "gaussian(sigma=0.125)");
  CHECK(RadialProfile::zero(2).is_zero());
}

TEST_CASE("surface_area") {
  CHECK(surface_area(1) == doctest::Approx(2.0));
  CHECK(surface_area(2) == doctest::Approx(2 * kPi));
  CHECK(surface_area(3) == doctest::Approx(4 * kPi));
  CHECK_THROWS_AS(surface_area(0), DomainError);
  // recursive oracle: |S^{n-1}| = |S^{n-2}| * int_0^pi sin^{n-2}
  double area = 2 * kPi;
  for (int n = 3; n <= 8; ++n) {
    double I = 0.0;
    const int M = 20000;
    for (int i = 0; i < M; ++i) {
      double th = (i + 0.5) * kPi / M;
      I += std::pow(std::sin(th), n - 2) * kPi / M;
    }
    area *= I;
    CHECK(surface_area(n) == doctest::Approx(area).epsilon(1e-8));
  }
  CHECK(surface_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("sphere_mean: constants, degenerate spheres, n = 1") {
  for (int n : {1, 2, 3, 4, 7}) {
    auto one = RadialProfile::constant(n, 1.0);
    for (double rho : {0.0, 0.3, 2.0})
      for (double h : {0.0, 0.5, 3.0}) CHECK(std::fabs(sphere_mean(one, rho, h) - 1.0) < 1e-10);
  }
  auto g = RadialProfile::gaussian(3, 1.0);
  CHECK(sphere_mean(g, 0.7, 0.0) == g(0.7));
  auto g1 = RadialProfile::gaussian(1, 1.0);
  CHECK(sphere_mean(g1, 1.0, 0.5) == doctest::Approx(0.5 * (g1(0.5) + g1(1.5))));
}

TEST_CASE("sphere_mean: Gaussian in R^3 against tensor quadrature over S^2") {
  auto g = RadialProfile::gaussian(3, 1.0);
  const GaussRule& gl = gauss_legendre(64);
  for (auto [rho, h] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.25}}) {
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) {
      double th = 0.5 * kPi * (gl.nodes[i] + 1.0);
      for (int j = 0; j < 64; ++j) {
        double ph = kPi * (gl.nodes[j] + 1.0);
        double x = h * std::sin(th) * std::cos(ph), y = h * std::sin(th) * std::sin(ph);
        double z = rho + h * std::cos(th);
        double w = 0.5 * kPi * gl.weights[i] * kPi * gl.weights[j] * std::sin(th);
        acc += w * std::exp(-0.5 * (x * x + y * y + z * z));
      }
    }
    acc /= 4 * kPi;
    CHECK(sphere_mean(g, rho, h) == doctest::Approx(acc).epsilon(1e-9));
    // closed form for sigma = 1
    double cf = std::exp(-0.5 * (rho * rho + h * h)) * std::sinh(rho * h) / (rho * h);
    CHECK(sphere_mean(g, rho, h) == doctest::Approx(cf).epsilon(1e-9));
  }
}

TEST_CASE("sphere_mean is monotone under pointwise ordering") {
  for (int n : {2, 3, 5}) {
    auto lo = RadialProfile::smooth_bump(n, 0.0, 1.0);
    auto hi = RadialProfile::annulus(n, 0.0, 1.0);  // bump <= indicator of its support
    auto g = RadialProfile::gaussian(n, 1.0);
    auto g2 = RadialProfile::gaussian(n, 1.5);  // pointwise larger
    for (double rho : {0.1, 0.6, 1.2})
      for (double h : {0.2, 0.7, 1.5}) {
        CHECK(sphere_mean(lo, rho, h) <= sphere_mean(hi, rho, h) + 1e-12);
        CHECK(sphere_mean(g, rho, h) <= sphere_mean(g2, rho, h) + 1e-12);
      }
  }
}
