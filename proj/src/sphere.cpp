#include "radlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "radlab/errors.hpp"
#include "radlab/specfun.hpp"

namespace radlab {

double surface_area(int n) {
  if (n <= 0) throw DomainError("surface_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_fn(0.5 * n);
}

double ball_volume(int n) {
  if (n <= 0) throw DomainError("ball_volume: n must be >= 1");
  return surface_area(n) / n;
}

double polar_normalizer(int n) {
  if (n < 2) throw DomainError("polar_normalizer: n must be >= 2");
  if (n == 2) return std::numbers::pi;
  return std::sqrt(std::numbers::pi) * gamma_fn(0.5 * (n - 1)) / gamma_fn(0.5 * n);
}

double sphere_point_radius(double rho, double h, double theta) {
  double c = std::cos(0.5 * theta);
  double d = rho - h;
  return std::sqrt(d * d + 4.0 * rho * h * c * c);
}

double sphere_mean(const RadialProfile& u, double rho, double h, const QuadratureSpec& spec) {
  if (!(rho >= 0.0) || !(h >= 0.0) || !std::isfinite(rho) || !std::isfinite(h))
    throw DomainError("sphere_mean: rho and h must be finite and >= 0");
  const int n = u.dim();
  if (h == 0.0) return u(rho);
  if (rho == 0.0) return u(h);
  if (n == 1) return 0.5 * (u(std::fabs(rho - h)) + u(rho + h));
  // Sampled data is interpolated smoothly between nodes; only its end matters.
  std::vector<double> feats =
      u.is_sampled() ? std::vector<double>{u.sampled_data()->radii.back()} : u.features();
  std::vector<double> br;
  for (double f : feats) {
    double c = (f * f - rho * rho - h * h) / (2.0 * rho * h);
    if (c > -1.0 && c < 1.0) br.push_back(std::acos(c));
  }
  const int k = n - 2;
  auto integrand = [&](double th) {
    double w = k == 0 ? 1.0 : std::pow(std::sin(th), k);
    return u(sphere_point_radius(rho, h, th)) * w;
  };
  QuadResult q = integrate(integrand, 0.0, std::numbers::pi, spec, br);
  return q.value / polar_normalizer(n);
}

}  // namespace radlab
