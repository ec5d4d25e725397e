#include "radlab/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radlab/errors.hpp"
#include "radlab/norms.hpp"
#include "radlab/specfun.hpp"
#include "radlab/sphere.hpp"

namespace radlab {

namespace {

constexpr int kPanelNodes = 24;

RadialProfile raw_mode(const BallSpectrum& spec, int k) {
  return RadialProfile::bessel_mode(spec.n, spec.nu, spec.zeros[k - 1], spec.R);
}

// Panel Gauss rule on [0, R] carrying the radial measure omega_n r^{n-1} dr.
void radial_rule(int n, double R, int panels, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  for (int i = 0; i < panels; ++i) append_gauss_panel(R * i / panels, R * (i + 1) / panels, kPanelNodes, x, w);
  const double om = surface_area(n);
  for (std::size_t i = 0; i < x.size(); ++i) w[i] *= om * std::pow(x[i], n - 1);
}

// Breakpoints in (0, R): features of f and the interior nodes of phi_k.
std::vector<double> coefficient_breaks(const RadialProfile& f, const BallSpectrum& spec, int k) {
  std::vector<double> b;
  for (double x : f.features())
    if (x > 0.0 && x < spec.R) b.push_back(x);
  for (int i = 1; i < k; ++i) b.push_back(spec.R * spec.zeros[i - 1] / spec.zeros[k - 1]);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

bool singular_at_origin(const RadialProfile& f) {
  double e = f.origin_exponent();
  return std::isfinite(e) && (e < 0.0 || e != std::floor(e));
}

// Extrapolated sum_{k > K} t_k from a power-law fit over the upper half of t.
double extrapolate_tail(const std::vector<double>& t, double total) {
  const int K = static_cast<int>(t.size());
  if (K == 0) return 0.0;
  const int k0 = std::max(1, K / 2);
  double window_max = 0.0;
  for (int k = k0; k <= K; ++k) window_max = std::max(window_max, t[k - 1]);
  // coefficients already at roundoff level: nothing left to extrapolate
  if (window_max <= 1e-26 * total) return K * window_max;
  if (K < 4) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = k0; k <= K; ++k) {
    if (!(t[k - 1] > 1e-300)) continue;
    double x = std::log(double(k)), y = std::log(t[k - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return K * window_max;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (!(slope < -1.0)) return std::numeric_limits<double>::infinity();
  const double c = std::exp((sy - slope * sx) / m);
  // Alternating zeros in t (parity-symmetric data) make the fit a bound only.
  return c * std::pow(K + 0.5, slope + 1.0) / -(slope + 1.0);
}

}  // namespace

RadialProfile BallSpectrum::mode(int k) const {
  if (k < 1 || k > K) throw DomainError("ball mode index out of range");
  return RadialProfile::bessel_mode(n, nu, zeros[k - 1], R, normalizers[k - 1]);
}

std::vector<std::vector<double>> ball_gram(const BallSpectrum& spec, int panels) {
  std::vector<double> x, w;
  radial_rule(spec.n, spec.R, panels, x, w);
  std::vector<std::vector<double>> vals(spec.K, std::vector<double>(x.size()));
  for (int k = 1; k <= spec.K; ++k) {
    RadialProfile m = spec.mode(k);
    for (std::size_t i = 0; i < x.size(); ++i) vals[k - 1][i] = m(x[i]);
  }
  std::vector<std::vector<double>> g(spec.K, std::vector<double>(spec.K, 0.0));
  for (int i = 0; i < spec.K; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < x.size(); ++q) acc += w[q] * vals[i][q] * vals[j][q];
      g[i][j] = g[j][i] = acc;
    }
  }
  return g;
}

double eigen_residual(const BallSpectrum& spec, int k, double h) {
  RadialProfile phi = spec.mode(k);
  const double lam = spec.eigenvalues[k - 1];
  const int m = 64;
  double worst = 0.0, scale = 0.0;
  std::vector<double> res;
  for (int i = 0; i < m; ++i) {
    double r = spec.R * (0.06 + 0.88 * i / (m - 1));
    double f2 = phi(r - 2 * h), f1 = phi(r - h), f0 = phi(r), g1 = phi(r + h), g2 = phi(r + 2 * h);
    double d2 = (-g2 + 16 * g1 - 30 * f0 + 16 * f1 - f2) / (12 * h * h);
    double d1 = (-g2 + 8 * g1 - 8 * f1 + f2) / (12 * h);
    res.push_back(-(d2 + (spec.n - 1) / r * d1) - lam * f0);
    scale = std::max(scale, std::fabs(lam * f0));
  }
  for (double x : res) worst = std::max(worst, std::fabs(x));
  return worst / scale;
}

BallSpectrum build_spectrum(int n, double R, int K) {
  if (n < 2 || !(R > 0.0) || !std::isfinite(R) || K < 1)
    throw DomainError("ball spectrum needs n >= 2, R > 0, K >= 1");
  BallSpectrum s;
  s.n = n;
  s.R = R;
  s.K = K;
  s.nu = 0.5 * n - 1.0;
  s.zeros = bessel_zeros(s.nu, 1, K);
  for (int k = 0; k < K; ++k) {
    if (k > 0 && !(s.zeros[k] > s.zeros[k - 1])) throw NumericError("Bessel zeros not increasing");
    s.eigenvalues.push_back((s.zeros[k] / R) * (s.zeros[k] / R));
  }
  // normalizers by direct quadrature of ||raw mode||^2
  std::vector<double> x, w;
  radial_rule(n, R, K + 4, x, w);
  for (int k = 1; k <= K; ++k) {
    RadialProfile m = raw_mode(s, k);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = m(x[i]);
      acc += w[i] * v * v;
    }
    s.normalizers.push_back(1.0 / std::sqrt(acc));
  }
  auto g = ball_gram(s, K + 4);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      s.orthonormality_residual = std::max(s.orthonormality_residual, std::fabs(g[i][j] - (i == j ? 1.0 : 0.0)));
  for (int k = 1; k <= K; ++k)
    s.eigen_residual = std::max(s.eigen_residual, eigen_residual(s, k, 0.05 * R / s.zeros[k - 1]));
  if (!(s.orthonormality_residual < 1e-8)) throw NumericError("ball eigenfunctions fail the orthonormality check");
  if (!(s.eigen_residual < 1e-5)) throw NumericError("ball eigenfunctions fail the eigen-equation check");
  return s;
}

double ball_lp_norm(const RadialProfile& f, double p, double R, const QuadratureSpec& quad) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("ball_lp_norm: need 1 <= p < inf");
  if (!(R > 0.0)) throw DomainError("ball_lp_norm: need R > 0");
  if (f.is_zero()) return 0.0;
  const int n = f.dim();
  std::vector<double> bp;
  for (double x : f.features())
    if (x > 0.0 && x < R) bp.push_back(x);
  std::sort(bp.begin(), bp.end());
  auto g = [&](double r) {
    double v = std::fabs(f(r));
    return v == 0.0 ? 0.0 : std::pow(v, p) * std::pow(r, n - 1.0);
  };
  QuadratureSpec q = quad;
  if (singular_at_origin(f)) q = q.with_rule(EndpointRule::double_exponential);
  QuadResult res = integrate(g, 0.0, R, q, bp);
  return std::pow(surface_area(n) * res.value, 1.0 / p);
}

BallExpansion ball_expand(const RadialProfile& f, double s, const BallSpectrum& spec, double tol) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("ball_frac_inverse: need s > 0");
  if (f.dim() != spec.n) throw DomainError("ball_frac_inverse: dimension mismatch");
  BallExpansion out;
  const double om = surface_area(spec.n);
  QuadratureSpec q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-15;
  if (singular_at_origin(f)) q = q.with_rule(EndpointRule::double_exponential);
  std::vector<std::pair<double, RadialProfile>> terms;
  std::vector<double> t;
  double total = 0.0;
  for (int k = 1; k <= spec.K; ++k) {
    double c = 0.0;
    if (!f.is_zero()) {
      RadialProfile m = spec.mode(k);
      auto g = [&](double r) { return f(r) * m(r) * std::pow(r, spec.n - 1.0); };
      c = om * integrate(g, 0.0, spec.R, q, coefficient_breaks(f, spec, k)).value;
    }
    out.coefficients.push_back(c);
    const double damp = std::pow(spec.eigenvalues[k - 1], -0.5 * s);
    t.push_back(damp * damp * c * c);
    total += t.back();
    terms.push_back({damp * c * spec.normalizers[k - 1],
                     RadialProfile::bessel_mode(spec.n, spec.nu, spec.zeros[k - 1], spec.R)});
  }
  out.truncated_norm = std::sqrt(total);
  out.tail_estimate = total > 0.0 ? extrapolate_tail(t, total) : 0.0;
  out.u = f.is_zero() ? RadialProfile::zero(spec.n) : RadialProfile::combination(spec.n, terms);
  if (total > 0.0 && !(std::sqrt(out.tail_estimate) <= tol * out.truncated_norm)) {
    out.truncation_warning = true;
    out.u = out.u.with_note("truncation: K = " + std::to_string(spec.K) + " modes, extrapolated L2 tail " +
                            format_double(std::sqrt(out.tail_estimate)));
  }
  return out;
}

RadialProfile ball_frac_inverse(const RadialProfile& f, double s, const BallSpectrum& spec) {
  return ball_expand(f, s, spec).u;
}

double ni_gradient_quotient(const RadialProfile& u, double R) {
  const int n = u.dim();
  if (n < 3) throw DomainError("gradient form of the Ni quotient needs n >= 3");
  NormValue sup = weighted_lp_norm(u, WeightedNormSpec{n, INFINITY, 0.5 * (n - 2)});
  std::vector<double> bp;
  for (double x : u.features())
    if (x > 0.0 && x < R) bp.push_back(x);
  std::sort(bp.begin(), bp.end());
  QuadratureSpec q;
  q.rel_tol = 1e-11;
  auto g = [&](double r) {
    double d = u.derivative(r);
    return d * d * std::pow(r, n - 1.0);
  };
  double grad = std::sqrt(surface_area(n) * integrate(g, 0.0, R, q, bp).value);
  if (grad == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sup.value / grad;
}

NiBallRatio ni_ball_ratio(const RadialProfile& f, double s, double p, const BallSpectrum& spec) {
  const int n = spec.n;
  if (!(p > 1.0) || !std::isfinite(p) || !(1.0 / p < s && s < n / p))
    throw ContractError("ni_ball_ratio: requires 1 < p < inf and 1/p < s < n/p (see check_conditions)");
  NiBallRatio out;
  out.gradient_ratio = std::numeric_limits<double>::quiet_NaN();
  out.rhs = ball_lp_norm(f, p, spec.R);
  if (f.is_zero() || out.rhs == 0.0) {
    out.degenerate = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  BallExpansion e = ball_expand(f, s, spec);
  NormValue sup = weighted_lp_norm(e.u, WeightedNormSpec{n, INFINITY, n / p - s});
  out.lhs = sup.value;
  out.grid_resolution = sup.grid_resolution;
  out.ratio = out.lhs / out.rhs;
  if (p == 2.0 && s == 1.0 && n >= 3) out.gradient_ratio = ni_gradient_quotient(e.u, spec.R);
  return out;
}

double ball_kernel(const BallSpectrum& spec, double s, double rho, double r) {
  double acc = 0.0;
  for (int k = 1; k <= spec.K; ++k) {
    RadialProfile m = spec.mode(k);
    acc += std::pow(spec.eigenvalues[k - 1], -0.5 * s) * m(rho) * m(r);
  }
  return acc;
}

KernelDomination kernel_domination(const BallSpectrum& spec, double s,
                                   const std::vector<std::pair<double, double>>& pairs) {
  KernelDomination out;
  for (const auto& [rho, r] : pairs) {
    if (rho == r) throw DomainError("kernel_domination: pairs must be separated");
    double bound = std::pow(std::fabs(rho - r), s - spec.n);
    out.constant = std::max(out.constant, ball_kernel(spec, s, rho, r) / bound);
  }
  // |x - y| >= ||x| - |y||, so for s < n the sphere-averaged bound is at most
  // |rho - r|^{s-n} and the constant above is an upper estimate for it.
  out.caveat = "radial sector truncated at K = " + std::to_string(spec.K) +
               " modes; kernel averaged over spheres |x| = rho, |y| = r";
  return out;
}

}  // namespace radlab
