#include "radlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "radlab/errors.hpp"
#include "radlab/simd.hpp"
#include "radlab/sphere.hpp"
#include "radlab/transforms.hpp"

namespace radlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

bool is_even_integer(double a) { return a >= 0.0 && a == std::floor(a) && std::fmod(a, 2.0) == 0.0; }
bool is_odd_integer(double a) { return a > 0.0 && a == std::floor(a) && std::fmod(a, 2.0) == 1.0; }

bool singular_origin(const RadialProfile& u) {
  double e = u.origin_exponent();
  return std::isfinite(e) && u.inner_radius() == 0.0 && !is_even_integer(e);
}

// Radii where u0 fails to be smooth.  Sampled data counts as smooth between
// nodes; its origin (constant continuation in log r) does not.
std::vector<double> smoothness_breaks(const RadialProfile& u) {
  if (const SampledData* d = u.sampled_data()) {
    if (u.has_jump()) return {d->radii.back()};
    return {};
  }
  return u.features();
}

bool rough_origin(const RadialProfile& u) { return u.is_sampled() || singular_origin(u); }

// Upper end of the region where u is not negligible (inf for power tails).
double reach(const RadialProfile& u) {
  if (u.tail().kind == TailKind::power) return kInf;
  return std::min(u.support_radius(), u.effective_radius(1e-20));
}

QuadratureSpec inner_spec(const QuadratureSpec& spec) {
  QuadratureSpec q = spec;
  q.rel_tol = std::max(1e-14, spec.rel_tol * 0.1);
  q.abs_tol = std::max(1e-300, spec.abs_tol * 1e-3);
  return q;
}

std::shared_ptr<const KernelGs> shared_kernel_gs(int n, double s) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::shared_ptr<const KernelGs>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, s}];
  if (!slot) slot = std::make_shared<const KernelGs>(n, s);
  return slot;
}

void check_riesz_order(int n, double s) {
  if (!(s > 0.0) || !(s < n)) throw DomainError("Riesz potential requires 0 < s < n");
}

}  // namespace

void RingKernel::validate() const {
  if (n < 1) throw DomainError("RingKernel: dimension must be >= 1");
  if (!k) throw DomainError("RingKernel: kernel function missing");
  if (singularity == SingularityClass::power && !(sigma < n))
    throw DomainError("RingKernel: kernel singularity t^{-sigma} needs sigma < n to be locally integrable");
  if (!(support > 0.0)) throw DomainError("RingKernel: support must be positive");
}

double riesz_constant(int n, double s) {
  check_riesz_order(n, s);
  return gamma_fn(0.5 * (n - s)) / (std::pow(2.0, s) * std::pow(kPi, 0.5 * n) * gamma_fn(0.5 * s));
}

RingKernel RingKernel::riesz(int n, double s) {
  const double c = riesz_constant(n, s);
  RingKernel K;
  K.n = n;
  K.k = [c, e = s - n](double t) { return c * std::pow(t, e); };
  K.singularity = SingularityClass::power;
  K.sigma = n - s;
  K.decay = s - n;
  K.name = "riesz";
  return K;
}

RingKernel RingKernel::bessel(int n, double s) {
  if (!(s > 0.0) || !(s < n)) throw DomainError("Bessel potential requires 0 < s < n");
  auto G = shared_kernel_gs(n, s);
  RingKernel K;
  K.n = n;
  K.k = [G](double t) { return (*G)(t); };
  K.singularity = SingularityClass::power;
  K.sigma = n - s;
  K.name = "bessel";
  return K;
}

RingKernel RingKernel::indicator(int n, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("indicator kernel needs a finite radius > 0");
  RingKernel K;
  K.n = n;
  K.k = [R](double t) { return t <= R ? 1.0 : 0.0; };
  K.support = R;
  K.name = "indicator";
  return K;
}

RingKernel RingKernel::constant(int n) {
  RingKernel K;
  K.n = n;
  K.k = [](double) { return 1.0; };
  K.decay = 0.0;
  K.name = "constant";
  return K;
}

double ring_weight(const RingKernel& K, double rho, double r, const QuadratureSpec& spec) {
  const int n = K.n;
  if (n == 1) {
    double d1 = std::fabs(rho - r), d2 = rho + r;
    return (d1 <= K.support && (d1 > 0.0 || K.singularity == SingularityClass::bounded) ? K.k(d1) : 0.0) + (d2 <= K.support ? K.k(d2) : 0.0);
  }
  if (rho == 0.0 || r == 0.0) {
    double d = rho + r;
    return d <= K.support ? surface_area(n) * K.k(d) : 0.0;
  }
  const double lo = std::fabs(rho - r);
  if (!(K.support > lo)) return 0.0;
  // Polar angle between x and y: d(theta) = |x - y| grows from |rho - r|, so a
  // kernel singularity sits at the theta = 0 endpoint.
  double top = kPi;
  if (K.support < rho + r) {
    double c = (rho * rho + r * r - K.support * K.support) / (2.0 * rho * r);
    top = std::acos(std::clamp(c, -1.0, 1.0));
  }
  auto f = [&](double th) {
    double sh = std::sin(0.5 * th);
    double v = K.k(std::sqrt(lo * lo + 4.0 * rho * r * sh * sh));
    if (n == 2) return v;
    return v * std::pow(std::sin(th), n - 2);
  };
  QuadratureSpec q = spec.with_rule(EndpointRule::double_exponential);
  QuadResult res = integrate(f, 0.0, top, q);
  return surface_area(n - 1) * res.value;
}

double radial_convolve_at(const RingKernel& K, const RadialProfile& f, double rho,
                          const QuadratureSpec& spec) {
  K.validate();
  spec.validate();
  if (f.dim() != K.n) throw DomainError("radial_convolve: kernel and profile dimensions differ");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("radial_convolve: rho must be >= 0");
  if (f.is_zero()) return 0.0;
  const int n = K.n;
  const TailBehavior tail = f.tail();
  if (tail.kind == TailKind::power && std::isfinite(K.decay) && !(tail.exponent + K.decay + n < 0.0))
    throw DomainError("radial_convolve: f decays too slowly for this kernel");
  double lo = f.is_sampled() ? 0.0 : f.inner_radius();
  double hi = reach(f);
  lo = std::max(lo, rho - K.support);
  hi = std::min(hi, rho + K.support);
  if (!(hi > lo)) return 0.0;

  std::vector<double> pts{lo};
  auto add = [&](double x) {
    if (x > lo && x < hi) pts.push_back(x);
  };
  for (double x : smoothness_breaks(f)) add(x);
  if (rho > 0.0) {
    add(0.5 * rho);
    add(rho);
    add(2.0 * rho);
  }
  if (std::isfinite(K.support)) {
    add(rho - K.support);
    add(rho + K.support);
  }
  if (const SampledData* d = f.sampled_data()) add(d->radii.back());
  if (!std::isfinite(hi)) {
    // finite anchor before the infinite piece
    double a = std::max({2.0 * rho, f.scale(), pts.back()});
    if (const SampledData* d = f.sampled_data()) a = std::max(a, d->radii.back());
    add(a);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const QuadratureSpec wspec = inner_spec(spec);
  auto integrand = [&](double r) {
    double v = f(r);
    if (v == 0.0) return 0.0;
    return v * std::pow(r, n - 1) * ring_weight(K, rho, r, wspec);
  };
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    bool touches_rho = rho > 0.0 && (a == rho || b == rho);
    bool de = touches_rho || !std::isfinite(b) || (a == 0.0 && singular_origin(f)) ||
              (!f.is_sampled() && K.singularity == SingularityClass::power && rho == 0.0 && a == 0.0);
    QuadratureSpec q = spec.with_rule(de ? EndpointRule::double_exponential : EndpointRule::gauss);
    parts.push_back(integrate(integrand, a, b, q).value);
  }
  return kernels::pairwise_sum(parts);
}

RadialProfile radial_convolve(const RingKernel& K, const RadialProfile& f, const Grid& out_grid,
                              double tail_exponent, const QuadratureSpec& spec) {
  std::vector<double> v(out_grid.size());
  for (std::size_t i = 0; i < out_grid.size(); ++i) v[i] = radial_convolve_at(K, f, out_grid[i], spec);
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) tail_exponent = -kInf;
  return RadialProfile::sampled(f.dim(), out_grid, std::move(v), tail_exponent);
}

RadialProfile radial_convolve(const RingKernel& K, const RadialProfile& f, const Grid& out_grid,
                              const QuadratureSpec& spec) {
  TailBehavior t = f.tail();
  double tail = t.kind == TailKind::power ? t.exponent : -kInf;
  if (std::isfinite(K.support)) {
    // compact kernel: the tail of f survives
  } else {
    tail = std::max(tail, K.decay);
  }
  return radial_convolve(K, f, out_grid, tail, spec);
}

Grid default_operator_grid(const RadialProfile& f) {
  double L = f.scale();
  if (const SampledData* d = f.sampled_data()) return Grid::log_uniform(d->radii.front(), d->radii.back(), static_cast<int>(d->radii.size()));
  return Grid::log_uniform(1e-3 * L, 64.0 * L, static_cast<int>(std::ceil(std::log10(64e3) * 40.0)) + 1);
}

RadialProfile riesz_potential(const RadialProfile& f, double s, const Grid& out_grid,
                              const QuadratureSpec& spec) {
  const int n = f.dim();
  check_riesz_order(n, s);
  TailBehavior t = f.tail();
  if (t.kind == TailKind::power && !(t.exponent < -s))
    throw DomainError("Riesz potential diverges: need int |f| r^{s-1} dr < inf at infinity");
  RingKernel K = RingKernel::riesz(n, s);
  double tail = std::max(s - n, t.kind == TailKind::power ? t.exponent + s : -kInf);
  return radial_convolve(K, f, out_grid, tail, spec);
}

RadialProfile riesz_potential(const RadialProfile& f, double s) {
  return riesz_potential(f, s, default_operator_grid(f));
}

RadialProfile riesz_potential_spectral(const RadialProfile& f, double s, const Grid& out_grid) {
  check_riesz_order(f.dim(), s);
  return apply_multiplier(f, Multiplier::power(-s), out_grid);
}

RadialProfile bessel_convolve(const RadialProfile& f, double s, const Grid& out_grid,
                              const QuadratureSpec& spec) {
  RingKernel K = RingKernel::bessel(f.dim(), s);
  return radial_convolve(K, f, out_grid, spec);
}

RadialProfile bessel_convolve(const RadialProfile& f, double s) {
  return bessel_convolve(f, s, default_operator_grid(f));
}

RadialProfile bessel_convolve_spectral(const RadialProfile& f, double s, const Grid& out_grid) {
  if (!(s > 0.0) || !(s < f.dim())) throw DomainError("Bessel potential requires 0 < s < n");
  return apply_multiplier(f, Multiplier::bessel(s), out_grid);
}

double indicator_convolve(const RadialProfile& f, double R, double rho, const QuadratureSpec& spec) {
  if (!(rho >= 0.0)) throw DomainError("indicator_convolve: rho must be >= 0");
  return radial_convolve_at(RingKernel::indicator(f.dim(), R), f, rho, spec);
}

int default_difference_order(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("difference order needs s > 0");
  if (is_odd_integer(s)) return static_cast<int>(s);
  return static_cast<int>(std::floor(s)) + 1;
}

FracDiffScheme FracDiffScheme::make(int n, double s, std::optional<int> l, std::vector<double> eps) {
  if (n < 1) throw DomainError("FracDiffScheme: dimension must be >= 1");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("FracDiffScheme: s must be > 0");
  FracDiffScheme sc;
  sc.n = n;
  sc.s = s;
  sc.l = l ? *l : default_difference_order(s);
  if (sc.l < 1) throw DomainError("FracDiffScheme: l must be >= 1");
  if (!(sc.l > s) && !(sc.l == s && is_odd_integer(s)))
    throw DomainError("FracDiffScheme: need l > s (l = s only for odd integer s)");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw DomainError("FracDiffScheme: eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("FracDiffScheme: eps sequence must decrease");
  }
  sc.eps_sequence = std::move(eps);
  return sc;
}

double hypersingular_raw(const RadialProfile& u, double s, int l, double rho, double eps,
                         const QuadratureSpec& spec) {
  spec.validate();
  if (!(s > 0.0) || l < 1 || (!(l > s) && !(l == s && is_odd_integer(s))))
    throw DomainError("hypersingular integral needs 0 < s < l (or l = s odd)");
  if (!(rho >= 0.0) || !std::isfinite(rho) || !(eps >= 0.0))
    throw DomainError("hypersingular integral needs rho >= 0 and eps >= 0");
  if (u.is_zero()) return 0.0;
  const int n = u.dim();
  const double q = 2.0 * std::ceil(0.5 * l);  // Phi(t) = O(t^q) as t -> 0
  std::vector<double> coeff(l + 1);
  {
    double c = 1.0;
    for (int j = 0; j <= l; ++j) {
      coeff[j] = (j % 2 == 0 ? 1.0 : -1.0) * c;
      c = c * (l - j) / (j + 1);
    }
  }
  const double L = u.scale();
  const std::vector<double> breaks = smoothness_breaks(u);
  double dist = 0.25 * L;
  for (double f : breaks) dist = std::min(dist, 0.5 * std::fabs(rho - f));
  if (rough_origin(u)) dist = std::min(dist, 0.5 * rho);
  dist = std::max(dist, 1e-6 * L);
  const double t1 = dist / l;
  const double u_rho = u(rho);
  // Absolute tolerance from the size of u: D^s u may vanish at isolated rho
  // while the pieces below stay of order sup|u| / L^s.
  QuadratureSpec ospec = spec;
  {
    double top = std::isfinite(reach(u)) ? reach(u) : 8.0 * L;
    double mag = std::fabs(u_rho);
    for (int i = 0; i <= 64; ++i) mag = std::max(mag, std::fabs(u(top * i / 64.0)));
    // The l-th difference cancels O(1) terms down to O(t^q): below ~1e-9 of
    // sup|u| / L^s the integrand is roundoff.
    ospec.abs_tol = std::max(spec.abs_tol, 0.1 * std::max(spec.rel_tol, 1e-9) * mag * std::pow(L, -s));
  }
  std::vector<double> parts;

  // Small steps: all spheres of the difference share one fixed polar rule,
  // so the O(t^q) combination is formed before integrating over angles.
  if (eps < t1) {
    const GaussRule& gl = gauss_legendre(64);
    const double Bn = n >= 2 ? polar_normalizer(n) : 1.0;
    // Phi(t); *mag receives the size of the terms that cancel in it.
    auto phi_with = [&](double t, double* mag) {
      double acc = 0.0, absacc = std::fabs(coeff[l] * u_rho);
      if (n == 1 || rho == 0.0) {
        for (int j = 0; j < l; ++j) {
          double h = (l - j) * t;
          double v = coeff[j] * (n == 1 ? 0.5 * (u(std::fabs(rho - h)) + u(rho + h)) : u(h));
          acc += v;
          absacc += std::fabs(v);
        }
        if (mag) *mag = absacc;
        return acc + coeff[l] * u_rho;
      }
      absacc = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double th = 0.5 * kPi * (gl.nodes[i] + 1.0);
        double inner = coeff[l] * u_rho, inner_abs = std::fabs(inner);
        for (int j = 0; j < l; ++j) {
          double v = coeff[j] * u(sphere_point_radius(rho, (l - j) * t, th));
          inner += v;
          inner_abs += std::fabs(v);
        }
        double w = n == 2 ? 1.0 : std::pow(std::sin(th), n - 2);
        acc += gl.weights[i] * w * inner;
        absacc += gl.weights[i] * w * inner_abs;
      }
      if (mag) *mag = 0.5 * kPi * absacc / Bn;
      return 0.5 * kPi * acc / Bn;
    };
    auto phi = [&](double t) { return phi_with(t, nullptr); };
    // Below eps_min, Phi is replaced by a t^q + b t^{q+2}.  Halve from t1
    // while Phi stays well above the roundoff of its cancelling terms: the
    // replacement error shrinks with eps_min, the cancellation noise grows.
    double eps_min = t1;
    const double eps_floor = t1 * std::pow(10.0, -12.0 / (q + 2.0));
    while (eps_min > eps_floor && eps_min > eps) {
      double mag = 0.0;
      double p = phi_with(0.25 * eps_min, &mag);
      if (!(std::fabs(p) > 1e6 * kEpsilon * mag)) break;
      eps_min *= 0.5;
    }
    const double a = std::max(eps, eps_min);
    // x = log t: integrand e^{-s x} Phi(e^x)
    auto g = [&](double x) {
      double t = std::exp(x);
      return std::exp(-s * x) * phi(t);
    };
    parts.push_back(integrate(g, std::log(a), std::log(t1), ospec).value);
    if (eps < eps_min) {
      const double p1 = phi(eps_min), p2 = phi(0.5 * eps_min);
      const double A = (std::pow(2.0, q + 2.0) * p2 - p1) / 3.0, B = p1 - A;
      const double x = eps / eps_min;
      double below = A * (1.0 - std::pow(x, q - s)) / (q - s) + B * (1.0 - std::pow(x, q + 2.0 - s)) / (q + 2.0 - s);
      parts.push_back(below * std::pow(eps_min, -s));
    }
  }

  // Larger steps: each sphere mean separately.
  const double T = std::max(eps, t1);
  const double R = reach(u);
  for (int j = 0; j < l; ++j) {
    const double m = l - j;
    const double a = m * T;
    double top = rho + R;
    if (!(top > a)) continue;
    std::vector<double> bp;
    for (double f : breaks) {
      for (double h : {std::fabs(rho - f), rho + f})
        if (h > a && h < top) bp.push_back(h);
    }
    if (rough_origin(u) && rho > a && rho < top) bp.push_back(rho);
    // Sphere means are weighted by up to a^{-1-s}: their own tolerance must
    // sit below the outer absolute target after that amplification.
    QuadratureSpec ispec = inner_spec(spec);
    ispec.rel_tol = std::max(1e-13, 1e-3 * spec.rel_tol);
    ispec.abs_tol = std::max(1e-300, 1e-2 * ospec.abs_tol * std::pow(a, 1.0 + s));
    auto G = [&](double h) { return std::pow(h, -1.0 - s) * sphere_mean(u, rho, h, ispec); };
    double val;
    if (std::isfinite(top)) {
      val = integrate(G, a, top, ospec, bp).value;
    } else {
      double anchor = std::max(a, rho + u.sampled_data()->radii.back());
      val = 0.0;
      if (anchor > a) val += integrate(G, a, anchor, ospec, bp).value;
      val += integrate(G, anchor, kInf, ospec.with_rule(EndpointRule::double_exponential)).value;
    }
    parts.push_back(coeff[j] * std::pow(m, s) * val);
  }
  parts.push_back(coeff[l] * u_rho * std::pow(T, -s) / s);
  return surface_area(n) * kernels::pairwise_sum(parts);
}

FracDiffScheme calibrate(const FracDiffScheme& scheme) {
  FracDiffScheme out = FracDiffScheme::make(scheme.n, scheme.s, scheme.l, scheme.eps_sequence);
  const int n = scheme.n;
  RadialProfile g = RadialProfile::gaussian(n, 1.0);
  const std::vector<double> pts{0.05, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
  SpectralOptions opt;
  opt.r_max = 4.0;
  opt.max_growth = scheme.s;
  SpectralRepresentation rep(g, opt);
  std::vector<double> S = rep.inverse(Multiplier::power(scheme.s), pts);
  QuadratureSpec q;
  q.rel_tol = 1e-9;
  q.abs_tol = 1e-14;
  std::vector<double> H(pts.size()), hs(pts.size()), hh(pts.size()), ss(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    H[i] = hypersingular_raw(g, scheme.s, scheme.l, pts[i], 0.0, q);
    hs[i] = H[i] * S[i];
    hh[i] = H[i] * H[i];
    ss[i] = S[i] * S[i];
  }
  double shh = kernels::pairwise_sum(hh), shs = kernels::pairwise_sum(hs), sss = kernels::pairwise_sum(ss);
  if (!(shh > 1e-24 * sss)) throw DomainError("calibration: hypersingular integral vanishes for this (s, l)");
  double c = shs / shh;
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, std::fabs(c * H[i] - S[i]));
    peak = std::max(peak, std::fabs(S[i]));
  }
  out.calibration_residual = worst / peak;
  if (!(out.calibration_residual < 1e-3))
    throw DomainError("calibration: hypersingular integral is degenerate for this (s, l)");
  out.calibration_constant = c;
  return out;
}

namespace {

void check_scheme(const RadialProfile& u, double s, const FracDiffScheme& scheme) {
  if (scheme.n != u.dim() || scheme.s != s)
    throw DomainError("FracDiffScheme was built for a different (n, s)");
  if (!(scheme.l > s) && !(scheme.l == s && is_odd_integer(s)))
    throw DomainError("fractional derivative needs s < l");
}

}  // namespace

RadialProfile frac_derivative(const RadialProfile& u, double s, const FracDiffScheme& scheme,
                              DiffMethod method, const Grid& out_grid, const QuadratureSpec& spec) {
  check_scheme(u, s, scheme);
  if (method == DiffMethod::spectral) return apply_multiplier(u, Multiplier::power(s), out_grid);
  if (!scheme.calibrated()) throw StateError("hypersingular derivative needs a calibrated scheme");
  return truncated_derivative(u, s, 0.0, scheme, out_grid, spec);
}

RadialProfile frac_derivative(const RadialProfile& u, double s, const FracDiffScheme& scheme,
                              DiffMethod method) {
  return frac_derivative(u, s, scheme, method, default_operator_grid(u));
}

RadialProfile truncated_derivative(const RadialProfile& u, double s, double eps,
                                   const FracDiffScheme& scheme, const Grid& out_grid,
                                   const QuadratureSpec& spec) {
  check_scheme(u, s, scheme);
  if (!scheme.calibrated()) throw StateError("hypersingular derivative needs a calibrated scheme");
  const double c = *scheme.calibration_constant;
  std::vector<double> v(out_grid.size());
  for (std::size_t i = 0; i < out_grid.size(); ++i)
    v[i] = u.is_zero() ? 0.0 : c * hypersingular_raw(u, s, scheme.l, out_grid[i], eps, spec);
  bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  double tail = zero ? -kInf : multiplier_tail_exponent(u.dim(), u.tail(), false, Multiplier::power(s));
  if (eps > 0.0 && !zero) {
    // D_eps u ~ -c' u + (far field) at infinity: no faster than u itself
    TailBehavior t = u.tail();
    if (t.kind == TailKind::power) tail = std::max(tail, t.exponent);
  }
  return RadialProfile::sampled(u.dim(), out_grid, std::move(v), tail);
}

namespace {

RadialProfile dense_riesz(const RadialProfile& u, double s, const QuadratureSpec& spec) {
  const double L = u.scale();
  return riesz_potential(u, s, Grid::log_uniform(1e-3 * L, 1e3 * L, 601), spec);
}

}  // namespace

RadialProfile truncated_inversion(const RadialProfile& u, double s, double eps,
                                  const FracDiffScheme& scheme, const Grid& out_grid,
                                  const QuadratureSpec& spec) {
  check_scheme(u, s, scheme);
  if (!scheme.calibrated()) throw StateError("truncated inversion needs a calibrated scheme");
  if (!(eps > 0.0)) throw DomainError("truncated inversion needs eps > 0");
  if (u.is_zero()) return RadialProfile::sampled(u.dim(), out_grid, std::vector<double>(out_grid.size(), 0.0), -kInf);
  return truncated_derivative(dense_riesz(u, s, spec), s, eps, scheme, out_grid, spec);
}

std::vector<RadialProfile> truncated_inversion_sequence(const RadialProfile& u, double s,
                                                        const FracDiffScheme& scheme,
                                                        const Grid& out_grid,
                                                        const QuadratureSpec& spec) {
  check_scheme(u, s, scheme);
  if (!scheme.calibrated()) throw StateError("truncated inversion needs a calibrated scheme");
  std::vector<RadialProfile> out;
  if (u.is_zero()) {
    for (std::size_t i = 0; i < scheme.eps_sequence.size(); ++i)
      out.push_back(RadialProfile::sampled(u.dim(), out_grid, std::vector<double>(out_grid.size(), 0.0), -kInf));
    return out;
  }
  RadialProfile v = dense_riesz(u, s, spec);
  for (double eps : scheme.eps_sequence) out.push_back(truncated_derivative(v, s, eps, scheme, out_grid, spec));
  return out;
}

double sup_relative_error(const RadialProfile& a, const RadialProfile& b,
                          const std::vector<double>& radii) {
  double num = 0.0, den = 0.0;
  for (double r : radii) {
    num = std::max(num, std::fabs(a(r) - b(r)));
    den = std::max(den, std::fabs(b(r)));
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

}  // namespace radlab
