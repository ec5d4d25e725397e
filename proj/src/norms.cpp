#include "radlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radlab/errors.hpp"
#include "radlab/sphere.hpp"
#include "radlab/transforms.hpp"

namespace radlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_nonneg_integer(double x) { return x >= 0.0 && x == std::floor(x); }

// Smallest radius where f0 may be nonzero (sampled data extends to 0).
double lower_end(const RadialProfile& f) { return f.is_sampled() ? 0.0 : f.inner_radius(); }

// int_0^inf |f0|^r r^{c+n-1} dr, divergence checked first.
NormValue radial_power_integral(const RadialProfile& f, double c, double r, const QuadratureSpec& quad) {
  const int n = f.dim();
  if (f.is_zero()) return {};
  const double lo = lower_end(f);
  const double e = f.origin_exponent();
  if (lo == 0.0 && std::isfinite(e) && !(r * e + c + n > 0.0))
    return NormValue::divergent(Divergence::origin, "non-integrable at origin");
  const TailBehavior t = f.tail();
  if (t.kind == TailKind::power && !(r * t.exponent + c + n < 0.0))
    return NormValue::divergent(Divergence::infinity, "non-integrable at infinity");

  auto integrand = [&](double x) {
    double v = std::fabs(f(x));
    if (v == 0.0) return 0.0;
    return std::pow(v, r) * std::pow(x, c + n - 1.0);
  };
  std::vector<double> parts, errs;
  if (const SampledData* d = f.sampled_data()) {
    const double r0 = d->radii.front(), r1 = d->radii.back();
    const double amp = std::fabs(f.amplitude());
    // constant continuation below the first node
    parts.push_back(std::pow(amp * std::fabs(d->values.front()), r) * std::pow(r0, c + n) / (c + n));
    std::vector<double> bp(d->radii.begin() + 1, d->radii.end() - 1);
    QuadResult q = integrate(integrand, r0, r1, quad, bp);
    parts.push_back(q.value);
    errs.push_back(q.error);
    if (t.kind == TailKind::power) {
      double v = std::pow(amp * std::fabs(d->values.back()), r);
      parts.push_back(v * std::pow(r1, c + n) / -(r * t.exponent + c + n));
    }
  } else {
    double hi = f.support_radius();
    std::vector<double> cuts{lo};
    for (double x : f.features())
      if (x > lo && x < hi) cuts.push_back(x);
    if (std::isfinite(hi)) {
      cuts.push_back(hi);
    } else {
      double anchor = std::max(cuts.back(), 0.0) + f.scale();
      cuts.push_back(anchor);
      cuts.push_back(kInf);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // r^{c+n-1} |f0|^r at the origin: a non-polynomial power is an endpoint
    // singularity for Gauss rules.
    const bool singular0 = lo == 0.0 && !(std::isinf(e) || is_nonneg_integer(r * e + c + n - 1.0));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      bool de = (i == 0 && singular0) || (std::isinf(cuts[i + 1]) && t.kind == TailKind::power);
      QuadResult q = integrate(integrand, cuts[i], cuts[i + 1],
                               quad.with_rule(de ? EndpointRule::double_exponential : EndpointRule::gauss));
      parts.push_back(q.value);
      errs.push_back(q.error);
    }
  }
  NormValue out;
  for (double p : parts) out.value += p;
  for (double x : errs) out.error += x;
  return out;
}

// sup_r r^a |f0(r)| by a dense log-grid scan refined with golden sections.
NormValue weighted_sup(const RadialProfile& f, double a) {
  if (f.is_zero()) return {};
  const double lo = lower_end(f);
  const double e = f.origin_exponent();
  if (lo == 0.0 && std::isfinite(e) && a + e < 0.0)
    return NormValue::divergent(Divergence::origin, "unbounded at origin");
  const TailBehavior t = f.tail();
  if (t.kind == TailKind::power && a + t.exponent > 0.0)
    return NormValue::divergent(Divergence::infinity, "unbounded at infinity");

  auto g = [&](double r) { return std::pow(r, a) * std::fabs(f(r)); };
  const double L = f.scale();
  double top;
  if (const SampledData* d = f.sampled_data()) top = d->radii.back();
  else if (std::isfinite(f.support_radius())) top = f.support_radius();
  else if (t.kind == TailKind::power) top = 64.0 * L;
  else top = std::max(f.effective_radius(1e-16), 4.0 * L) * (1.0 + std::max(a, 0.0) / 8.0);
  const double bottom = lo > 0.0 ? lo : std::min(1e-8 * L, 1e-8 * top);
  const int m = 4000;
  const double step = std::log(top / bottom) / m;
  std::vector<double> xs;
  for (int i = 0; i <= m; ++i) xs.push_back(bottom * std::exp(step * i));
  for (double x : f.features()) {
    if (x > bottom && x < top) {
      xs.push_back(x);
      xs.push_back(x * (1.0 - 1e-12));
    }
  }
  if (const SampledData* d = f.sampled_data()) xs.insert(xs.end(), d->radii.begin(), d->radii.end());
  std::sort(xs.begin(), xs.end());
  std::size_t best = 0;
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vals[i] = g(xs[i]);
    if (vals[i] > vals[best]) best = i;
  }
  double value = vals[best];
  if (best > 0 && best + 1 < xs.size()) {
    // golden-section refinement on the bracketing interval
    double lo_x = xs[best - 1], hi_x = xs[best + 1];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi_x - phi * (hi_x - lo_x), x2 = lo_x + phi * (hi_x - lo_x);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 80 && hi_x - lo_x > 1e-14 * hi_x; ++it) {
      if (g1 < g2) {
        lo_x = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo_x + phi * (hi_x - lo_x);
        g2 = g(x2);
      } else {
        hi_x = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi_x - phi * (hi_x - lo_x);
        g1 = g(x1);
      }
    }
    value = std::max({value, g1, g2});
  }
  // limits at the ends: r^{a+e} with a + e = 0 tends to a constant at 0, and
  // a power tail with a + tau = 0 to a constant at infinity
  if (const SampledData* d = f.sampled_data()) {
    if (t.kind == TailKind::power && a + t.exponent == 0.0)
      value = std::max(value, std::fabs(f.amplitude() * d->values.back()) * std::pow(d->radii.back(), a));
  }
  NormValue out;
  out.value = value;
  out.grid_resolution = step;
  return out;
}

}  // namespace

NormValue NormValue::divergent(Divergence where, std::string why) {
  NormValue v;
  v.value = kInf;
  v.divergence = where;
  v.reason = std::move(why);
  return v;
}

void WeightedNormSpec::validate() const {
  if (n < 1) throw DomainError("norm: dimension must be >= 1");
  if (!(p >= 1.0)) throw DomainError("norm: p must be >= 1");
  if (!std::isfinite(a)) throw DomainError("norm: weight exponent must be finite");
}

NormValue weighted_lp_norm(const RadialProfile& f, const WeightedNormSpec& spec, const QuadratureSpec& quad) {
  spec.validate();
  if (f.dim() != spec.n) throw DomainError("norm: profile dimension differs from the norm's");
  if (std::isinf(spec.p)) return weighted_sup(f, spec.a);
  NormValue v = radial_power_integral(f, spec.a * spec.p, spec.p, quad);
  if (!v.finite()) return v;
  const double total = surface_area(spec.n) * v.value;
  NormValue out;
  out.value = std::pow(total, 1.0 / spec.p);
  // d(x^{1/p}) = x^{1/p - 1} dx / p
  out.error = total > 0.0 ? out.value / spec.p * surface_area(spec.n) * v.error / total : 0.0;
  return out;
}

NormValue weighted_power_integral(const RadialProfile& f, double c, double r, const QuadratureSpec& quad) {
  if (!(r > 0.0) || !std::isfinite(c)) throw DomainError("weighted_power_integral: need r > 0 and finite c");
  NormValue v = radial_power_integral(f, c, r, quad);
  if (!v.finite()) return v;
  v.value *= surface_area(f.dim());
  v.error *= surface_area(f.dim());
  return v;
}

NormValue hsp_norm(const RadialProfile& u, double s, double p, const FracDiffScheme& scheme, DiffMethod method) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("hsp_norm: need 1 < p < inf");
  const WeightedNormSpec spec{u.dim(), p, 0.0};
  NormValue a = weighted_lp_norm(u, spec);
  if (!a.finite()) return a;
  if (u.is_zero()) return a;
  RadialProfile d = frac_derivative(u, s, scheme, method);
  NormValue b = weighted_lp_norm(d, spec);
  if (!b.finite()) {
    b.reason = "D^s u: " + b.reason;
    return b;
  }
  NormValue out;
  out.value = a.value + b.value;
  out.error = a.error + b.error;
  return out;
}

NormValue h_s2_fourier_seminorm(const RadialProfile& u, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("Fourier seminorm: need s >= 0");
  if (u.is_zero()) return {};
  const int n = u.dim();
  const double tau = transform_tail_exponent(u);
  if (std::isfinite(tau) && !(2.0 * tau + 2.0 * s + n < 0.0))
    return NormValue::divergent(Divergence::infinity, "Fourier transform decays too slowly");
  SpectralOptions opt;
  opt.max_growth = 2.0 * s + 2.0;
  opt.truncation = 1e-12;
  SpectralRepresentation rep(u, opt);
  const auto& rho = rep.nodes();
  const auto& w = rep.weights();
  const auto& uh = rep.transform();
  std::vector<double> terms(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k)
    terms[k] = w[k] * uh[k] * uh[k] * std::pow(rho[k], 2.0 * s + n - 1.0);
  double sum = 0.0;
  for (double x : terms) sum += x;
  NormValue out;
  out.value = std::sqrt(surface_area(n) * sum);
  if (rep.truncated()) {
    // power-law continuation of |F u|^2 rho^{2s+n-1} beyond rho_max
    double beyond = std::isfinite(tau) ? 2.0 * tau + 2.0 * s + n : -kInf;
    double last = uh.empty() ? 0.0 : uh.back() * uh.back() * std::pow(rho.back(), 2.0 * s + n);
    double extra = std::isfinite(beyond) ? last / -beyond : 0.0;
    out.error = 0.5 * out.value * extra / std::max(sum, 1e-300);
  }
  return out;
}

HolderInterpolation holder_interpolation(const RadialProfile& u, double c, double q, double r, double r_tilde,
                                         const QuadratureSpec& quad) {
  if (!(q < r && r < r_tilde) || !(q > 0.0))
    throw DomainError("Hoelder interpolation needs 0 < q < r < r_tilde");
  HolderInterpolation h;
  h.theta = (r_tilde - r) / (r_tilde - q);
  h.c_tilde = c / (1.0 - h.theta);
  h.lhs = weighted_power_integral(u, c, r, quad);
  NormValue a = weighted_power_integral(u, 0.0, q, quad);
  NormValue b = weighted_power_integral(u, h.c_tilde, r_tilde, quad);
  if (!a.finite()) {
    h.rhs = a;
  } else if (!b.finite()) {
    h.rhs = b;
  } else {
    h.rhs.value = std::pow(a.value, h.theta) * std::pow(b.value, 1.0 - h.theta);
  }
  return h;
}

}  // namespace radlab
