#include "radlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radlab/errors.hpp"
#include "radlab/simd.hpp"
#include "radlab/specfun.hpp"

namespace radlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_even_integer(double a) { return a >= 0.0 && a == std::floor(a) && std::fmod(a, 2.0) == 0.0; }

double order_for(int n) { return 0.5 * n - 1.0; }

// Origin behaviour that makes r^{e+n-1} a non-polynomial endpoint singularity.
bool singular_origin(const RadialProfile& u) {
  double e = u.origin_exponent();
  return std::isfinite(e) && u.inner_radius() == 0.0 && !is_even_integer(e);
}

void check_transformable(const RadialProfile& u, double rho) {
  const int n = u.dim();
  TailBehavior t = u.tail();
  if (t.kind == TailKind::power) {
    if (!(t.exponent < -0.5 * (n + 1)))
      throw DomainError("Fourier integral diverges: tail exponent must be < -(n+1)/2");
    if (rho == 0.0 && !(t.exponent < -n))
      throw DomainError("Fourier transform is singular at rho = 0 for this tail");
  }
  double e = u.origin_exponent();
  if (!(e > -n)) throw DomainError("Fourier integral diverges at the origin");
}

// Composite Gauss-Legendre rule in r for int u0(r) r^{n-1} K(r) dr over the
// bounded part of u's support; a_fine / a_coarse carry w_j u0(r_j) r_j^{n-1}
// for two rules on the same panels (the pair gives an error estimate).
struct RadialRule {
  std::vector<double> r_fine, a_fine, r_coarse, a_coarse;
  double hi = 0.0;  // upper end; the tail beyond is handled separately
};

void add_panel(const RadialProfile& u, double a, double b, int m, std::vector<double>& rs,
               std::vector<double>& as) {
  const std::size_t start = rs.size();
  std::vector<double> w;
  append_gauss_panel(a, b, m, rs, w);
  as.reserve(rs.size());
  const int n = u.dim();
  for (std::size_t j = start; j < rs.size(); ++j)
    as.push_back(w[j - start] * u(rs[j]) * std::pow(rs[j], n - 1));
}

// Panels: [lo, hi] split at features, each piece cut to width <= osc / rho_max
// and <= scale / 8; geometric grading towards 0 for cusp-like origins.
RadialRule build_radial_rule(const RadialProfile& u, double rho_max, int m) {
  RadialRule rule;
  const int mc = std::max(4, m / 2);
  std::vector<double> cuts;
  double lo, hi, max_width;
  const double osc_width = rho_max > 0.0 ? 8.0 / rho_max : kInf;
  if (const SampledData* d = u.sampled_data()) {
    lo = 0.0;
    hi = d->radii.back();
    cuts.push_back(0.0);
    cuts.insert(cuts.end(), d->radii.begin(), d->radii.end());
    max_width = osc_width;
  } else {
    lo = u.inner_radius();
    hi = std::min(u.support_radius(), u.effective_radius(1e-20));
    cuts.push_back(lo);
    for (double f : u.features())
      if (f > lo && f < hi) cuts.push_back(f);
    cuts.push_back(hi);
    max_width = std::min(osc_width, u.scale() / 8.0);
  }
  rule.hi = hi;
  if (!(hi > lo)) return rule;
  const bool graded = !u.is_sampled() && singular_origin(u);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    int k = static_cast<int>(std::ceil((b - a) / max_width));
    if (u.is_sampled() && a > 0.0) k = std::max(k, static_cast<int>(std::ceil(std::log(b / a) / 0.5)));
    k = std::max(k, 1);
    for (int j = 0; j < k; ++j) {
      double pa = a + (b - a) * j / k, pb = j + 1 == k ? b : a + (b - a) * (j + 1) / k;
      if (graded && pa == 0.0) {
        // [0, pb] as geometric panels down to a negligible core.
        double top = pb;
        for (int g = 0; g < 60; ++g) {
          double bot = top * 0.2;
          add_panel(u, bot, top, m, rule.r_fine, rule.a_fine);
          add_panel(u, bot, top, mc, rule.r_coarse, rule.a_coarse);
          top = bot;
          if (top < pb * 1e-16) break;
        }
        continue;
      }
      add_panel(u, pa, pb, m, rule.r_fine, rule.a_fine);
      add_panel(u, pa, pb, mc, rule.r_coarse, rule.a_coarse);
    }
  }
  return rule;
}

double apply_rule(const std::vector<double>& r, const std::vector<double>& a, double nu, double rho,
                  std::vector<double>& buf) {
  buf.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) buf[j] = bessel_lambda(nu, rho * r[j]);
  return kernels::dot(a.data(), buf.data(), a.size());
}

// v * int_{r0}^inf (r/r0)^tau r^{n-1} Lambda_nu(r rho) dr for tau < -(n+1)/2.
HankelValue power_tail(int n, double r0, double v, double tau, double rho) {
  const double nu = order_for(n);
  if (v == 0.0) return {};
  if (rho == 0.0) {
    double val = v * std::pow(r0, n) / -(tau + n) * bessel_lambda(nu, 0.0);
    return {val, 1e-15 * std::fabs(val)};
  }
  // x = r rho: v r0^{-tau} rho^{-(tau+n)} int_{x0}^inf x^{tau+n-1} Lambda_nu(x) dx
  const double x0 = r0 * rho;
  const double pref = v * std::pow(r0, -tau) * std::pow(rho, -(tau + n));
  auto g = [&](double x) { return std::pow(x, tau + n - 1.0) * bessel_lambda(nu, x); };
  int k0 = std::max(1, static_cast<int>(std::floor(x0 / M_PI)) - 1);
  std::vector<double> z = bessel_zeros(nu, k0, 48);
  while (z.back() <= x0) {
    k0 += 40;
    z = bessel_zeros(nu, k0, 48);
  }
  std::size_t first = 0;
  while (z[first] <= x0) ++first;
  const GaussRule& gl = gauss_legendre(20);
  auto half_wave = [&](double a, double b) {
    double h = 0.5 * (b - a), c = 0.5 * (a + b), s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * g(c + h * gl.nodes[i]);
    return h * s;
  };
  // Up to the first zero: smooth unless x0 is small, where x^{tau+n-1} is
  // steep and tanh-sinh handles the near-singular start.
  QuadResult head;
  if (x0 < 1.0) {
    QuadratureSpec q;
    q.rel_tol = 1e-13;
    q.abs_tol = 1e-300;
    q.endpoint_rule = EndpointRule::double_exponential;
    head = integrate(g, x0, z[first], q);
  } else {
    head.value = half_wave(x0, z[first]);
  }
  std::vector<double> partial;
  double acc = head.value;
  partial.push_back(acc);
  for (std::size_t k = first; k + 1 < z.size() && partial.size() < 40; ++k) {
    acc += half_wave(z[k], z[k + 1]);
    partial.push_back(acc);
  }
  Extrapolated ex = wynn_epsilon(partial);
  return {pref * ex.value, std::fabs(pref) * (ex.error + head.error)};
}

HankelValue hankel_sampled(const RadialProfile& u, double rho, const RadialRule& rule,
                           std::vector<double>& buf) {
  const double nu = order_for(u.dim());
  double fine = apply_rule(rule.r_fine, rule.a_fine, nu, rho, buf);
  double coarse = apply_rule(rule.r_coarse, rule.a_coarse, nu, rho, buf);
  HankelValue out{fine, std::fabs(fine - coarse)};
  const SampledData& d = *u.sampled_data();
  TailBehavior t = u.tail();
  if (t.kind == TailKind::power) {
    HankelValue tail = power_tail(u.dim(), d.radii.back(), u.amplitude() * d.values.back(),
                                  d.tail_exponent, rho);
    out.value += tail.value;
    out.error += tail.error;
  }
  return out;
}

HankelValue hankel_analytic(const RadialProfile& u, double rho, const QuadratureSpec& spec) {
  const int n = u.dim();
  const double nu = order_for(n);
  const double lo = u.inner_radius();
  const double hi = std::min(u.support_radius(), u.effective_radius(1e-20));
  if (!(hi > lo)) return {};
  std::vector<double> bp;
  for (double f : u.features())
    if (f > lo && f < hi) bp.push_back(f);
  if (rho > 0.0) {
    int count = static_cast<int>(hi * rho / M_PI) + 2;
    if (count > 0) {
      std::vector<double> z = bessel_zeros(nu, 1, count);
      for (double zk : z) {
        double r = zk / rho;
        if (r > lo && r < hi) bp.push_back(r);
      }
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  auto f = [&](double r) { return u(r) * std::pow(r, n - 1) * bessel_lambda(nu, rho * r); };
  QuadratureSpec q = spec;
  if (singular_origin(u)) q.endpoint_rule = EndpointRule::double_exponential;
  q.max_subdivisions = std::max(q.max_subdivisions, 4 * static_cast<int>(bp.size()) + 64);
  QuadResult res = integrate(f, lo, hi, q, bp);
  return {res.value, res.error};
}

double output_tail_exponent(const RadialProfile& u) {
  const int n = u.dim();
  if (u.has_jump()) return -0.5 * (n + 1);
  if (u.is_sampled()) return -0.5 * (n + 3);
  double e = u.origin_exponent();
  if (std::isfinite(e) && u.inner_radius() == 0.0 && !is_even_integer(e)) return -(n + e);
  if (!u.smooth() && u.tail().kind == TailKind::power) return -0.5 * (n + 3);
  return -kInf;
}

}  // namespace

HankelValue hankel_at(const RadialProfile& u, double rho, const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("hankel_at: rho must be finite and >= 0");
  if (u.is_zero()) return {};
  if (auto* c = std::get_if<Combination>(&u.kind())) {
    HankelValue acc;
    for (const auto& [coef, p] : c->terms) {
      if (coef == 0.0) continue;
      HankelValue h = hankel_at(*p, rho, spec);
      acc.value += coef * h.value;
      acc.error += std::fabs(coef) * h.error;
    }
    return {u.amplitude() * acc.value, std::fabs(u.amplitude()) * acc.error};
  }
  check_transformable(u, rho);
  if (u.is_sampled()) {
    RadialRule rule = build_radial_rule(u, rho, 16);
    std::vector<double> buf;
    return hankel_sampled(u, rho, rule, buf);
  }
  return hankel_analytic(u, rho, spec);
}

TransformResult hankel_fourier_with_errors(const RadialProfile& u, const Grid& out_grid,
                                           const QuadratureSpec& spec) {
  const int n = u.dim();
  std::vector<double> vals(out_grid.size()), errs(out_grid.size());
  if (!u.is_zero()) {
    check_transformable(u, out_grid.front());
    if (u.is_sampled()) {
      RadialRule rule = build_radial_rule(u, out_grid.back(), 16);
      std::vector<double> buf;
      for (std::size_t i = 0; i < out_grid.size(); ++i) {
        HankelValue h = hankel_sampled(u, out_grid[i], rule, buf);
        vals[i] = h.value;
        errs[i] = h.error;
      }
    } else {
      for (std::size_t i = 0; i < out_grid.size(); ++i) {
        HankelValue h = hankel_at(u, out_grid[i], spec);
        vals[i] = h.value;
        errs[i] = h.error;
      }
    }
  }
  double tail = u.is_zero() ? -kInf : output_tail_exponent(u);
  RadialProfile p = RadialProfile::sampled(n, out_grid, std::move(vals), tail);
  return {std::move(p), std::move(errs)};
}

RadialProfile hankel_fourier(const RadialProfile& u, const Grid& out_grid, const QuadratureSpec& spec) {
  return hankel_fourier_with_errors(u, out_grid, spec).profile;
}

RadialProfile hankel_fourier(const RadialProfile& u, const QuadratureSpec& spec) {
  return hankel_fourier(u, default_frequency_grid(u), spec);
}

double transform_tail_exponent(const RadialProfile& u) {
  return u.is_zero() ? -kInf : output_tail_exponent(u);
}

double frequency_cutoff(const RadialProfile& u, double growth, double rel) {
  if (u.is_zero()) return 0.0;
  const int n = u.dim();
  const double nu = order_for(n);
  double L = u.is_sampled() ? u.sampled_data()->radii.back() : u.effective_radius(1e-16);
  if (!(L > 0.0) || !std::isfinite(L)) L = u.scale();
  // Magnitude scale of the integrand: roundoff floor of the transform.
  QuadratureSpec loose;
  loose.rel_tol = 1e-7;
  loose.abs_tol = 1e-300;
  loose.endpoint_rule = singular_origin(u) ? EndpointRule::double_exponential : EndpointRule::gauss;
  auto absf = [&](double r) { return std::fabs(u(r)) * std::pow(r, n - 1); };
  double mass_hi = u.is_sampled() ? u.sampled_data()->radii.back() : L;
  double mass = integrate(absf, u.is_sampled() ? 0.0 : u.inner_radius(), mass_hi, loose).value *
                bessel_lambda(nu, 0.0);
  auto probe = [&](double rho) {
    try {
      return hankel_at(u, rho, loose).value;
    } catch (const QuadratureFailure& e) {
      return e.partial_estimate();
    }
  };
  double peak = 0.0;
  int below = 0;
  double first_below = 0.0;
  for (int j = 0; j < 400; ++j) {
    double rho = 0.25 / L * std::pow(2.0, j / 4.0);
    double env = 0.0;
    for (int k = 0; k < 4; ++k) env = std::max(env, std::fabs(probe(rho + k * M_PI / (4.0 * L))));
    double weight = std::pow(rho, growth);
    double e = env * weight;
    peak = std::max(peak, e);
    bool negligible = e <= rel * peak || env <= 1e-14 * mass;
    if (negligible) {
      if (below == 0) first_below = rho;
      if (++below >= 4) return first_below;
    } else {
      below = 0;
    }
  }
  throw NumericError("frequency_cutoff: transform does not decay within the scan range");
}

Grid default_frequency_grid(const RadialProfile& u, int nodes_per_decade) {
  if (const SampledData* d = u.sampled_data()) {
    double lo = 1.0 / d->radii.back(), hi = 1.0 / d->radii.front();
    int m = std::max(16, static_cast<int>(std::ceil(std::log10(hi / lo) * nodes_per_decade)) + 1);
    return Grid::log_uniform(lo, hi, m);
  }
  // Log-uniform until the spacing reaches 0.2 / L, uniform beyond: F u
  // oscillates with period ~ 2 pi / L and must stay resolved for interpolation.
  const double lo = 1e-4 / u.scale();
  const double hi = u.has_jump() || !u.smooth() ? 200.0 / u.scale()
                                                 : frequency_cutoff(u, u.dim() - 1.0, 1e-16);
  double L = u.effective_radius(1e-16);
  if (!std::isfinite(L) || !(L > 0.0)) L = u.scale();
  const double ratio = std::pow(10.0, 1.0 / nodes_per_decade);
  const double dmax = 0.2 / L;
  std::vector<double> r{lo};
  while (r.back() < hi) {
    double step = std::min(r.back() * (ratio - 1.0), dmax);
    r.push_back(r.back() + step);
  }
  r.back() = std::max(r.back(), hi);
  return Grid::explicit_radii(std::move(r));
}

Multiplier Multiplier::identity() { return {[](double) { return 1.0; }, 0.0, true, 0.0}; }

Multiplier Multiplier::power(double s) {
  if (!std::isfinite(s)) throw DomainError("multiplier exponent must be finite");
  return {[s](double rho) { return std::pow(rho, s); }, s, is_even_integer(s), s};
}

Multiplier Multiplier::bessel(double s) {
  if (!std::isfinite(s)) throw DomainError("multiplier exponent must be finite");
  return {[s](double rho) { return std::pow(1.0 + rho * rho, -0.5 * s); }, 0.0, true, -s};
}

Multiplier Multiplier::custom(std::function<double(double)> fn, double kappa, double growth,
                              bool smooth_at_origin) {
  if (!fn) throw DomainError("multiplier function is empty");
  return {std::move(fn), kappa, smooth_at_origin, growth};
}

double multiplier_tail_exponent(int n, const TailBehavior& t, bool zero_mean, const Multiplier& m) {
  const double kappa = m.origin_exponent;
  double from_input = t.kind == TailKind::power ? t.exponent - kappa : -kInf;
  if (m.smooth_at_origin) return from_input;
  double from_symbol = -(n + kappa + (zero_mean ? 2.0 : 0.0));
  return std::max(from_input, from_symbol);
}

SpectralRepresentation::SpectralRepresentation(const RadialProfile& u, const SpectralOptions& opt)
    : n_(u.dim()), nu_(order_for(u.dim())), tail_(u.tail()) {
  if (!(opt.truncation > 0.0) || !(opt.rho_cap > 0.0) || opt.panel_nodes < 4)
    throw DomainError("SpectralOptions: invalid settings");
  if (u.is_zero()) {
    r_max_ = opt.r_max;
    zero_mean_ = true;
    return;
  }
  check_transformable(u, 1.0);
  double L = u.is_sampled() ? u.sampled_data()->radii.back() : u.effective_radius(1e-16);
  if (!std::isfinite(L) || !(L > 0.0)) L = u.scale();
  r_max_ = opt.r_max > 0.0 ? opt.r_max : 8.0 * L;
  const double growth = opt.max_growth + n_ - 1;
  double cap = opt.rho_cap / L;
  double cutoff;
  try {
    cutoff = frequency_cutoff(u, growth, opt.truncation);
  } catch (const NumericError&) {
    cutoff = kInf;
  }
  truncated_ = cutoff > cap;
  rho_max_ = std::min(cutoff, cap);

  // Frequency panels: widths resolve Lambda(r rho) for r <= r_max and the
  // oscillation of F u (period ~ 2 pi / L); the first panel is graded.
  const int m = opt.panel_nodes;
  const double width = std::min(6.0 / (r_max_ + L), rho_max_ / 4.0);
  const int panels = std::max(1, static_cast<int>(std::ceil(rho_max_ / width)));
  const double h = rho_max_ / panels;
  double top = h;
  for (int g = 0; g < 80 && top > h * 1e-18; ++g) {
    append_gauss_panel(top * 0.2, top, m, rho_, w_);
    top *= 0.2;
  }
  for (int k = 1; k < panels; ++k) append_gauss_panel(k * h, (k + 1) * h, m, rho_, w_);
  // Sort ascending (graded panels were appended top-down).
  std::vector<std::pair<double, double>> nw(rho_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i) nw[i] = {rho_[i], w_[i]};
  std::sort(nw.begin(), nw.end());
  for (std::size_t i = 0; i < nw.size(); ++i) {
    rho_[i] = nw[i].first;
    w_[i] = nw[i].second;
  }

  uhat_.assign(rho_.size(), 0.0);
  const bool rule_ok = u.is_sampled() || !std::holds_alternative<Combination>(u.kind());
  if (rule_ok) {
    RadialRule rule = build_radial_rule(u, rho_max_, m);
    std::vector<double> buf;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      uhat_[i] = apply_rule(rule.r_fine, rule.a_fine, nu_, rho_[i], buf);
      if (u.is_sampled() && tail_.kind == TailKind::power) {
        const SampledData& d = *u.sampled_data();
        uhat_[i] += power_tail(n_, d.radii.back(), u.amplitude() * d.values.back(), d.tail_exponent,
                               rho_[i])
                        .value;
      }
    }
    std::vector<double> zero_buf;
    double mean = apply_rule(rule.r_fine, rule.a_fine, nu_, 0.0, zero_buf);
    double abs_mass = 0.0;
    for (double a : rule.a_fine) abs_mass += std::fabs(a);
    zero_mean_ = std::fabs(mean) <= 1e-12 * abs_mass && tail_.kind != TailKind::power;
  } else {
    QuadratureSpec q;
    q.rel_tol = 1e-12;
    q.abs_tol = 1e-300;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      try {
        uhat_[i] = hankel_at(u, rho_[i], q).value;
      } catch (const QuadratureFailure& e) {
        uhat_[i] = e.partial_estimate();
      }
    }
    zero_mean_ = false;
  }
}

double SpectralRepresentation::inverse_at(const Multiplier& m, double r) const {
  return inverse(m, std::vector<double>{r}).front();
}

std::vector<double> SpectralRepresentation::inverse(const Multiplier& m,
                                                    const std::vector<double>& radii) const {
  std::vector<double> out(radii.size(), 0.0);
  if (rho_.empty()) return out;
  std::vector<double> a(rho_.size()), b(rho_.size());
  for (std::size_t k = 0; k < rho_.size(); ++k)
    a[k] = w_[k] * m.fn(rho_[k]) * uhat_[k] * std::pow(rho_[k], n_ - 1);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("inverse transform needs finite r >= 0");
    for (std::size_t k = 0; k < rho_.size(); ++k) b[k] = bessel_lambda(nu_, r * rho_[k]);
    out[i] = kernels::dot(a.data(), b.data(), a.size());
  }
  return out;
}

double SpectralRepresentation::truncation_estimate(const Multiplier& m) const {
  if (rho_.empty()) return 0.0;
  double total = 0.0, last = 0.0;
  const std::size_t tail_from = rho_.size() > 32 ? rho_.size() - 32 : 0;
  for (std::size_t k = 0; k < rho_.size(); ++k) {
    double v = std::fabs(w_[k] * m.fn(rho_[k]) * uhat_[k]) * std::pow(rho_[k], n_ - 1);
    total += v;
    if (k >= tail_from) last += v;
  }
  return total > 0.0 ? last / total : 0.0;
}

RadialProfile apply_multiplier(const SpectralRepresentation& rep, const Multiplier& m,
                               const Grid& out_grid) {
  std::vector<double> v = rep.inverse(m, out_grid.radii());
  double tail = multiplier_tail_exponent(rep.dim(), rep.input_tail(), rep.input_zero_mean(), m);
  bool all_zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  RadialProfile p = RadialProfile::sampled(rep.dim(), out_grid, std::move(v), all_zero ? -kInf : tail);
  if (rep.truncated()) p = p.with_note("spectral representation truncated at rho_max");
  return p;
}

RadialProfile apply_multiplier(const RadialProfile& u, const Multiplier& m, const Grid& out_grid) {
  SpectralOptions opt;
  opt.r_max = out_grid.back();
  opt.max_growth = std::max(0.0, m.growth);
  SpectralRepresentation rep(u, opt);
  return apply_multiplier(rep, m, out_grid);
}

}  // namespace radlab
