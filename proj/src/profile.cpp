#include "radlab/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "radlab/errors.hpp"
#include "radlab/specfun.hpp"

namespace radlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Smooth step: 0 at x <= 0, 1 at x >= 1.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double smooth_step_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  double S = smooth_step(x);
  return S * (1.0 - S) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)));
}

bool is_even_integer(double a) { return a >= 0.0 && a == std::floor(a) && std::fmod(a, 2.0) == 0.0; }

// Lagrange interpolation (value and d/dx) through up to 4 points.
void lagrange(const double* x, const double* y, int m, double t, double& val, double& der) {
  val = 0.0;
  der = 0.0;
  for (int i = 0; i < m; ++i) {
    double L = 1.0, dL = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      double den = x[i] - x[j];
      dL = dL * (t - x[j]) / den + L / den;
      L *= (t - x[j]) / den;
    }
    val += L * y[i];
    der += dL * y[i];
  }
}

std::size_t stencil_start(std::size_t lo, std::size_t m) {
  const std::size_t width = std::min<std::size_t>(4, m);
  std::size_t i0 = lo >= 1 ? lo - 1 : 0;
  if (i0 + width > m) i0 = m - width;
  return i0;
}

// Leave-one-out choice between log-space and value-space interpolation.
void choose_modes(SampledData& d) {
  const std::size_t m = d.radii.size();
  d.log_mode.assign(m > 0 ? m - 1 : 0, 0);
  for (std::size_t lo = 0; lo + 1 < m; ++lo) {
    const std::size_t i0 = stencil_start(lo, m);
    const std::size_t w = std::min<std::size_t>(4, m);
    bool one_sign = true;
    for (std::size_t k = i0; k < i0 + w; ++k) {
      double v = d.values[k];
      if (v == 0.0 || (v > 0.0) != (d.values[i0] > 0.0)) one_sign = false;
    }
    if (!one_sign) continue;
    if (w < 4) {
      d.log_mode[lo] = 1;
      continue;
    }
    double err_log = 0.0, err_val = 0.0;
    for (std::size_t j = i0 + 1; j + 1 < i0 + w; ++j) {
      double xs[3], yl[3], yv[3];
      int c = 0;
      for (std::size_t k = i0; k < i0 + w; ++k) {
        if (k == j) continue;
        xs[c] = d.log_radii[k];
        yl[c] = d.log_abs[k];
        yv[c] = d.values[k];
        ++c;
      }
      double pl, pv, unused;
      lagrange(xs, yl, 3, d.log_radii[j], pl, unused);
      lagrange(xs, yv, 3, d.log_radii[j], pv, unused);
      double sgn = d.values[j] > 0.0 ? 1.0 : -1.0;
      err_log = std::max(err_log, std::fabs(sgn * std::exp(pl) - d.values[j]));
      err_val = std::max(err_val, std::fabs(pv - d.values[j]));
    }
    d.log_mode[lo] = err_log <= err_val ? 1 : 0;
  }
}

void sampled_eval(const SampledData& d, double r, double& val, double& der) {
  const auto& R = d.radii;
  const auto& V = d.values;
  const std::size_t m = R.size();
  if (r <= R.front()) {
    val = V.front();
    der = 0.0;
    return;
  }
  if (r >= R.back()) {
    if (r == R.back()) {
      val = V.back();
      der = 0.0;
      return;
    }
    if (d.tail_exponent == -kInf || V.back() == 0.0) {
      val = der = 0.0;
      return;
    }
    val = V.back() * std::pow(r / R.back(), d.tail_exponent);
    der = d.tail_exponent * val / r;
    return;
  }
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(R.begin(), R.end(), r) - R.begin());
  std::size_t lo = hi - 1;
  const int width = static_cast<int>(std::min<std::size_t>(4, m));
  const std::size_t i0 = stencil_start(lo, m);
  const double x = std::log(r);
  double dx_val, dx_der;
  if (d.log_mode[lo]) {
    lagrange(&d.log_radii[i0], &d.log_abs[i0], width, x, dx_val, dx_der);
    double sgn = V[i0] > 0.0 ? 1.0 : -1.0;
    val = sgn * std::exp(dx_val);
    der = val * dx_der / r;
  } else {
    lagrange(&d.log_radii[i0], &V[i0], width, x, dx_val, dx_der);
    val = dx_val;
    der = dx_der / r;
  }
  if (R[lo] == r) val = V[lo];
}

}  // namespace

RadialProfile::RadialProfile(int dim, Kind kind, double amplitude)
    : dim_(dim), kind_(std::move(kind)), amplitude_(amplitude) {
  if (dim < 1) throw DomainError("profile dimension must be >= 1");
  if (!std::isfinite(amplitude)) throw DomainError("profile amplitude must be finite");
  std::visit(overloaded{
                 [](const Gaussian& g) {
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
                     throw DomainError("Gaussian sigma must be positive");
                 },
                 [](const SmoothBump& b) {
                   if (!(b.width > 0.0) || !(b.center >= 0.0) || !std::isfinite(b.center + b.width))
                     throw DomainError("SmoothBump needs width > 0 and center >= 0");
                   if (b.center > 0.0 && b.center < b.width)
                     throw DomainError("SmoothBump center must be 0 or >= width");
                 },
                 [](const PowerCutoff& p) {
                   if (!(p.cutoff > 0.0) || !std::isfinite(p.exponent) || !std::isfinite(p.cutoff))
                     throw DomainError("PowerCutoff needs finite exponent and cutoff > 0");
                 },
                 [](const AnnulusIndicator& a) {
                   if (!(a.inner >= 0.0) || !(a.outer > a.inner) || !std::isfinite(a.outer))
                     throw DomainError("AnnulusIndicator needs 0 <= inner < outer < inf");
                 },
                 [](const ConstantProfile&) {},
                 [](const BesselMode& b) {
                   if (!(b.nu >= -0.5) || !(b.zero > 0.0) || !(b.radius > 0.0))
                     throw DomainError("BesselMode needs nu >= -1/2, zero > 0, radius > 0");
                 },
                 [](const Sampled& s) {
                   if (!s.data) throw DomainError("Sampled profile without data");
                 },
                 [dim](const Combination& c) {
                   for (const auto& t : c.terms) {
                     if (!t.second || t.second->dim() != dim)
                       throw DomainError("Combination terms must share the dimension");
                     if (!std::isfinite(t.first)) throw DomainError("non-finite coefficient");
                   }
                 },
             },
             kind_);
}

RadialProfile RadialProfile::gaussian(int n, double sigma) { return {n, Gaussian{sigma}}; }
RadialProfile RadialProfile::smooth_bump(int n, double c, double w) { return {n, SmoothBump{c, w}}; }
RadialProfile RadialProfile::power_cutoff(int n, double a, double R) { return {n, PowerCutoff{a, R}}; }
RadialProfile RadialProfile::annulus(int n, double r1, double r2) {
  return {n, AnnulusIndicator{r1, r2}};
}
RadialProfile RadialProfile::constant(int n, double v) { return {n, ConstantProfile{}, v}; }
RadialProfile RadialProfile::zero(int n) { return {n, ConstantProfile{}, 0.0}; }
RadialProfile RadialProfile::bessel_mode(int n, double nu, double z, double R, double amp) {
  return {n, BesselMode{nu, z, R}, amp};
}

RadialProfile RadialProfile::sampled(int n, const Grid& grid, std::vector<double> values,
                                     double tail_exponent) {
  if (values.size() != grid.size()) throw DomainError("sampled values must match the grid size");
  if (std::isnan(tail_exponent) || tail_exponent == kInf)
    throw DomainError("tail exponent must be finite or -inf");
  auto d = std::make_shared<SampledData>();
  d->radii = grid.radii();
  d->values = std::move(values);
  d->tail_exponent = tail_exponent;
  for (double v : d->values)
    if (!std::isfinite(v)) throw DomainError("sampled values must be finite");
  d->log_radii.resize(d->radii.size());
  d->log_abs.resize(d->radii.size());
  for (std::size_t i = 0; i < d->radii.size(); ++i) {
    d->log_radii[i] = std::log(d->radii[i]);
    d->log_abs[i] = d->values[i] == 0.0 ? -kInf : std::log(std::fabs(d->values[i]));
  }
  choose_modes(*d);
  return {n, Sampled{std::move(d)}};
}

RadialProfile RadialProfile::combination(int n,
                                         const std::vector<std::pair<double, RadialProfile>>& terms) {
  Combination c;
  for (const auto& [coef, p] : terms)
    c.terms.emplace_back(coef, std::make_shared<const RadialProfile>(p));
  return {n, std::move(c)};
}

const SampledData* RadialProfile::sampled_data() const noexcept {
  if (auto* s = std::get_if<Sampled>(&kind_)) return s->data.get();
  return nullptr;
}

double RadialProfile::operator()(double r) const {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("profile evaluation needs finite r >= 0");
  if (amplitude_ == 0.0) return 0.0;
  double v = std::visit(
      overloaded{
          [&](const Gaussian& g) { return std::exp(-0.5 * (r * r) / (g.sigma * g.sigma)); },
          [&](const SmoothBump& b) {
            double t = (r - b.center) / b.width;
            if (std::fabs(t) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - t * t));
          },
          [&](const PowerCutoff& p) {
            double t = r / p.cutoff;
            if (t >= 2.0) return 0.0;
            double psi = t <= 1.0 ? 1.0 : smooth_step(2.0 - t);
            if (r == 0.0) return p.exponent > 0.0 ? 0.0 : (p.exponent == 0.0 ? 1.0 : kInf);
            return std::pow(r, p.exponent) * psi;
          },
          [&](const AnnulusIndicator& a) { return (r >= a.inner && r <= a.outer) ? 1.0 : 0.0; },
          [&](const ConstantProfile&) { return 1.0; },
          [&](const BesselMode& b) {
            if (r >= b.radius) return 0.0;
            double k = b.zero / b.radius;
            return std::pow(k, b.nu) * bessel_lambda(b.nu, k * r);
          },
          [&](const Sampled& s) {
            double val, der;
            sampled_eval(*s.data, r, val, der);
            return val;
          },
          [&](const Combination& c) {
            double acc = 0.0;
            for (const auto& [coef, p] : c.terms) acc += coef * (*p)(r);
            return acc;
          },
      },
      kind_);
  return amplitude_ * v;
}

double RadialProfile::derivative(double r) const {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("profile evaluation needs finite r >= 0");
  if (amplitude_ == 0.0) return 0.0;
  double v = std::visit(
      overloaded{
          [&](const Gaussian& g) {
            double s2 = g.sigma * g.sigma;
            return -r / s2 * std::exp(-0.5 * r * r / s2);
          },
          [&](const SmoothBump& b) {
            double t = (r - b.center) / b.width;
            if (std::fabs(t) >= 1.0) return 0.0;
            double q = 1.0 - t * t;
            return std::exp(1.0 - 1.0 / q) * (-2.0 * t / (q * q)) / b.width;
          },
          [&](const PowerCutoff& p) {
            double t = r / p.cutoff;
            if (t >= 2.0) return 0.0;
            double psi = t <= 1.0 ? 1.0 : smooth_step(2.0 - t);
            double dpsi = t <= 1.0 ? 0.0 : -smooth_step_deriv(2.0 - t) / p.cutoff;
            if (r == 0.0) return p.exponent > 1.0 || p.exponent == 0.0 ? 0.0 : (p.exponent == 1.0 ? 1.0 : kInf);
            double ra = std::pow(r, p.exponent);
            return p.exponent * ra / r * psi + ra * dpsi;
          },
          [&](const AnnulusIndicator&) { return 0.0; },
          [&](const ConstantProfile&) { return 0.0; },
          [&](const BesselMode& b) {
            if (r >= b.radius) return 0.0;
            // d/dr [r^{-nu} J_nu(kr)] = -k r^{-nu} J_{nu+1}(kr)
            double k = b.zero / b.radius;
            double x = k * r;
            return -k * std::pow(k, b.nu) * x * bessel_lambda(b.nu + 1.0, x);
          },
          [&](const Sampled& s) {
            double val, der;
            sampled_eval(*s.data, r, val, der);
            return der;
          },
          [&](const Combination& c) {
            double acc = 0.0;
            for (const auto& [coef, p] : c.terms) acc += coef * p->derivative(r);
            return acc;
          },
      },
      kind_);
  return amplitude_ * v;
}

bool RadialProfile::is_zero() const {
  if (amplitude_ == 0.0) return true;
  if (auto* s = std::get_if<Sampled>(&kind_))
    return std::all_of(s->data->values.begin(), s->data->values.end(), [](double v) { return v == 0.0; });
  if (auto* c = std::get_if<Combination>(&kind_))
    return std::all_of(c->terms.begin(), c->terms.end(),
                       [](const auto& t) { return t.first == 0.0 || t.second->is_zero(); });
  return false;
}

double RadialProfile::support_radius() const {
  if (amplitude_ == 0.0) return 0.0;
  return std::visit(overloaded{
                        [](const Gaussian&) { return kInf; },
                        [](const SmoothBump& b) { return b.center + b.width; },
                        [](const PowerCutoff& p) { return 2.0 * p.cutoff; },
                        [](const AnnulusIndicator& a) { return a.outer; },
                        [](const ConstantProfile&) { return kInf; },
                        [](const BesselMode& b) { return b.radius; },
                        [](const Sampled& s) {
                          return s.data->tail_exponent == -kInf ? s.data->radii.back() : kInf;
                        },
                        [](const Combination& c) {
                          double m = 0.0;
                          for (const auto& t : c.terms)
                            if (t.first != 0.0) m = std::max(m, t.second->support_radius());
                          return m;
                        },
                    },
                    kind_);
}

double RadialProfile::inner_radius() const {
  if (amplitude_ == 0.0) return kInf;
  return std::visit(overloaded{
                        [](const SmoothBump& b) { return b.center > 0.0 ? b.center - b.width : 0.0; },
                        [](const AnnulusIndicator& a) { return a.inner; },
                        [](const Sampled& s) {
                          double r = 0.0;
                          for (std::size_t i = 0; i < s.data->values.size(); ++i) {
                            if (s.data->values[i] != 0.0) break;
                            r = s.data->radii[i];
                          }
                          return r;
                        },
                        [](const Combination& c) {
                          double m = kInf;
                          for (const auto& t : c.terms)
                            if (t.first != 0.0) m = std::min(m, t.second->inner_radius());
                          return m;
                        },
                        [](const auto&) { return 0.0; },
                    },
                    kind_);
}

double RadialProfile::scale() const {
  return std::visit(overloaded{
                        [](const Gaussian& g) { return g.sigma; },
                        [](const SmoothBump& b) { return b.width; },
                        [](const PowerCutoff& p) { return p.cutoff; },
                        [](const AnnulusIndicator& a) { return a.outer - a.inner; },
                        [](const ConstantProfile&) { return 1.0; },
                        [](const BesselMode& b) { return b.radius; },
                        [this](const Sampled& s) {
                          const auto& d = *s.data;
                          double best = -1.0, at = std::sqrt(d.radii.front() * d.radii.back());
                          for (std::size_t i = 0; i < d.radii.size(); ++i) {
                            double w = std::fabs(d.values[i]) * std::pow(d.radii[i], dim_);
                            if (w > best) {
                              best = w;
                              at = d.radii[i];
                            }
                          }
                          return at;
                        },
                        [](const Combination& c) {
                          double m = 0.0;
                          for (const auto& t : c.terms) m = std::max(m, t.second->scale());
                          return m > 0.0 ? m : 1.0;
                        },
                    },
                    kind_);
}

double RadialProfile::effective_radius(double rel) const {
  if (auto* g = std::get_if<Gaussian>(&kind_)) return g->sigma * std::sqrt(2.0 * std::log(1.0 / rel));
  if (auto* c = std::get_if<Combination>(&kind_)) {
    double m = 0.0;
    for (const auto& t : c->terms)
      if (t.first != 0.0) m = std::max(m, t.second->effective_radius(rel));
    return m;
  }
  return support_radius();
}

TailBehavior RadialProfile::tail() const {
  if (amplitude_ == 0.0) return {TailKind::compact, -kInf};
  return std::visit(overloaded{
                        [](const Gaussian&) { return TailBehavior{TailKind::rapid, -kInf}; },
                        [](const ConstantProfile&) { return TailBehavior{TailKind::power, 0.0}; },
                        [](const Sampled& s) {
                          if (s.data->tail_exponent == -kInf || s.data->values.back() == 0.0)
                            return TailBehavior{TailKind::compact, -kInf};
                          return TailBehavior{TailKind::power, s.data->tail_exponent};
                        },
                        [](const Combination& c) {
                          TailBehavior worst{TailKind::compact, -kInf};
                          for (const auto& t : c.terms) {
                            if (t.first == 0.0) continue;
                            TailBehavior b = t.second->tail();
                            if (b.kind == TailKind::power &&
                                (worst.kind != TailKind::power || b.exponent > worst.exponent))
                              worst = b;
                            else if (b.kind == TailKind::rapid && worst.kind == TailKind::compact)
                              worst = b;
                          }
                          return worst;
                        },
                        [](const auto&) { return TailBehavior{TailKind::compact, -kInf}; },
                    },
                    kind_);
}

double RadialProfile::origin_exponent() const {
  if (amplitude_ == 0.0) return kInf;
  return std::visit(overloaded{
                        [](const SmoothBump& b) { return b.center > 0.0 ? kInf : 0.0; },
                        [](const PowerCutoff& p) { return p.exponent; },
                        [](const AnnulusIndicator& a) { return a.inner > 0.0 ? kInf : 0.0; },
                        [](const Sampled& s) { return s.data->values.front() == 0.0 ? kInf : 0.0; },
                        [](const Combination& c) {
                          double m = kInf;
                          for (const auto& t : c.terms)
                            if (t.first != 0.0) m = std::min(m, t.second->origin_exponent());
                          return m;
                        },
                        [](const auto&) { return 0.0; },
                    },
                    kind_);
}

bool RadialProfile::smooth() const {
  return std::visit(overloaded{
                        [](const Gaussian&) { return true; },
                        [](const SmoothBump&) { return true; },
                        [](const PowerCutoff& p) { return is_even_integer(p.exponent); },
                        [](const ConstantProfile&) { return true; },
                        [](const Combination& c) {
                          return std::all_of(c.terms.begin(), c.terms.end(),
                                             [](const auto& t) { return t.second->smooth(); });
                        },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

bool RadialProfile::has_jump() const {
  if (amplitude_ == 0.0) return false;
  return std::visit(overloaded{
                        [](const AnnulusIndicator&) { return true; },
                        [](const Sampled& s) {
                          return s.data->tail_exponent == -kInf && s.data->values.back() != 0.0;
                        },
                        [](const Combination& c) {
                          return std::any_of(c.terms.begin(), c.terms.end(),
                                             [](const auto& t) { return t.second->has_jump(); });
                        },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

std::vector<double> RadialProfile::features() const {
  std::vector<double> f = std::visit(
      overloaded{
          [](const SmoothBump& b) {
            std::vector<double> v{b.center + b.width};
            if (b.center > 0.0) v.push_back(b.center - b.width);
            return v;
          },
          [](const PowerCutoff& p) { return std::vector<double>{p.cutoff, 2.0 * p.cutoff}; },
          [](const AnnulusIndicator& a) {
            std::vector<double> v{a.outer};
            if (a.inner > 0.0) v.push_back(a.inner);
            return v;
          },
          [](const BesselMode& b) { return std::vector<double>{b.radius}; },
          [](const Sampled& s) { return s.data->radii; },
          [](const Combination& c) {
            std::vector<double> v;
            for (const auto& t : c.terms) {
              auto w = t.second->features();
              v.insert(v.end(), w.begin(), w.end());
            }
            return v;
          },
          [](const auto&) { return std::vector<double>{}; },
      },
      kind_);
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  f.erase(std::remove_if(f.begin(), f.end(), [](double r) { return !(r > 0.0); }), f.end());
  return f;
}

RadialProfile RadialProfile::dilated(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("dilation factor must be positive");
  double amp = amplitude_;
  Kind k = std::visit(
      overloaded{
          [&](const Gaussian& g) -> Kind { return Gaussian{g.sigma / lambda}; },
          [&](const SmoothBump& b) -> Kind { return SmoothBump{b.center / lambda, b.width / lambda}; },
          [&](const PowerCutoff& p) -> Kind {
            amp *= std::pow(lambda, p.exponent);
            return PowerCutoff{p.exponent, p.cutoff / lambda};
          },
          [&](const AnnulusIndicator& a) -> Kind {
            return AnnulusIndicator{a.inner / lambda, a.outer / lambda};
          },
          [&](const ConstantProfile& c) -> Kind { return c; },
          [&](const BesselMode& b) -> Kind {
            // k' = k lambda, and r^{-nu} picks up lambda^{-nu} relative to k'^nu Lambda.
            return BesselMode{b.nu, b.zero, b.radius / lambda};
          },
          [&](const Sampled& s) -> Kind {
            auto d = std::make_shared<SampledData>(*s.data);
            for (auto& r : d->radii) r /= lambda;
            for (auto& lr : d->log_radii) lr -= std::log(lambda);
            return Sampled{std::move(d)};
          },
          [&](const Combination& c) -> Kind {
            Combination out;
            for (const auto& t : c.terms)
              out.terms.emplace_back(t.first, std::make_shared<const RadialProfile>(t.second->dilated(lambda)));
            return out;
          },
      },
      kind_);
  if (auto* b = std::get_if<BesselMode>(&kind_)) amp *= std::pow(lambda, -b->nu);
  RadialProfile out(dim_, std::move(k), amp);
  out.notes_ = notes_;
  return out;
}

RadialProfile RadialProfile::scaled(double c) const {
  RadialProfile out = *this;
  out.amplitude_ = amplitude_ * c;
  if (!std::isfinite(out.amplitude_)) throw DomainError("profile amplitude must be finite");
  return out;
}

std::string RadialProfile::descriptor() const {
  auto f = [](double x) { return format_double(x); };
  std::string body = std::visit(
      overloaded{
          [&](const Gaussian& g) { return "gaussian(sigma=" + f(g.sigma) + ")"; },
          [&](const SmoothBump& b) {
            return "smooth_bump(center=" + f(b.center) + ",width=" + f(b.width) + ")";
          },
          [&](const PowerCutoff& p) {
            return "power_cutoff(exponent=" + f(p.exponent) + ",cutoff=" + f(p.cutoff) + ")";
          },
          [&](const AnnulusIndicator& a) {
            return "annulus(inner=" + f(a.inner) + ",outer=" + f(a.outer) + ")";
          },
          [&](const ConstantProfile&) { return std::string("constant"); },
          [&](const BesselMode& b) {
            return "bessel_mode(nu=" + f(b.nu) + ",zero=" + f(b.zero) + ",radius=" + f(b.radius) + ")";
          },
          [&](const Sampled& s) {
            return "sampled(m=" + std::to_string(s.data->radii.size()) + ",r_min=" +
                   f(s.data->radii.front()) + ",r_max=" + f(s.data->radii.back()) +
                   ",tail=" + f(s.data->tail_exponent) + ")";
          },
          [&](const Combination& c) {
            std::string out = "sum(";
            for (std::size_t i = 0; i < c.terms.size(); ++i) {
              if (i) out += ",";
              out += f(c.terms[i].first) + "*" + c.terms[i].second->descriptor();
            }
            return out + ")";
          },
      },
      kind_);
  if (amplitude_ != 1.0) body = f(amplitude_) + "*" + body;
  return body;
}

RadialProfile RadialProfile::with_note(std::string note) const {
  RadialProfile out = *this;
  out.notes_.push_back(std::move(note));
  return out;
}

double eval_profile(const RadialProfile& u, double r) { return u(r); }

RadialProfile sample(const RadialProfile& u, const Grid& grid, double tail_exponent) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = u(grid[i]);
  return RadialProfile::sampled(u.dim(), grid, std::move(v), tail_exponent);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace radlab
