#include "radlab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "radlab/ball.hpp"
#include "radlab/errors.hpp"
#include "radlab/parallel.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/sphere.hpp"
#include "radlab/transforms.hpp"

namespace radlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGridLow = 1e-3;
constexpr double kGridHigh = 16.0;
constexpr int kNodesPerDecade = 48;
constexpr int kBandNodesPerDecade = 240;

double dbl(const std::optional<ExtRational>& x) { return x->to_double(); }

const char* method_name(DiffMethod m) { return m == DiffMethod::spectral ? "spectral" : "hypersingular"; }

// Calibration is a fit against a reference derivative; it depends only on
// (n, s) so one scheme per pair is shared by all sweeps.
FracDiffScheme scheme_for(int n, double s, DiffMethod method) {
  FracDiffScheme base = FracDiffScheme::make(n, s);
  if (method == DiffMethod::spectral) return base;
  static std::mutex mu;
  static std::map<std::pair<int, double>, FracDiffScheme> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, s});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, s), calibrate(base)).first;
  return it->second;
}

RadialProfile derivative_on_lab_grid(const RadialProfile& u, double s, DiffMethod method, double density) {
  return frac_derivative(u, s, scheme_for(u.dim(), s, method), method, lab_grid(u, density));
}

// Kernel k(|z|) = g(|z|) for the convolution inequality.
RingKernel profile_kernel(const RadialProfile& g) {
  RingKernel K;
  K.n = g.dim();
  K.k = [g](double t) { return g(t); };
  const double e = g.origin_exponent();
  if (std::isfinite(e) && e < 0.0) {
    K.singularity = SingularityClass::power;
    K.sigma = -e;
  }
  K.support = g.support_radius();
  const TailBehavior t = g.tail();
  K.decay = t.kind == TailKind::power ? t.exponent : -kInf;
  K.name = g.descriptor();
  return K;
}

struct SideValues {
  NormValue lhs, rhs;
  double gradient_ratio = kNaN;
};

NormValue finite_value(double v) {
  NormValue out;
  out.value = v;
  return out;
}

NormValue product(const NormValue& a, const NormValue& b) {
  if (!a.finite()) return a;
  if (!b.finite()) return b;
  NormValue out;
  out.value = a.value * b.value;
  out.error = a.error * std::fabs(b.value) + b.error * std::fabs(a.value);
  return out;
}

class Evaluator {
 public:
  Evaluator(TheoremId t, const ParamSet& ps, const MeasureOptions& opt) : t_(t), opt_(opt) {
    n_ = static_cast<int>(*ps.n);
    auto get = [](const std::optional<ExtRational>& x) { return x ? x->to_double() : kNaN; };
    s_ = get(ps.s);
    p_ = get(ps.p);
    q_ = get(ps.q);
    r_ = get(ps.r);
    alpha_ = get(ps.alpha);
    beta_ = get(ps.beta);
    gamma_ = get(ps.gamma);
    c_ = get(ps.c);
    if (t == TheoremId::Critical_6_2 || t == TheoremId::CriticalBall_8_2) {
      auto pc = ps.p_star_c();
      if (!pc) throw ContractError("critical exponent p*_c undefined (needs sp < n); see check_conditions");
      pc_ = pc->to_double();
    }
    if (t == TheoremId::Sobolev_1_1 && !std::isfinite(q_))
      throw ContractError("Sobolev ratio needs a finite q; see check_conditions");
    if (t == TheoremId::NiBall_8_1 || t == TheoremId::CriticalBall_8_2)
      spec_ = std::make_shared<const BallSpectrum>(build_spectrum(n_, opt.ball_radius, opt.ball_modes));
  }

  const BallSpectrum* spectrum() const { return spec_.get(); }

  SideValues single(const RadialProfile& u) const {
    SideValues v;
    const double d = opt_.grid_density;
    switch (t_) {
      case TheoremId::Sobolev_1_1:
        v.lhs = weighted_lp_norm(u, {n_, q_, 0.0});
        v.rhs = lab_hsp_norm(u, s_, p_, opt_.method, d);
        break;
      case TheoremId::HLS_2_1:
      case TheoremId::SteinWeiss_2_2:
      case TheoremId::RadialSW_2_3:
      case TheoremId::RadialSW_qinf_2_4: {
        const bool plain = t_ == TheoremId::HLS_2_1;
        const double a = plain ? 0.0 : alpha_, b = plain ? 0.0 : beta_;
        v.rhs = weighted_lp_norm(u, {n_, p_, a});
        if (!v.rhs.finite() || v.rhs.value == 0.0) break;
        RadialProfile I = riesz_potential_spectral(u, s_, lab_grid(u, d));
        v.lhs = weighted_lp_norm(I, {n_, q_, -b});
        break;
      }
      case TheoremId::Strauss_5_2:
        v.lhs = weighted_lp_norm(u, {n_, kInf, (n_ - 1) / p_});
        v.rhs = lab_hsp_norm(u, s_, p_, opt_.method, d);
        break;
      case TheoremId::Ni_6_1:
        v.lhs = weighted_lp_norm(u, {n_, kInf, n_ / p_ - s_});
        v.rhs = lab_hsp_norm(u, s_, p_, opt_.method, d);
        break;
      case TheoremId::Critical_6_2:
        v.lhs = weighted_lp_norm(u, {n_, pc_, c_ / pc_});
        v.rhs = lab_hsp_norm(u, s_, p_, opt_.method, d);
        break;
      case TheoremId::WeightedEmb_6_4:
        v.lhs = weighted_lp_norm(u, {n_, r_, c_ / r_});
        v.rhs = lab_hsp_norm(u, s_, p_, opt_.method, d);
        break;
      case TheoremId::NiBall_8_1: {
        NiBallRatio b = ni_ball_ratio(u, s_, p_, *spec_);
        v.rhs = finite_value(b.rhs);
        v.lhs = finite_value(b.degenerate ? 0.0 : b.lhs);
        v.lhs.grid_resolution = b.grid_resolution;
        v.gradient_ratio = b.gradient_ratio;
        break;
      }
      case TheoremId::CriticalBall_8_2: {
        v.rhs = finite_value(ball_lp_norm(u, p_, spec_->R));
        if (v.rhs.value == 0.0) break;
        v.lhs = weighted_lp_norm(ball_frac_inverse(u, s_, *spec_), {n_, pc_, c_ / pc_});
        break;
      }
      case TheoremId::WeightedConv_6_3:
        throw DomainError("convolution inequality is measured on pairs");
    }
    return v;
  }

  SideValues pair(const RadialProfile& f, const RadialProfile& g) const {
    SideValues v;
    v.rhs = product(weighted_lp_norm(f, {n_, p_, alpha_}), weighted_lp_norm(g, {n_, q_, beta_}));
    if (!v.rhs.finite() || v.rhs.value == 0.0) return v;
    const RadialProfile& wide = f.scale() >= g.scale() ? f : g;
    RadialProfile fg = radial_convolve(profile_kernel(g), f, lab_grid(wide, opt_.grid_density));
    v.lhs = weighted_lp_norm(fg, {n_, r_, -gamma_});
    return v;
  }

 private:
  TheoremId t_;
  MeasureOptions opt_;
  int n_ = 0;
  double s_, p_, q_, r_, alpha_, beta_, gamma_, c_, pc_ = kNaN;
  std::shared_ptr<const BallSpectrum> spec_;
};

void classify(RatioSample& out, const SideValues& v) {
  out.lhs = v.lhs.value;
  out.rhs = v.rhs.value;
  out.gradient_ratio = v.gradient_ratio;
  out.grid_resolution = v.lhs.grid_resolution;
  out.ratio = kNaN;
  if (!v.rhs.finite()) {
    out.divergent = true;
    out.flag = "divergent right-hand side: " + v.rhs.reason;
  } else if (v.rhs.value == 0.0) {
    if (v.lhs.finite() && v.lhs.value == 0.0) {
      out.excluded = true;
      out.flag = "0/0: degenerate profile";
    } else {
      out.unexpected = true;
      out.flag = "zero right-hand side with nonzero left-hand side";
    }
  } else if (!v.lhs.finite()) {
    out.unexpected = true;
    out.flag = "divergent left-hand side with finite right-hand side: " + v.lhs.reason;
  } else {
    out.counted = true;
    out.ratio = v.lhs.value / v.rhs.value;
  }
}

template <class Fn>
void evaluate_into(RatioSample& out, Fn&& fn) {
  try {
    classify(out, fn());
  } catch (const NumericError& e) {
    out.failed = true;
    out.ratio = kNaN;
    out.flag = std::string("numerical failure: ") + e.what();
  } catch (const DomainError& e) {
    out.failed = true;
    out.ratio = kNaN;
    out.flag = std::string("domain failure: ") + e.what();
  }
}

// Known reasons for D^s u not to lie in L^p, decided before any transform:
// a jump lies in H^{s,p} only for s < 1/p, and r^a psi(r) with a not an even
// integer has D^s u ~ r^{a-s} at the origin.
std::string regularity_obstruction(const RadialProfile& u, double s, double p) {
  if (u.has_jump() && !(s < 1.0 / p)) return "jump discontinuity: D^s u is not in L^p for s >= 1/p";
  if (const auto* pc = std::get_if<PowerCutoff>(&u.kind()); pc && !u.smooth()) {
    if (!(p * (pc->exponent - s) + u.dim() > 0.0))
      return "origin singularity r^a: D^s u ~ r^{a-s} is not in L^p";
  }
  return {};
}

bool input_type(TheoremId t) {
  return t == TheoremId::HLS_2_1 || t == TheoremId::SteinWeiss_2_2 || t == TheoremId::RadialSW_2_3 ||
         t == TheoremId::RadialSW_qinf_2_4;
}

bool ball_type(TheoremId t) { return t == TheoremId::NiBall_8_1 || t == TheoremId::CriticalBall_8_2; }

}  // namespace

Grid lab_grid(const RadialProfile& u, double density) {
  if (!(density > 0.0) || !std::isfinite(density)) throw DomainError("lab_grid: density must be positive");
  const double L = u.scale();
  const int m = static_cast<int>(std::lround(std::log10(kGridHigh / kGridLow) * kNodesPerDecade * density)) + 1;
  Grid base = Grid::log_uniform(kGridLow * L, kGridHigh * L, m);
  const double inner = u.inner_radius(), outer = u.support_radius();
  if (!(inner > 0.0) || !std::isfinite(outer)) return base;
  // a profile living on a shell: D^s u and I^s u vary on the shell's width,
  // which the base spacing does not resolve when the shell is thin
  const double lo = inner / 1.5, hi = outer * 1.5;
  const int k = static_cast<int>(std::lround(std::log10(hi / lo) * kBandNodesPerDecade * density)) + 1;
  std::vector<double> r = base.radii();
  for (int i = 0; i < k; ++i) r.push_back(lo * std::pow(hi / lo, i / (k - 1.0)));
  std::sort(r.begin(), r.end());
  std::vector<double> kept;
  for (double x : r)
    if (kept.empty() || x > kept.back() * (1.0 + 1e-9)) kept.push_back(x);
  return Grid::explicit_radii(std::move(kept));
}

NormValue lab_hsp_norm(const RadialProfile& u, double s, double p, DiffMethod method, double density) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("hsp norm: need 1 < p < inf");
  const WeightedNormSpec spec{u.dim(), p, 0.0};
  NormValue a = weighted_lp_norm(u, spec);
  if (!a.finite() || u.is_zero()) return a;
  if (std::string why = regularity_obstruction(u, s, p); !why.empty())
    return NormValue::divergent(Divergence::regularity, why);
  NormValue b = weighted_lp_norm(derivative_on_lab_grid(u, s, method, density), spec);
  if (!b.finite()) {
    b.reason = "D^s u: " + b.reason;
    return b;
  }
  NormValue out;
  out.value = a.value + b.value;
  out.error = a.error + b.error;
  return out;
}

std::vector<RadialProfile> default_family(TheoremId t, const ParamSet& ps, const MeasureOptions& opt) {
  check_conditions(t, ps);  // SchemaError on missing fields
  const int n = static_cast<int>(*ps.n);
  std::vector<RadialProfile> fam;
  if (ball_type(t)) {
    const double R = opt.ball_radius;
    BallSpectrum spec = build_spectrum(n, R, 1);
    fam.push_back(spec.mode(1));
    fam.push_back(RadialProfile::smooth_bump(n, 0.0, 0.5 * R));
    fam.push_back(RadialProfile::smooth_bump(n, 0.5 * R, 0.3 * R));
    fam.push_back(RadialProfile::constant(n, 1.0));
    return fam;
  }
  for (int k = -3; k <= 3; ++k) fam.push_back(RadialProfile::gaussian(n, std::ldexp(1.0, k)));
  fam.push_back(RadialProfile::smooth_bump(n, 0.0, 0.5));
  fam.push_back(RadialProfile::smooth_bump(n, 0.0, 2.0));
  // a0: the power r^a0 is the borderline of the theorem's space near the origin
  double a0;
  const double p = dbl(ps.p);
  if (t == TheoremId::WeightedConv_6_3) {
    a0 = std::max(-n / p - dbl(ps.alpha), -n / dbl(ps.q) - dbl(ps.beta));
  } else if (input_type(t)) {
    a0 = -n / p - (t == TheoremId::HLS_2_1 ? 0.0 : dbl(ps.alpha));
  } else {
    a0 = dbl(ps.s) - n / p;
  }
  fam.push_back(RadialProfile::power_cutoff(n, a0 + 0.25, 1.0));
  fam.push_back(RadialProfile::power_cutoff(n, a0 + 1.0, 1.0));
  return fam;
}

RatioReport measure_ratio(TheoremId t, const ParamSet& params, const std::vector<RadialProfile>& family,
                          const MeasureOptions& opt) {
  ConditionCheck check = check_conditions(t, params);
  if (!check.admissible && !opt.run_anyway) {
    std::string v;
    for (const auto& x : check.violated) v += (v.empty() ? "" : "; ") + x;
    throw ContractError("measure_ratio: parameters violate " + v + " (use check_conditions or run_anyway)");
  }
  if (family.empty()) throw DomainError("measure_ratio: empty family");
  const int n = static_cast<int>(*params.n);
  for (const auto& u : family)
    if (u.dim() != n) throw DomainError("measure_ratio: profile dimension differs from n");
  if (opt.threads < 1) throw DomainError("measure_ratio: threads must be >= 1");

  RatioReport rep;
  rep.theorem = t;
  rep.params = params;
  rep.admissible = check.admissible;
  rep.violated = check.violated;
  rep.notes = check.notes;
  if (!check.admissible) rep.notes.push_back("inadmissible parameters measured on request (run_anyway)");
  rep.grid.r_min_factor = kGridLow;
  rep.grid.r_max_factor = kGridHigh;
  rep.grid.nodes_per_decade = static_cast<int>(std::lround(kNodesPerDecade * opt.grid_density));
  rep.grid.derivative_method = method_name(opt.method);
  rep.grid.potential_method = t == TheoremId::WeightedConv_6_3 ? "ring" : "spectral";
  if (ball_type(t)) {
    rep.grid.ball_modes = opt.ball_modes;
    rep.grid.ball_radius = opt.ball_radius;
    rep.grid.derivative_method = "eigen-expansion";
    rep.grid.potential_method = "eigen-expansion";
  }

  Evaluator ev(t, params, opt);
  if (t == TheoremId::WeightedConv_6_3) {
    const std::size_t m = family.size(), total = m * m;
    std::vector<std::size_t> picks;
    if (total <= opt.max_pairs) {
      for (std::size_t k = 0; k < total; ++k) picks.push_back(k);
    } else {
      // evenly strided over the lexicographic order of the Cartesian square
      for (std::size_t k = 0; k < opt.max_pairs; ++k) picks.push_back(k * total / opt.max_pairs);
      rep.notes.push_back("pairs capped at " + std::to_string(opt.max_pairs) + " of " + std::to_string(total));
    }
    rep.samples.resize(picks.size());
    parallel_for(picks.size(), opt.threads, [&](std::size_t i) {
      const RadialProfile& f = family[picks[i] / m];
      const RadialProfile& g = family[picks[i] % m];
      RatioSample& s = rep.samples[i];
      s.descriptor = "(" + f.descriptor() + ") * (" + g.descriptor() + ")";
      s.family_index = picks[i];
      evaluate_into(s, [&] { return ev.pair(f, g); });
    });
  } else {
    rep.samples.resize(family.size());
    parallel_for(family.size(), opt.threads, [&](std::size_t i) {
      RatioSample& s = rep.samples[i];
      s.descriptor = family[i].descriptor();
      s.family_index = i;
      evaluate_into(s, [&] { return ev.single(family[i]); });
    });
  }

  std::sort(rep.samples.begin(), rep.samples.end(), [](const RatioSample& a, const RatioSample& b) {
    return a.descriptor != b.descriptor ? a.descriptor < b.descriptor : a.family_index < b.family_index;
  });
  rep.sup_ratio = kNaN;
  for (const auto& s : rep.samples) {
    rep.counted += s.counted;
    rep.excluded += s.excluded;
    rep.divergent += s.divergent;
    rep.unexpected += s.unexpected;
    rep.failed += s.failed;
    if (s.counted && !(s.ratio <= rep.sup_ratio)) rep.sup_ratio = s.ratio;
  }
  return rep;
}

ScaledQuotient strauss_scaled_ratio(const RadialProfile& u, double s, double p, DiffMethod method) {
  if (!(p > 1.0) || !std::isfinite(p) || !(s > 1.0 / p) || !std::isfinite(s))
    throw DomainError("strauss_scaled_ratio: need 1 < p < inf and s > 1/p");
  const int n = u.dim();
  if (std::string why = regularity_obstruction(u, s, p); !why.empty()) throw DomainError("strauss_scaled_ratio: " + why);
  ScaledQuotient out;
  out.numerator = weighted_lp_norm(u, {n, kInf, (n - 1) / p}).value;
  NormValue lp = weighted_lp_norm(u, {n, p, 0.0});
  NormValue ds = u.is_zero() ? NormValue{} : weighted_lp_norm(derivative_on_lab_grid(u, s, method, 1.0), {n, p, 0.0});
  if (!lp.finite() || !ds.finite()) throw DomainError("strauss_scaled_ratio: u is not in H^{s,p}");
  const double theta = 1.0 / (s * p);
  out.denominator = std::pow(lp.value, 1.0 - theta) * std::pow(ds.value, theta);
  if (out.denominator == 0.0) {
    out.degenerate = true;
    out.value = kNaN;
    return out;
  }
  out.value = out.numerator / out.denominator;
  return out;
}

ScaledQuotient ni_homogeneous_quotient(const RadialProfile& u, double s, double p, DiffMethod method) {
  const int n = u.dim();
  if (!(p > 1.0) || !std::isfinite(p) || !(s > 0.0) || !(s < n / p))
    throw DomainError("ni_homogeneous_quotient: need 1 < p < inf and 0 < s < n/p");
  if (std::string why = regularity_obstruction(u, s, p); !why.empty())
    throw DomainError("ni_homogeneous_quotient: " + why);
  ScaledQuotient out;
  out.numerator = weighted_lp_norm(u, {n, kInf, n / p - s}).value;
  NormValue ds = u.is_zero() ? NormValue{} : weighted_lp_norm(derivative_on_lab_grid(u, s, method, 1.0), {n, p, 0.0});
  if (!ds.finite()) throw DomainError("ni_homogeneous_quotient: D^s u is not in L^p");
  out.denominator = ds.value;
  if (out.denominator == 0.0) {
    out.degenerate = true;
    out.value = kNaN;
    return out;
  }
  out.value = out.numerator / out.denominator;
  return out;
}

ScalingOptimum optimal_scaling(double a, double b, double gamma) {
  if (!(a > 0.0) || !(b > 0.0) || !(gamma > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(gamma))
    throw DomainError("optimal_scaling: a, b and gamma must be positive and finite");
  auto f = [&](double t) { return a * t + b * std::pow(t, -gamma); };
  ScalingOptimum out;
  out.t0 = std::pow(b * gamma / a, 1.0 / (gamma + 1.0));
  out.f_min = f(out.t0);
  out.closed_form = (gamma + 1.0) * std::pow(gamma, -gamma / (gamma + 1.0)) * std::pow(a, gamma / (gamma + 1.0)) *
                    std::pow(b, 1.0 / (gamma + 1.0));
  if (!(out.f_min <= f(0.5 * out.t0)) || !(out.f_min <= f(2.0 * out.t0)))
    throw NumericError("optimal_scaling: stationary point is not a minimum");
  return out;
}

double translate_distance(const RadialProfile& u, double d, double q, bool force_quadrature) {
  const int n = u.dim();
  const double rs = u.support_radius();
  if (!std::isfinite(rs)) throw DomainError("translate_distance: u must have compact support");
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("translate_distance: need 1 <= q < inf");
  d = std::fabs(d);
  if (d == 0.0 || u.is_zero()) return 0.0;
  if (d >= 2.0 * rs && !force_quadrature) {
    NormValue nq = weighted_lp_norm(u, {n, q, 0.0});
    return std::pow(2.0, 1.0 / q) * nq.value;
  }
  QuadratureSpec inner;
  inner.rel_tol = 1e-11;
  inner.abs_tol = 1e-300;
  QuadratureSpec outer = inner;
  outer.rel_tol = 1e-10;
  // x = (t, y) with t along the translation axis and |y| = rho transverse
  auto diff = [&](double t, double rho) {
    double a = std::hypot(t, rho), b = std::hypot(t + d, rho);
    double va = a < rs ? u(a) : 0.0, vb = b < rs ? u(b) : 0.0;
    return std::pow(std::fabs(va - vb), q);
  };
  auto slice = [&](double t) {
    auto reach = [&](double z) { return std::abs(z) < rs ? std::sqrt(rs * rs - z * z) : 0.0; };
    double r1 = reach(t), r2 = reach(t + d);
    double top = std::max(r1, r2);
    if (top == 0.0) return 0.0;
    std::vector<double> bp;
    double low = std::min(r1, r2);
    if (low > 0.0 && low < top) bp.push_back(low);
    auto g = [&](double rho) { return diff(t, rho) * std::pow(rho, n - 2.0); };
    return surface_area(n - 1) * integrate(g, 0.0, top, inner, bp).value;
  };
  std::vector<double> bp;
  for (double x : {-rs, rs - d, -0.5 * d})
    if (x > -rs - d && x < rs) bp.push_back(x);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  if (n == 1) {
    // the integrand is |u(|t|) - u(|t+d|)|^q on the line; both sides of 0 count
    auto g = [&](double t) { return diff(t, 0.0); };
    return std::pow(integrate(g, -rs - d, rs, outer, bp).value, 1.0 / q);
  }
  return std::pow(integrate(slice, -rs - d, rs, outer, bp).value, 1.0 / q);
}

NoncompactnessDemo noncompactness_demo(const RadialProfile& u, double v, double q, int N) {
  if (N < 1) throw DomainError("noncompactness_demo: N must be >= 1");
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("noncompactness_demo: v must be positive");
  const double rs = u.support_radius();
  if (!std::isfinite(rs)) throw DomainError("noncompactness_demo: u must have compact support");
  NoncompactnessDemo out;
  NormValue nq = weighted_lp_norm(u, {u.dim(), q, 0.0});
  if (!nq.finite()) throw DomainError("noncompactness_demo: ||u||_q is infinite");
  out.norm_q = nq.value;
  out.disjoint_distance = std::pow(2.0, 1.0 / q) * nq.value;
  out.overlapping = N >= 2 && v < 2.0 * rs;
  std::vector<double> by_offset(N, 0.0);
  for (int k = 1; k < N; ++k) by_offset[k] = translate_distance(u, k * v, q);
  out.distances.assign(N, std::vector<double>(N, 0.0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.distances[i][j] = by_offset[std::abs(i - j)];
  return out;
}

RatioReport tail_embedding_report(int n, double p, double q, double s, const std::vector<RadialProfile>& family,
                                  const MeasureOptions& opt) {
  auto exact = [](double x) { return ExtRational(Rational::parse(format_double(x))); };
  ParamSet ps;
  ps.n = n;
  ps.s = exact(s);
  ps.p = exact(p);
  ps.r = exact(q);
  // c = (n-1)(q-p)/p, formed exactly from the exact inputs
  ps.c = ExtRational(Rational(n - 1) * (ps.r->finite() - ps.p->finite()) / ps.p->finite());
  MeasureOptions o = opt;
  o.run_anyway = true;
  RatioReport rep = measure_ratio(TheoremId::WeightedEmb_6_4, ps, family, o);
  rep.notes.push_back("tail weight c = (n-1)(q-p)/p sits on the closed end of the embedding's weight range");
  return rep;
}

TailMass tail_mass(const RadialProfile& u, double q, double R, double p, double s, double constant,
                   DiffMethod method) {
  const int n = u.dim();
  if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) throw DomainError("tail_mass: need 1 < p <= q < inf");
  if (!(R > 0.0)) throw DomainError("tail_mass: R must be positive");
  if (!(s > 1.0 / p - 1.0 / q)) throw DomainError("tail_mass: need s > 1/p - 1/q");
  TailMass out;
  out.gamma = (n - 1) * (1.0 / q - 1.0 / p);
  out.constant = constant;
  const double top = u.support_radius();
  if (R < top && !u.is_zero()) {
    std::vector<double> bp;
    for (double x : u.features())
      if (x > R && x < top) bp.push_back(x);
    std::sort(bp.begin(), bp.end());
    QuadratureSpec quad;
    quad.rel_tol = 1e-10;
    quad.abs_tol = 1e-300;
    auto g = [&](double r) { return std::pow(std::fabs(u(r)), q) * std::pow(r, n - 1.0); };
    out.tail = surface_area(n) * integrate(g, R, top, quad, bp).value;
  }
  NormValue h = lab_hsp_norm(u, s, p, method);
  if (!h.finite()) throw DomainError("tail_mass: u is not in H^{s,p}");
  out.hsp = h.value;
  out.bound = std::pow(constant * h.value, q) * std::pow(R, out.gamma * q);
  return out;
}

TailMass tail_mass(const RadialProfile& u, double q, double R, double p, double s) {
  RatioReport rep = tail_embedding_report(u.dim(), p, q, s, {u});
  if (!(rep.counted > 0)) throw NumericError("tail_mass: embedding constant could not be measured");
  return tail_mass(u, q, R, p, s, rep.sup_ratio);
}

LemmaSweep lemma_indicator_sweep(const RadialProfile& f, double p, const std::vector<double>& Rs,
                                 const std::vector<double>& rhos) {
  const int n = f.dim();
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lemma sweep: need 1 <= p < inf");
  NormValue fp = weighted_lp_norm(f, {n, p, 0.0});
  if (!fp.finite() || fp.value == 0.0) throw DomainError("lemma sweep: need 0 < ||f||_p < inf");
  LemmaSweep out;
  out.values.assign(Rs.size(), std::vector<double>(rhos.size(), 0.0));
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    const double R = Rs[i];
    if (!(R > 0.0)) throw DomainError("lemma sweep: radii must be positive");
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      const double rho = rhos[j];
      if (!(rho > 0.0)) throw DomainError("lemma sweep: rho must be positive");
      double v = std::fabs(indicator_convolve(f, R, rho)) * std::pow(rho, (n - 1) / p) *
                 std::pow(R, 1.0 / p - n) / fp.value;
      out.values[i][j] = v;
      out.sup = std::max(out.sup, v);
      if (rho > 2.0 * R) {
        out.sup_far = std::max(out.sup_far, v);
        ++out.far_points;
      } else {
        out.sup_near = std::max(out.sup_near, v);
        ++out.near_points;
      }
    }
  }
  return out;
}

}  // namespace radlab
