#include "radlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "radlab/errors.hpp"
#include "radlab/simd.hpp"

namespace radlab {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

std::string to_string(EndpointRule r) {
  return r == EndpointRule::gauss ? "gauss" : "double_exponential";
}

EndpointRule endpoint_rule_from_string(const std::string& s) {
  if (s == "gauss") return EndpointRule::gauss;
  if (s == "double_exponential" || s == "de" || s == "tanh_sinh")
    return EndpointRule::double_exponential;
  throw SchemaError("unknown endpoint_rule '" + s + "'");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrand in the working variable u.  `comp` is the distance from u to the
// nearer segment end when the caller knows it more accurately than the
// rounded u does (only used by the compactified maps near u = 1).
class Mapped {
 public:
  enum class Kind { identity, right_infinite, left_infinite };

  Mapped(FunctionRef<double(double)> f, Kind k, double anchor)
      : f_(f), kind_(k), anchor_(anchor) {}

  double operator()(double u, double one_minus_u) const {
    switch (kind_) {
      case Kind::identity:
        return f_(u);
      case Kind::right_infinite: {
        double om = one_minus_u;
        double x = anchor_ + u / om;
        if (!std::isfinite(x)) return 0.0;
        return f_(x) / (om * om);
      }
      case Kind::left_infinite: {
        double om = one_minus_u;
        double x = anchor_ - u / om;
        if (!std::isfinite(x)) return 0.0;
        return f_(x) / (om * om);
      }
    }
    return 0.0;
  }
  double operator()(double u) const { return (*this)(u, 1.0 - u); }

  double to_u(double x) const {
    switch (kind_) {
      case Kind::identity:
        return x;
      case Kind::right_infinite: {
        double d = x - anchor_;
        return d / (1.0 + d);
      }
      case Kind::left_infinite: {
        double d = anchor_ - x;
        return d / (1.0 + d);
      }
    }
    return x;
  }

 private:
  FunctionRef<double(double)> f_;
  Kind kind_;
  double anchor_;
};

struct Piece {
  double lo, hi, value, error;
  double floor = 0.0;  // roundoff level of this piece; error == floor cannot improve
};

void check_finite(double v) {
  if (!std::isfinite(v)) throw NumericError("integrand returned a non-finite value");
}

Piece gk21(const Mapped& g, double lo, double hi) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
  const double c = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
  std::array<double, 21> fv{};
  fv[0] = g(c);
  check_finite(fv[0]);
  for (int j = 1; j <= 10; ++j) {
    double dx = hl * xk[j];
    fv[2 * j - 1] = g(c - dx);
    fv[2 * j] = g(c + dx);
    check_finite(fv[2 * j - 1]);
    check_finite(fv[2 * j]);
  }
  double resk = wk[0] * fv[0], resg = 0.0, resabs = wk[0] * std::fabs(fv[0]);
  for (int j = 1; j <= 10; ++j) {
    double s = fv[2 * j - 1] + fv[2 * j];
    resk += wk[j] * s;
    resabs += wk[j] * (std::fabs(fv[2 * j - 1]) + std::fabs(fv[2 * j]));
    if (j % 2 == 1) resg += wg[j / 2] * s;
  }
  double mean = 0.5 * resk;
  double resasc = wk[0] * std::fabs(fv[0] - mean);
  for (int j = 1; j <= 10; ++j)
    resasc += wk[j] * (std::fabs(fv[2 * j - 1] - mean) + std::fabs(fv[2 * j] - mean));
  double ahl = std::fabs(hl);
  double err = std::fabs((resk - resg) * hl);
  resasc *= ahl;
  resabs *= ahl;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  double floor = 0.0;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    floor = 50.0 * kEps * resabs;
    err = std::max(floor, err);
  }
  return {lo, hi, resk * hl, err, floor};
}

QuadResult finish(std::vector<Piece>& pieces, int evals) {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  std::vector<double> v(pieces.size()), e(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    v[i] = pieces[i].value;
    e[i] = pieces[i].error;
  }
  return {kernels::pairwise_sum(v), kernels::pairwise_sum(e), evals};
}

double total_of(const std::vector<Piece>& ps, double Piece::*m) {
  std::vector<double> v(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) v[i] = ps[i].*m;
  return kernels::pairwise_sum(v);
}

QuadResult adaptive_gk(const Mapped& g, const std::vector<double>& cuts, const QuadratureSpec& spec) {
  auto by_error = [](const Piece& a, const Piece& b) { return a.error < b.error; };
  std::vector<Piece> heap, frozen;
  int evals = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(gk21(g, cuts[i], cuts[i + 1]));
    evals += 21;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  int subdivisions = 0;
  for (;;) {
    std::vector<Piece> all = heap;
    all.insert(all.end(), frozen.begin(), frozen.end());
    double val = total_of(all, &Piece::value);
    double err = total_of(all, &Piece::error);
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(val));
    if (err <= tol) return finish(all, evals);
    // Pieces at their roundoff floor were frozen; if they account for the
    // whole error the result is as good as double precision allows.
    if (heap.empty() && err <= 2.0 * total_of(all, &Piece::floor) + tol) return finish(all, evals);
    if (heap.empty() || subdivisions >= spec.max_subdivisions) {
      throw QuadratureFailure("adaptive Gauss-Kronrod did not converge (error " +
                                  std::to_string(err) + ")",
                              val, err);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Piece worst = heap.back();
    heap.pop_back();
    double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.error <= worst.floor || !(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 64.0 * kEps * std::max(std::fabs(worst.lo), std::fabs(worst.hi))) {
      frozen.push_back(worst);
      continue;
    }
    Piece l = gk21(g, worst.lo, mid), r = gk21(g, mid, worst.hi);
    evals += 42;
    ++subdivisions;
    // Bisection that neither moves the value nor shrinks the error means the
    // estimate is noise: treat both halves as roundoff-limited.
    double both = l.value + r.value;
    if (l.error + r.error >= 0.99 * worst.error &&
        std::fabs(both - worst.value) <= 1e-5 * std::fabs(both)) {
      l.floor = l.error;
      r.floor = r.error;
      frozen.push_back(l);
      frozen.push_back(r);
      continue;
    }
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

// Tanh-sinh on [lo, hi].  Node offsets from the nearer end are computed
// directly so endpoint singularities are sampled without cancellation.
struct DeOutcome {
  double value, error;
  bool converged;
  int evals;
};

DeOutcome tanh_sinh(const Mapped& g, double lo, double hi, double abs_target, double rel_tol,
                    bool upper_is_one) {
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kUmax = 4.5;
  constexpr int kMaxLevel = 8;
  const double half = 0.5 * (hi - lo), mid = 0.5 * (lo + hi);
  int evals = 0;
  auto node = [&](double u) -> double {
    if (u == 0.0) {
      ++evals;
      double v = g(mid, 1.0 - mid);
      check_finite(v);
      return kHalfPi * v;
    }
    double s = kHalfPi * std::sinh(std::fabs(u));
    double cs = std::cosh(s);
    double off = half * 2.0 / (1.0 + std::exp(2.0 * s));
    double w = kHalfPi * std::cosh(u) / (cs * cs);
    if (!(off > 0.0) || !(w > 0.0)) return 0.0;
    double x, om;
    if (u > 0) {
      x = hi - off;
      om = upper_is_one ? off : 1.0 - x;
    } else {
      x = lo + off;
      om = 1.0 - x;
    }
    if (!(x > lo && x < hi)) return 0.0;
    ++evals;
    double v = g(x, om);
    check_finite(v);
    return w * v;
  };
  double abs_sum = 0.0;
  auto tracked = [&](double u) {
    double v = node(u);
    abs_sum += std::fabs(v);
    return v;
  };
  double h = 1.0;
  double sum = tracked(0.0);
  for (int j = 1; j * h <= kUmax; ++j) sum += tracked(j * h) + tracked(-j * h);
  double prev = sum * h * half;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (int j = 1; j * h <= kUmax; j += 2) add += tracked(j * h) + tracked(-j * h);
    sum += add;
    double cur = sum * h * half;
    err = std::fabs(cur - prev);
    double floor = 50.0 * kEps * abs_sum * h * std::fabs(half);
    if (level >= 3 && err <= std::max({abs_target, rel_tol * std::fabs(cur), floor}))
      return {cur, err, true, evals};
    prev = cur;
  }
  return {prev, err, false, evals};
}

QuadResult adaptive_de(const Mapped& g, const std::vector<double>& cuts, const QuadratureSpec& spec,
                       bool last_is_one) {
  struct Seg {
    double lo, hi;
    bool upper_one;
  };
  std::vector<Seg> todo;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    todo.push_back({cuts[i], cuts[i + 1], last_is_one && i + 2 == cuts.size()});
  std::vector<Piece> done;
  int evals = 0, subdivisions = 0;
  const double nseg0 = static_cast<double>(todo.size());
  while (!todo.empty()) {
    Seg s = todo.back();
    todo.pop_back();
    double frac = (s.hi - s.lo) / (cuts.back() - cuts.front());
    double target = spec.abs_tol * std::max(frac, 1.0 / (8.0 * nseg0));
    DeOutcome o = tanh_sinh(g, s.lo, s.hi, target, 0.5 * spec.rel_tol, s.upper_one);
    evals += o.evals;
    if (o.converged) {
      done.push_back({s.lo, s.hi, o.value, o.error});
      continue;
    }
    double mid = 0.5 * (s.lo + s.hi);
    if (subdivisions >= spec.max_subdivisions || !(mid > s.lo && mid < s.hi)) {
      done.push_back({s.lo, s.hi, o.value, o.error});
      double val = total_of(done, &Piece::value);
      double err = total_of(done, &Piece::error);
      throw QuadratureFailure("tanh-sinh did not converge (error " + std::to_string(err) + ")",
                              val, err);
    }
    ++subdivisions;
    todo.push_back({mid, s.hi, s.upper_one});
    todo.push_back({s.lo, mid, false});
  }
  QuadResult r = finish(done, evals);
  double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(r.value));
  if (r.error > tol) {
    // Piecewise targets were met but their sum is above tolerance: refine once more.
    QuadratureSpec tighter = spec;
    tighter.abs_tol = spec.abs_tol / 16.0;
    tighter.rel_tol = spec.rel_tol / 16.0;
    if (tighter.rel_tol > 1e-15) return adaptive_de(g, cuts, tighter, last_is_one);
  }
  return r;
}

QuadResult integrate_mapped(const Mapped& g, double ulo, double uhi, std::span<const double> xbreaks,
                            const QuadratureSpec& spec, bool upper_is_one) {
  std::vector<double> cuts{ulo};
  std::vector<double> inner;
  for (double x : xbreaks) {
    double u = g.to_u(x);
    if (std::isfinite(u) && u > ulo && u < uhi) inner.push_back(u);
  }
  std::sort(inner.begin(), inner.end());
  for (double u : inner)
    if (u > cuts.back()) cuts.push_back(u);
  if (uhi > cuts.back()) cuts.push_back(uhi);
  else cuts.back() = uhi;
  if (spec.endpoint_rule == EndpointRule::gauss) return adaptive_gk(g, cuts, spec);
  return adaptive_de(g, cuts, spec, upper_is_one);
}

}  // namespace

QuadResult integrate(FunctionRef<double(double)> f, double a, double b, const QuadratureSpec& spec,
                     std::span<const double> breakpoints) {
  spec.validate();
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(f, b, a, spec, breakpoints);
    r.value = -r.value;
    return r;
  }
  const bool a_inf = std::isinf(a), b_inf = std::isinf(b);
  if (!a_inf && !b_inf) {
    Mapped g(f, Mapped::Kind::identity, 0.0);
    std::vector<double> br;
    for (double x : breakpoints)
      if (x > a && x < b) br.push_back(x);
    return integrate_mapped(g, a, b, br, spec, false);
  }
  if (!a_inf && b_inf) {
    Mapped g(f, Mapped::Kind::right_infinite, a);
    return integrate_mapped(g, 0.0, 1.0, breakpoints, spec, true);
  }
  if (a_inf && !b_inf) {
    // u runs from 0 at x = b to 1 at x = -inf; orientation keeps the sign.
    Mapped g(f, Mapped::Kind::left_infinite, b);
    return integrate_mapped(g, 0.0, 1.0, breakpoints, spec, true);
  }
  std::vector<double> lo_b, hi_b;
  for (double x : breakpoints) (x < 0 ? lo_b : hi_b).push_back(x);
  QuadratureSpec half = spec;
  half.abs_tol = 0.5 * spec.abs_tol;
  QuadResult l = integrate(f, -kInf, 0.0, half, lo_b);
  QuadResult r = integrate(f, 0.0, kInf, half, hi_b);
  return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations};
}

namespace {

GaussRule build_gauss(int m) {
  GaussRule g;
  g.nodes.resize(m);
  g.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) {
        // one more evaluation for the derivative at the converged node
        double q0 = 1.0, q1 = x;
        for (int k = 2; k <= m; ++k) {
          double q2 = ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        dp = m * (x * q1 - q0) / (x * x - 1.0);
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = -x;
    g.nodes[m - 1 - i] = x;
    g.weights[i] = w;
    g.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) g.nodes[m / 2] = 0.0;
  return g;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  constexpr int kMax = 128;
  if (m < 1 || m > kMax) throw DomainError("Gauss-Legendre order must be in [1, 128]");
  static const std::vector<GaussRule> table = [] {
    std::vector<GaussRule> t(kMax + 1);
    t[1] = GaussRule{{0.0}, {2.0}};
    for (int k = 2; k <= kMax; ++k) t[k] = build_gauss(k);
    return t;
  }();
  return table[m];
}

void append_gauss_panel(double a, double b, int m, std::vector<double>& x, std::vector<double>& w) {
  const GaussRule& g = gauss_legendre(m);
  double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    x.push_back(c + hl * g.nodes[i]);
    w.push_back(hl * g.weights[i]);
  }
}

Extrapolated wynn_epsilon(std::span<const double> s) {
  const std::size_t m = s.size();
  if (m == 0) return {0.0, 0.0};
  if (m < 3) return {s.back(), m == 2 ? std::fabs(s[1] - s[0]) : std::fabs(s[0])};
  // e[k] holds column j of the epsilon table; prev holds column j-1.
  std::vector<double> prev(m + 1, 0.0), cur(s.begin(), s.end());
  std::vector<double> estimates{s.back()};
  for (std::size_t j = 1; j < m; ++j) {
    std::vector<double> next(cur.size() - 1);
    bool ok = true;
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      double d = cur[k + 1] - cur[k];
      if (d == 0.0 || !std::isfinite(d)) {
        ok = false;
        break;
      }
      next[k] = prev[k + 1] + 1.0 / d;
    }
    if (!ok || next.empty()) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (j % 2 == 0) estimates.push_back(cur.back());
  }
  double best = estimates.back();
  double err = estimates.size() >= 2 ? std::fabs(best - estimates[estimates.size() - 2])
                                     : std::fabs(s[m - 1] - s[m - 2]);
  if (!std::isfinite(best)) return {s.back(), std::fabs(s[m - 1] - s[m - 2])};
  return {best, err};
}

}  // namespace radlab
