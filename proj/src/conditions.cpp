#include "radlab/conditions.hpp"

#include <array>
#include <utility>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

constexpr std::array<std::pair<TheoremId, const char*>, 12> kNames{{
    {TheoremId::Sobolev_1_1, "Sobolev_1_1"},
    {TheoremId::HLS_2_1, "HLS_2_1"},
    {TheoremId::SteinWeiss_2_2, "SteinWeiss_2_2"},
    {TheoremId::RadialSW_2_3, "RadialSW_2_3"},
    {TheoremId::RadialSW_qinf_2_4, "RadialSW_qinf_2_4"},
    {TheoremId::Strauss_5_2, "Strauss_5_2"},
    {TheoremId::Ni_6_1, "Ni_6_1"},
    {TheoremId::Critical_6_2, "Critical_6_2"},
    {TheoremId::WeightedConv_6_3, "WeightedConv_6_3"},
    {TheoremId::WeightedEmb_6_4, "WeightedEmb_6_4"},
    {TheoremId::NiBall_8_1, "NiBall_8_1"},
    {TheoremId::CriticalBall_8_2, "CriticalBall_8_2"},
}};

const std::optional<ExtRational>& field(const ParamSet& ps, const std::string& name) {
  if (name == "s") return ps.s;
  if (name == "p") return ps.p;
  if (name == "q") return ps.q;
  if (name == "r") return ps.r;
  if (name == "alpha") return ps.alpha;
  if (name == "beta") return ps.beta;
  if (name == "gamma") return ps.gamma;
  return ps.c;
}

// Collects failed conditions in evaluation order.
struct Checker {
  ConditionCheck out;
  void need(bool ok, const char* label) {
    if (!ok) out.violated.emplace_back(label);
  }
  bool failed() const { return !out.violated.empty(); }
};

bool finite_gt(const ExtRational& x, const Rational& lo) { return !x.is_infinite() && x.finite() > lo; }

// Exponent x in (1, inf) as printed "1 < x < inf"; returns whether x is a
// finite positive number, so that the remaining conditions can be formed.
bool exponent_open(Checker& c, const ExtRational& x, const char* label) {
  c.need(finite_gt(x, 1), label);
  return finite_gt(x, 0);
}

void scaling_two_weight(Checker& c, long long n, const Rational& s, const Rational& ip, const Rational& iq,
                        const Rational& a, const Rational& b) {
  c.need(iq == ip + (a + b - s) / Rational(n), "1/q = 1/p + (α+β−s)/n");
}

void sobolev(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p, &q = *ps.q;
  c.need(finite_gt(s, 0), "s > 0");
  bool p_ok = exponent_open(c, p, "1 < p < ∞");
  if (!p_ok || s.is_infinite()) return;
  const Rational sp = s.finite() * p.finite();
  c.need(sp < Rational(n), "sp < n");
  c.need(p <= q, "p ≤ q");
  if (auto ps_ = ps.p_star()) c.need(q <= ExtRational(*ps_), "q ≤ p*");
}

void hls(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p, &q = *ps.q;
  c.need(finite_gt(s, 0) && s.finite() < Rational(n), "0 < s < n");
  bool p_pos = exponent_open(c, p, "1 < p < ∞");
  bool q_pos = q.is_infinite() || q.finite() > 0;
  c.need(q_pos, "q > 0");
  if (!p_pos || !q_pos || s.is_infinite()) return;
  c.need(q.reciprocal() == p.reciprocal() - s.finite() / Rational(n), "1/q = 1/p − s/n");
}

// Shared part of the two-weight fractional integral inequalities.
bool two_weight_common(Checker& c, const ParamSet& ps, bool allow_p1) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p, &q = *ps.q;
  c.need(finite_gt(s, 0) && s.finite() < Rational(n), "0 < s < n");
  bool p_pos;
  if (allow_p1) {
    c.need(!p.is_infinite() && p.finite() >= Rational(1), "1 ≤ p < ∞");
    p_pos = !p.is_infinite() && p.finite() > 0;
  } else {
    p_pos = exponent_open(c, p, "1 < p < ∞");
  }
  bool q_pos = q.is_infinite() || q.finite() > 0;
  c.need(q_pos, "q > 0");
  return p_pos && q_pos && !s.is_infinite() && !ps.alpha->is_infinite() && !ps.beta->is_infinite();
}

void stein_weiss(Checker& c, const ParamSet& ps, bool radial) {
  const long long n = *ps.n;
  const ExtRational &p = *ps.p, &q = *ps.q;
  const bool p_is_1 = !p.is_infinite() && p.finite() == Rational(1);
  if (!two_weight_common(c, ps, radial)) return;
  const Rational ip = p.reciprocal(), iq = q.reciprocal();
  const Rational &a = ps.alpha->finite(), &b = ps.beta->finite(), &s = ps.s->finite();
  const Rational N(n);
  c.need(a < N * (Rational(1) - ip), "α < n/p′");
  c.need(b < N * iq, "β < n/q");
  if (!radial) {
    c.need(a + b >= Rational(0), "α+β ≥ 0");
  } else if (p_is_1) {
    c.need(a + b > (N - 1) * (iq - ip), "α+β > (n−1)(1/q − 1/p)");
  } else {
    c.need(a + b >= (N - 1) * (iq - ip), "α+β ≥ (n−1)(1/q − 1/p)");
  }
  scaling_two_weight(c, n, s, ip, iq, a, b);
  c.need(p <= q, "p ≤ q");
  c.need(!q.is_infinite(), "q < ∞");
}

void stein_weiss_qinf(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational& q = *ps.q;
  if (!two_weight_common(c, ps, false)) return;
  c.need(q.is_infinite(), "q = ∞");
  const Rational ip = ps.p->reciprocal(), iq = q.reciprocal();
  const Rational &a = ps.alpha->finite(), &b = ps.beta->finite(), &s = ps.s->finite();
  const Rational N(n);
  c.need(a < N * (Rational(1) - ip), "α < n/p′");
  c.need(b < N * iq, "β < n/q");
  scaling_two_weight(c, n, s, ip, iq, a, b);
  // Encoded as printed in the remark; the finite-q radial condition has the
  // opposite sign of (1/p - 1/q). A disagreement is reported, not resolved.
  const bool remark = a + b > (N - 1) * (ip - iq);
  const bool finite_form = a + b > (N - 1) * (iq - ip);
  c.need(remark, "α+β > (n−1)(1/p − 1/q)");
  if (remark != finite_form)
    c.out.notes.emplace_back(std::string("sign discrepancy: the finite-q form α+β > (n−1)(1/q − 1/p) is ") +
                             (finite_form ? "satisfied" : "violated") + " on this tuple");
}

void strauss(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p;
  bool p_ok = exponent_open(c, p, "1 < p < ∞");
  if (!p_ok || s.is_infinite()) {
    if (s.is_infinite()) c.need(false, "s < n");
    return;
  }
  c.need(p.reciprocal() < s.finite(), "1/p < s");
  c.need(s.finite() < Rational(n), "s < n");
}

void ni(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p;
  bool p_ok = exponent_open(c, p, "1 < p < ∞");
  if (!p_ok || s.is_infinite()) {
    if (s.is_infinite()) c.need(false, "s < n/p");
    return;
  }
  c.need(p.reciprocal() < s.finite(), "1/p < s");
  c.need(s.finite() < Rational(n) * p.reciprocal(), "s < n/p");
}

void critical(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p, &cw = *ps.c;
  bool p_ok = exponent_open(c, p, "1 < p < ∞");
  c.need(finite_gt(s, 0), "s > 0");
  if (!p_ok || s.is_infinite() || cw.is_infinite()) {
    if (cw.is_infinite()) c.need(false, "c finite");
    return;
  }
  const Rational N(n), &sv = s.finite(), &pv = p.finite(), &cv = cw.finite();
  c.need(sv < N / pv, "s < n/p");
  c.need(cv > -N, "c > −n");
  c.need((Rational(1) - sv * pv) * cv <= (N - 1) * pv * sv, "(1−sp)c ≤ (n−1)ps");
}

void weighted_conv(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &p = *ps.p, &q = *ps.q, &r = *ps.r;
  bool ok = exponent_open(c, p, "1 < p < ∞");
  ok = exponent_open(c, q, "1 < q < ∞") && ok;
  ok = exponent_open(c, r, "1 < r < ∞") && ok;
  if (!ok || ps.alpha->is_infinite() || ps.beta->is_infinite() || ps.gamma->is_infinite()) return;
  const Rational N(n), ip = p.reciprocal(), iq = q.reciprocal(), ir = r.reciprocal();
  const Rational &a = ps.alpha->finite(), &b = ps.beta->finite(), &g = ps.gamma->finite();
  const Rational one(1), zero(0);
  c.need(ir == ip + iq + (a + b + g) / N - one, "1/r = 1/p + 1/q + (α+β+γ)/n − 1");
  c.need(ir <= ip + iq, "1/r ≤ 1/p + 1/q");
  c.need(a < N * (one - ip), "α < n/p′");
  c.need(b < N * (one - iq), "β < n/q′");
  c.need(g < N * ir, "γ < n/r");
  c.need(a + b >= (N - one) * (one - ip - iq), "α+β ≥ (n−1)(1 − 1/p − 1/q)");
  c.need(b + g >= (N - one) * (ir - iq), "β+γ ≥ (n−1)(1/r − 1/q)");
  c.need(g + a >= (N - one) * (ir - ip), "γ+α ≥ (n−1)(1/r − 1/p)");
  const bool any_pos = a > zero || b > zero || g > zero;
  const bool all_zero = a == zero && b == zero && g == zero;
  c.need(any_pos || all_zero, "max{α,β,γ} > 0 or α=β=γ=0");
}

void weighted_emb(Checker& c, const ParamSet& ps) {
  const long long n = *ps.n;
  const ExtRational &s = *ps.s, &p = *ps.p, &r = *ps.r, &cw = *ps.c;
  bool p_ok = exponent_open(c, p, "1 < p < ∞");
  c.need(finite_gt(s, 0), "s > 0");
  if (!p_ok || s.is_infinite() || cw.is_infinite()) {
    if (cw.is_infinite()) c.need(false, "c finite");
    return;
  }
  const Rational N(n), &sv = s.finite(), &pv = p.finite(), &cv = cw.finite();
  const bool sub = sv < N / pv;
  c.need(sub, "s < n/p");
  c.need(p <= r, "p ≤ r");
  if (sub) c.need(r <= ExtRational(*ps.p_star_c()), "r ≤ p*_c");
  c.need(-(sv * pv) < cv, "−sp < c");
  if (r.is_infinite())
    c.need(false, "c < (n−1)(r−p)/p");
  else
    c.need(cv < (N - 1) * (r.finite() - pv) / pv, "c < (n−1)(r−p)/p");
}

}  // namespace

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> all = [] {
    std::vector<TheoremId> v;
    for (const auto& [id, name] : kNames) v.push_back(id);
    return v;
  }();
  return all;
}

std::string theorem_name(TheoremId t) {
  for (const auto& [id, name] : kNames)
    if (id == t) return name;
  throw DomainError("unknown theorem id");
}

TheoremId parse_theorem(const std::string& name) {
  for (const auto& [id, nm] : kNames)
    if (name == nm) return id;
  throw SchemaError("unknown theorem '" + name + "'");
}

std::optional<Rational> ParamSet::p_star() const {
  if (!n || !s || !p || s->is_infinite() || p->is_infinite()) return std::nullopt;
  const Rational N(*n), d = N - s->finite() * p->finite();
  if (!(d > 0)) return std::nullopt;
  return N * p->finite() / d;
}

std::optional<Rational> ParamSet::p_star_c() const {
  if (!n || !s || !p || !c || s->is_infinite() || p->is_infinite() || c->is_infinite()) return std::nullopt;
  const Rational N(*n), d = N - s->finite() * p->finite();
  if (!(d > 0)) return std::nullopt;
  return p->finite() * (N + c->finite()) / d;
}

std::string ParamSet::str() const {
  std::string out;
  auto add = [&](const char* name, const std::string& v) {
    if (!out.empty()) out += ", ";
    out += name;
    out += '=';
    out += v;
  };
  if (n) add("n", std::to_string(*n));
  const std::pair<const char*, const std::optional<ExtRational>*> fields[] = {
      {"s", &s}, {"p", &p}, {"q", &q}, {"r", &r}, {"alpha", &alpha}, {"beta", &beta}, {"gamma", &gamma}, {"c", &c}};
  for (const auto& [name, f] : fields)
    if (f->has_value()) add(name, (*f)->str());
  return out;
}

std::vector<std::string> required_fields(TheoremId t) {
  switch (t) {
    case TheoremId::Sobolev_1_1:
    case TheoremId::HLS_2_1:
      return {"n", "s", "p", "q"};
    case TheoremId::SteinWeiss_2_2:
    case TheoremId::RadialSW_2_3:
    case TheoremId::RadialSW_qinf_2_4:
      return {"n", "s", "p", "q", "alpha", "beta"};
    case TheoremId::Strauss_5_2:
    case TheoremId::Ni_6_1:
    case TheoremId::NiBall_8_1:
      return {"n", "s", "p"};
    case TheoremId::Critical_6_2:
    case TheoremId::CriticalBall_8_2:
      return {"n", "s", "p", "c"};
    case TheoremId::WeightedConv_6_3:
      return {"n", "p", "q", "r", "alpha", "beta", "gamma"};
    case TheoremId::WeightedEmb_6_4:
      return {"n", "s", "p", "r", "c"};
  }
  throw DomainError("unknown theorem id");
}

ConditionCheck check_conditions(TheoremId t, const ParamSet& ps) {
  for (const std::string& f : required_fields(t)) {
    bool present = f == "n" ? ps.n.has_value() : field(ps, f).has_value();
    if (!present) throw SchemaError("missing field '" + f + "' for " + theorem_name(t));
  }
  Checker c;
  c.need(*ps.n >= 1, "n ≥ 1");
  if (c.failed()) return c.out;
  switch (t) {
    case TheoremId::Sobolev_1_1: sobolev(c, ps); break;
    case TheoremId::HLS_2_1: hls(c, ps); break;
    case TheoremId::SteinWeiss_2_2: stein_weiss(c, ps, false); break;
    case TheoremId::RadialSW_2_3: stein_weiss(c, ps, true); break;
    case TheoremId::RadialSW_qinf_2_4: stein_weiss_qinf(c, ps); break;
    case TheoremId::Strauss_5_2: strauss(c, ps); break;
    case TheoremId::Ni_6_1:
    case TheoremId::NiBall_8_1: ni(c, ps); break;
    case TheoremId::Critical_6_2:
    case TheoremId::CriticalBall_8_2: critical(c, ps); break;
    case TheoremId::WeightedConv_6_3: weighted_conv(c, ps); break;
    case TheoremId::WeightedEmb_6_4: weighted_emb(c, ps); break;
  }
  c.out.admissible = c.out.violated.empty();
  return c.out;
}

}  // namespace radlab
