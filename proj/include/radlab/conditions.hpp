#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radlab/rational.hpp"

namespace radlab {

// The inequalities under test. Identifiers are the external names used in
// configuration files and reports.
enum class TheoremId {
  Sobolev_1_1,
  HLS_2_1,
  SteinWeiss_2_2,
  RadialSW_2_3,
  RadialSW_qinf_2_4,
  Strauss_5_2,
  Ni_6_1,
  Critical_6_2,
  WeightedConv_6_3,
  WeightedEmb_6_4,
  NiBall_8_1,
  CriticalBall_8_2,
};

const std::vector<TheoremId>& all_theorems();
std::string theorem_name(TheoremId t);
// SchemaError for an unknown name.
TheoremId parse_theorem(const std::string& name);

// Exponents stored exactly. gamma is the third weight of the weighted
// convolution inequality; c is the power-weight exponent of the embeddings.
struct ParamSet {
  std::optional<long long> n;
  std::optional<ExtRational> s, p, q, r, alpha, beta, gamma, c;

  // np / (n - sp) when sp < n.
  std::optional<Rational> p_star() const;
  // p(n + c) / (n - sp) when sp < n.
  std::optional<Rational> p_star_c() const;

  // "n=3, s=1, p=2, ..." in fixed field order; absent fields omitted.
  std::string str() const;
  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

// Names: "n", "s", "p", "q", "r", "alpha", "beta", "gamma", "c".
std::vector<std::string> required_fields(TheoremId t);

struct ConditionCheck {
  bool admissible = false;
  std::vector<std::string> violated;  // human-readable condition labels, in check order
  std::vector<std::string> notes;     // observations that do not affect the verdict
};

// Exact decision of the hypothesis system of t. A missing required field is
// a SchemaError naming it.
ConditionCheck check_conditions(TheoremId t, const ParamSet& params);

}  // namespace radlab
