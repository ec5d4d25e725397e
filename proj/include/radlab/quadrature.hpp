#pragma once

#include <span>
#include <string>
#include <vector>

#include "radlab/function_ref.hpp"

namespace radlab {

enum class EndpointRule { gauss, double_exponential };

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  EndpointRule endpoint_rule = EndpointRule::gauss;

  void validate() const;
  QuadratureSpec with_rule(EndpointRule r) const {
    QuadratureSpec q = *this;
    q.endpoint_rule = r;
    return q;
  }
};

std::string to_string(EndpointRule r);
EndpointRule endpoint_rule_from_string(const std::string& s);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

// Integral of f over (a, b); a, b may be +-infinity.  Infinite ranges are
// compactified with x = a + t/(1-t) (resp. the mirrored map) before any rule is
// applied.  Interior breakpoints split the range; under the double-exponential
// rule every piece gets tanh-sinh so singularities may sit on any breakpoint.
// Throws QuadratureFailure (with the partial estimate) when the tolerance is
// not met within spec.max_subdivisions.
QuadResult integrate(FunctionRef<double(double)> f, double a, double b,
                     const QuadratureSpec& spec, std::span<const double> breakpoints = {});

struct GaussRule {
  std::vector<double> nodes;    // ascending on (-1, 1)
  std::vector<double> weights;
};

// Gauss-Legendre rule with m points, built by Newton iteration on P_m.
// Rules for m <= 128 are built once and shared.
const GaussRule& gauss_legendre(int m);

// Nodes/weights of m-point Gauss-Legendre mapped to [a, b], appended.
void append_gauss_panel(double a, double b, int m, std::vector<double>& x,
                        std::vector<double>& w);

// Wynn epsilon extrapolation of a sequence of partial sums; returns the last
// stable diagonal element and an error estimate from successive diagonals.
struct Extrapolated {
  double value;
  double error;
};
Extrapolated wynn_epsilon(std::span<const double> partial_sums);

}  // namespace radlab
