#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "radlab/conditions.hpp"
#include "radlab/grid.hpp"
#include "radlab/norms.hpp"
#include "radlab/potentials.hpp"
#include "radlab/profile.hpp"

namespace radlab {

// One profile (or profile pair, for the convolution inequality) of a sweep.
struct RatioSample {
  std::string descriptor;
  std::size_t family_index = 0;  // position in the family (pair index for convolutions)
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // NaN unless counted
  // Sample status. Only `counted` samples enter sup_ratio.
  bool counted = false;
  bool excluded = false;    // 0/0 or zero right-hand side: carries no information
  bool divergent = false;   // right-hand side infinite: profile outside the space
  bool unexpected = false;  // left-hand side infinite while the right-hand side is finite
  bool failed = false;      // numerical failure while evaluating
  std::string flag;         // reason for any of the above, empty when counted
  double grid_resolution = 0.0;
  // NiBall_8_1 with p = 2, s = 1, n >= 3: sup r^{(n-2)/2}|u| / ||grad u||_2; NaN otherwise
  double gradient_ratio = 0.0;
};

struct GridMetadata {
  double r_min_factor = 0.0;  // operator grid [r_min_factor L, r_max_factor L], L = profile scale
  double r_max_factor = 0.0;
  int nodes_per_decade = 0;
  std::string derivative_method;  // "spectral" or "hypersingular"
  std::string potential_method;   // route of I^s and of convolutions
  int ball_modes = 0;             // ball theorems only
  double ball_radius = 0.0;
};

struct RatioReport {
  TheoremId theorem = TheoremId::Sobolev_1_1;
  ParamSet params;
  bool admissible = false;
  std::vector<std::string> violated;
  std::vector<std::string> notes;
  std::vector<RatioSample> samples;  // sorted by (descriptor, family_index)
  double sup_ratio = 0.0;            // max over counted samples; NaN when none counted
  GridMetadata grid;
  int counted = 0, excluded = 0, divergent = 0, unexpected = 0, failed = 0;
};

struct MeasureOptions {
  int threads = 1;
  DiffMethod method = DiffMethod::spectral;
  double grid_density = 1.0;  // multiplies the nodes per decade of operator grids
  bool run_anyway = false;    // measure inadmissible tuples too
  double ball_radius = 1.0;
  int ball_modes = 64;
  std::size_t max_pairs = 16;  // convolution inequality: cap on (f, g) pairs
};

// Log-uniform operator grid on [1e-3 L, 16 L], 48 * density nodes per decade,
// L = u.scale(), plus a 240 * density per decade band around the support of
// profiles that vanish near the origin. Dilating u dilates the grid, which
// keeps dilation identities exact up to rounding.
Grid lab_grid(const RadialProfile& u, double density = 1.0);

// {Gaussian(2^k): k = -3..3}, smooth bumps of widths 1/2 and 2, and two power
// cutoffs r^a psi(r) with a = a0 + 1/4 and a0 + 1, where a0 is the critical
// exponent of the theorem's space (ball theorems: phi_1, two bumps, constant).
// DomainError when a needed exponent is absent.
std::vector<RadialProfile> default_family(TheoremId t, const ParamSet& params,
                                          const MeasureOptions& opt = {});

// Empirical constant of the inequality of t over the family. ContractError
// for inadmissible parameters unless opt.run_anyway; SchemaError for missing
// fields; DomainError for an empty family or a dimension mismatch.
RatioReport measure_ratio(TheoremId t, const ParamSet& params, const std::vector<RadialProfile>& family,
                          const MeasureOptions& opt = {});

// ||u||_p + ||D^s u||_p with D^s on lab_grid(u). Divergent (regularity) for a
// jump with s >= 1/p or an origin power too singular for D^s u to be in L^p.
NormValue lab_hsp_norm(const RadialProfile& u, double s, double p, DiffMethod method = DiffMethod::spectral,
                       double density = 1.0);

struct ScaledQuotient {
  bool degenerate = false;  // zero numerator and denominator
  double value = 0.0;       // NaN when degenerate
  double numerator = 0.0;
  double denominator = 0.0;
};

// sup |y|^{(n-1)/p} |u(y)| / (||u||_p^{1 - 1/(sp)} ||D^s u||_p^{1/(sp)}).
// DomainError unless 1 < p < inf and s > 1/p.
ScaledQuotient strauss_scaled_ratio(const RadialProfile& u, double s, double p,
                                    DiffMethod method = DiffMethod::spectral);

// sup |x|^{n/p - s} |u(x)| / ||D^s u||_p. DomainError unless 1 < p < inf and
// 0 < s < n/p.
ScaledQuotient ni_homogeneous_quotient(const RadialProfile& u, double s, double p,
                                       DiffMethod method = DiffMethod::spectral);

// Minimiser of f(t) = a t + b t^{-gamma} over t > 0, checked against t0/2 and 2 t0.
struct ScalingOptimum {
  double t0 = 0.0;
  double f_min = 0.0;        // f(t0) evaluated directly
  double closed_form = 0.0;  // (gamma+1) gamma^{-gamma/(gamma+1)} a^{gamma/(gamma+1)} b^{1/(gamma+1)}
};
ScalingOptimum optimal_scaling(double a, double b, double gamma);

// ||u(. + d e_1) - u||_{L^q(R^n)} for compactly supported radial u. Disjoint
// translates (d >= 2 support radius) use 2^{1/q} ||u||_q unless
// force_quadrature, which integrates in cylindrical coordinates regardless.
double translate_distance(const RadialProfile& u, double d, double q, bool force_quadrature = false);

struct NoncompactnessDemo {
  std::vector<std::vector<double>> distances;  // ||u_i - u_j||_q, u_i = u(. + i v e_1)
  double norm_q = 0.0;
  double disjoint_distance = 0.0;  // 2^{1/q} ||u||_q
  bool overlapping = false;        // some pair has intersecting supports
};
NoncompactnessDemo noncompactness_demo(const RadialProfile& u, double v, double q, int N);

// Sup of the measured embedding ratio ||u||_{L^q(|x|^c)} / ||u||_{H^{s,p}} over
// the family at c = (n-1)(q-p)/p, the weight that turns the tail bound into the
// embedding. This c is the closed endpoint of the embedding's weight range, so
// the sweep runs with run_anyway and reports it in the notes.
RatioReport tail_embedding_report(int n, double p, double q, double s, const std::vector<RadialProfile>& family,
                                  const MeasureOptions& opt = {});

struct TailMass {
  double tail = 0.0;      // int_{|x| > R} |u|^q
  double bound = 0.0;     // (C ||u||_{H^{s,p}})^q R^{gamma q}
  double gamma = 0.0;     // (n-1)(1/q - 1/p)
  double constant = 0.0;  // C
  double hsp = 0.0;
};
// DomainError unless 1 < p <= q < inf, R > 0 and s > 1/p - 1/q.
TailMass tail_mass(const RadialProfile& u, double q, double R, double p, double s, double constant,
                   DiffMethod method = DiffMethod::spectral);
// C measured over {u} alone.
TailMass tail_mass(const RadialProfile& u, double q, double R, double p, double s);

// sup over the (R, rho) grid of |f * chi_{B(0,R)}|(rho) rho^{(n-1)/p} R^{1/p-n} / ||f||_p,
// split by the regimes rho > 2R and rho <= 2R.
struct LemmaSweep {
  double sup = 0.0;
  double sup_far = 0.0;   // rho > 2R
  double sup_near = 0.0;  // rho <= 2R
  int far_points = 0, near_points = 0;
  std::vector<std::vector<double>> values;  // [i over Rs][j over rhos]
};
LemmaSweep lemma_indicator_sweep(const RadialProfile& f, double p, const std::vector<double>& Rs,
                                 const std::vector<double>& rhos);

}  // namespace radlab
