#pragma once

#include <functional>
#include <vector>

#include "radlab/grid.hpp"
#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"

// Fourier transform of radial functions in the unitary convention
//   F u(w) = (2 pi)^{-n/2} int u(x) e^{-i w.x} dx,
// which for u(x) = u0(|x|) reduces to
//   F u(rho) = int_0^inf u0(r) r^{n-1} Lambda_nu(r rho) dr,  nu = n/2 - 1,
// with Lambda_nu(x) = x^{-nu} J_nu(x).  The same formula inverts it.
namespace radlab {

struct HankelValue {
  double value = 0.0;
  double error = 0.0;
};

// Transform at a single frequency.  DomainError when the tail of u makes the
// integral divergent (power tails need exponent < -(n+1)/2, and < -n at rho = 0).
HankelValue hankel_at(const RadialProfile& u, double rho, const QuadratureSpec& spec = {});

struct TransformResult {
  RadialProfile profile;
  std::vector<double> error;  // per output node
};

// Transform sampled on out_grid.  The result's tail exponent encodes the decay
// expected from the regularity of u: -inf (treated as zero beyond the grid)
// for smooth u, -(n+1)/2 when u has a jump, -(n+a) for an r^a origin cusp.
TransformResult hankel_fourier_with_errors(const RadialProfile& u, const Grid& out_grid,
                                           const QuadratureSpec& spec = {});
RadialProfile hankel_fourier(const RadialProfile& u, const Grid& out_grid,
                             const QuadratureSpec& spec = {});
// Same, on default_frequency_grid(u).
RadialProfile hankel_fourier(const RadialProfile& u, const QuadratureSpec& spec = {});

// Decay exponent of F u implied by the regularity of u (see hankel_fourier).
double transform_tail_exponent(const RadialProfile& u);

// Frequency beyond which |F u(rho)| * rho^growth stays below rel * its peak.
double frequency_cutoff(const RadialProfile& u, double growth = 0.0, double rel = 1e-16);

// Grid covering the frequency content of u.  Sampled data: log-uniform over
// the reciprocal of the input span.  Otherwise [1e-4 / scale, cutoff], log-
// uniform until the spacing would exceed 0.2 / (effective radius), uniform
// after that so the oscillation of F u stays resolved.
Grid default_frequency_grid(const RadialProfile& u, int nodes_per_decade = 240);

// A Fourier multiplier m(rho) with m ~ rho^kappa as rho -> 0.  Symbols that
// are smooth functions of rho^2 near 0 do not create an r^{-n-kappa} tail.
struct Multiplier {
  std::function<double(double)> fn;
  double origin_exponent = 0.0;  // kappa
  bool smooth_at_origin = false;
  double growth = 0.0;  // m(rho) = O(rho^growth) as rho -> inf

  static Multiplier identity();
  static Multiplier power(double s);   // rho^s: (-Delta)^{s/2}, Riesz for s < 0
  static Multiplier bessel(double s);  // (1 + rho^2)^{-s/2}
  static Multiplier custom(std::function<double(double)> fn, double origin_exponent,
                           double growth, bool smooth_at_origin = false);
};

struct SpectralOptions {
  double r_max = 0.0;       // largest output radius served; 0 -> 8 * effective radius
  double max_growth = 2.0;  // multipliers up to rho^max_growth are resolved
  double truncation = 1e-14;
  double rho_cap = 4000.0;  // frequency cap, in units of 1 / (effective radius)
  int panel_nodes = 16;
};

// Fourier transform of u tabulated at composite Gauss-Legendre nodes in rho
// (graded towards 0 so that rho^kappa singularities are integrated exactly
// enough).  Built once and reused for any number of multipliers.
class SpectralRepresentation {
 public:
  SpectralRepresentation(const RadialProfile& u, const SpectralOptions& opt = {});

  int dim() const noexcept { return n_; }
  double rho_max() const noexcept { return rho_max_; }
  double r_max() const noexcept { return r_max_; }
  bool truncated() const noexcept { return truncated_; }
  const std::vector<double>& nodes() const noexcept { return rho_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  const std::vector<double>& transform() const noexcept { return uhat_; }
  const TailBehavior& input_tail() const noexcept { return tail_; }
  bool input_zero_mean() const noexcept { return zero_mean_; }

  // Inverse transform of m * F u at radius r (r <= r_max for full accuracy).
  double inverse_at(const Multiplier& m, double r) const;
  std::vector<double> inverse(const Multiplier& m, const std::vector<double>& radii) const;
  // Estimate of int_{rho_max}^inf |m F u| rho^{n-1} drho relative to the
  // integral below rho_max.
  double truncation_estimate(const Multiplier& m) const;

 private:
  int n_;
  double nu_;
  double rho_max_ = 0.0, r_max_ = 0.0;
  bool truncated_ = false;
  bool zero_mean_ = false;
  TailBehavior tail_{TailKind::compact, 0.0};
  std::vector<double> rho_, w_, uhat_;
};

// Profile with transform m * F u, sampled on out_grid.
RadialProfile apply_multiplier(const SpectralRepresentation& rep, const Multiplier& m,
                               const Grid& out_grid);
RadialProfile apply_multiplier(const RadialProfile& u, const Multiplier& m, const Grid& out_grid);

// Tail exponent of the profile with transform m * F u.
double multiplier_tail_exponent(int n, const TailBehavior& input_tail, bool zero_mean,
                                const Multiplier& m);

}  // namespace radlab
