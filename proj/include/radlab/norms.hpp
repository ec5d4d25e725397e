#pragma once

#include <string>

#include "radlab/potentials.hpp"
#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"

namespace radlab {

// || |x|^a f ||_{L^p(R^n)}, p in [1, inf].
struct WeightedNormSpec {
  int n = 0;
  double p = 2.0;
  double a = 0.0;

  void validate() const;
};

// regularity: the profile lacks the smoothness the quantity needs (e.g. D^s of a jump).
enum class Divergence { none, origin, infinity, regularity };

// A norm that may legitimately be infinite: divergence is data, not an error.
struct NormValue {
  double value = 0.0;  // +inf when divergent
  Divergence divergence = Divergence::none;
  std::string reason;
  double error = 0.0;            // quadrature error estimate
  double grid_resolution = 0.0;  // p = inf: log-spacing of the sup search grid

  bool finite() const noexcept { return divergence == Divergence::none; }
  static NormValue divergent(Divergence where, std::string why);
};

NormValue weighted_lp_norm(const RadialProfile& f, const WeightedNormSpec& spec,
                           const QuadratureSpec& quad = {});

// int_{R^n} |x|^c |f|^r dx (may be +inf).
NormValue weighted_power_integral(const RadialProfile& f, double c, double r,
                                  const QuadratureSpec& quad = {});

// ||u||_p + ||D^s u||_p, the characterisation norm of H^{s,p}.
NormValue hsp_norm(const RadialProfile& u, double s, double p, const FracDiffScheme& scheme,
                   DiffMethod method = DiffMethod::hypersingular);

// (int |F u(w)|^2 |w|^{2s} dw)^{1/2} from a spectral representation of u;
// infinite when the decay of F u forced by the regularity of u is too slow.
NormValue h_s2_fourier_seminorm(const RadialProfile& u, double s);

// Hoelder interpolation between L^q and L^{r~}(|x|^{c~}):
//   int |x|^c |u|^r <= (int |u|^q)^theta (int |x|^{c~} |u|^{r~})^{1-theta}
// with r = theta q + (1-theta) r~ and c~ = c / (1-theta).
struct HolderInterpolation {
  double theta = 0.0;
  double c_tilde = 0.0;
  NormValue lhs, rhs;
};
HolderInterpolation holder_interpolation(const RadialProfile& u, double c, double q, double r,
                                         double r_tilde, const QuadratureSpec& quad = {});

}  // namespace radlab
