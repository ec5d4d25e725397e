#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radlab/grid.hpp"
#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"
#include "radlab/specfun.hpp"

namespace radlab {

enum class SingularityClass { bounded, power };

// Radial convolution kernel k(|z|) on R^n.
struct RingKernel {
  int n = 0;
  std::function<double(double)> k;
  SingularityClass singularity = SingularityClass::bounded;
  double sigma = 0.0;  // k(t) ~ t^{-sigma} near 0 when singularity == power; sigma < n
  double support = std::numeric_limits<double>::infinity();  // k = 0 beyond
  double decay = -std::numeric_limits<double>::infinity();   // k(t) ~ t^decay at infinity
  std::string name;

  void validate() const;

  static RingKernel riesz(int n, double s);        // c(n,s) |z|^{s-n}
  static RingKernel bessel(int n, double s);       // G_s
  static RingKernel indicator(int n, double R);    // chi_{B(0,R)}
  static RingKernel constant(int n);               // k = 1
};

// c(n,s) = Gamma((n-s)/2) / (2^s pi^{n/2} Gamma(s/2)): Fourier symbol |w|^{-s}.
double riesz_constant(int n, double s);

// Sphere-reduced kernel: W(rho, r) = int over |y| = r of k(|x - y|) dS(y) / r^{n-1},
// |x| = rho, so that (k * f)(rho) = int_0^inf f0(r) r^{n-1} W(rho, r) dr.
double ring_weight(const RingKernel& K, double rho, double r, const QuadratureSpec& spec = {});

double radial_convolve_at(const RingKernel& K, const RadialProfile& f, double rho,
                          const QuadratureSpec& spec = {});

// (k * f) on out_grid; the declared tail of the result is `tail_exponent`.
RadialProfile radial_convolve(const RingKernel& K, const RadialProfile& f, const Grid& out_grid,
                              double tail_exponent, const QuadratureSpec& spec = {});
// Tail inferred from the kernel decay and the tail of f.
RadialProfile radial_convolve(const RingKernel& K, const RadialProfile& f, const Grid& out_grid,
                              const QuadratureSpec& spec = {});

// Log-uniform [1e-3 L, 64 L] with 40 nodes per decade, L = scale of f.
Grid default_operator_grid(const RadialProfile& f);

RadialProfile riesz_potential(const RadialProfile& f, double s, const Grid& out_grid,
                              const QuadratureSpec& spec = {});
RadialProfile riesz_potential(const RadialProfile& f, double s);
// Same operator through the Fourier symbol |w|^{-s}.
RadialProfile riesz_potential_spectral(const RadialProfile& f, double s, const Grid& out_grid);

RadialProfile bessel_convolve(const RadialProfile& f, double s, const Grid& out_grid,
                              const QuadratureSpec& spec = {});
RadialProfile bessel_convolve(const RadialProfile& f, double s);
RadialProfile bessel_convolve_spectral(const RadialProfile& f, double s, const Grid& out_grid);

// (f * chi_{B(0,R)})(x) at |x| = rho.
double indicator_convolve(const RadialProfile& f, double R, double rho,
                          const QuadratureSpec& spec = {});

// Difference order used when none is requested: s itself for odd integer s
// (larger orders make the normalising constant vanish), else floor(s) + 1.
int default_difference_order(double s);

struct FracDiffScheme {
  int n = 0;
  double s = 0.0;
  int l = 0;
  std::vector<double> eps_sequence{1e-1, 3e-2, 1e-2};
  std::optional<double> calibration_constant;  // stands in for 1 / d_{n,l}(s)
  double calibration_residual = 0.0;           // sup-relative misfit on the fit grid

  // Validates (n, s, l, eps_sequence); l defaults to default_difference_order(s).
  static FracDiffScheme make(int n, double s, std::optional<int> l = std::nullopt,
                             std::vector<double> eps_sequence = {1e-1, 3e-2, 1e-2});
  bool calibrated() const noexcept { return calibration_constant.has_value(); }
};

// Fits the constant by least squares of the raw hypersingular integral
// against the spectral derivative of a unit Gaussian; returns a new scheme.
// DomainError when the raw integral vanishes identically (degenerate l).
FracDiffScheme calibrate(const FracDiffScheme& scheme);

// omega_n int_eps^inf t^{-1-s} Phi(t) dt where Phi(t) is the mean over the
// unit sphere of the l-th difference with step t; eps = 0 gives the full
// hypersingular integral (without the constant).
double hypersingular_raw(const RadialProfile& u, double s, int l, double rho, double eps,
                         const QuadratureSpec& spec = {});

enum class DiffMethod { spectral, hypersingular };

RadialProfile frac_derivative(const RadialProfile& u, double s, const FracDiffScheme& scheme,
                              DiffMethod method, const Grid& out_grid,
                              const QuadratureSpec& spec = {});
RadialProfile frac_derivative(const RadialProfile& u, double s, const FracDiffScheme& scheme,
                              DiffMethod method);

// D^s_eps applied to a profile (truncation |y| > eps).
RadialProfile truncated_derivative(const RadialProfile& u, double s, double eps,
                                   const FracDiffScheme& scheme, const Grid& out_grid,
                                   const QuadratureSpec& spec = {});

// D^s_eps (I^s u); I^s u is built on a dense grid through the ring path.
RadialProfile truncated_inversion(const RadialProfile& u, double s, double eps,
                                  const FracDiffScheme& scheme, const Grid& out_grid,
                                  const QuadratureSpec& spec = {});

// truncated_inversion for every eps of scheme.eps_sequence, sharing one I^s u.
std::vector<RadialProfile> truncated_inversion_sequence(const RadialProfile& u, double s,
                                                        const FracDiffScheme& scheme,
                                                        const Grid& out_grid,
                                                        const QuadratureSpec& spec = {});

// max |a - b| / max |b| over the radii.
double sup_relative_error(const RadialProfile& a, const RadialProfile& b,
                          const std::vector<double>& radii);

}  // namespace radlab
