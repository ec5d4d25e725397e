#pragma once

#include <string>
#include <utility>
#include <vector>

#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"

namespace radlab {

// Radial Dirichlet eigenpairs of -Laplace on B(0, R) in R^n:
//   lambda_k = (j_{nu,k} / R)^2,  phi_k(x) = a_k |x|^{-nu} J_nu(j_{nu,k} |x| / R),
// nu = n/2 - 1, a_k making ||phi_k||_{L^2(B)} = 1.
struct BallSpectrum {
  int n = 0;
  double R = 0.0;
  int K = 0;
  double nu = 0.0;
  std::vector<double> zeros;        // j_{nu,k}, k = 1..K
  std::vector<double> eigenvalues;  // lambda_k
  std::vector<double> normalizers;  // a_k, by quadrature
  double orthonormality_residual = 0.0;  // max |<phi_i, phi_j> - delta_ij|
  double eigen_residual = 0.0;           // max relative finite-difference residual of -Laplace phi = lambda phi

  // Unit-norm eigenfunction k (1-based) as a profile.
  RadialProfile mode(int k) const;
};

// Builds the spectrum and checks it; NumericError when orthonormality
// (1e-8) or the eigen-equation residual (1e-5) fails.
BallSpectrum build_spectrum(int n, double R, int K);

// <phi_i, phi_j> on a panel Gauss rule with `panels` uniform panels of 24 nodes.
std::vector<std::vector<double>> ball_gram(const BallSpectrum& spec, int panels);

// Max over interior radii of |-Laplace_h phi_k - lambda_k phi_k| / (lambda_k max|phi_k|)
// with fourth-order central differences of step h.
double eigen_residual(const BallSpectrum& spec, int k, double h);

// (omega_n int_0^R |f0|^p r^{n-1} dr)^{1/p}, 1 <= p < inf.
double ball_lp_norm(const RadialProfile& f, double p, double R, const QuadratureSpec& quad = {});

struct BallExpansion {
  RadialProfile u = RadialProfile::zero(2);  // sum_k lambda_k^{-s/2} c_k phi_k
  std::vector<double> coefficients;  // c_k = <f, phi_k>
  double tail_estimate = 0.0;       // extrapolated sum_{k>K} lambda_k^{-s} c_k^2
  double truncated_norm = 0.0;      // (sum_{k<=K} lambda_k^{-s} c_k^2)^{1/2}
  bool truncation_warning = false;
};

// (-Laplace_B)^{-s/2} f by the eigen-expansion. The warning (also attached to
// the profile notes) is set when sqrt(tail) exceeds tol * truncated_norm.
BallExpansion ball_expand(const RadialProfile& f, double s, const BallSpectrum& spec, double tol = 1e-6);
RadialProfile ball_frac_inverse(const RadialProfile& f, double s, const BallSpectrum& spec);

struct NiBallRatio {
  bool degenerate = false;  // f = 0: no information, excluded
  double lhs = 0.0;         // sup_{0<r<=R} r^{n/p - s} |u(r)|
  double rhs = 0.0;         // ||f||_{L^p(B)}
  double ratio = 0.0;
  // p = 2, s = 1, n >= 3 only: sup r^{(n-2)/2} |u| / ||grad u||_2 (else NaN)
  double gradient_ratio = 0.0;
  double grad_norm = 0.0;
  double grid_resolution = 0.0;
};

// u = (-Laplace_B)^{-s/2} f and the pointwise quotient of the ball form of
// the Ni inequality. ContractError unless 1/p < s < n/p.
NiBallRatio ni_ball_ratio(const RadialProfile& f, double s, double p, const BallSpectrum& spec);

// sup |x|^{(n-2)/2} |u(x)| / ||grad u||_{L^2(B)} for a radial u vanishing at |x| = R.
double ni_gradient_quotient(const RadialProfile& u, double R);

// Radial sector of the truncated kernel, sum_{k<=K} lambda_k^{-s/2} phi_k(rho) phi_k(r).
double ball_kernel(const BallSpectrum& spec, double s, double rho, double r);

// max over the pairs of ball_kernel / |rho - r|^{s - n}: the single constant of
// the kernel bound on these pairs (truncated kernel, see caveat).
struct KernelDomination {
  double constant = 0.0;
  std::string caveat;
};
KernelDomination kernel_domination(const BallSpectrum& spec, double s,
                                   const std::vector<std::pair<double, double>>& pairs);

}  // namespace radlab
