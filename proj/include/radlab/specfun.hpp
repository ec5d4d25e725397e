#pragma once

#include <vector>

#include "radlab/grid.hpp"

namespace radlab {

// Gamma function; DomainError at poles (0, -1, -2, ...).
double gamma_fn(double x);

// J_nu(x) for nu >= -1/2 and x >= 0.
double bessel_j(double nu, double x);

// x^{-nu} J_nu(x), continuous at x = 0 with value 1/(2^nu Gamma(nu+1)).
// This is the kernel of the radial Fourier transform.
double bessel_lambda(double nu, double x);

// k-th positive zero of J_nu (k >= 1).
double bessel_zero(double nu, int k);
// Zeros k = first .. first+count-1.
std::vector<double> bessel_zeros(double nu, int first, int count);

// Bessel-potential kernel G_s(r) on R^n, 0 < s < n, r > 0, by quadrature of
// its subordination integral in the variable u = log t.
double kernel_gs(int n, double s, double r);

// G_s tabulated on a log-uniform grid and interpolated (cubic in log-log).
// Below the grid the r^{s-n} law is matched to the first node; above it the
// kernel is evaluated directly.  Immutable after construction.
class KernelGs {
 public:
  KernelGs(int n, double s, const Grid& grid);
  KernelGs(int n, double s);  // default grid [1e-5, 60], 2400 nodes

  double operator()(double r) const;
  int dim() const noexcept { return n_; }
  double order() const noexcept { return s_; }
  const Grid& grid() const noexcept { return grid_; }

 private:
  int n_;
  double s_;
  Grid grid_;
  std::vector<double> logr_, logv_;
};

}  // namespace radlab
