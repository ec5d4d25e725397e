#pragma once

#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"

namespace radlab {

// Area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).  (surface_area(1) = 2.)
double surface_area(int n);

// Volume of the unit ball in R^n.
double ball_volume(int n);

// int_0^pi sin^{n-2}(theta) d theta, the normaliser of the polar-angle measure.
double polar_normalizer(int n);

// Mean of u over the sphere of radius h whose centre is at distance rho from
// the origin.  For n >= 2 this is a polar-angle integral with weight
// sin^{n-2}; for n = 1 it is the two-point average.
double sphere_mean(const RadialProfile& u, double rho, double h, const QuadratureSpec& spec = {});

// Distance from the origin to the point at polar angle theta on that sphere,
// computed without cancellation near theta = pi.
double sphere_point_radius(double rho, double h, double theta);

}  // namespace radlab
