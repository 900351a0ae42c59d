#pragma once

#include "boxspline/types.hpp"

namespace boxspline {

/// Covariance of the four-directional box spline on the axis basis.
Covariance beta_covariance(const ScaleVector& a);

/// Covariance of the box spline on the rotated basis (directions (2,1), (1,2), (-1,2), (-2,1)).
Covariance beta_prime_covariance(const ScaleVector& a);

Covariance kernel_covariance(BasisId basis, const ScaleVector& a);

ShapeParams shape_from_covariance(const Covariance& c);
Covariance covariance_from_shape(const ShapeParams& p);

/// Orientation of the major axis in [0, pi); 0 for isotropic input.
double orientation(const Covariance& c);
double elongation(const Covariance& c);

/// Largest eigenvalue ratio realizable at orientation phi, or kInfinity.
double elongation_bound(double phi, BasisId basis);

/// Largest sigma^2 keeping C - sigma^2 I positive definite.
double sigma_bound_pd(const Covariance& c);

/// Largest sigma^2 keeping C - sigma^2 I within the elongation bound of the basis.
/// Non-positive when C itself exceeds the bound.
double sigma_bound_elongation(const Covariance& c, BasisId basis);

struct CovarianceSplit {
  double sigma2;
  Covariance residual;
};

/// C = sigma2 I + residual with sigma2 = fraction * sigma_bound_elongation(C, basis).
CovarianceSplit split_covariance(const Covariance& c, double fraction, BasisId basis);

/// Basis with the larger elongation bound at phi; ties go to Theta.
BasisId sector_select(double phi);

}  // namespace boxspline
