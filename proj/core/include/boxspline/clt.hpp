#pragma once

#include "boxspline/kernel.hpp"

namespace boxspline {

struct CltResult {
  SampledKernel kernel;     // density samples of the N-fold convolution
  double max_err_fraction;  // max |kernel - gaussian| / gaussian peak
};

/// Convolves N equal-width box distributions at angles (k-1) pi / N, each
/// rasterized as a rotated rectangle one pitch thick, and compares with the
/// isotropic Gaussian of variance sigma^2.
CltResult clt_demo(int n, double sigma, double pitch);

/// Unit-mass density raster of a rectangle of length `length` along angle
/// `theta` and thickness one pitch.
SampledKernel rasterize_box_distribution(double length, double theta, double pitch);

}  // namespace boxspline
