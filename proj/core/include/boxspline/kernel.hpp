#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "boxspline/geometry.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

struct KernelSpec {
  BasisId basis;
  ScaleVector scales;

  double operator()(double x, double y) const;
  /// Half-widths of the bounding box of the support.
  Vec2 support_half_extent() const;
};

template <typename T>
std::array<geom::Point<T>, 4> basis_directions(BasisId b) {
  if (b == BasisId::Theta) {
    const T r = std::sqrt(T(2)) / 2;
    return {{{T(1), T(0)}, {r, r}, {T(0), T(1)}, {-r, r}}};
  }
  const T s = 1 / std::sqrt(T(5));
  return {{{2 * s, s}, {s, 2 * s}, {-s, 2 * s}, {-2 * s, s}}};
}

/// Box spline value at (x, y): overlap of the rectangle spanned by (u1, u3) at the
/// origin with the rectangle spanned by (u2, u4) at (x, y), over a1 a2 a3 a4.
/// A single zero scale collapses its rectangle to a segment.
template <typename T>
T eval_box_spline(BasisId b, const std::array<T, 4>& a, T x, T y) {
  const auto u = basis_directions<T>(b);
  const geom::Point<T> o{T(0), T(0)};
  const geom::Point<T> p{x, y};
  const bool z1 = a[0] == 0 || a[2] == 0;
  const bool z2 = a[1] == 0 || a[3] == 0;
  if (!z1 && !z2) {
    const geom::Rect<T> r1{o, u[0], u[2], a[0], a[2]};
    const geom::Rect<T> r2{p, u[1], u[3], a[1], a[3]};
    return geom::rect_overlap_area(r1, r2) / (a[0] * a[1] * a[2] * a[3]);
  }
  if (z1 && z2) return T(0);
  if (z1) {
    const int k = a[0] == 0 ? 2 : 0;
    const geom::Rect<T> r2{p, u[1], u[3], a[1], a[3]};
    return geom::segment_in_rect_length(o, u[k], a[k], r2) / (a[k] * a[1] * a[3]);
  }
  const int k = a[1] == 0 ? 3 : 1;
  const geom::Rect<T> r1{p, u[0], u[2], a[0], a[2]};
  return geom::segment_in_rect_length(o, u[k], a[k], r1) / (a[k] * a[0] * a[2]);
}

double eval_beta(const ScaleVector& a, double x, double y);
double eval_beta_prime(const ScaleVector& a, double x, double y);
double eval_kernel(BasisId b, const ScaleVector& a, double x, double y);

double gaussian_eval(const Covariance& c, double x, double y);

/// Origin-centered samples at (i*pitch, j*pitch), |i| <= nx, |j| <= ny.
struct SampledKernel {
  int nx = 0, ny = 0;
  double pitch = 1.0;
  std::vector<double> values;
  Vec2 support{0.0, 0.0};  // half-extent of the underlying kernel's support
  bool normalized = false;

  int width() const noexcept { return 2 * nx + 1; }
  int height() const noexcept { return 2 * ny + 1; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j + ny) * width() + (i + nx)]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j + ny) * width() + (i + nx)]; }
  double half_x() const noexcept { return nx * pitch; }
  double half_y() const noexcept { return ny * pitch; }
};

/// Samples a kernel on a grid covering at least [-hx, hx] x [-hy, hy];
/// hx, hy default to the kernel support.
SampledKernel sample_kernel(const KernelSpec& k, double pitch, double hx = 0.0, double hy = 0.0);
SampledKernel sample_gaussian(const Covariance& c, double pitch, double hx, double hy);
SampledKernel empty_like(const SampledKernel& k);

struct Moments {
  double mass;
  Vec2 mean;
  Covariance cov;
};

/// Raised when a sampled raster does not cover its kernel's support.
class InsufficientSupportError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Moments numeric_moments(const SampledKernel& k);

/// Discrete moments of an image treated as a mass distribution on the pixel grid.
Moments image_moments(const Image& img);

double normalized_l2_error(const SampledKernel& f, const SampledKernel& g);

/// Discrete convolution scaled by pitch^2 (approximates the continuous convolution).
SampledKernel convolve_sampled(const SampledKernel& f, const SampledKernel& g);

/// Average of f along `step` (an integer raster direction) over a centered
/// segment of the given width, integrating the piecewise-linear interpolant.
SampledKernel box_convolve(const SampledKernel& f, IVec2 step, double width);

/// Anisotropic kernel convolved with the isotropic axis-basis kernel of variance
/// sigma2, on a grid of the given half-extents.
SampledKernel composite_kernel_sampled(const KernelSpec& aniso, double sigma2, double pitch, double hx,
                                       double hy);

/// Normalized L2 error of the convolution of `factors` against the Gaussian of
/// covariance `target`, computed in the Fourier domain with analytic transforms.
double fourier_normalized_error(const std::vector<KernelSpec>& factors, const Covariance& target,
                                double omega_max, int samples);

}  // namespace boxspline
