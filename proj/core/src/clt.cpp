#include "boxspline/clt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boxspline {

SampledKernel rasterize_box_distribution(double length, double theta, double pitch) {
  const double c = std::cos(theta), s = std::sin(theta);
  const geom::Rect<double> rect{{0, 0}, {c, s}, {-s, c}, length, pitch};
  const double hx = 0.5 * length * std::abs(c) + 0.5 * pitch * std::abs(s) + pitch;
  const double hy = 0.5 * length * std::abs(s) + 0.5 * pitch * std::abs(c) + pitch;
  SampledKernel k;
  k.pitch = pitch;
  k.nx = static_cast<int>(std::ceil(hx / pitch));
  k.ny = static_cast<int>(std::ceil(hy / pitch));
  k.values.assign(static_cast<std::size_t>(k.width()) * k.height(), 0.0);
  k.support = {k.half_x(), k.half_y()};
  const double area = length * pitch;
  double total = 0.0;
  for (int j = -k.ny; j <= k.ny; ++j)
    for (int i = -k.nx; i <= k.nx; ++i) {
      const geom::Rect<double> px{{i * pitch, j * pitch}, {1, 0}, {0, 1}, pitch, pitch};
      const double w = geom::rect_overlap_area(px, rect) / area;
      k.at(i, j) = w;
      total += w;
    }
  // Mass is exact up to rounding; renormalize and convert to density.
  for (double& v : k.values) v /= total * pitch * pitch;
  k.normalized = true;
  return k;
}

CltResult clt_demo(int n, double sigma, double pitch) {
  if (n < 2) throw std::invalid_argument("clt_demo: N must be at least 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("clt_demo: sigma must be positive");
  if (!(pitch > 0.0) || pitch > 0.05 * sigma + 1e-15) throw std::invalid_argument("clt_demo: pitch must be <= 0.05 sigma");
  const double width = sigma * std::sqrt(24.0 / n);
  SampledKernel acc = rasterize_box_distribution(width, 0.0, pitch);
  for (int k = 1; k < n; ++k) {
    const SampledKernel line = rasterize_box_distribution(width, k * std::numbers::pi / n, pitch);
    acc = convolve_sampled(line, acc);
  }
  const Covariance g = Covariance::isotropic(sigma * sigma);
  const double peak = gaussian_eval(g, 0, 0);
  double worst = 0.0;
  for (int j = -acc.ny; j <= acc.ny; ++j)
    for (int i = -acc.nx; i <= acc.nx; ++i)
      worst = std::max(worst, std::abs(acc.at(i, j) - gaussian_eval(g, i * pitch, j * pitch)));
  return {std::move(acc), worst / peak};
}

}  // namespace boxspline
