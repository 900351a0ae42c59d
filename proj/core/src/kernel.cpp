#include "boxspline/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boxspline {

namespace {

std::array<double, 4> as_array(const ScaleVector& a) { return a.a; }

}  // namespace

double eval_kernel(BasisId b, const ScaleVector& a, double x, double y) {
  return eval_box_spline<double>(b, as_array(a), x, y);
}

double eval_beta(const ScaleVector& a, double x, double y) { return eval_kernel(BasisId::Theta, a, x, y); }

double eval_beta_prime(const ScaleVector& a, double x, double y) {
  return eval_kernel(BasisId::ThetaPrime, a, x, y);
}

double KernelSpec::operator()(double x, double y) const { return eval_kernel(basis, scales, x, y); }

Vec2 KernelSpec::support_half_extent() const {
  const auto& d = boxspline::basis(basis);
  Vec2 h;
  for (int k = 0; k < 4; ++k) {
    h.x += 0.5 * scales[k] * std::abs(d.u[k].x);
    h.y += 0.5 * scales[k] * std::abs(d.u[k].y);
  }
  return h;
}

double gaussian_eval(const Covariance& c, double x, double y) {
  const double det = c.det();
  const double q = (c.c22() * x * x - 2.0 * c.c12() * x * y + c.c11() * y * y) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

namespace {

SampledKernel make_grid(double pitch, double hx, double hy) {
  if (!(pitch > 0.0)) throw std::invalid_argument("sampling pitch must be positive");
  SampledKernel k;
  k.pitch = pitch;
  k.nx = static_cast<int>(std::ceil(hx / pitch - 1e-9));
  k.ny = static_cast<int>(std::ceil(hy / pitch - 1e-9));
  k.values.assign(static_cast<std::size_t>(k.width()) * k.height(), 0.0);
  return k;
}

}  // namespace

SampledKernel sample_kernel(const KernelSpec& spec, double pitch, double hx, double hy) {
  spec.scales.validate();
  const Vec2 sup = spec.support_half_extent();
  SampledKernel k = make_grid(pitch, std::max(hx, sup.x), std::max(hy, sup.y));
  k.support = sup;
  const auto a = as_array(spec.scales);
  for (int j = -k.ny; j <= k.ny; ++j) {
    const double y = j * pitch;
    if (std::abs(y) >= sup.y) continue;
    for (int i = -k.nx; i <= k.nx; ++i) {
      const double x = i * pitch;
      if (std::abs(x) >= sup.x) continue;
      k.at(i, j) = eval_box_spline<double>(spec.basis, a, x, y);
    }
  }
  return k;
}

SampledKernel sample_gaussian(const Covariance& c, double pitch, double hx, double hy) {
  SampledKernel k = make_grid(pitch, hx, hy);
  k.support = {k.half_x(), k.half_y()};
  for (int j = -k.ny; j <= k.ny; ++j)
    for (int i = -k.nx; i <= k.nx; ++i) k.at(i, j) = gaussian_eval(c, i * pitch, j * pitch);
  return k;
}

SampledKernel empty_like(const SampledKernel& k) {
  SampledKernel r = k;
  std::fill(r.values.begin(), r.values.end(), 0.0);
  return r;
}

Moments numeric_moments(const SampledKernel& k) {
  if (k.half_x() < k.support.x - 1e-9 || k.half_y() < k.support.y - 1e-9)
    throw InsufficientSupportError("sampled raster is smaller than the kernel support");
  double m0 = 0, mx = 0, my = 0;
  for (int j = -k.ny; j <= k.ny; ++j)
    for (int i = -k.nx; i <= k.nx; ++i) {
      const double v = k.at(i, j);
      m0 += v;
      mx += v * i;
      my += v * j;
    }
  if (m0 == 0.0) throw std::invalid_argument("sampled kernel has zero mass");
  const double cx = mx / m0, cy = my / m0;
  double sxx = 0, sxy = 0, syy = 0;
  for (int j = -k.ny; j <= k.ny; ++j)
    for (int i = -k.nx; i <= k.nx; ++i) {
      const double v = k.at(i, j);
      const double dx = i - cx, dy = j - cy;
      sxx += v * dx * dx;
      sxy += v * dx * dy;
      syy += v * dy * dy;
    }
  const double p = k.pitch, p2 = p * p;
  return {m0 * p2, {cx * p, cy * p}, Covariance(sxx / m0 * p2, sxy / m0 * p2, syy / m0 * p2)};
}

Moments image_moments(const Image& img) {
  double m0 = 0, mx = 0, my = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const double v = img.at(x, y);
      m0 += v;
      mx += v * x;
      my += v * y;
    }
  if (m0 == 0.0) throw std::invalid_argument("image has zero mass");
  const double cx = mx / m0, cy = my / m0;
  double sxx = 0, sxy = 0, syy = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const double v = img.at(x, y);
      sxx += v * (x - cx) * (x - cx);
      sxy += v * (x - cx) * (y - cy);
      syy += v * (y - cy) * (y - cy);
    }
  return {m0, {cx, cy}, Covariance(sxx / m0, sxy / m0, syy / m0)};
}

double normalized_l2_error(const SampledKernel& f, const SampledKernel& g) {
  if (f.nx != g.nx || f.ny != g.ny || f.pitch != g.pitch)
    throw std::invalid_argument("normalized_l2_error: rasters differ in extent or pitch");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double d = f.values[i] - g.values[i];
    num += d * d;
    den += g.values[i] * g.values[i];
  }
  if (den == 0.0) throw std::invalid_argument("normalized_l2_error: reference has zero norm");
  return std::sqrt(num / den);
}

SampledKernel convolve_sampled(const SampledKernel& f, const SampledKernel& g) {
  if (f.pitch != g.pitch) throw std::invalid_argument("convolve_sampled: pitch mismatch");
  SampledKernel r;
  r.pitch = f.pitch;
  r.nx = f.nx + g.nx;
  r.ny = f.ny + g.ny;
  r.values.assign(static_cast<std::size_t>(r.width()) * r.height(), 0.0);
  r.support = {f.support.x + g.support.x, f.support.y + g.support.y};
  const double p2 = f.pitch * f.pitch;
  for (int j = -f.ny; j <= f.ny; ++j)
    for (int i = -f.nx; i <= f.nx; ++i) {
      const double v = f.at(i, j) * p2;
      if (v == 0.0) continue;
      for (int n = -g.ny; n <= g.ny; ++n)
        for (int m = -g.nx; m <= g.nx; ++m) r.at(i + m, j + n) += v * g.at(m, n);
    }
  return r;
}

SampledKernel box_convolve(const SampledKernel& f, IVec2 step, double width) {
  if (step.y < 0 || (step.y == 0 && step.x <= 0)) throw std::invalid_argument("box_convolve: step must point down or right");
  if (!(width > 0.0)) return f;
  const double spacing = f.pitch * std::hypot(step.x, step.y);
  const double half = 0.5 * width / spacing;  // half-length in line samples
  SampledKernel r = empty_like(f);
  const int W = f.width(), H = f.height();
  std::vector<double> v, cum;
  for (int y0 = 0; y0 < H; ++y0)
    for (int x0 = 0; x0 < W; ++x0) {
      const int px = x0 - step.x, py = y0 - step.y;
      if (px >= 0 && px < W && py >= 0 && py < H) continue;  // not a line start
      v.clear();
      v.push_back(0.0);
      for (int x = x0, y = y0; x >= 0 && x < W && y < H; x += step.x, y += step.y)
        v.push_back(f.values[static_cast<std::size_t>(y) * W + x]);
      v.push_back(0.0);
      const int n = static_cast<int>(v.size());
      cum.assign(n, 0.0);
      for (int k = 1; k < n; ++k) cum[k] = cum[k - 1] + 0.5 * (v[k - 1] + v[k]);
      auto integral = [&](double s) {
        if (s <= 0) return 0.0;
        if (s >= n - 1) return cum[n - 1];
        const int k = static_cast<int>(std::floor(s));
        const double t = s - k;
        return cum[k] + t * v[k] + 0.5 * t * t * (v[k + 1] - v[k]);
      };
      int k = 1;
      for (int x = x0, y = y0; x >= 0 && x < W && y < H; x += step.x, y += step.y, ++k) {
        r.values[static_cast<std::size_t>(y) * W + x] = (integral(k + half) - integral(k - half)) / (2.0 * half);
      }
    }
  const double sx = 0.5 * width * std::abs(step.x) / std::hypot(step.x, step.y);
  const double sy = 0.5 * width * std::abs(step.y) / std::hypot(step.x, step.y);
  r.support = {f.support.x + sx, f.support.y + sy};
  return r;
}

SampledKernel composite_kernel_sampled(const KernelSpec& aniso, double sigma2, double pitch, double hx,
                                       double hy) {
  SampledKernel k = sample_kernel(aniso, pitch, hx, hy);
  const double a = std::sqrt(6.0 * sigma2);
  for (const IVec2 s : {IVec2{1, 0}, IVec2{1, 1}, IVec2{0, 1}, IVec2{-1, 1}}) k = box_convolve(k, s, a);
  return k;
}

double fourier_normalized_error(const std::vector<KernelSpec>& factors, const Covariance& target,
                                double omega_max, int samples) {
  struct Dir {
    double ux, uy, half_a;
  };
  std::vector<Dir> dirs;
  for (const auto& f : factors) {
    const auto& d = basis(f.basis);
    for (int k = 0; k < 4; ++k)
      if (f.scales[k] > 0) dirs.push_back({d.u[k].x, d.u[k].y, 0.5 * f.scales[k]});
  }
  const double dw = 2.0 * omega_max / samples;
  double num = 0, den = 0;
  // Both transforms are even, so integrate the half-plane wy > 0 and double.
  for (int j = 0; j < samples / 2; ++j) {
    const double wy = (j + 0.5) * dw;
    for (int i = 0; i < samples; ++i) {
      const double wx = -omega_max + (i + 0.5) * dw;
      double fh = 1.0;
      for (const Dir& d : dirs) {
        const double t = d.half_a * (wx * d.ux + wy * d.uy);
        fh *= t == 0.0 ? 1.0 : std::sin(t) / t;
      }
      const double gh =
          std::exp(-0.5 * (target.c11() * wx * wx + 2 * target.c12() * wx * wy + target.c22() * wy * wy));
      num += (fh - gh) * (fh - gh);
      den += gh * gh;
    }
  }
  return std::sqrt(num / den);
}

}  // namespace boxspline
