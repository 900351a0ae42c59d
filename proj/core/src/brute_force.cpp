#include "boxspline/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "boxspline/kernel.hpp"

namespace boxspline {

namespace {

struct SampledTaps {
  int rx = 0, ry = 0;
  std::vector<double> v;  // (2rx+1) x (2ry+1), divided by their sum
};

SampledTaps sample_taps(BasisId b, const ScaleVector& s) {
  const KernelSpec spec{b, s};
  const Vec2 h = spec.support_half_extent();
  SampledTaps t;
  t.rx = static_cast<int>(std::ceil(h.x));
  t.ry = static_cast<int>(std::ceil(h.y));
  t.v.resize(static_cast<std::size_t>(2 * t.rx + 1) * (2 * t.ry + 1));
  double sum = 0;
  for (int j = -t.ry; j <= t.ry; ++j)
    for (int i = -t.rx; i <= t.rx; ++i) {
      const double v = spec(i, j);
      t.v[static_cast<std::size_t>(j + t.ry) * (2 * t.rx + 1) + (i + t.rx)] = v;
      sum += v;
    }
  if (!(sum > 0)) throw std::invalid_argument("kernel has no mass on the integer grid");
  for (double& v : t.v) v /= sum;
  return t;
}

}  // namespace

Image brute_force_filter_at(const Image& image, const KernelMap& kernels, int ox, int oy, EdgePolicy edge,
                            const BruteForceOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(kernels.width) * kernels.height;
  if (kernels.basis.size() != n || kernels.scales.size() != n)
    throw std::invalid_argument("kernel map planes do not match its dimensions");
  for (std::size_t i = 0; i < n; ++i) kernels.scales[i].validate();
  Image out(kernels.width, kernels.height, 0.0);

  auto work = [&](int r0, int r1) {
    SampledTaps taps;
    bool have = false;
    BasisId tb = BasisId::Theta;
    ScaleVector ts;
    for (int y = r0; y < r1; ++y)
      for (int x = 0; x < kernels.width; ++x) {
        const std::size_t idx = kernels.index(x, y);
        if (!have || tb != kernels.basis[idx] || ts.a != kernels.scales[idx].a) {
          tb = kernels.basis[idx];
          ts = kernels.scales[idx];
          taps = sample_taps(tb, ts);
          have = true;
        }
        const int px = x + ox, py = y + oy;
        double acc = 0;
        const int w = 2 * taps.rx + 1;
        for (int j = -taps.ry; j <= taps.ry; ++j) {
          for (int i = -taps.rx; i <= taps.rx; ++i) {
            const double k = taps.v[static_cast<std::size_t>(j + taps.ry) * w + (i + taps.rx)];
            if (k == 0.0) continue;
            int sx = px - i, sy = py - j;
            if (edge == EdgePolicy::Replicate) {
              sx = std::clamp(sx, 0, image.width - 1);
              sy = std::clamp(sy, 0, image.height - 1);
            } else if (!image.contains(sx, sy)) {
              continue;
            }
            acc += k * image.at(sx, sy);
          }
        }
        out.at(x, y) = acc;
      }
  };

  const int threads = std::clamp(resolve_threads(opt.threads), 1, std::max(1, kernels.height));
  if (threads == 1) {
    work(0, kernels.height);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (kernels.height + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int r0 = t * chunk, r1 = std::min(kernels.height, r0 + chunk);
      if (r0 < r1) pool.emplace_back(work, r0, r1);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

Image brute_force_filter(const Image& image, const KernelMap& kernels, EdgePolicy edge, const BruteForceOptions& opt) {
  if (kernels.width != image.width || kernels.height != image.height)
    throw std::invalid_argument("kernel map and image dimensions differ");
  return brute_force_filter_at(image, kernels, 0, 0, edge, opt);
}

}  // namespace boxspline
