#include "boxspline/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "boxspline/interpolation.hpp"
#include "boxspline/kernel.hpp"
#include "boxspline/running_sum.hpp"

namespace boxspline {

int resolve_threads(int requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

bool same_scales(const ScaleVector& a, const ScaleVector& b) { return a.a == b.a; }

std::string pixel_message(const char* what, int x, int y) {
  std::ostringstream os;
  os << what << " at pixel (" << x << ", " << y << ")";
  return os.str();
}

struct BasisPlanes {
  bool used = false;
  SumPlane data, ones;
};

template <typename Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(1, rows));
  if (threads == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (rows + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int r0 = t * chunk, r1 = std::min(rows, r0 + chunk);
    if (r0 >= r1) break;
    pool.emplace_back([&fn, r0, r1] { fn(r0, r1); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Image filter_space_variant_at(const Image& image, const KernelMap& kernels, int ox, int oy, EdgePolicy edge,
                              const EngineOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(kernels.width) * kernels.height;
  if (kernels.basis.size() != n || kernels.scales.size() != n)
    throw std::invalid_argument("kernel map planes do not match its dimensions");
  if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("empty input image");
  Image out(kernels.width, kernels.height, 0.0);
  if (n == 0) return out;

  // Validate scales and measure reach per basis.
  std::array<double, 2> reach{0.0, 0.0};
  std::array<BasisPlanes, 2> planes;
  double support = 0.0;
  for (int y = 0; y < kernels.height; ++y) {
    const ScaleVector* prev = nullptr;
    BasisId prev_b = BasisId::Theta;
    for (int x = 0; x < kernels.width; ++x) {
      const std::size_t i = kernels.index(x, y);
      const ScaleVector& s = kernels.scales[i];
      const BasisId b = kernels.basis[i];
      if (prev && prev_b == b && same_scales(*prev, s)) continue;
      for (double v : s.a) {
        if (!std::isfinite(v) || v < opt.min_scale * (1.0 - 1e-9)) {
          std::ostringstream os;
          os << "scale " << v << " below the engine minimum " << opt.min_scale;
          throw std::invalid_argument(pixel_message(os.str().c_str(), x, y));
        }
      }
      const MeshSpec m = build_mesh(s, b);
      const int bi = static_cast<int>(b);
      planes[bi].used = true;
      reach[bi] = std::max(reach[bi], m.reach());
      const Vec2 sup = KernelSpec{b, s}.support_half_extent();
      support = std::max({support, sup.x, sup.y});
      const int need = static_cast<int>(std::ceil(m.reach())) + InterpolationTable::get(b).window() + 1;
      if (need > opt.max_margin) throw std::invalid_argument(pixel_message("mesh reach exceeds the padding margin", x, y));
      prev = &s;
      prev_b = b;
    }
  }

  const Box region{ox, oy, ox + kernels.width - 1, oy + kernels.height - 1};
  const Box source = region.grown(static_cast<int>(std::ceil(support)) + 1);
  for (int bi = 0; bi < 2; ++bi) {
    if (!planes[bi].used) continue;
    const BasisId b = static_cast<BasisId>(bi);
    const int q = static_cast<int>(std::ceil(reach[bi])) + InterpolationTable::get(b).window() + 1;
    const Box rect = detail::running_sum_rect(b, source, region.grown(q));
    SumPlane& d = planes[bi].data;
    SumPlane& o = planes[bi].ones;
    d.rect = o.rect = rect;
    d.v.assign(static_cast<std::size_t>(rect.width()) * rect.height(), 0.0L);
    o.v.assign(d.v.size(), 0.0L);
    for (int y = source.y0; y <= source.y1; ++y) {
      const std::size_t base = static_cast<std::size_t>(y - rect.y0) * rect.width() - rect.x0;
      for (int x = source.x0; x <= source.x1; ++x) {
        double v;
        if (edge == EdgePolicy::Replicate)
          v = image.at(std::clamp(x, 0, image.width - 1), std::clamp(y, 0, image.height - 1));
        else
          v = image.contains(x, y) ? image.at(x, y) : 0.0;
        d.v[base + x] = v;
        o.v[base + x] = 1.0L;
      }
    }
    detail::run_recursions(b, d);
    if (opt.normalize) detail::run_recursions(b, o);
  }

  parallel_rows(kernels.height, resolve_threads(opt.threads), [&](int r0, int r1) {
    // Tap geometry and interpolation weights depend only on the mesh, so they
    // are rebuilt only when the kernel changes between consecutive pixels.
    long double w[16][36];
    int tx[16], ty[16];
    MeshSpec mesh{};
    bool have_mesh = false;
    // The unit field covers every footprint, so its response is the kernel's
    // full-plane gain and is reused while the kernel is unchanged.
    long double gain = 0;
    bool have_gain = false;
    for (int y = r0; y < r1; ++y) {
      have_gain = false;  // per-row reset keeps results independent of the row split
      for (int x = 0; x < kernels.width; ++x) {
        const std::size_t idx = kernels.index(x, y);
        const BasisId b = kernels.basis[idx];
        const auto& table = InterpolationTable::get(b);
        const int nw = table.window(), lo = table.lo();
        if (!have_mesh || mesh.basis != b || !same_scales(mesh.scales, kernels.scales[idx])) {
          mesh = build_mesh(kernels.scales[idx], b);
          have_mesh = true;
          have_gain = false;
          for (int t = 0; t < 16; ++t) {
            const double offx = mesh.tau1 - mesh.offset[t].x;
            const double offy = mesh.tau2 - mesh.offset[t].y;
            const double flx = std::floor(offx), fly = std::floor(offy);
            tx[t] = static_cast<int>(flx) + lo;
            ty[t] = static_cast<int>(fly) + lo;
            table.weights(static_cast<long double>(offx - flx), static_cast<long double>(offy - fly), w[t]);
          }
        }
        const BasisPlanes& pl = planes[static_cast<int>(b)];
        const int px = x + ox, py = y + oy;
        const bool want_gain = opt.normalize && !have_gain;
        long double num = 0, den = 0;
        for (int t = 0; t < 16; ++t) {
          const int bx = px + tx[t], by = py + ty[t];
          long double f = 0, fo = 0;
          for (int jy = 0; jy < nw; ++jy) {
            const long double* rd = pl.data.row(by + jy) + (bx - pl.data.rect.x0);
            const long double* wr = w[t] + jy * nw;
            for (int jx = 0; jx < nw; ++jx) f += wr[jx] * rd[jx];
            if (want_gain) {
              const long double* ro = pl.ones.row(by + jy) + (bx - pl.ones.rect.x0);
              for (int jx = 0; jx < nw; ++jx) fo += wr[jx] * ro[jx];
            }
          }
          num += mesh.weight[t] * f;
          den += mesh.weight[t] * fo;
        }
        if (want_gain) {
          gain = den;
          have_gain = true;
        }
        out.at(x, y) = static_cast<double>(opt.normalize ? num / gain : num);
      }
    }
  });
  return out;
}

Image filter_space_variant(const Image& image, const KernelMap& kernels, EdgePolicy edge, const EngineOptions& opt) {
  if (kernels.width != image.width || kernels.height != image.height)
    throw std::invalid_argument("kernel map and image dimensions differ");
  return filter_space_variant_at(image, kernels, 0, 0, edge, opt);
}

Image filter_space_variant(const Image& image, const ScaleVector& scales, BasisId b, EdgePolicy edge,
                           const EngineOptions& opt) {
  return filter_space_variant(image, KernelMap(image.width, image.height, b, scales), edge, opt);
}

}  // namespace boxspline
