#include "boxspline/running_sum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boxspline/interpolation.hpp"

namespace boxspline {

namespace detail {

Box running_sum_rect(BasisId b, const Box& source, const Box& query) {
  // Every sloped step has s_y >= 1 and |s_x| <= ratio * s_y, so a chain that
  // climbs from row y to the top of the source drifts at most ratio * (y - y0).
  const int ratio = b == BasisId::Theta ? 1 : 2;
  const int drift = ratio * (std::max(query.y1, source.y0) - source.y0 + 1) + 1;
  Box r;
  r.x0 = std::min(source.x0, query.x0) - drift - 1;
  r.x1 = std::max(source.x1, query.x1) + drift + 1;
  r.y0 = std::min(source.y0, query.y0);
  r.y1 = query.y1;
  return r;
}

void run_recursions(BasisId b, SumPlane& plane, std::array<SumPlane, 4>* stages) {
  const auto& d = basis(b);
  const int W = plane.rect.width(), H = plane.rect.height();
  long double* v = plane.v.data();
  for (int k = 0; k < 4; ++k) {
    const long double h = b == BasisId::Theta ? (k % 2 == 0 ? 1.0L : std::sqrt(2.0L)) : std::sqrt(5.0L);
    const int sx = d.step[k].x, sy = d.step[k].y;
    // Row-major order visits p - s before p for every step vector.
    for (int y = 0; y < H; ++y) {
      long double* row = v + static_cast<std::size_t>(y) * W;
      const long double* prev = y - sy >= 0 ? v + static_cast<std::size_t>(y - sy) * W : nullptr;
      for (int x = 0; x < W; ++x) {
        const int px = x - sx;
        long double acc = h * row[x];
        if (sy == 0) {
          if (px >= 0) acc += row[px];
        } else if (prev && px >= 0 && px < W) {
          acc += prev[px];
        }
        row[x] = acc;
      }
    }
    if (stages) (*stages)[k] = plane;
  }
}

}  // namespace detail

RunningSumStack compute_running_sums(const Image& image, BasisId b, int margin, EdgePolicy edge) {
  const auto& table = InterpolationTable::get(b);
  if (margin < table.radius() + 1)
    throw std::invalid_argument("running-sum margin is smaller than the interpolation window");
  RunningSumStack s;
  s.basis = b;
  s.margin = margin;
  s.image_width = image.width;
  s.image_height = image.height;
  const Box img{0, 0, image.width - 1, image.height - 1};
  const Box query = img.grown(margin);
  const Box source = edge == EdgePolicy::Zero ? img : img.grown(margin);
  SumPlane p;
  p.rect = detail::running_sum_rect(b, source, query);
  p.v.assign(static_cast<std::size_t>(p.rect.width()) * p.rect.height(), 0.0L);
  for (int y = source.y0; y <= source.y1; ++y)
    for (int x = source.x0; x <= source.x1; ++x) {
      const int cx = std::clamp(x, 0, image.width - 1), cy = std::clamp(y, 0, image.height - 1);
      p.v[static_cast<std::size_t>(y - p.rect.y0) * p.rect.width() + (x - p.rect.x0)] = image.at(cx, cy);
    }
  detail::run_recursions(b, p, &s.g);
  return s;
}

}  // namespace boxspline
