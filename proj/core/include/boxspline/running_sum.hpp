#pragma once

#include <array>
#include <vector>

#include "boxspline/types.hpp"

namespace boxspline {

/// Inclusive integer rectangle in image coordinates.
struct Box {
  int x0, y0, x1, y1;

  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  bool contains(int x, int y) const noexcept { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  Box grown(int m) const noexcept { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
};

/// Values over a rectangle of the plane; zero outside.
struct SumPlane {
  Box rect{0, 0, -1, -1};
  std::vector<long double> v;

  long double at(int x, int y) const {
    return v[static_cast<std::size_t>(y - rect.y0) * rect.width() + (x - rect.x0)];
  }
  long double get(int x, int y) const { return rect.contains(x, y) ? at(x, y) : 0.0L; }
  const long double* row(int y) const { return v.data() + static_cast<std::size_t>(y - rect.y0) * rect.width(); }
};

/// g1..g4 of the nested recursions g_k(p) = h_k g_{k-1}(p) + g_k(p - s_k), g_0 = f.
struct RunningSumStack {
  BasisId basis;
  int margin = 0;
  int image_width = 0, image_height = 0;
  std::array<SumPlane, 4> g;
};

/// Running sums of the image (zero- or replicate-extended by `margin`), valid on
/// the image grown by `margin` on every side.
RunningSumStack compute_running_sums(const Image& image, BasisId basis, int margin,
                                     EdgePolicy edge = EdgePolicy::Zero);

namespace detail {

/// Rectangle on which truncated recursions agree with the infinite-domain ones
/// at every point of `query`, given a source supported in `source`.
Box running_sum_rect(BasisId basis, const Box& source, const Box& query);

/// Fills `plane` (already sized to its rect and holding f) with g_4; when
/// `stages` is non-null the intermediate planes g_1..g_3 are copied there.
void run_recursions(BasisId basis, SumPlane& plane, std::array<SumPlane, 4>* stages = nullptr);

}  // namespace detail

}  // namespace boxspline
