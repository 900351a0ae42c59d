#pragma once

#include <vector>

#include "boxspline/mesh.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

/// Per-pixel basis and scale vector.
struct KernelMap {
  int width = 0, height = 0;
  std::vector<BasisId> basis;
  std::vector<ScaleVector> scales;

  KernelMap() = default;
  KernelMap(int w, int h, BasisId b, const ScaleVector& a)
      : width(w), height(h), basis(static_cast<std::size_t>(w) * h, b), scales(static_cast<std::size_t>(w) * h, a) {}

  std::size_t index(int x, int y) const noexcept { return static_cast<std::size_t>(y) * width + x; }
};

struct EngineOptions {
  int threads = 0;           // 0: hardware concurrency
  bool normalize = true;     // divide by the response to a unit field (exact discrete DC gain)
  double min_scale = 0.3;    // smallest admissible box width, pixels
  int max_margin = 4096;     // largest admissible mesh reach plus window, pixels
};

/// Space-variant filtering of `image` with the kernels of `kernels`.
/// Output pixel (x, y) is evaluated at image position (x + ox, y + oy).
Image filter_space_variant_at(const Image& image, const KernelMap& kernels, int ox, int oy, EdgePolicy edge,
                              const EngineOptions& opt = {});

/// Output has the dimensions of `image`; `kernels` must match them.
Image filter_space_variant(const Image& image, const KernelMap& kernels, EdgePolicy edge,
                           const EngineOptions& opt = {});

Image filter_space_variant(const Image& image, const ScaleVector& scales, BasisId basis, EdgePolicy edge,
                           const EngineOptions& opt = {});

int resolve_threads(int requested) noexcept;

}  // namespace boxspline
