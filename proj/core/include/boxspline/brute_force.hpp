#pragma once

#include "boxspline/engine.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

struct BruteForceOptions {
  int threads = 0;
};

/// Direct space-variant filtering: at each output pixel, the image is summed
/// against the kernel sampled at integer offsets and divided by the sample sum.
/// Output pixel (x, y) is evaluated at image position (x + ox, y + oy).
Image brute_force_filter_at(const Image& image, const KernelMap& kernels, int ox, int oy, EdgePolicy edge,
                            const BruteForceOptions& opt = {});

Image brute_force_filter(const Image& image, const KernelMap& kernels, EdgePolicy edge,
                         const BruteForceOptions& opt = {});

}  // namespace boxspline
