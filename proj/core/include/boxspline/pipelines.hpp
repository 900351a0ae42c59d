#pragma once

#include <array>
#include <string>
#include <vector>

#include "boxspline/engine.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

/// Per-pixel covariance planes. Entries are stored raw so that invalid pixels
/// can be reported instead of rejected on assignment.
struct CovarianceMap {
  int width = 0, height = 0;
  std::vector<double> c11, c12, c22;

  CovarianceMap() = default;
  CovarianceMap(int w, int h);
  static CovarianceMap constant(int w, int h, const Covariance& c);

  std::size_t index(int x, int y) const noexcept { return static_cast<std::size_t>(y) * width + x; }
  void set(int x, int y, double a, double b, double c);
  void set(int x, int y, const Covariance& c) { set(x, y, c.c11(), c.c12(), c.c22()); }
  bool valid_at(int x, int y) const noexcept;
  /// Throws std::invalid_argument for a non-positive-definite entry.
  Covariance at(int x, int y) const;
};

enum class BasisPolicy { Theta, ThetaPrime, Dual };
enum class InfeasiblePolicy { Reject, Clamp };
enum class Method { Basic, Accurate, Dual };

struct PipelinePolicy {
  double sigma_fraction = 0.5;
  BasisPolicy basis = BasisPolicy::Theta;
  EdgePolicy edge = EdgePolicy::Zero;
  InfeasiblePolicy infeasible = InfeasiblePolicy::Reject;
  int threads = 0;
  double min_scale = 0.3;

  void validate() const;
};

enum class PixelStatus { Ok, NotPositiveDefinite, ExceedsElongationBound, SplitInfeasible, BelowMinimumScale };

const char* status_name(PixelStatus s);

struct FeasibilityReport {
  int width = 0, height = 0;
  std::vector<PixelStatus> status;
  std::vector<BasisId> basis;                       // basis chosen per pixel
  std::vector<std::array<double, 3>> effective;     // covariance used per pixel (after clamping)
  std::vector<unsigned char> clamped;
  std::array<int, 5> counts{};
  int clamped_count = 0;
  double sigma2 = 0.0;  // Stage A variance for the two-stage method

  bool ok() const noexcept { return counts[0] == width * height; }
  /// First offending pixel in raster order, or {-1, -1}.
  IVec2 first_offender() const noexcept;
  std::string summary(int max_listed = 5) const;
};

/// Basis a pixel would use under the policy (dual: sector selection, Theta when rho < 1.01).
BasisId pixel_basis(const Covariance& c, BasisPolicy policy);

FeasibilityReport validate_covmap(const CovarianceMap& covmap, const PipelinePolicy& policy,
                                  Method method = Method::Basic);

struct PipelineResult {
  Image image;
  FeasibilityReport report;
  double stage_a_seconds = 0.0;
  double stage_b_seconds = 0.0;
};

/// Runs a method; throws InfeasibleError (naming the first offending pixel) when
/// the report is not clean after the policy's infeasibility handling.
PipelineResult run_pipeline(const Image& image, const CovarianceMap& covmap, Method method,
                            const PipelinePolicy& policy);

/// Same kernels as run_pipeline, applied by direct summation.
Image reference_pipeline(const Image& image, const CovarianceMap& covmap, Method method,
                         const PipelinePolicy& policy);

Image filter_basic(const Image& image, const CovarianceMap& covmap, BasisId basis,
                   EdgePolicy edge = EdgePolicy::Zero);
Image filter_accurate(const Image& image, const CovarianceMap& covmap, const PipelinePolicy& policy = {});
Image filter_dual(const Image& image, const CovarianceMap& covmap, const PipelinePolicy& policy = {});

/// Per-pixel kernels a method applies (single pass; for the two-stage method
/// this is Stage B and `stage_a_scales` receives the isotropic Stage A scales).
KernelMap build_kernel_map(const FeasibilityReport& report, Method method, const PipelinePolicy& policy,
                           ScaleVector* stage_a_scales = nullptr);

}  // namespace boxspline
