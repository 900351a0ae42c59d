#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxspline {

/// Symmetric positive-definite 2x2 matrix (second moments, squared pixels).
class Covariance {
 public:
  /// Throws std::invalid_argument unless the matrix is finite and positive
  /// definite with eigenvalue ratio at most kMaxEigenRatio.
  Covariance(double c11, double c12, double c22);

  static Covariance identity() { return {1.0, 0.0, 1.0}; }
  static Covariance isotropic(double variance) { return {variance, 0.0, variance}; }

  /// Checks the same conditions as the constructor without throwing.
  static bool is_valid(double c11, double c12, double c22) noexcept;

  double c11() const noexcept { return c11_; }
  double c12() const noexcept { return c12_; }
  double c22() const noexcept { return c22_; }

  double trace() const noexcept { return c11_ + c22_; }
  double det() const noexcept { return c11_ * c22_ - c12_ * c12_; }
  double lambda_max() const noexcept;
  double lambda_min() const noexcept;

  Covariance scaled(double s) const { return {s * c11_, s * c12_, s * c22_}; }

  static constexpr double kMaxEigenRatio = 1e6;

 private:
  double c11_, c12_, c22_;
};

/// Size (trace), elongation (eigenvalue ratio) and orientation in [0, pi).
struct ShapeParams {
  double size;
  double elongation;
  double orientation;

  void validate() const;
};

/// Box widths a1..a4 along the basis directions (pixels).
struct ScaleVector {
  std::array<double, 4> a{};

  ScaleVector() = default;
  ScaleVector(double a1, double a2, double a3, double a4) : a{a1, a2, a3, a4} {}

  double operator[](std::size_t i) const { return a[i]; }
  double& operator[](std::size_t i) { return a[i]; }

  /// Throws std::invalid_argument for negative or non-finite entries or more
  /// than one zero entry.
  void validate() const;
  int zero_count() const noexcept;
  double product() const noexcept { return a[0] * a[1] * a[2] * a[3]; }

  static ScaleVector uniform(double v) { return {v, v, v, v}; }
};

enum class BasisId { Theta, ThetaPrime };

struct Vec2 {
  double x = 0.0, y = 0.0;
};

struct IVec2 {
  int x = 0, y = 0;
};

/// Four grid directions with integer step vectors.
struct DirectionBasis {
  BasisId id;
  std::array<Vec2, 4> u;      // unit directions
  std::array<IVec2, 4> step;  // integer grid displacement, raster (x right, y down)
  std::array<double, 4> h;    // |step|
};

const DirectionBasis& basis(BasisId id);
const char* basis_name(BasisId id);

enum class EdgePolicy { Zero, Replicate };

/// Row-major 2D array, (x, y) = (column, row).
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw std::invalid_argument("negative raster dimensions");
  }

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }
  std::size_t size() const noexcept { return data.size(); }
};

using Image = Raster<double>;

/// A covariance or split that no kernel on the requested basis can realize.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, int x = -1, int y = -1)
      : std::runtime_error(what), x_(x), y_(y) {}
  int x() const noexcept { return x_; }
  int y() const noexcept { return y_; }

 private:
  int x_, y_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace boxspline
