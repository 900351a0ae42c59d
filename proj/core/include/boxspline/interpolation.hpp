#pragma once

#include <array>
#include <vector>

#include "boxspline/running_sum.hpp"
#include "boxspline/types.hpp"

namespace boxspline {

/// Piecewise-quadratic patch table for the unit-grid interpolation kernel K
/// (the box spline whose scales equal the basis step lengths).
///
/// For a fractional offset f in [0,1)^2 the weights K(f - j) over the window
/// j in [lo, lo + n)^2 are quadratics on each cell of the line arrangement
/// n_k . f in Z + o_k. Each cell stores those quadratics.
class InterpolationTable {
 public:
  static const InterpolationTable& get(BasisId basis);

  BasisId basis() const noexcept { return basis_; }
  int window() const noexcept { return n_; }
  int lo() const noexcept { return lo_; }
  /// Half-width of the window around the evaluation point, in pixels.
  int radius() const noexcept { return n_ / 2; }
  int cell_count() const noexcept { return static_cast<int>(cells_.size()); }

  /// Writes K(f - j) to w[(jy - lo) * n + (jx - lo)].
  void weights(long double fx, long double fy, long double* w) const;

  /// Exact K by polygon clipping.
  long double kernel(long double x, long double y) const;

 private:
  explicit InterpolationTable(BasisId basis);
  int key(long double fx, long double fy) const;

  struct Cell {
    long double cx, cy;
    std::vector<int> entries;                  // window indices with nonzero patches
    std::vector<std::array<long double, 6>> c;  // 1, x, y, x^2, xy, y^2 about (cx, cy)
  };

  BasisId basis_;
  int n_, lo_;
  std::array<long double, 4> scales_{};
  std::array<std::array<int, 2>, 4> normal_{};
  std::array<long double, 4> offset_{};
  std::array<int, 4> kmin_{}, kcount_{};
  std::vector<int> lookup_;
  std::vector<Cell> cells_;
};

/// F(x, y) = sum over the window of g4(m) K(x - m); throws std::out_of_range
/// when the window leaves the stack's rectangle.
long double interpolate(const RunningSumStack& stack, double x, double y);

}  // namespace boxspline
