#pragma once

#include <array>

#include "boxspline/types.hpp"

namespace boxspline {

/// Squared scales u_i = alpha_i + beta_i * t, constrained to u_i >= floor.
struct SolverFamily {
  BasisId basis;
  std::array<double, 4> alpha{};
  std::array<double, 4> beta{};
  double t_lo = 0.0;
  double t_hi = 0.0;

  std::array<double, 4> squared_scales(double t) const;
  bool feasible() const noexcept { return t_lo <= t_hi; }
};

/// Throws InfeasibleError when no t gives all u_i >= min_scale^2.
SolverFamily build_family(const Covariance& c, BasisId basis, double min_scale = 0.0);

/// Non-throwing variant; returns false when the interval is empty.
bool try_build_family(const Covariance& c, BasisId basis, SolverFamily& out, double min_scale = 0.0) noexcept;

/// Frobenius norm of the fourth-moment pattern matrix (kurtosis up to a constant).
double kurtosis_objective(const std::array<double, 4>& u, BasisId basis);

struct SolveResult {
  ScaleVector scales;
  double t;
  double objective;
};

/// Minimum-kurtosis scale vector reproducing C exactly.
SolveResult solve_scales_detailed(const Covariance& c, BasisId basis, double min_scale = 0.0);
ScaleVector solve_scales(const Covariance& c, BasisId basis, double min_scale = 0.0);

bool is_feasible(const Covariance& c, BasisId basis, double min_scale = 0.0) noexcept;

}  // namespace boxspline
