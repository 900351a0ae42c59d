#pragma once

#include <string>
#include <vector>

#include "boxspline/types.hpp"

namespace boxspline {

/// Normalized L2 errors (percent) of the single-stage and two-stage kernels
/// against the Gaussian of the given shape, on a grid of the given pitch.
struct ErrorEntry {
  ShapeParams shape{};
  double fraction = 0.5;
  BasisId basis = BasisId::Theta;
  bool fallback = false;     // shape infeasible on Theta, evaluated on the sector-selected basis
  double old_error = 0.0;    // percent
  double new_error = 0.0;    // percent
  double improvement = 0.0;  // percent, (old - new) / old
};

ErrorEntry error_entry(const ShapeParams& shape, double fraction = 0.5, double pitch = 0.02);

/// The seven (s, rho, theta) accuracy configurations.
std::vector<ShapeParams> error_table_shapes();
std::vector<ErrorEntry> error_table(double pitch = 0.02);

/// Sigma fractions 0.1 ... 0.8 for the shape (5, 3, pi/4).
std::vector<ErrorEntry> sigma_sweep(double pitch = 0.02);

/// Largest rho at orientation phi for which the solver finds scales, by
/// bisection; kInfinity when rho = cap is still feasible.
double empirical_bound(BasisId basis, double phi, double cap = 1e4);

struct BoundEntry {
  double orientation_deg = 0.0;
  double theta = 0.0;        // closed form on the axis basis
  double theta_prime = 0.0;  // bisection on the rotated basis
  double pair = 0.0;         // larger of the two
};

std::vector<double> bound_table_orientations_deg();
std::vector<BoundEntry> bound_table();

struct CltEntry {
  int n = 0;
  double max_error = 0.0;  // percent of the Gaussian peak
};

std::vector<CltEntry> clt_table(const std::vector<int>& ns, double sigma = 1.0, double pitch = 0.05);

std::string error_table_csv(const std::vector<ErrorEntry>& rows);
std::string sigma_sweep_csv(const std::vector<ErrorEntry>& rows);
std::string bound_table_csv(const std::vector<BoundEntry>& rows);
std::string clt_table_csv(const std::vector<CltEntry>& rows);

}  // namespace boxspline
