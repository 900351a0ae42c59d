#pragma once

#include <array>

#include "boxspline/types.hpp"

namespace boxspline {

/// 16-tap finite-difference mesh. Tap i sits at the subset sum of the
/// displacements d_k = a_k u_k selected by the bits of i (bit k-1 <-> d_k),
/// with weight (-1)^popcount(i) / (a1 a2 a3 a4).
struct MeshSpec {
  BasisId basis;
  ScaleVector scales;
  std::array<Vec2, 16> offset;
  std::array<double, 16> weight;
  double tau1 = 0.0, tau2 = 0.0;

  /// Largest |tau - offset_i| coordinate over the taps.
  double reach() const noexcept;
};

/// Half the sum of the running-sum step vectors: F(x) = G4(x + c).
Vec2 interpolation_centering(BasisId basis);

/// Requires all scales strictly positive.
MeshSpec build_mesh(const ScaleVector& a, BasisId basis);

}  // namespace boxspline
