#include "boxspline/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace boxspline {

Vec2 interpolation_centering(BasisId b) {
  const auto& d = basis(b);
  Vec2 c;
  for (const auto& s : d.step) {
    c.x += 0.5 * s.x;
    c.y += 0.5 * s.y;
  }
  return c;
}

MeshSpec build_mesh(const ScaleVector& a, BasisId b) {
  a.validate();
  if (a.zero_count() > 0) throw std::invalid_argument("mesh scales must be strictly positive");
  const auto& d = basis(b);
  MeshSpec m;
  m.basis = b;
  m.scales = a;
  const double w = 1.0 / a.product();
  std::array<Vec2, 4> disp;
  Vec2 half_sum;
  for (int k = 0; k < 4; ++k) {
    disp[k] = {a[k] * d.u[k].x, a[k] * d.u[k].y};
    half_sum.x += 0.5 * disp[k].x;
    half_sum.y += 0.5 * disp[k].y;
  }
  for (unsigned i = 0; i < 16; ++i) {
    Vec2 p;
    for (int k = 0; k < 4; ++k)
      if (i & (1u << k)) {
        p.x += disp[k].x;
        p.y += disp[k].y;
      }
    m.offset[i] = p;
    m.weight[i] = (std::popcount(i) % 2 == 0) ? w : -w;
  }
  const Vec2 c = interpolation_centering(b);
  if (b == BasisId::ThetaPrime) {
    const double s5 = std::sqrt(5.0);
    m.tau1 = (2 * a[0] + a[1] - a[2] - 2 * a[3]) / (2 * s5);
    m.tau2 = (a[0] + 2 * a[1] + 2 * a[2] + a[3] - 6 * s5) / (2 * s5);
  } else {
    m.tau1 = half_sum.x - c.x;
    m.tau2 = half_sum.y - c.y;
  }
  return m;
}

double MeshSpec::reach() const noexcept {
  double r = 0.0;
  for (const auto& p : offset) r = std::max({r, std::abs(tau1 - p.x), std::abs(tau2 - p.y)});
  return r;
}

}  // namespace boxspline
