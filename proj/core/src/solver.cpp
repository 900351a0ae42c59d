#include "boxspline/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace boxspline {

std::array<double, 4> SolverFamily::squared_scales(double t) const {
  std::array<double, 4> u{};
  for (int i = 0; i < 4; ++i) u[i] = std::max(0.0, alpha[i] + beta[i] * t);
  return u;
}

bool try_build_family(const Covariance& c, BasisId b, SolverFamily& f, double min_scale) noexcept {
  f.basis = b;
  if (b == BasisId::Theta) {
    // t = u2 + u4.
    const double x = 24.0 * c.c11(), y = 24.0 * c.c22(), z = 24.0 * c.c12();
    f.alpha = {x / 2, z / 2, y / 2, -z / 2};
    f.beta = {-0.5, 0.5, -0.5, 0.5};
  } else {
    // t = u1 - u2 + u3 - u4.
    const double s = 12.0 * c.trace(), p = 20.0 * (c.c11() - c.c22()), q = 30.0 * c.c12();
    f.alpha = {(s + p + q) / 4, (s - p + q) / 4, (s - p - q) / 4, (s + p - q) / 4};
    f.beta = {0.25, -0.25, 0.25, -0.25};
  }
  const double floor = min_scale * min_scale;
  double lo = -kInfinity, hi = kInfinity;
  for (int i = 0; i < 4; ++i) {
    const double bound = (floor - f.alpha[i]) / f.beta[i];
    if (f.beta[i] > 0)
      lo = std::max(lo, bound);
    else
      hi = std::min(hi, bound);
  }
  f.t_lo = lo;
  f.t_hi = hi;
  return f.feasible();
}

SolverFamily build_family(const Covariance& c, BasisId b, double min_scale) {
  SolverFamily f;
  if (!try_build_family(c, b, f, min_scale)) {
    std::ostringstream os;
    os << "covariance [[" << c.c11() << ", " << c.c12() << "], [" << c.c12() << ", " << c.c22()
       << "]] is infeasible on basis " << basis_name(b);
    if (min_scale > 0) os << " with minimum scale " << min_scale;
    throw InfeasibleError(os.str());
  }
  return f;
}

bool is_feasible(const Covariance& c, BasisId b, double min_scale) noexcept {
  SolverFamily f;
  return try_build_family(c, b, f, min_scale);
}

namespace {

// Kurtosis matrix entries (m11, m12, m22), linear in the squared squared-scales.
std::array<double, 3> kurtosis_matrix(const std::array<double, 4>& v, BasisId b) {
  if (b == BasisId::Theta) return {2 * v[0] + v[1] + v[3], v[1] - v[3], 2 * v[2] + v[1] + v[3]};
  return {4 * v[0] + v[1] + v[2] + 4 * v[3], 2 * (v[0] + v[1] - v[2] - v[3]), v[0] + 4 * v[1] + 4 * v[2] + v[3]};
}

// Newton steps on the derivative of the squared objective, a cubic in t.
double polish(const SolverFamily& f, double t) {
  for (int it = 0; it < 8; ++it) {
    std::array<double, 4> v{}, dv{}, ddv{};
    for (int i = 0; i < 4; ++i) {
      const double u = f.alpha[i] + f.beta[i] * t;
      v[i] = u * u;
      dv[i] = 2 * f.beta[i] * u;
      ddv[i] = 2 * f.beta[i] * f.beta[i];
    }
    const auto m = kurtosis_matrix(v, f.basis), dm = kurtosis_matrix(dv, f.basis), ddm = kurtosis_matrix(ddv, f.basis);
    const double w[3] = {1, 2, 1};
    double g1 = 0, g2 = 0;
    for (int k = 0; k < 3; ++k) {
      g1 += w[k] * m[k] * dm[k];
      g2 += w[k] * (dm[k] * dm[k] + m[k] * ddm[k]);
    }
    if (!(g2 > 0)) break;
    const double next = std::clamp(t - g1 / g2, f.t_lo, f.t_hi);
    if (next == t) break;
    t = next;
  }
  return t;
}

}  // namespace

double kurtosis_objective(const std::array<double, 4>& u, BasisId b) {
  const auto m = kurtosis_matrix({u[0] * u[0], u[1] * u[1], u[2] * u[2], u[3] * u[3]}, b);
  return std::sqrt(m[0] * m[0] + 2 * m[1] * m[1] + m[2] * m[2]);
}

SolveResult solve_scales_detailed(const Covariance& c, BasisId b, double min_scale) {
  const SolverFamily f = build_family(c, b, min_scale);
  auto obj = [&](double t) { return kurtosis_objective(f.squared_scales(t), b); };

  constexpr double kInvPhi = 0.6180339887498949;
  double lo = f.t_lo, hi = f.t_hi;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = obj(x1), f2 = obj(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-10; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = obj(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = obj(x2);
    }
  }
  double best_t = 0.5 * (lo + hi);
  double best = obj(best_t);
  if (const double t = polish(f, best_t); obj(t) <= best * (1 + 1e-12)) {
    best_t = t;
    best = obj(t);
  }
  for (double t : {f.t_lo, f.t_hi}) {
    const double v = obj(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }

  auto u = f.squared_scales(best_t);
  const double umax = *std::max_element(u.begin(), u.end());
  for (double& ui : u) {
    if (ui < 1e-13 * umax) ui = 0.0;  // endpoint rounding; the scale is meant to vanish
  }
  ScaleVector a(std::sqrt(u[0]), std::sqrt(u[1]), std::sqrt(u[2]), std::sqrt(u[3]));
  if (a.zero_count() > 1) throw std::invalid_argument("minimum-kurtosis solution is degenerate (two zero scales)");
  return {a, best_t, best};
}

ScaleVector solve_scales(const Covariance& c, BasisId b, double min_scale) {
  return solve_scales_detailed(c, b, min_scale).scales;
}

}  // namespace boxspline
