#include "boxspline/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace boxspline {

namespace {

double discriminant(double c11, double c12, double c22) {
  return std::hypot(c11 - c22, 2.0 * c12);
}

double reduce_angle(double phi) {
  double r = std::fmod(phi, std::numbers::pi);
  if (r < 0) r += std::numbers::pi;
  if (r >= std::numbers::pi) r = 0.0;
  return r;
}

}  // namespace

bool Covariance::is_valid(double c11, double c12, double c22) noexcept {
  if (!std::isfinite(c11) || !std::isfinite(c12) || !std::isfinite(c22)) return false;
  if (!(c11 > 0.0) || !(c22 > 0.0)) return false;
  const double det = c11 * c22 - c12 * c12;
  if (!(det > 0.0)) return false;
  const double lmax = 0.5 * (c11 + c22 + discriminant(c11, c12, c22));
  const double lmin = det / lmax;
  return lmax <= kMaxEigenRatio * lmin;
}

Covariance::Covariance(double c11, double c12, double c22) : c11_(c11), c12_(c12), c22_(c22) {
  if (!is_valid(c11, c12, c22)) {
    std::ostringstream os;
    os << "covariance [[" << c11 << ", " << c12 << "], [" << c12 << ", " << c22
       << "]] is not positive definite or is too elongated";
    throw std::invalid_argument(os.str());
  }
}

double Covariance::lambda_max() const noexcept {
  return 0.5 * (trace() + discriminant(c11_, c12_, c22_));
}

double Covariance::lambda_min() const noexcept { return det() / lambda_max(); }

void ShapeParams::validate() const {
  if (!std::isfinite(size) || !(size > 0.0)) throw std::invalid_argument("shape size must be positive");
  if (!std::isfinite(elongation) || !(elongation >= 1.0))
    throw std::invalid_argument("shape elongation must be >= 1");
  if (!std::isfinite(orientation) || orientation < 0.0 || orientation >= std::numbers::pi)
    throw std::invalid_argument("shape orientation must lie in [0, pi)");
}

void ScaleVector::validate() const {
  for (double v : a) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("scale entries must be finite and >= 0");
  }
  if (zero_count() > 1) throw std::invalid_argument("scale vector has more than one zero entry");
}

int ScaleVector::zero_count() const noexcept {
  return static_cast<int>(std::count(a.begin(), a.end(), 0.0));
}

const DirectionBasis& basis(BasisId id) {
  static const DirectionBasis theta = [] {
    const double r = std::numbers::sqrt2 / 2.0;
    return DirectionBasis{BasisId::Theta,
                          {Vec2{1, 0}, Vec2{r, r}, Vec2{0, 1}, Vec2{-r, r}},
                          {IVec2{1, 0}, IVec2{1, 1}, IVec2{0, 1}, IVec2{-1, 1}},
                          {1.0, std::numbers::sqrt2, 1.0, std::numbers::sqrt2}};
  }();
  static const DirectionBasis theta_prime = [] {
    const double s5 = std::sqrt(5.0);
    return DirectionBasis{BasisId::ThetaPrime,
                          {Vec2{2 / s5, 1 / s5}, Vec2{1 / s5, 2 / s5}, Vec2{-1 / s5, 2 / s5}, Vec2{-2 / s5, 1 / s5}},
                          {IVec2{2, 1}, IVec2{1, 2}, IVec2{-1, 2}, IVec2{-2, 1}},
                          {s5, s5, s5, s5}};
  }();
  return id == BasisId::Theta ? theta : theta_prime;
}

const char* basis_name(BasisId id) { return id == BasisId::Theta ? "theta" : "theta-prime"; }

Covariance beta_covariance(const ScaleVector& a) {
  a.validate();
  const double u1 = a[0] * a[0], u2 = a[1] * a[1], u3 = a[2] * a[2], u4 = a[3] * a[3];
  return {(2 * u1 + u2 + u4) / 24.0, (u2 - u4) / 24.0, (2 * u3 + u2 + u4) / 24.0};
}

Covariance beta_prime_covariance(const ScaleVector& a) {
  a.validate();
  const double u1 = a[0] * a[0], u2 = a[1] * a[1], u3 = a[2] * a[2], u4 = a[3] * a[3];
  return {(4 * u1 + u2 + u3 + 4 * u4) / 60.0, 2 * (u1 + u2 - u3 - u4) / 60.0,
          (u1 + 4 * u2 + 4 * u3 + u4) / 60.0};
}

Covariance kernel_covariance(BasisId b, const ScaleVector& a) {
  return b == BasisId::Theta ? beta_covariance(a) : beta_prime_covariance(a);
}

double orientation(const Covariance& c) {
  const double d = discriminant(c.c11(), c.c12(), c.c22());
  if (d <= 1e-14 * c.trace()) return 0.0;
  return reduce_angle(0.5 * std::atan2(2.0 * c.c12(), c.c11() - c.c22()));
}

double elongation(const Covariance& c) { return c.lambda_max() / c.lambda_min(); }

ShapeParams shape_from_covariance(const Covariance& c) {
  return {c.trace(), elongation(c), orientation(c)};
}

Covariance covariance_from_shape(const ShapeParams& p) {
  p.validate();
  const double l1 = p.size * p.elongation / (1.0 + p.elongation);
  const double l2 = p.size / (1.0 + p.elongation);
  const double cs = std::cos(p.orientation), sn = std::sin(p.orientation);
  return {l1 * cs * cs + l2 * sn * sn, (l1 - l2) * sn * cs, l1 * sn * sn + l2 * cs * cs};
}

double elongation_bound(double phi, BasisId b) {
  const double r = reduce_angle(phi);
  const double s2 = std::abs(std::sin(2.0 * r));
  const double c2 = std::abs(std::cos(2.0 * r));
  if (b == BasisId::Theta) {
    // Closed form with t = |tan phi - cot phi| / 2, multiplied through by |sin 2phi|.
    const double den = s2 + c2 - 1.0;
    if (den <= 1e-12) return kInfinity;
    return (s2 + c2 + 1.0) / den;
  }
  // Exact feasibility of the rotated basis: max(20|cos 2phi|, 15|sin 2phi|) * d <= 12,
  // d = (rho - 1) / (rho + 1).
  const double m = std::max(20.0 * c2, 15.0 * s2);
  if (m - 12.0 <= 1e-9) return kInfinity;
  return (m + 12.0) / (m - 12.0);
}

double sigma_bound_pd(const Covariance& c) { return c.lambda_min(); }

double sigma_bound_elongation(const Covariance& c, BasisId b) {
  const double e = elongation_bound(orientation(c), b);
  const double k = std::isinf(e) ? 1.0 : (e + 1.0) / (e - 1.0);
  const double d = discriminant(c.c11(), c.c12(), c.c22());
  if (k == 1.0) return c.lambda_min();
  return 0.5 * (c.trace() - k * d);
}

CovarianceSplit split_covariance(const Covariance& c, double fraction, BasisId b) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("sigma fraction must lie in (0, 1)");
  const double bound = sigma_bound_elongation(c, b);
  if (!(bound > 0.0)) {
    throw InfeasibleError("covariance exceeds the elongation bound of basis " + std::string(basis_name(b)));
  }
  const double s2 = fraction * bound;
  return {s2, Covariance(c.c11() - s2, c.c12(), c.c22() - s2)};
}

BasisId sector_select(double phi) {
  const double et = elongation_bound(phi, BasisId::Theta);
  const double ep = elongation_bound(phi, BasisId::ThetaPrime);
  return ep > et ? BasisId::ThetaPrime : BasisId::Theta;
}

}  // namespace boxspline
