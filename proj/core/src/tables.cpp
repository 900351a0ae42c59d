#include "boxspline/tables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "boxspline/clt.hpp"
#include "boxspline/kernel.hpp"
#include "boxspline/shape.hpp"
#include "boxspline/solver.hpp"

namespace boxspline {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_num(double v, int prec = 4) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

}  // namespace

ErrorEntry error_entry(const ShapeParams& shape, double fraction, double pitch) {
  ErrorEntry e;
  e.shape = shape;
  e.fraction = fraction;
  const Covariance c = covariance_from_shape(shape);
  if (!is_feasible(c, BasisId::Theta)) {
    e.basis = sector_select(shape.orientation);
    e.fallback = true;
  }
  const KernelSpec single{e.basis, solve_scales(c, e.basis)};
  const double sigma2 = fraction * sigma_bound_elongation(c, e.basis);
  const KernelSpec aniso{e.basis, solve_scales(Covariance(c.c11() - sigma2, c.c12(), c.c22() - sigma2), e.basis)};
  const Vec2 iso = KernelSpec{BasisId::Theta, ScaleVector::uniform(std::sqrt(6.0 * sigma2))}.support_half_extent();

  const Vec2 s1 = single.support_half_extent();
  const Vec2 s2 = aniso.support_half_extent();
  const double hx = std::max({s1.x, s2.x + iso.x, 5.0 * std::sqrt(c.c11())});
  const double hy = std::max({s1.y, s2.y + iso.y, 5.0 * std::sqrt(c.c22())});

  const SampledKernel g = sample_gaussian(c, pitch, hx, hy);
  e.old_error = 100.0 * normalized_l2_error(sample_kernel(single, pitch, hx, hy), g);
  e.new_error = 100.0 * normalized_l2_error(composite_kernel_sampled(aniso, sigma2, pitch, hx, hy), g);
  e.improvement = 100.0 * (e.old_error - e.new_error) / e.old_error;
  return e;
}

std::vector<ShapeParams> error_table_shapes() {
  return {{1, 1, 0}, {5, 1, 0}, {1, 4, 0}, {5, 4, 0}, {5, 3, kPi / 8}, {5, 8, kPi / 3}, {5, 5, kPi / 2}};
}

std::vector<ErrorEntry> error_table(double pitch) {
  std::vector<ErrorEntry> rows;
  for (const auto& s : error_table_shapes()) rows.push_back(error_entry(s, 0.5, pitch));
  return rows;
}

std::vector<ErrorEntry> sigma_sweep(double pitch) {
  std::vector<ErrorEntry> rows;
  for (int k = 1; k <= 8; ++k) rows.push_back(error_entry({5, 3, kPi / 4}, 0.1 * k, pitch));
  return rows;
}

double empirical_bound(BasisId basis, double phi, double cap) {
  auto feasible = [&](double rho) { return is_feasible(covariance_from_shape({1.0, rho, phi}), basis); };
  if (feasible(cap)) return kInfinity;
  double lo = 1.0, hi = cap;
  if (!feasible(lo)) return 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<double> bound_table_orientations_deg() {
  return {0, 5, 13.3, 20, 22.5, 25, std::atan(0.5) * 180.0 / kPi, 30, 40, 45};
}

std::vector<BoundEntry> bound_table() {
  std::vector<BoundEntry> rows;
  for (double deg : bound_table_orientations_deg()) {
    const double phi = deg * kPi / 180.0;
    BoundEntry r;
    r.orientation_deg = deg;
    r.theta = elongation_bound(phi, BasisId::Theta);
    r.theta_prime = empirical_bound(BasisId::ThetaPrime, phi);
    r.pair = std::max(r.theta, r.theta_prime);
    rows.push_back(r);
  }
  return rows;
}

std::vector<CltEntry> clt_table(const std::vector<int>& ns, double sigma, double pitch) {
  std::vector<CltEntry> rows;
  for (int n : ns) rows.push_back({n, 100.0 * clt_demo(n, sigma, pitch).max_err_fraction});
  return rows;
}

std::string error_table_csv(const std::vector<ErrorEntry>& rows) {
  std::ostringstream os;
  os << "s,rho,theta_deg,basis,old_error_pct,new_error_pct,improvement_pct\n";
  for (const auto& r : rows)
    os << fmt_num(r.shape.size, 0) << ',' << fmt_num(r.shape.elongation, 0) << ','
       << fmt_num(r.shape.orientation * 180.0 / kPi, 2) << ',' << basis_name(r.basis) << (r.fallback ? "*" : "")
       << ',' << fmt_num(r.old_error, 2) << ',' << fmt_num(r.new_error, 2) << ',' << fmt_num(r.improvement, 2)
       << '\n';
  return os.str();
}

std::string sigma_sweep_csv(const std::vector<ErrorEntry>& rows) {
  std::ostringstream os;
  os << "bound_pct,old_error_pct,new_error_pct,improvement_pct\n";
  for (const auto& r : rows)
    os << fmt_num(100.0 * r.fraction, 0) << ',' << fmt_num(r.old_error, 2) << ',' << fmt_num(r.new_error, 2) << ','
       << fmt_num(r.improvement, 2) << '\n';
  return os.str();
}

std::string bound_table_csv(const std::vector<BoundEntry>& rows) {
  std::ostringstream os;
  os << "orientation_deg,previous_bound,theta_prime_bound,new_bound\n";
  for (const auto& r : rows)
    os << fmt_num(r.orientation_deg, 3) << ',' << fmt_num(r.theta, 2) << ',' << fmt_num(r.theta_prime, 2) << ','
       << fmt_num(r.pair, 2) << '\n';
  return os.str();
}

std::string clt_table_csv(const std::vector<CltEntry>& rows) {
  std::ostringstream os;
  os << "n,max_error_pct_of_peak\n";
  for (const auto& r : rows) os << r.n << ',' << fmt_num(r.max_error, 3) << '\n';
  return os.str();
}

}  // namespace boxspline
