#include "boxspline/pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boxspline/brute_force.hpp"
#include "boxspline/kernel.hpp"
#include "boxspline/shape.hpp"
#include "boxspline/solver.hpp"

namespace boxspline {

CovarianceMap::CovarianceMap(int w, int h)
    : width(w), height(h), c11(static_cast<std::size_t>(w) * h, 1.0), c12(static_cast<std::size_t>(w) * h, 0.0),
      c22(static_cast<std::size_t>(w) * h, 1.0) {
  if (w < 0 || h < 0) throw std::invalid_argument("negative covariance map dimensions");
}

CovarianceMap CovarianceMap::constant(int w, int h, const Covariance& c) {
  CovarianceMap m(w, h);
  std::fill(m.c11.begin(), m.c11.end(), c.c11());
  std::fill(m.c12.begin(), m.c12.end(), c.c12());
  std::fill(m.c22.begin(), m.c22.end(), c.c22());
  return m;
}

void CovarianceMap::set(int x, int y, double a, double b, double c) {
  const std::size_t i = index(x, y);
  c11[i] = a;
  c12[i] = b;
  c22[i] = c;
}

bool CovarianceMap::valid_at(int x, int y) const noexcept {
  const std::size_t i = index(x, y);
  return Covariance::is_valid(c11[i], c12[i], c22[i]);
}

Covariance CovarianceMap::at(int x, int y) const {
  const std::size_t i = index(x, y);
  return {c11[i], c12[i], c22[i]};
}

void PipelinePolicy::validate() const {
  if (!(sigma_fraction > 0.0 && sigma_fraction < 1.0)) throw std::invalid_argument("sigma fraction must lie in (0, 1)");
  if (!(min_scale >= 0.0)) throw std::invalid_argument("minimum scale must be non-negative");
}

const char* status_name(PixelStatus s) {
  switch (s) {
    case PixelStatus::Ok: return "ok";
    case PixelStatus::NotPositiveDefinite: return "not-positive-definite";
    case PixelStatus::ExceedsElongationBound: return "exceeds-elongation-bound";
    case PixelStatus::SplitInfeasible: return "split-infeasible";
    case PixelStatus::BelowMinimumScale: return "below-minimum-scale";
  }
  return "unknown";
}

IVec2 FeasibilityReport::first_offender() const noexcept {
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (status[static_cast<std::size_t>(y) * width + x] != PixelStatus::Ok) return {x, y};
  return {-1, -1};
}

std::string FeasibilityReport::summary(int max_listed) const {
  std::ostringstream os;
  os << width * height << " pixels: ok=" << counts[0] << " not-positive-definite=" << counts[1]
     << " exceeds-elongation-bound=" << counts[2] << " split-infeasible=" << counts[3]
     << " below-minimum-scale=" << counts[4] << " clamped=" << clamped_count;
  int listed = 0;
  for (int y = 0; y < height && listed < max_listed; ++y)
    for (int x = 0; x < width && listed < max_listed; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (status[i] == PixelStatus::Ok) continue;
      os << (listed == 0 ? "; offending: " : ", ") << '(' << x << ',' << y << ") " << status_name(status[i]) << " on "
         << basis_name(basis[i]);
      ++listed;
    }
  return os.str();
}

BasisId pixel_basis(const Covariance& c, BasisPolicy policy) {
  switch (policy) {
    case BasisPolicy::Theta: return BasisId::Theta;
    case BasisPolicy::ThetaPrime: return BasisId::ThetaPrime;
    case BasisPolicy::Dual: break;
  }
  if (elongation(c) < 1.01) return BasisId::Theta;
  return sector_select(orientation(c));
}

namespace {

PixelStatus check_pixel(const Covariance& c, BasisId b, Method method, double min_scale) {
  if (method == Method::Accurate) return sigma_bound_elongation(c, b) > 0.0 ? PixelStatus::Ok
                                                                           : PixelStatus::ExceedsElongationBound;
  if (!is_feasible(c, b, 0.0)) return PixelStatus::ExceedsElongationBound;
  if (!is_feasible(c, b, min_scale)) return PixelStatus::BelowMinimumScale;
  return PixelStatus::Ok;
}

}  // namespace

FeasibilityReport validate_covmap(const CovarianceMap& covmap, const PipelinePolicy& policy, Method method) {
  policy.validate();
  const BasisPolicy bp = method == Method::Dual ? BasisPolicy::Dual : policy.basis;
  FeasibilityReport r;
  r.width = covmap.width;
  r.height = covmap.height;
  const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
  r.status.assign(n, PixelStatus::Ok);
  r.basis.assign(n, BasisId::Theta);
  r.effective.resize(n);
  r.clamped.assign(n, 0);

  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) {
      const std::size_t i = covmap.index(x, y);
      r.effective[i] = {covmap.c11[i], covmap.c12[i], covmap.c22[i]};
      if (!covmap.valid_at(x, y)) {
        r.status[i] = PixelStatus::NotPositiveDefinite;
        continue;
      }
      const Covariance c = covmap.at(x, y);
      const BasisId b = pixel_basis(c, bp);
      r.basis[i] = b;
      PixelStatus st = check_pixel(c, b, method, policy.min_scale);
      if (st != PixelStatus::Ok && policy.infeasible == InfeasiblePolicy::Clamp) {
        const ShapeParams sp = shape_from_covariance(c);
        const double e = elongation_bound(sp.orientation, b);
        double rho = std::isinf(e) ? sp.elongation : std::min(sp.elongation, 0.95 * e);
        for (int k = 0; k < 80 && st != PixelStatus::Ok; ++k) {
          const Covariance cc = covariance_from_shape({sp.size, rho, sp.orientation});
          st = check_pixel(cc, b, method, policy.min_scale);
          if (st == PixelStatus::Ok) {
            r.effective[i] = {cc.c11(), cc.c12(), cc.c22()};
            r.clamped[i] = 1;
          }
          rho = 1.0 + 0.9 * (rho - 1.0);
        }
      }
      r.status[i] = st;
    }

  if (method == Method::Accurate) {
    double bound = kInfinity;
    for (std::size_t i = 0; i < n; ++i) {
      if (r.status[i] != PixelStatus::Ok) continue;
      const auto& e = r.effective[i];
      bound = std::min(bound, sigma_bound_elongation(Covariance(e[0], e[1], e[2]), r.basis[i]));
    }
    if (std::isfinite(bound)) {
      r.sigma2 = policy.sigma_fraction * bound;
      const bool stage_a_ok = std::sqrt(6.0 * r.sigma2) >= policy.min_scale;
      for (std::size_t i = 0; i < n; ++i) {
        if (r.status[i] != PixelStatus::Ok) continue;
        const auto& e = r.effective[i];
        const double a = e[0] - r.sigma2, c = e[2] - r.sigma2;
        if (!stage_a_ok || !Covariance::is_valid(a, e[1], c) ||
            !is_feasible(Covariance(a, e[1], c), r.basis[i], policy.min_scale))
          r.status[i] = PixelStatus::SplitInfeasible;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    ++r.counts[static_cast<int>(r.status[i])];
    r.clamped_count += r.clamped[i];
  }
  return r;
}

KernelMap build_kernel_map(const FeasibilityReport& report, Method method, const PipelinePolicy& policy,
                           ScaleVector* stage_a_scales) {
  KernelMap k;
  k.width = report.width;
  k.height = report.height;
  const std::size_t n = static_cast<std::size_t>(k.width) * k.height;
  k.basis = report.basis;
  k.scales.resize(n);
  const double s2 = method == Method::Accurate ? report.sigma2 : 0.0;
  if (stage_a_scales) *stage_a_scales = ScaleVector::uniform(std::sqrt(6.0 * s2));
  std::array<double, 3> last{};
  BasisId last_b = BasisId::Theta;
  bool have = false;
  ScaleVector last_s;
  for (std::size_t i = 0; i < n; ++i) {
    if (report.status[i] != PixelStatus::Ok) throw InfeasibleError("kernel map requested for an infeasible pixel");
    const auto& e = report.effective[i];
    if (!have || e != last || report.basis[i] != last_b) {
      last_s = solve_scales(Covariance(e[0] - s2, e[1], e[2] - s2), report.basis[i], policy.min_scale);
      last = e;
      last_b = report.basis[i];
      have = true;
    }
    k.scales[i] = last_s;
  }
  return k;
}

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FeasibilityReport checked_report(const CovarianceMap& covmap, Method method, const PipelinePolicy& policy,
                                 const Image& image) {
  if (covmap.width != image.width || covmap.height != image.height)
    throw std::invalid_argument("covariance map and image dimensions differ");
  FeasibilityReport r = validate_covmap(covmap, policy, method);
  if (!r.ok()) {
    const IVec2 p = r.first_offender();
    throw InfeasibleError("infeasible covariance map: " + r.summary(), p.x, p.y);
  }
  return r;
}

int stage_b_margin(const KernelMap& k) {
  double m = 0.0;
  for (std::size_t i = 0; i < k.scales.size(); ++i) {
    const Vec2 h = KernelSpec{k.basis[i], k.scales[i]}.support_half_extent();
    m = std::max({m, h.x, h.y});
  }
  return static_cast<int>(std::ceil(m)) + 1;
}

}  // namespace

PipelineResult run_pipeline(const Image& image, const CovarianceMap& covmap, Method method,
                            const PipelinePolicy& policy) {
  PipelineResult res;
  res.report = checked_report(covmap, method, policy, image);
  EngineOptions opt;
  opt.threads = policy.threads;
  opt.min_scale = policy.min_scale;
  ScaleVector sa;
  const KernelMap kb = build_kernel_map(res.report, method, policy, &sa);
  if (method == Method::Accurate) {
    const int m = stage_b_margin(kb);
    const KernelMap ka(image.width + 2 * m, image.height + 2 * m, BasisId::Theta, sa);
    auto t0 = std::chrono::steady_clock::now();
    const Image ext = filter_space_variant_at(image, ka, -m, -m, policy.edge, opt);
    res.stage_a_seconds = elapsed(t0);
    t0 = std::chrono::steady_clock::now();
    res.image = filter_space_variant_at(ext, kb, m, m, EdgePolicy::Zero, opt);
    res.stage_b_seconds = elapsed(t0);
  } else {
    const auto t0 = std::chrono::steady_clock::now();
    res.image = filter_space_variant(image, kb, policy.edge, opt);
    res.stage_b_seconds = elapsed(t0);
  }
  return res;
}

Image reference_pipeline(const Image& image, const CovarianceMap& covmap, Method method, const PipelinePolicy& policy) {
  const FeasibilityReport r = checked_report(covmap, method, policy, image);
  BruteForceOptions opt;
  opt.threads = policy.threads;
  ScaleVector sa;
  const KernelMap kb = build_kernel_map(r, method, policy, &sa);
  if (method == Method::Accurate) {
    const int m = stage_b_margin(kb);
    const KernelMap ka(image.width + 2 * m, image.height + 2 * m, BasisId::Theta, sa);
    const Image ext = brute_force_filter_at(image, ka, -m, -m, policy.edge, opt);
    return brute_force_filter_at(ext, kb, m, m, EdgePolicy::Zero, opt);
  }
  return brute_force_filter(image, kb, policy.edge, opt);
}

Image filter_basic(const Image& image, const CovarianceMap& covmap, BasisId basis, EdgePolicy edge) {
  PipelinePolicy p;
  p.basis = basis == BasisId::Theta ? BasisPolicy::Theta : BasisPolicy::ThetaPrime;
  p.edge = edge;
  return run_pipeline(image, covmap, Method::Basic, p).image;
}

Image filter_accurate(const Image& image, const CovarianceMap& covmap, const PipelinePolicy& policy) {
  return run_pipeline(image, covmap, Method::Accurate, policy).image;
}

Image filter_dual(const Image& image, const CovarianceMap& covmap, const PipelinePolicy& policy) {
  return run_pipeline(image, covmap, Method::Dual, policy).image;
}

}  // namespace boxspline
