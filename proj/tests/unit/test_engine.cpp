#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "boxspline/brute_force.hpp"
#include "boxspline/engine.hpp"
#include "boxspline/interpolation.hpp"
#include "boxspline/kernel.hpp"
#include "boxspline/mesh.hpp"
#include "boxspline/running_sum.hpp"

using namespace boxspline;

namespace {

const double kS5 = std::sqrt(5.0);

Image random_image(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Image img(w, h);
  for (auto& v : img.data) v = u(rng);
  return img;
}

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double rel_rms(const Image& a, const Image& ref) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += (a.data[i] - ref.data[i]) * (a.data[i] - ref.data[i]);
    den += ref.data[i] * ref.data[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(RunningSums, ThetaPrimeImpulseAlongFirstDirection) {
  Image img(24, 24, 0.0);
  img.at(0, 0) = 1.0;
  const RunningSumStack s = compute_running_sums(img, BasisId::ThetaPrime, 8);
  const SumPlane& g1 = s.g[0];
  for (int y = -8; y < 32; ++y)
    for (int x = -8; x < 32; ++x) {
      const bool on_ray = y >= 0 && x == 2 * y;
      EXPECT_NEAR(static_cast<double>(g1.get(x, y)), on_ray ? kS5 : 0.0, 1e-15) << x << "," << y;
    }
}

TEST(RunningSums, ZeroImageGivesZeroPlanes) {
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const RunningSumStack s = compute_running_sums(Image(10, 7, 0.0), b, 6);
    for (const auto& g : s.g)
      for (long double v : g.v) EXPECT_EQ(v, 0.0L);
  }
}

TEST(RunningSums, UnitImageHasUnitSlopeAlongFirstThetaDirection) {
  const Image one(12, 5, 1.0);
  const RunningSumStack s = compute_running_sums(one, BasisId::Theta, 4);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 12; ++x) EXPECT_NEAR(static_cast<double>(s.g[0].get(x, y)), x + 1.0, 1e-15);
}

TEST(RunningSums, RecursionHoldsEverywhere) {
  const Image img = random_image(17, 13, 11);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const RunningSumStack s = compute_running_sums(img, b, 7);
    const auto& d = basis(b);
    for (int k = 0; k < 4; ++k) {
      const SumPlane& g = s.g[k];
      for (int y = g.rect.y0; y <= g.rect.y1; ++y)
        for (int x = g.rect.x0; x <= g.rect.x1; ++x) {
          const long double prev =
              k == 0 ? (img.contains(x, y) ? img.at(x, y) : 0.0) : s.g[k - 1].get(x, y);
          const long double expect = d.h[k] * prev + g.get(x - d.step[k].x, y - d.step[k].y);
          ASSERT_NEAR(static_cast<double>(g.at(x, y)), static_cast<double>(expect), 1e-9) << k << " " << x << "," << y;
        }
    }
  }
}

TEST(RunningSums, MarginSmallerThanWindowThrows) {
  EXPECT_THROW(compute_running_sums(Image(4, 4, 1.0), BasisId::Theta, 0), std::invalid_argument);
}

TEST(Mesh, ThetaPrimeTapsMatchTheTable) {
  const ScaleVector a{2.5, 3.0, 4.5, 1.5};
  const MeshSpec m = build_mesh(a, BasisId::ThetaPrime);
  const double p1 = a[0] / kS5, p2 = a[1] / kS5, p3 = a[2] / kS5, p4 = a[3] / kS5;
  const double w = 1.0 / a.product();
  struct Row {
    double x, y, w;
  };
  const Row first[8] = {
      {0, 0, w},
      {2 * p1, p1, -w},
      {p2, 2 * p2, -w},
      {2 * p1 + p2, p1 + 2 * p2, w},
      {-p3, 2 * p3, -w},
      {2 * p1 - p3, p1 + 2 * p3, w},
      {p2 - p3, 2 * p2 + 2 * p3, w},
      {2 * p1 + p2 - p3, p1 + 2 * p2 + 2 * p3, -w},
  };
  for (int i = 0; i < 16; ++i) {
    const Row r = first[i % 8];
    const double x = i < 8 ? r.x : r.x - 2 * p4;
    const double y = i < 8 ? r.y : r.y + p4;
    const double wt = i < 8 ? r.w : -r.w;
    EXPECT_NEAR(m.offset[i].x, x, 1e-12) << i;
    EXPECT_NEAR(m.offset[i].y, y, 1e-12) << i;
    EXPECT_NEAR(m.weight[i], wt, 1e-15) << i;
  }
  EXPECT_NEAR(m.tau1, (2 * a[0] + a[1] - a[2] - 2 * a[3]) / (2 * kS5), 1e-12);
  EXPECT_NEAR(m.tau2, (a[0] + 2 * a[1] + 2 * a[2] + a[3] - 6 * kS5) / (2 * kS5), 1e-12);
}

TEST(Mesh, StepLengthScalesExample) {
  const MeshSpec m = build_mesh(ScaleVector::uniform(kS5), BasisId::ThetaPrime);
  EXPECT_NEAR(m.tau1, 0, 1e-14);
  EXPECT_NEAR(m.tau2, 0, 1e-14);
  EXPECT_NEAR(m.offset[15].x, 0, 1e-14);
  EXPECT_NEAR(m.offset[15].y, 6, 1e-14);
  EXPECT_NEAR(m.weight[15], 1.0 / 25, 1e-15);
  const auto& d = basis(BasisId::Theta);
  const MeshSpec t = build_mesh({d.h[0], d.h[1], d.h[2], d.h[3]}, BasisId::Theta);
  EXPECT_NEAR(t.tau1, 0, 1e-14);
  EXPECT_NEAR(t.tau2, 0, 1e-14);
}

TEST(Mesh, SubsetSumsAndSignsForRandomScales) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.3, 30);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime})
    for (int n = 0; n < 50; ++n) {
      const ScaleVector a{u(rng), u(rng), u(rng), u(rng)};
      const MeshSpec m = build_mesh(a, b);
      const auto& d = basis(b);
      double wsum = 0;
      for (int i = 0; i < 16; ++i) {
        Vec2 p;
        for (int k = 0; k < 4; ++k)
          if (i & (1 << k)) {
            p.x += a[k] * d.u[k].x;
            p.y += a[k] * d.u[k].y;
          }
        EXPECT_NEAR(m.offset[i].x, p.x, 1e-12);
        EXPECT_NEAR(m.offset[i].y, p.y, 1e-12);
        const double sign = std::popcount(static_cast<unsigned>(i)) % 2 ? -1.0 : 1.0;
        EXPECT_DOUBLE_EQ(m.weight[i], sign / a.product());
        wsum += m.weight[i];
      }
      EXPECT_NEAR(wsum, 0, 1e-15);
      const Vec2 c = interpolation_centering(b);
      double hx = 0, hy = 0;
      for (int k = 0; k < 4; ++k) {
        hx += 0.5 * a[k] * d.u[k].x;
        hy += 0.5 * a[k] * d.u[k].y;
      }
      EXPECT_NEAR(m.tau1, hx - c.x, 1e-12);
      EXPECT_NEAR(m.tau2, hy - c.y, 1e-12);
    }
}

TEST(Mesh, AnnihilatesAffineAndBilinearFunctions) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.3, 20);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime})
    for (int n = 0; n < 50; ++n) {
      const MeshSpec m = build_mesh({u(rng), u(rng), u(rng), u(rng)}, b);
      double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
      for (int i = 0; i < 16; ++i) {
        const double x = m.offset[i].x, y = m.offset[i].y, w = m.weight[i] * m.scales.product();
        s1 += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        syy += w * y * y;
      }
      for (double v : {s1, sx, sy, sxx, sxy, syy}) EXPECT_NEAR(v, 0, 1e-9);
    }
}

TEST(Mesh, DegenerateScalesThrow) {
  EXPECT_THROW(build_mesh({1, 0, 1, 1}, BasisId::Theta), std::invalid_argument);
  EXPECT_THROW(build_mesh({1, 1, -1, 1}, BasisId::ThetaPrime), std::invalid_argument);
}

TEST(Interpolation, WeightsPartitionUnityAndMatchExactKernel) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const auto& t = InterpolationTable::get(b);
    const int n = t.window();
    std::vector<long double> w(n * n);
    for (int k = 0; k < 500; ++k) {
      const long double fx = u(rng), fy = u(rng);
      t.weights(fx, fy, w.data());
      long double sum = 0;
      for (int jy = 0; jy < n; ++jy)
        for (int jx = 0; jx < n; ++jx) {
          const long double exact = t.kernel(fx - (t.lo() + jx), fy - (t.lo() + jy));
          EXPECT_NEAR(static_cast<double>(w[jy * n + jx]), static_cast<double>(exact), 1e-12);
          sum += w[jy * n + jx];
        }
      EXPECT_NEAR(static_cast<double>(sum), 1.0, 1e-12);
    }
  }
}

TEST(Interpolation, ConstantAndZeroFields) {
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const auto& t = InterpolationTable::get(b);
    RunningSumStack s;
    s.basis = b;
    s.g[3].rect = {-20, -20, 20, 20};
    s.g[3].v.assign(41 * 41, 2.5L);
    EXPECT_NEAR(static_cast<double>(interpolate(s, 0.3, -1.7)), 2.5, 1e-12);
    s.g[3].v.assign(41 * 41, 0.0L);
    EXPECT_EQ(interpolate(s, 1.25, 0.5), 0.0L);
    EXPECT_THROW(interpolate(s, 20.0 - t.lo(), 0.0), std::out_of_range);
  }
}

TEST(Interpolation, MatchesDirectKernelSum) {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> u(-3, 3);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const auto& t = InterpolationTable::get(b);
    const auto& d = basis(b);
    const ScaleVector h{d.h[0], d.h[1], d.h[2], d.h[3]};
    RunningSumStack s;
    s.basis = b;
    s.g[3].rect = {-15, -15, 15, 15};
    s.g[3].v.resize(31 * 31);
    for (auto& v : s.g[3].v) v = u(rng);
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng), y = u(rng);
      double direct = 0;
      for (int my = -15; my <= 15; ++my)
        for (int mx = -15; mx <= 15; ++mx)
          direct += static_cast<double>(s.g[3].at(mx, my)) * eval_kernel(b, h, x - mx, y - my);
      EXPECT_NEAR(static_cast<double>(interpolate(s, x, y)), direct, 1e-6) << x << "," << y;
      (void)t;
    }
  }
}

TEST(Engine, ConstantImageIsPreservedInTheInterior) {
  const Image img(40, 40, 3.0);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const Image out = filter_space_variant(img, ScaleVector{2, 3, 1.5, 2.5}, b, EdgePolicy::Zero);
    for (int y = 12; y < 28; ++y)
      for (int x = 12; x < 28; ++x) EXPECT_NEAR(out.at(x, y), 3.0, 1e-6);
    const Image rep = filter_space_variant(img, ScaleVector{6, 3, 5, 4}, b, EdgePolicy::Replicate);
    for (double v : rep.data) EXPECT_NEAR(v, 3.0, 1e-6);
  }
}

TEST(Engine, ThetaPrimeStepLengthImpulseMoments) {
  Image img(41, 41, 0.0);
  img.at(20, 20) = 1.0;
  const Image out = filter_space_variant(img, ScaleVector::uniform(kS5), BasisId::ThetaPrime, EdgePolicy::Zero);
  const Moments m = image_moments(out);
  EXPECT_NEAR(m.mean.x, 20, 0.1);
  EXPECT_NEAR(m.mean.y, 20, 0.1);
  EXPECT_NEAR(m.cov.c11(), 5.0 / 6, 0.03 * 5.0 / 6);
  EXPECT_NEAR(m.cov.c22(), 5.0 / 6, 0.03 * 5.0 / 6);
  EXPECT_NEAR(m.cov.c12(), 0, 0.03 * 5.0 / 6);
}

TEST(Engine, CentroidIsPreserved) {
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime})
    for (const ScaleVector& a : {ScaleVector{3, 1, 5, 2}, ScaleVector{7, 7, 0.5, 4}}) {
      Image img(61, 61, 0.0);
      img.at(30, 30) = 1.0;
      const Moments m = image_moments(filter_space_variant(img, a, b, EdgePolicy::Zero));
      EXPECT_NEAR(m.mean.x, 30, 1e-8);
      EXPECT_NEAR(m.mean.y, 30, 1e-8);
    }
}

TEST(Engine, AgreesWithBruteForceOnRandomImages) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0.5, 9);
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const Image img = random_image(64, 64, 13);
    KernelMap km(64, 64, b, ScaleVector{});
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        // Smoothly varying kernels with a few sharp changes.
        const double base = 1 + 4 * (x + y) / 126.0;
        km.scales[km.index(x, y)] = (x / 16 + y / 16) % 3 == 0
                                        ? ScaleVector{u(rng), u(rng), u(rng), u(rng)}
                                        : ScaleVector{base, 1.5 * base, 0.5 * base + 0.5, base};
      }
    for (EdgePolicy e : {EdgePolicy::Zero, EdgePolicy::Replicate}) {
      const Image fast = filter_space_variant(img, km, e);
      const Image ref = brute_force_filter(img, km, e);
      EXPECT_LT(rel_rms(fast, ref), 2e-2);
      EXPECT_LT(max_abs_diff(fast, ref), 1e-9);
    }
  }
}

TEST(Engine, IsLinear) {
  const Image f = random_image(48, 40, 14), g = random_image(48, 40, 15);
  Image h(48, 40);
  const double alpha = 0.7, beta = -2.3;
  for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] = alpha * f.data[i] + beta * g.data[i];
  for (BasisId b : {BasisId::Theta, BasisId::ThetaPrime}) {
    const ScaleVector a{4.2, 2.1, 3.3, 6.0};
    const Image rf = filter_space_variant(f, a, b, EdgePolicy::Zero);
    const Image rg = filter_space_variant(g, a, b, EdgePolicy::Zero);
    const Image rh = filter_space_variant(h, a, b, EdgePolicy::Zero);
    for (std::size_t i = 0; i < h.data.size(); ++i)
      EXPECT_NEAR(rh.data[i], alpha * rf.data[i] + beta * rg.data[i], 1e-9);
  }
}

TEST(Engine, ThreadCountDoesNotChangeTheResult) {
  const Image img = random_image(50, 37, 16);
  KernelMap km(50, 37, BasisId::ThetaPrime, ScaleVector{3, 4, 2, 5});
  for (int x = 0; x < 50; ++x) km.scales[km.index(x, 20)] = ScaleVector::uniform(1 + x * 0.2);
  EngineOptions one, many;
  one.threads = 1;
  many.threads = 3;
  const Image a = filter_space_variant(img, km, EdgePolicy::Replicate, one);
  const Image b = filter_space_variant(img, km, EdgePolicy::Replicate, many);
  EXPECT_EQ(a.data, b.data);
}

TEST(Engine, ScaleBelowMinimumNamesThePixel) {
  KernelMap km(8, 6, BasisId::Theta, ScaleVector::uniform(2));
  km.scales[km.index(5, 3)] = ScaleVector{2, 0.1, 2, 2};
  try {
    filter_space_variant(Image(8, 6, 1.0), km, EdgePolicy::Zero);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("(5, 3)"), std::string::npos) << e.what();
  }
}

TEST(Engine, MismatchedKernelMapThrows) {
  EXPECT_THROW(filter_space_variant(Image(8, 6, 1.0), KernelMap(6, 8, BasisId::Theta, ScaleVector::uniform(2)),
                                    EdgePolicy::Zero),
               std::invalid_argument);
}

TEST(Engine, ReachBeyondMarginLimitThrows) {
  EngineOptions opt;
  opt.max_margin = 10;
  EXPECT_THROW(filter_space_variant(Image(8, 8, 1.0), ScaleVector::uniform(40), BasisId::Theta, EdgePolicy::Zero, opt),
               std::invalid_argument);
}
