#include "boxspline/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boxspline/geometry.hpp"
#include "boxspline/kernel.hpp"

namespace boxspline {

namespace {

using LPoly = geom::ConvexPolygon<long double, 24>;

void monomials(long double x, long double y, long double* m) {
  m[0] = 1.0L;
  m[1] = x;
  m[2] = y;
  m[3] = x * x;
  m[4] = x * y;
  m[5] = y * y;
}

// Solves A X = B in place for 6x6 A and `nrhs` right-hand sides stored column-wise.
void solve6(std::array<std::array<long double, 6>, 6> a, std::vector<std::array<long double, 6>>& rhs) {
  std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
  for (int col = 0; col < 6; ++col) {
    int piv = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300L) throw std::logic_error("interpolation patch fit is singular");
    std::swap(a[piv], a[col]);
    std::swap(perm[piv], perm[col]);
    for (auto& b : rhs) std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 6; ++r) {
      const long double f = a[r][col] / a[col][col];
      if (f == 0.0L) continue;
      for (int c = col; c < 6; ++c) a[r][c] -= f * a[col][c];
      for (auto& b : rhs) b[r] -= f * b[col];
    }
  }
  for (auto& b : rhs) {
    for (int r = 5; r >= 0; --r) {
      long double s = b[r];
      for (int c = r + 1; c < 6; ++c) s -= a[r][c] * b[c];
      b[r] = s / a[r][r];
    }
  }
}

}  // namespace

const InterpolationTable& InterpolationTable::get(BasisId b) {
  static const InterpolationTable theta(BasisId::Theta);
  static const InterpolationTable theta_prime(BasisId::ThetaPrime);
  return b == BasisId::Theta ? theta : theta_prime;
}

long double InterpolationTable::kernel(long double x, long double y) const {
  return eval_box_spline<long double>(basis_, scales_, x, y);
}

InterpolationTable::InterpolationTable(BasisId b) : basis_(b) {
  const auto& d = boxspline::basis(b);
  long double cx = 0, cy = 0;  // half the sum of the step vectors
  for (int k = 0; k < 4; ++k) {
    cx += 0.5L * d.step[k].x;
    cy += 0.5L * d.step[k].y;
  }
  if (b == BasisId::Theta) {
    n_ = 4;
    lo_ = -1;
    scales_ = {1.0L, std::sqrt(2.0L), 1.0L, std::sqrt(2.0L)};
  } else {
    n_ = 6;
    lo_ = -2;
    const long double s5 = std::sqrt(5.0L);
    scales_ = {s5, s5, s5, s5};
  }
  // Breaklines of K(x) = M(x + c): n . (x + c) in Z, n the integer normal of a step.
  for (int k = 0; k < 4; ++k) {
    normal_[k] = {d.step[k].y, -d.step[k].x};
    const long double nc = normal_[k][0] * cx + normal_[k][1] * cy;
    long double o = -nc - std::floor(-nc);
    offset_[k] = o;
    long double lmin = 1e9L, lmax = -1e9L;
    for (int corner = 0; corner < 4; ++corner) {
      const long double l = normal_[k][0] * (corner & 1) + normal_[k][1] * (corner >> 1) - o;
      lmin = std::min(lmin, l);
      lmax = std::max(lmax, l);
    }
    kmin_[k] = static_cast<int>(std::floor(lmin));
    kcount_[k] = static_cast<int>(std::ceil(lmax)) - kmin_[k];
  }
  const int total = kcount_[0] * kcount_[1] * kcount_[2] * kcount_[3];
  lookup_.assign(total, -1);

  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    LPoly poly;
    poly.v[0] = {0, 0};
    poly.v[1] = {1, 0};
    poly.v[2] = {1, 1};
    poly.v[3] = {0, 1};
    poly.n = 4;
    for (int k = 0; k < 4; ++k) {
      const int kk = kmin_[k] + rem % kcount_[k];
      rem /= kcount_[k];
      const long double nx = normal_[k][0], ny = normal_[k][1];
      LPoly tmp;
      geom::clip_halfplane(poly, nx, ny, offset_[k] + kk + 1, tmp);
      geom::clip_halfplane(tmp, -nx, -ny, -(offset_[k] + kk), poly);
    }
    if (geom::polygon_area(poly) < 1e-12L) continue;

    Cell cell;
    cell.cx = cell.cy = 0;
    for (int i = 0; i < poly.n; ++i) {
      cell.cx += poly.v[i].x / poly.n;
      cell.cy += poly.v[i].y / poly.n;
    }
    // Largest triangle on the vertices, shrunk toward the centroid; its P2 nodes
    // determine the quadratic patch.
    int bi = 0, bj = 1, bk = 2;
    long double best = -1;
    for (int i = 0; i < poly.n; ++i)
      for (int j = i + 1; j < poly.n; ++j)
        for (int k = j + 1; k < poly.n; ++k) {
          const auto &p = poly.v[i], &q = poly.v[j], &r = poly.v[k];
          const long double ar = std::abs((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x));
          if (ar > best) {
            best = ar;
            bi = i;
            bj = j;
            bk = k;
          }
        }
    std::array<geom::Point<long double>, 3> t;
    const int ids[3] = {bi, bj, bk};
    for (int m = 0; m < 3; ++m)
      t[m] = {cell.cx + 0.5L * (poly.v[ids[m]].x - cell.cx), cell.cy + 0.5L * (poly.v[ids[m]].y - cell.cy)};
    const std::array<geom::Point<long double>, 6> nodes{
        t[0], t[1], t[2],
        geom::Point<long double>{(t[0].x + t[1].x) / 2, (t[0].y + t[1].y) / 2},
        geom::Point<long double>{(t[1].x + t[2].x) / 2, (t[1].y + t[2].y) / 2},
        geom::Point<long double>{(t[0].x + t[2].x) / 2, (t[0].y + t[2].y) / 2}};

    std::array<std::array<long double, 6>, 6> a{};
    for (int r = 0; r < 6; ++r) monomials(nodes[r].x - cell.cx, nodes[r].y - cell.cy, a[r].data());
    std::vector<std::array<long double, 6>> rhs;
    for (int jy = 0; jy < n_; ++jy)
      for (int jx = 0; jx < n_; ++jx) {
        std::array<long double, 6> vals{};
        bool any = false;
        for (int r = 0; r < 6; ++r) {
          vals[r] = kernel(nodes[r].x - (lo_ + jx), nodes[r].y - (lo_ + jy));
          any = any || std::abs(vals[r]) > 1e-18L;
        }
        if (!any) continue;
        cell.entries.push_back(jy * n_ + jx);
        rhs.push_back(vals);
      }
    solve6(a, rhs);
    cell.c = std::move(rhs);

    // Self-check at the centroid.
    for (std::size_t e = 0; e < cell.entries.size(); ++e) {
      const int jx = cell.entries[e] % n_ + lo_, jy = cell.entries[e] / n_ + lo_;
      const long double exact = kernel(cell.cx - jx, cell.cy - jy);
      if (std::abs(cell.c[e][0] - exact) > 1e-14L) throw std::logic_error("interpolation patch fit failed");
    }
    lookup_[idx] = static_cast<int>(cells_.size());
    cells_.push_back(std::move(cell));
  }
}

int InterpolationTable::key(long double fx, long double fy) const {
  int idx = 0, stride = 1;
  for (int k = 0; k < 4; ++k) {
    const long double l = normal_[k][0] * fx + normal_[k][1] * fy - offset_[k];
    const int f = static_cast<int>(std::floor(l)) - kmin_[k];
    if (f < 0 || f >= kcount_[k]) return -1;
    idx += f * stride;
    stride *= kcount_[k];
  }
  return lookup_[idx];
}

void InterpolationTable::weights(long double fx, long double fy, long double* w) const {
  std::fill(w, w + n_ * n_, 0.0L);
  const int c = key(fx, fy);
  if (c < 0) {
    for (int jy = 0; jy < n_; ++jy)
      for (int jx = 0; jx < n_; ++jx) w[jy * n_ + jx] = kernel(fx - (lo_ + jx), fy - (lo_ + jy));
    return;
  }
  const Cell& cell = cells_[c];
  long double m[6];
  monomials(fx - cell.cx, fy - cell.cy, m);
  for (std::size_t e = 0; e < cell.entries.size(); ++e) {
    const auto& q = cell.c[e];
    w[cell.entries[e]] = q[0] + q[1] * m[1] + q[2] * m[2] + q[3] * m[3] + q[4] * m[4] + q[5] * m[5];
  }
}

long double interpolate(const RunningSumStack& stack, double x, double y) {
  const auto& t = InterpolationTable::get(stack.basis);
  const SumPlane& g4 = stack.g[3];
  const double bx = std::floor(x), by = std::floor(y);
  const int ix = static_cast<int>(bx), iy = static_cast<int>(by);
  const int n = t.window(), lo = t.lo();
  if (!g4.rect.contains(ix + lo, iy + lo) || !g4.rect.contains(ix + lo + n - 1, iy + lo + n - 1))
    throw std::out_of_range("interpolation window leaves the running-sum domain");
  long double w[36];
  t.weights(static_cast<long double>(x) - ix, static_cast<long double>(y) - iy, w);
  long double acc = 0;
  for (int jy = 0; jy < n; ++jy) {
    const long double* row = g4.row(iy + lo + jy) + (ix + lo - g4.rect.x0);
    for (int jx = 0; jx < n; ++jx) acc += w[jy * n + jx] * row[jx];
  }
  return acc;
}

}  // namespace boxspline
