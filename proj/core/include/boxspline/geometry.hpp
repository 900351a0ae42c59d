#pragma once

// Convex polygon clipping against half-planes and shoelace areas.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace boxspline::geom {

template <typename T>
struct Point {
  T x, y;
};

template <typename T, int Capacity = 16>
struct ConvexPolygon {
  std::array<Point<T>, Capacity> v{};
  int n = 0;

  void push(Point<T> p) {
    if (n > 0) {
      const Point<T>& q = v[n - 1];
      if (std::abs(q.x - p.x) <= T(1e-12) && std::abs(q.y - p.y) <= T(1e-12)) return;
    }
    if (n < Capacity) v[n++] = p;
  }
};

/// Keeps the part of `in` with nx*x + ny*y <= d.
template <typename T, int C>
void clip_halfplane(const ConvexPolygon<T, C>& in, T nx, T ny, T d, ConvexPolygon<T, C>& out) {
  out.n = 0;
  if (in.n == 0) return;
  for (int i = 0; i < in.n; ++i) {
    const Point<T>& p = in.v[i];
    const Point<T>& q = in.v[(i + 1) % in.n];
    const T sp = nx * p.x + ny * p.y - d;
    const T sq = nx * q.x + ny * q.y - d;
    if (sp <= 0) out.push(p);
    if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
      const T t = sp / (sp - sq);
      out.push({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  if (out.n > 1) {
    const Point<T>& a = out.v[0];
    const Point<T>& b = out.v[out.n - 1];
    if (std::abs(a.x - b.x) <= T(1e-12) && std::abs(a.y - b.y) <= T(1e-12)) --out.n;
  }
}

template <typename T, int C>
T polygon_area(const ConvexPolygon<T, C>& p) {
  if (p.n < 3) return T(0);
  T s = 0;
  for (int i = 0; i < p.n; ++i) {
    const Point<T>& a = p.v[i];
    const Point<T>& b = p.v[(i + 1) % p.n];
    s += a.x * b.y - a.y * b.x;
  }
  return std::abs(s) / 2;
}

/// Rectangle centered at c with side a along unit u and side b along unit w.
template <typename T>
struct Rect {
  Point<T> c;
  Point<T> u;
  Point<T> w;
  T a, b;
};

template <typename T, int C = 16>
ConvexPolygon<T, C> to_polygon(const Rect<T>& r) {
  ConvexPolygon<T, C> p;
  const T ha = r.a / 2, hb = r.b / 2;
  const int sa[4] = {-1, 1, 1, -1};
  const int sb[4] = {-1, -1, 1, 1};
  for (int k = 0; k < 4; ++k) {
    p.v[k] = {r.c.x + sa[k] * ha * r.u.x + sb[k] * hb * r.w.x, r.c.y + sa[k] * ha * r.u.y + sb[k] * hb * r.w.y};
  }
  p.n = 4;
  return p;
}

/// Clips `poly` to the slab |(x - c).n| <= h.
template <typename T, int C>
void clip_slab(ConvexPolygon<T, C>& poly, Point<T> c, Point<T> n, T h) {
  ConvexPolygon<T, C> tmp;
  const T d = n.x * c.x + n.y * c.y;
  clip_halfplane(poly, n.x, n.y, d + h, tmp);
  clip_halfplane(tmp, -n.x, -n.y, -(d - h), poly);
}

template <typename T>
T rect_overlap_area(const Rect<T>& r1, const Rect<T>& r2) {
  ConvexPolygon<T> p = to_polygon<T>(r1);
  clip_slab(p, r2.c, r2.u, r2.a / 2);
  clip_slab(p, r2.c, r2.w, r2.b / 2);
  return polygon_area(p);
}

/// Length of the segment {c + s*d : |s| <= len/2} (d unit) inside rectangle r.
template <typename T>
T segment_in_rect_length(Point<T> c, Point<T> d, T len, const Rect<T>& r) {
  T lo = -len / 2, hi = len / 2;
  const Point<T> axes[2] = {r.u, r.w};
  const T half[2] = {r.a / 2, r.b / 2};
  for (int k = 0; k < 2; ++k) {
    // |(c + s d - r.c).n| <= h
    const T off = (c.x - r.c.x) * axes[k].x + (c.y - r.c.y) * axes[k].y;
    const T slope = d.x * axes[k].x + d.y * axes[k].y;
    if (std::abs(slope) < T(1e-300)) {
      if (std::abs(off) > half[k]) return T(0);
      continue;
    }
    T s1 = (-half[k] - off) / slope, s2 = (half[k] - off) / slope;
    if (s1 > s2) std::swap(s1, s2);
    lo = std::max(lo, s1);
    hi = std::min(hi, s2);
  }
  return hi > lo ? hi - lo : T(0);
}

}  // namespace boxspline::geom
