#pragma once

// Small convex-polygon toolkit. Polygons are CCW vertex lists; clipping is
// Sutherland-Hodgman against half-planes with intersection points computed by
// linear interpolation and coordinates compared at kSnapTol.

#include <vector>

#include "perclab/common.hpp"

namespace perc {

using Poly = std::vector<Vec2>;

inline Rect poly_bbox(const Poly& p) {
  Rect r{p[0].x, p[0].x, p[0].y, p[0].y};
  for (const Vec2& v : p) {
    r.x0 = std::min(r.x0, v.x);
    r.x1 = std::max(r.x1, v.x);
    r.y0 = std::min(r.y0, v.y);
    r.y1 = std::max(r.y1, v.y);
  }
  return r;
}

// Keep the side where dot(p - o, n) >= 0.
inline void clip_halfplane(const Poly& in, Vec2 o, Vec2 n, Poly& out) {
  out.clear();
  const std::size_t m = in.size();
  if (m == 0) return;
  double sprev = dot(in[m - 1] - o, n);
  Vec2 prev = in[m - 1];
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 cur = in[i];
    double scur = dot(cur - o, n);
    if (scur >= 0.0) {
      if (sprev < 0.0) {
        double t = sprev / (sprev - scur);
        out.push_back(prev + t * (cur - prev));
      }
      out.push_back(cur);
    } else if (sprev >= 0.0) {
      double t = sprev / (sprev - scur);
      out.push_back(prev + t * (cur - prev));
    }
    prev = cur;
    sprev = scur;
  }
}

inline Poly clip_halfplane(const Poly& in, Vec2 o, Vec2 n) {
  Poly out;
  clip_halfplane(in, o, n, out);
  return out;
}

// subject ∩ clip for convex CCW clip polygon.
inline Poly clip_convex(const Poly& subject, const Poly& clip) {
  Poly cur = subject, next;
  const std::size_t m = clip.size();
  for (std::size_t i = 0; i < m && !cur.empty(); ++i) {
    Vec2 a = clip[i], b = clip[(i + 1) % m];
    Vec2 n{-(b.y - a.y), b.x - a.x};  // inward for CCW
    clip_halfplane(cur, a, n, next);
    cur.swap(next);
  }
  return cur;
}

inline Poly rect_poly(const Rect& r) {
  return {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
}

struct Interval {
  double t0 = 0.0, t1 = -1.0;
  bool empty() const { return t1 - t0 <= 0.0; }
  double length() const { return empty() ? 0.0 : t1 - t0; }
};

// Parameter interval of segment a + t(b-a), t in [0,1], inside the CCW
// convex polygon. Segments (nearly) parallel to an edge are treated as
// parallel, so a segment lying on the polygon boundary reports itself inside.
inline Interval segment_in_convex(Vec2 a, Vec2 b, const Poly& poly) {
  double t0 = 0.0, t1 = 1.0;
  const std::size_t m = poly.size();
  Vec2 d = b - a;
  double dn = norm(d);
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 u = poly[i], v = poly[(i + 1) % m];
    Vec2 n{-(v.y - u.y), v.x - u.x};
    double s = dot(a - u, n);
    double dv = dot(d, n);
    double nn = norm(n);
    if (std::abs(dv) <= 1e-9 * dn * nn) {
      if (s < -1e-9 * nn) return {};  // outside and parallel
      continue;
    }
    double t = -s / dv;
    if (dv > 0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return {};
  }
  return {t0, t1};
}

// Overlap of two nearly-collinear segments, as a parameter interval of the
// first segment. Returns empty if not collinear within kSnapTol (scaled).
inline Interval collinear_overlap(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2) {
  Vec2 d1 = b1 - a1;
  double len1 = norm(d1);
  if (len1 <= kSnapTol) return {};
  double tol = kSnapTol * std::max(1.0, len1) * 1e3;
  if (std::abs(cross(d1, a2 - a1)) > tol * len1) return {};
  if (std::abs(cross(d1, b2 - a1)) > tol * len1) return {};
  double t2a = dot(a2 - a1, d1) / (len1 * len1);
  double t2b = dot(b2 - a1, d1) / (len1 * len1);
  if (t2a > t2b) std::swap(t2a, t2b);
  double t0 = std::max(0.0, t2a), t1 = std::min(1.0, t2b);
  if (t1 - t0 <= 0.0) return {};
  return {t0, t1};
}

}  // namespace perc
