#pragma once

// Tessellation substrate: Delaunay adjacency, per-point Voronoi cell polygons
// clipped to the dilated window, a bucket grid for nearest-point queries, and
// region-clipped cell complexes for exact in-region connectivity.
//
// Cell polygons of interior, well-shaped vertices come from the circumcenter
// fan of their incident triangles; hull vertices and vertices incident to a
// near-degenerate triangle are built by half-plane clipping of the window,
// which is unconditionally stable.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "perclab/common.hpp"
#include "perclab/delaunay.hpp"
#include "perclab/polygon.hpp"
#include "perclab/region.hpp"
#include "perclab/sampling.hpp"

namespace perc {

class BucketGrid {
 public:
  BucketGrid() = default;
  BucketGrid(const std::vector<Vec2>& pts, Rect box) : box_(box) {
    const std::size_t n = pts.size();
    double target = std::sqrt(box.area() / static_cast<double>(std::max<std::size_t>(n, 1)));
    target = std::max(target, 1e-9);
    nx_ = std::max(1, static_cast<int>(box.width() / target));
    ny_ = std::max(1, static_cast<int>(box.height() / target));
    csx_ = box.width() / nx_;
    csy_ = box.height() / ny_;
    start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    items_.resize(n);
    for (const Vec2& p : pts) ++start_[bucket_of(p) + 1];
    for (std::size_t k = 1; k < start_.size(); ++k) start_[k] += start_[k - 1];
    std::vector<std::int32_t> cursor(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      items_[static_cast<std::size_t>(cursor[bucket_of(pts[i])]++)] =
          static_cast<std::int32_t>(i);
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return std::min(csx_, csy_); }
  int bx(double x) const {
    return std::clamp(static_cast<int>((x - box_.x0) / csx_), 0, nx_ - 1);
  }
  int by(double y) const {
    return std::clamp(static_cast<int>((y - box_.y0) / csy_), 0, ny_ - 1);
  }
  std::span<const std::int32_t> bucket(int x, int y) const {
    std::size_t b = static_cast<std::size_t>(y) * nx_ + x;
    return {items_.data() + start_[b], items_.data() + start_[b + 1]};
  }

 private:
  std::size_t bucket_of(Vec2 p) const {
    return static_cast<std::size_t>(by(p.y)) * nx_ + bx(p.x);
  }
  Rect box_;
  int nx_ = 1, ny_ = 1;
  double csx_ = 1, csy_ = 1;
  std::vector<std::int32_t> start_;
  std::vector<std::int32_t> items_;
};

class TessellationIndex {
 public:
  EnvPtr env;
  Rect window;  // dilated window: cells are clipped to it

  std::span<const std::int32_t> neighbors(int i) const {
    return {adj_.data() + adj_start_[i], adj_.data() + adj_start_[i + 1]};
  }
  // Dual-edge length class per neighbor slot: 0 = positive length,
  // 1 = degenerate (cocircular tie-break edge), 2 = unknown (sliver fan).
  std::span<const std::uint8_t> neighbor_flags(int i) const {
    return {adj_flag_.data() + adj_start_[i], adj_flag_.data() + adj_start_[i + 1]};
  }
  std::span<const Vec2> cell(int i) const {
    return {poly_pts_.data() + poly_start_[i], poly_pts_.data() + poly_start_[i + 1]};
  }
  double cell_radius(int i) const { return cell_radius_[static_cast<std::size_t>(i)]; }
  bool on_hull(int i) const { return hull_[static_cast<std::size_t>(i)] != 0; }
  int n() const { return env->size(); }
  const BucketGrid& grid() const { return grid_; }

  // Shared Voronoi edge of two Delaunay-adjacent cells, as a segment (may be
  // degenerate for symbolically resolved cocircular ties).
  bool shared_segment(int i, int j, Vec2& a, Vec2& b) const {
    const auto& pts = env->points();
    Vec2 m = 0.5 * (pts[i] + pts[j]);
    Vec2 d{-(pts[j].y - pts[i].y), pts[j].x - pts[i].x};
    double dn = norm(d);
    if (dn <= kSnapTol) return false;
    d = (1.0 / dn) * d;
    double L = window.diameter();
    Vec2 s0 = m - L * d, s1 = m + L * d;
    Poly pi(cell(i).begin(), cell(i).end());
    Poly pj(cell(j).begin(), cell(j).end());
    Interval ii = segment_in_convex(s0, s1, pi);
    Interval ij = segment_in_convex(s0, s1, pj);
    double t0 = std::max(ii.t0, ij.t0), t1 = std::min(ii.t1, ij.t1);
    if (ii.empty() || ij.empty() || t1 <= t0) return false;
    a = s0 + t0 * (s1 - s0);
    b = s0 + t1 * (s1 - s0);
    return true;
  }

  friend TessellationIndex build_index(EnvPtr env);

  void dump_cells(std::ostream& os) const {
    for (int i = 0; i < n(); ++i) {
      os << i;
      for (const Vec2& v : cell(i)) os << ' ' << v.x << ' ' << v.y;
      os << '\n';
    }
  }

 private:
  std::vector<std::int32_t> adj_start_, adj_;
  std::vector<std::uint8_t> adj_flag_;
  std::vector<std::int32_t> poly_start_;
  std::vector<Vec2> poly_pts_;
  std::vector<double> cell_radius_;
  std::vector<std::uint8_t> hull_;
  BucketGrid grid_;
};

namespace detail {

inline bool circumcenter(Vec2 a, Vec2 b, Vec2 c, Vec2& out) {
  Vec2 u = b - a, v = c - a;
  double d = 2.0 * cross(u, v);
  double scale = std::max(norm2(u), norm2(v));
  if (std::abs(d) <= 1e-10 * scale) return false;  // sliver; caller falls back
  double nu = norm2(u), nv = norm2(v);
  out = a + (1.0 / d) * Vec2{v.y * nu - u.y * nv, u.x * nv - v.x * nu};
  return true;
}

}  // namespace detail

inline TessellationIndex build_index(EnvPtr env) {
  if (env->size() < 1) throw std::invalid_argument("build_index: empty environment");
  TessellationIndex ix;
  ix.env = env;
  ix.window = env->window().dilated();
  const auto& pts = env->points();
  const int n = env->size();
  ix.hull_.assign(static_cast<std::size_t>(n), 0);
  ix.cell_radius_.assign(static_cast<std::size_t>(n), 0.0);
  ix.grid_ = BucketGrid(pts, ix.window);

  struct Edge {
    std::int32_t u, v;
    std::uint8_t flag;  // 0 positive, 1 degenerate dual, 2 unknown
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * 3 + 8);
  std::vector<Vec2> tri_cc;          // circumcenter per triangle id
  std::vector<std::uint8_t> tri_ok;  // circumcenter valid
  std::unique_ptr<Delaunay> dt;
  std::vector<std::uint8_t> needs_halfplane(static_cast<std::size_t>(n), n <= 2 ? 1 : 0);

  if (n == 1) {
    ix.hull_[0] = 1;
  } else if (n == 2) {
    edges.push_back({0, 1, 0});
    ix.hull_[0] = ix.hull_[1] = 1;
  } else {
    dt = std::make_unique<Delaunay>(pts);
    const auto& tris = dt->triangles();
    tri_cc.resize(tris.size());
    tri_ok.assign(tris.size(), 0);
    for (std::int32_t t = 0; t < static_cast<std::int32_t>(tris.size()); ++t) {
      if (!dt->alive(t)) continue;
      const auto& tr = tris[t];
      if (dt->is_ghost(t)) {
        for (int k = 0; k < 3; ++k)
          if (tr.v[k] != kGhost) ix.hull_[tr.v[k]] = 1;
        continue;
      }
      Vec2 cc;
      if (detail::circumcenter(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]], cc)) {
        tri_cc[t] = cc;
        tri_ok[t] = 1;
      } else {
        for (int k = 0; k < 3; ++k) needs_halfplane[tr.v[k]] = 1;
      }
    }
    // Collect each undirected edge once: keep directed (u,v) with u < v, or
    // any direction when the opposite side is a ghost.
    for (std::int32_t t = 0; t < static_cast<std::int32_t>(tris.size()); ++t) {
      if (!dt->alive(t) || dt->is_ghost(t)) continue;
      const auto& tr = tris[t];
      for (int k = 0; k < 3; ++k) {
        std::int32_t u = tr.v[(k + 1) % 3], v = tr.v[(k + 2) % 3];
        std::int32_t nb = tr.nb[k];
        if (u < v || dt->is_ghost(nb)) {
          std::uint8_t flag = 0;
          if (!dt->is_ghost(nb)) {
            if (tri_ok[t] && tri_ok[nb])
              flag = dist(tri_cc[t], tri_cc[nb]) <= 1e-9 ? 1 : 0;
            else
              flag = 2;
          }
          if (u > v) std::swap(u, v);
          edges.push_back({u, v, flag});
        }
      }
    }
    for (int i = 0; i < n; ++i)
      if (ix.hull_[i]) needs_halfplane[static_cast<std::size_t>(i)] = 1;
  }

  // Adjacency CSR.
  ix.adj_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    ++ix.adj_start_[static_cast<std::size_t>(e.u) + 1];
    ++ix.adj_start_[static_cast<std::size_t>(e.v) + 1];
  }
  for (int i = 0; i < n; ++i) ix.adj_start_[i + 1] += ix.adj_start_[i];
  ix.adj_.resize(edges.size() * 2);
  ix.adj_flag_.resize(edges.size() * 2);
  {
    std::vector<std::int32_t> cursor(ix.adj_start_.begin(), ix.adj_start_.end() - 1);
    for (const Edge& e : edges) {
      ix.adj_[static_cast<std::size_t>(cursor[e.u])] = e.v;
      ix.adj_flag_[static_cast<std::size_t>(cursor[e.u]++)] = e.flag;
      ix.adj_[static_cast<std::size_t>(cursor[e.v])] = e.u;
      ix.adj_flag_[static_cast<std::size_t>(cursor[e.v]++)] = e.flag;
    }
  }
  for (int i = 0; i < n; ++i) {
    // Insertion-sort each neighbor row (with its flag) by neighbor id.
    std::int32_t lo = ix.adj_start_[i], hi = ix.adj_start_[i + 1];
    for (std::int32_t k = lo + 1; k < hi; ++k) {
      std::int32_t val = ix.adj_[static_cast<std::size_t>(k)];
      std::uint8_t fl = ix.adj_flag_[static_cast<std::size_t>(k)];
      std::int32_t m = k - 1;
      while (m >= lo && ix.adj_[static_cast<std::size_t>(m)] > val) {
        ix.adj_[static_cast<std::size_t>(m + 1)] = ix.adj_[static_cast<std::size_t>(m)];
        ix.adj_flag_[static_cast<std::size_t>(m + 1)] = ix.adj_flag_[static_cast<std::size_t>(m)];
        --m;
      }
      ix.adj_[static_cast<std::size_t>(m + 1)] = val;
      ix.adj_flag_[static_cast<std::size_t>(m + 1)] = fl;
    }
  }

  // Cell polygons, written straight into the CSR arrays.
  ix.poly_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  ix.poly_pts_.clear();
  ix.poly_pts_.reserve(static_cast<std::size_t>(n) * 6);
  std::vector<Vec2> fan;
  const Poly window_poly = rect_poly(ix.window);
  Poly poly, tmp_out;
  for (int i = 0; i < n; ++i) {
    ix.poly_start_[i] = static_cast<std::int32_t>(ix.poly_pts_.size());
    bool halfplane = needs_halfplane[static_cast<std::size_t>(i)] != 0;
    poly.clear();
    if (!halfplane) {
      // Circumcenter fan, CCW around i.
      fan.clear();
      std::int32_t t0 = dt->vertex_triangle(i);
      std::int32_t t = t0;
      bool bad = false;
      int guard = 512;
      do {
        const auto& tr = dt->triangles()[t];
        if (!tri_ok[t]) {
          bad = true;
          break;
        }
        fan.push_back(tri_cc[t]);
        int s = tr.v[0] == i ? 0 : (tr.v[1] == i ? 1 : 2);
        t = tr.nb[(s + 1) % 3];
        if (--guard == 0) bad = true;
      } while (t != t0 && !bad);
      if (!bad && fan.size() >= 3) {
        // Deduplicate coincident circumcenters (cocircular ties).
        poly.clear();
        for (const Vec2& v : fan)
          if (poly.empty() || dist2(poly.back(), v) > kSnapTol * kSnapTol) poly.push_back(v);
        while (poly.size() > 1 && dist2(poly.front(), poly.back()) <= kSnapTol * kSnapTol)
          poly.pop_back();
        if (poly.size() < 3) halfplane = true;
        // Clip to window only when needed.
        if (!halfplane) {
          Rect bb = poly_bbox(poly);
          if (!ix.window.contains(bb)) {
            Poly cur = poly;
            for (int e = 0; e < 4; ++e) {
              Vec2 a = window_poly[e], b = window_poly[(e + 1) % 4];
              clip_halfplane(cur, a, {-(b.y - a.y), b.x - a.x}, tmp_out);
              cur.swap(tmp_out);
            }
            poly = cur;
            if (poly.size() < 3) halfplane = true;
          }
        }
      } else {
        halfplane = true;
      }
    }
    if (halfplane) {
      poly = window_poly;
      if (n >= 2) {
        for (std::int32_t j : ix.neighbors(i)) {
          Vec2 m = 0.5 * (pts[i] + pts[static_cast<std::size_t>(j)]);
          Vec2 nrm = pts[i] - pts[static_cast<std::size_t>(j)];
          clip_halfplane(poly, m, nrm, tmp_out);
          poly.swap(tmp_out);
          if (poly.empty()) break;
        }
      }
    }
    double r2 = 0.0;
    for (const Vec2& v : poly) r2 = std::max(r2, dist2(v, pts[i]));
    ix.cell_radius_[static_cast<std::size_t>(i)] = std::sqrt(r2);
    for (const Vec2& v : poly) ix.poly_pts_.push_back(v);
  }
  ix.poly_start_[n] = static_cast<std::int32_t>(ix.poly_pts_.size());
  return ix;
}

// Nearest point of the environment to `location` (ties broken by lowest
// index). Locations must lie inside the dilated window.
inline int nearest_point(const TessellationIndex& ix, Vec2 location) {
  const auto& pts = ix.env->points();
  const BucketGrid& g = ix.grid();
  int bx = g.bx(location.x), by = g.by(location.y);
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  const int maxr = std::max(g.nx(), g.ny());
  for (int r = 0; r <= maxr; ++r) {
    if (best_i >= 0) {
      double ring_min = (r - 1) * g.cell_size();
      if (ring_min > 0 && ring_min * ring_min > best) break;
    }
    int x0 = std::max(0, bx - r), x1 = std::min(g.nx() - 1, bx + r);
    int y0 = std::max(0, by - r), y1 = std::min(g.ny() - 1, by + r);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (r > 0 && x != x0 && x != x1 && y != y0 && y != y1) continue;  // ring only
        for (std::int32_t i : g.bucket(x, y)) {
          double d2 = dist2(pts[static_cast<std::size_t>(i)], location);
          if (d2 < best || (d2 == best && i < best_i)) {
            best = d2;
            best_i = i;
          }
        }
      }
    }
  }
  return best_i;
}

}  // namespace perc
