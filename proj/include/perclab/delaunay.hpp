#pragma once

// Incremental Bowyer-Watson Delaunay triangulation over the symbolically
// perturbed predicates of predicates.hpp. The perturbation makes the
// triangulation unique for any input of distinct points (including collinear
// and cocircular sets), independent of insertion order.
//
// Hull handling uses ghost triangles: each hull edge (u,v), read CCW along
// the hull, owns a ghost triangle (v,u,kGhost); a point lies in the ghost's
// "circumdisk" iff it is strictly left of v->u (i.e. outside the hull across
// that edge, under perturbation).
//
// Vertex coordinates are mirrored into a per-triangle array so the hot
// predicates read contiguous memory instead of three scattered point loads.

#include <array>
#include <cstdint>
#include <vector>

#include "perclab/common.hpp"
#include "perclab/predicates.hpp"

namespace perc {

inline constexpr std::int32_t kGhost = -1;

class Delaunay {
 public:
  // Points must be distinct. Indices into `pts` are the construction indices
  // used by the perturbation rule.
  explicit Delaunay(const std::vector<Vec2>& pts) : pts_(pts) { build(); }

  struct Tri {
    std::array<std::int32_t, 3> v;   // counterclockwise; kGhost marks a ghost
    std::array<std::int32_t, 3> nb;  // nb[i] across the edge opposite v[i]
  };

  const std::vector<Tri>& triangles() const { return tris_; }
  bool alive(std::int32_t t) const { return alive_[static_cast<std::size_t>(t)] != 0; }
  bool is_ghost(std::int32_t t) const {
    const auto& v = tris_[static_cast<std::size_t>(t)].v;
    return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost;
  }
  std::int32_t vertex_triangle(std::int32_t v) const {
    return vert_tri_[static_cast<std::size_t>(v)];
  }
  int n_points() const { return static_cast<int>(pts_.size()); }

 private:
  static constexpr int kNext[3] = {1, 2, 0};
  static constexpr int kPrev[3] = {2, 0, 1};

  const std::vector<Vec2>& pts_;
  std::vector<Tri> tris_;
  std::vector<std::array<Vec2, 3>> tpts_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::int32_t> vert_tri_;
  std::vector<std::int32_t> free_;
  std::vector<std::uint32_t> stamp_, tested_;
  std::vector<std::int32_t> queue_, fresh_;
  struct BEdge {
    std::int32_t a, b, outside;
    Vec2 pa, pb;
  };
  std::vector<BEdge> boundary_;
  std::uint32_t cur_stamp_ = 0;
  std::int32_t last_ = 0;

  bool in_circumdisk(std::int32_t t, Vec2 p, std::int32_t ip) const {
    const Tri& tr = tris_[static_cast<std::size_t>(t)];
    const auto& tp = tpts_[static_cast<std::size_t>(t)];
    int g = tr.v[0] == kGhost ? 0 : (tr.v[1] == kGhost ? 1 : (tr.v[2] == kGhost ? 2 : -1));
    if (g >= 0) {
      int i1 = kNext[g], i2 = kPrev[g];
      return orient2d_sos(tp[i1], tr.v[i1], tp[i2], tr.v[i2], p, ip) > 0;
    }
    return incircle_sos(tp[0], tr.v[0], tp[1], tr.v[1], tp[2], tr.v[2], p, ip) > 0;
  }

  std::int32_t alloc_tri() {
    if (!free_.empty()) {
      std::int32_t t = free_.back();
      free_.pop_back();
      alive_[static_cast<std::size_t>(t)] = 1;
      return t;
    }
    tris_.push_back({});
    tpts_.push_back({});
    alive_.push_back(1);
    stamp_.push_back(0);
    tested_.push_back(0);
    return static_cast<std::int32_t>(tris_.size()) - 1;
  }

  int ghost_slot(const Tri& t) const {
    if (t.v[0] == kGhost) return 0;
    if (t.v[1] == kGhost) return 1;
    if (t.v[2] == kGhost) return 2;
    return -1;
  }

  // Walk from last_ to a triangle whose circumdisk contains p.
  std::int32_t locate(Vec2 p, std::int32_t ip) {
    std::int32_t t = last_;
    if (!alive_[static_cast<std::size_t>(t)]) {
      for (std::int32_t i = 0; i < static_cast<std::int32_t>(tris_.size()); ++i)
        if (alive_[static_cast<std::size_t>(i)] && !is_ghost(i)) {
          t = i;
          break;
        }
    }
    if (is_ghost(t)) t = tris_[static_cast<std::size_t>(t)].nb[ghost_slot(tris_[static_cast<std::size_t>(t)])];
    std::size_t guard = 4 * tris_.size() + 16;
    int entry = -1;  // slot whose opposite edge we entered through
    while (guard--) {
      const Tri& tr = tris_[static_cast<std::size_t>(t)];
      if (ghost_slot(tr) >= 0) return t;  // reached the hull walking toward p
      const auto& tp = tpts_[static_cast<std::size_t>(t)];
      bool moved = false;
      for (int e = 0; e < 3; ++e) {
        if (e == entry) continue;
        int i1 = kNext[e], i2 = kPrev[e];
        if (orient2d_sos(tp[i1], tr.v[i1], tp[i2], tr.v[i2], p, ip) < 0) {
          std::int32_t next = tr.nb[e];
          const Tri& nt = tris_[static_cast<std::size_t>(next)];
          entry = nt.nb[0] == t ? 0 : (nt.nb[1] == t ? 1 : 2);
          t = next;
          moved = true;
          break;
        }
      }
      if (!moved) return t;  // p inside this triangle
    }
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(tris_.size()); ++i)
      if (alive_[static_cast<std::size_t>(i)] && in_circumdisk(i, p, ip)) return i;
    throw std::logic_error("Delaunay::locate failed");
  }

  void insert(std::int32_t ip) {
    Vec2 p = pts_[static_cast<std::size_t>(ip)];
    std::int32_t seed = locate(p, ip);
    // A finite triangle containing p has p strictly inside its circumdisk; a
    // ghost reached by the walk contains p in its half-plane by the exit test.

    // Cavity BFS collecting boundary edges as rejections happen. stamp_ marks
    // members, tested_ marks rejected neighbors so each triangle is tested at
    // most once per insertion.
    ++cur_stamp_;
    queue_.clear();
    boundary_.clear();
    queue_.push_back(seed);
    stamp_[static_cast<std::size_t>(seed)] = cur_stamp_;
    while (!queue_.empty()) {
      std::int32_t t = queue_.back();
      queue_.pop_back();
      const Tri tr = tris_[static_cast<std::size_t>(t)];
      const auto tp = tpts_[static_cast<std::size_t>(t)];
      for (int e = 0; e < 3; ++e) {
        std::int32_t nb = tr.nb[e];
        bool outside;
        if (stamp_[static_cast<std::size_t>(nb)] == cur_stamp_) continue;
        if (tested_[static_cast<std::size_t>(nb)] == cur_stamp_) {
          outside = true;
        } else if (in_circumdisk(nb, p, ip)) {
          stamp_[static_cast<std::size_t>(nb)] = cur_stamp_;
          queue_.push_back(nb);
          outside = false;
        } else {
          tested_[static_cast<std::size_t>(nb)] = cur_stamp_;
          outside = true;
        }
        if (outside)
          boundary_.push_back({tr.v[kNext[e]], tr.v[kPrev[e]], nb, tp[kNext[e]], tp[kPrev[e]]});
      }
      alive_[static_cast<std::size_t>(t)] = 0;
      free_.push_back(t);
    }

    // New triangles (a, b, p), linked around the cavity cycle.
    const std::size_t nb_count = boundary_.size();
    fresh_.clear();
    for (std::size_t k = 0; k < nb_count; ++k) fresh_.push_back(alloc_tri());
    for (std::size_t k = 0; k < nb_count; ++k) {
      const BEdge& be = boundary_[k];
      std::int32_t f = fresh_[k];
      Tri& nt = tris_[static_cast<std::size_t>(f)];
      nt.v = {be.a, be.b, ip};
      nt.nb = {-1, -1, be.outside};
      tpts_[static_cast<std::size_t>(f)] = {be.pa, be.pb, p};
      Tri& ot = tris_[static_cast<std::size_t>(be.outside)];
      for (int e = 0; e < 3; ++e)
        if (ot.v[kNext[e]] == be.b && ot.v[kPrev[e]] == be.a) ot.nb[e] = f;
      if (be.a != kGhost) vert_tri_[static_cast<std::size_t>(be.a)] = f;
      if (be.b != kGhost) vert_tri_[static_cast<std::size_t>(be.b)] = f;
    }
    // Link fresh triangles to each other: edge (b, p) of one matches edge
    // (p, a) of the one starting at b.
    for (std::size_t k = 0; k < nb_count; ++k) {
      for (std::size_t m = 0; m < nb_count; ++m) {
        if (boundary_[m].a == boundary_[k].b) {
          tris_[static_cast<std::size_t>(fresh_[k])].nb[0] = fresh_[m];
          tris_[static_cast<std::size_t>(fresh_[m])].nb[1] = fresh_[k];
        }
      }
    }
    for (std::int32_t f : fresh_)
      if (tris_[static_cast<std::size_t>(f)].nb[0] < 0 ||
          tris_[static_cast<std::size_t>(f)].nb[1] < 0)
        throw std::logic_error("Delaunay::insert: open cavity boundary");
    vert_tri_[static_cast<std::size_t>(ip)] = fresh_[0];
    last_ = fresh_[0];
  }

  // Spatially coherent insertion order: serpentine over a coarse grid.
  std::vector<std::int32_t> insertion_order() const {
    const int n = n_points();
    std::vector<std::int32_t> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    if (n < 16) return order;
    double x0 = pts_[0].x, x1 = x0, y0 = pts_[0].y, y1 = y0;
    for (const Vec2& p : pts_) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0)));
    double sx = (x1 - x0) / cells, sy = (y1 - y0) / cells;
    if (sx <= 0) sx = 1;
    if (sy <= 0) sy = 1;
    std::vector<std::int64_t> key(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      int gx = std::min(cells - 1, static_cast<int>((pts_[static_cast<std::size_t>(i)].x - x0) / sx));
      int gy = std::min(cells - 1, static_cast<int>((pts_[static_cast<std::size_t>(i)].y - y0) / sy));
      int col = (gy % 2 == 0) ? gx : (cells - 1 - gx);
      key[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(gy) * cells + col;
    }
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      auto ka = key[static_cast<std::size_t>(a)], kb = key[static_cast<std::size_t>(b)];
      return ka != kb ? ka < kb : a < b;
    });
    return order;
  }

  void build() {
    const int n = n_points();
    vert_tri_.assign(static_cast<std::size_t>(n), -1);
    if (n == 0) throw std::invalid_argument("Delaunay: empty point set");
    if (n <= 2) return;  // no triangles; the caller handles pairs directly
    std::vector<std::int32_t> order = insertion_order();

    tris_.reserve(static_cast<std::size_t>(n) * 2 + 8);
    tpts_.reserve(static_cast<std::size_t>(n) * 2 + 8);
    alive_.reserve(tris_.capacity());
    stamp_.reserve(tris_.capacity());
    tested_.reserve(tris_.capacity());

    // Initial triangle from the first three points in insertion order,
    // oriented CCW under perturbation.
    std::int32_t a = order[0], b = order[1], c = order[2];
    if (orient2d_sos(pts_[static_cast<std::size_t>(a)], a, pts_[static_cast<std::size_t>(b)], b,
                     pts_[static_cast<std::size_t>(c)], c) < 0)
      std::swap(b, c);
    std::int32_t t0 = alloc_tri();
    std::int32_t g0 = alloc_tri(), g1 = alloc_tri(), g2 = alloc_tri();
    Vec2 pa = pts_[static_cast<std::size_t>(a)], pb = pts_[static_cast<std::size_t>(b)],
         pc = pts_[static_cast<std::size_t>(c)];
    tris_[static_cast<std::size_t>(t0)] = {{a, b, c}, {g0, g1, g2}};
    tpts_[static_cast<std::size_t>(t0)] = {pa, pb, pc};
    tris_[static_cast<std::size_t>(g0)] = {{c, b, kGhost}, {g2, g1, t0}};
    tpts_[static_cast<std::size_t>(g0)] = {pc, pb, {}};
    tris_[static_cast<std::size_t>(g1)] = {{a, c, kGhost}, {g0, g2, t0}};
    tpts_[static_cast<std::size_t>(g1)] = {pa, pc, {}};
    tris_[static_cast<std::size_t>(g2)] = {{b, a, kGhost}, {g1, g0, t0}};
    tpts_[static_cast<std::size_t>(g2)] = {pb, pa, {}};
    vert_tri_[static_cast<std::size_t>(a)] = vert_tri_[static_cast<std::size_t>(b)] =
        vert_tri_[static_cast<std::size_t>(c)] = t0;
    last_ = t0;

    for (int k = 3; k < n; ++k) insert(order[static_cast<std::size_t>(k)]);
  }
};

}  // namespace perc
