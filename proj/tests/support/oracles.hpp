#pragma once

// Independent brute-force oracles for the geometry tests. These deliberately
// avoid the incremental triangulation and the clipped-complex code paths: the
// triangulation oracle enumerates empty-circumdisk triples under the same
// documented perturbation rule, and the arrangement oracle rebuilds cells by
// clipping the window against the bisectors of *all* point pairs.

#include <map>
#include <set>
#include <vector>

#include "perclab/clipped.hpp"
#include "perclab/geometry.hpp"
#include "perclab/predicates.hpp"

namespace perc::testing {

inline std::set<std::pair<int, int>> brute_force_delaunay_edges(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::set<std::pair<int, int>> edges;
  if (n == 2) edges.insert({0, 1});
  if (n < 3) return edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        int a = i, b = j, c = k;
        if (orient2d_sos(pts[a], a, pts[b], b, pts[c], c) < 0) std::swap(b, c);
        bool empty = true;
        for (int m = 0; m < n && empty; ++m) {
          if (m == i || m == j || m == k) continue;
          if (incircle_sos(pts[a], a, pts[b], b, pts[c], c, pts[m], m) > 0) empty = false;
        }
        if (empty) {
          edges.insert({std::min(i, j), std::max(i, j)});
          edges.insert({std::min(i, k), std::max(i, k)});
          edges.insert({std::min(j, k), std::max(j, k)});
        }
      }
  return edges;
}

inline std::set<std::pair<int, int>> index_edges(const TessellationIndex& ix) {
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < ix.n(); ++i)
    for (std::int32_t j : ix.neighbors(i)) edges.insert({std::min(i, j), std::max<int>(i, j)});
  return edges;
}

// Brute-force Voronoi cell: window clipped by the bisector half-planes of all
// other points.
inline Poly brute_force_cell(const std::vector<Vec2>& pts, int i, const Rect& window) {
  Poly poly = rect_poly(window);
  for (int j = 0; j < static_cast<int>(pts.size()); ++j) {
    if (j == i || poly.empty()) continue;
    Vec2 m = 0.5 * (pts[i] + pts[j]);
    poly = clip_halfplane(poly, m, pts[i] - pts[j]);
  }
  return poly;
}

struct ArrangementComplex {
  // One entry per piece: owning cell and the convex polys composing it.
  std::vector<std::pair<int, std::vector<Poly>>> pieces;
  std::set<std::pair<int, int>> piece_adjacency;        // piece ids
  std::set<std::pair<int, int>> cell_adjacency;         // projected to cells
  double total_area = 0.0;
};

inline double shared_boundary_length(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  double len = 0.0;
  for (const Poly& pa : a)
    for (const Poly& pb : b)
      for (std::size_t e = 0; e < pa.size(); ++e)
        for (std::size_t f = 0; f < pb.size(); ++f) {
          Vec2 a0 = pa[e], a1 = pa[(e + 1) % pa.size()];
          Interval ov = collinear_overlap(a0, a1, pb[f], pb[(f + 1) % pb.size()]);
          len += ov.length() * dist(a0, a1);
        }
  return len;
}

inline ArrangementComplex arrangement_oracle(const std::vector<Vec2>& pts, const Rect& window,
                                             const Region& region) {
  ArrangementComplex out;
  const double tol = 1e-9;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    Poly cell = brute_force_cell(pts, i, window);
    if (cell.size() < 3) continue;
    // Sub-pieces per part, then merge into connected components by shared
    // positive-length boundary.
    std::vector<Poly> subs;
    for (const ConvexPart& part : region.parts()) {
      Poly q = clip_convex(cell, part.poly);
      if (q.size() >= 3 && polygon_area(q) > 1e-12) subs.push_back(std::move(q));
    }
    if (subs.empty()) continue;
    std::vector<int> comp(subs.size(), -1);
    int ncomp = 0;
    for (std::size_t s = 0; s < subs.size(); ++s) {
      if (comp[s] >= 0) continue;
      comp[s] = ncomp;
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < subs.size(); ++v) {
          if (comp[v] >= 0) continue;
          if (shared_boundary_length({subs[u]}, {subs[v]}) > tol) {
            comp[v] = ncomp;
            stack.push_back(v);
          }
        }
      }
      ++ncomp;
    }
    std::vector<std::vector<Poly>> groups(static_cast<std::size_t>(ncomp));
    for (std::size_t s = 0; s < subs.size(); ++s)
      groups[static_cast<std::size_t>(comp[s])].push_back(subs[s]);
    for (auto& g : groups) {
      for (const Poly& q : g) out.total_area += polygon_area(q);
      out.pieces.push_back({i, std::move(g)});
    }
  }
  for (std::size_t a = 0; a < out.pieces.size(); ++a)
    for (std::size_t b = a + 1; b < out.pieces.size(); ++b) {
      if (out.pieces[a].first == out.pieces[b].first) continue;
      if (shared_boundary_length(out.pieces[a].second, out.pieces[b].second) > tol) {
        out.piece_adjacency.insert({static_cast<int>(a), static_cast<int>(b)});
        out.cell_adjacency.insert({std::min(out.pieces[a].first, out.pieces[b].first),
                                   std::max(out.pieces[a].first, out.pieces[b].first)});
      }
    }
  return out;
}

}  // namespace perc::testing
