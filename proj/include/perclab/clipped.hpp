#pragma once

// Region-clipped cell complex: the connected components of (cell ∩ region)
// for every cell meeting the region, with adjacency between pieces that share
// a boundary arc of positive length inside the region, and per-piece records
// of which labeled region boundary segments they touch.
//
// Pieces are assembled per region part (cell ∩ convex part is convex) and
// merged across part interfaces when the cell covers the interface with
// positive length. Cells whose circumscribed disk lies strictly inside one
// part skip all geometry: the whole cell is one piece with no contacts.

#include <cstdint>
#include <ostream>
#include <vector>

#include "perclab/geometry.hpp"

namespace perc {

struct ClipOptions {
  bool materialize = false;  // keep piece polygons and areas
};

class ClippedComplex {
 public:
  int piece_count() const { return static_cast<int>(piece_cell_.size()); }
  std::int32_t piece_cell(int pc) const { return piece_cell_[static_cast<std::size_t>(pc)]; }
  std::uint8_t piece_touch(int pc) const { return piece_touch_[static_cast<std::size_t>(pc)]; }
  std::span<const std::int32_t> piece_neighbors(int pc) const {
    return {adj_.data() + adj_start_[static_cast<std::size_t>(pc)],
            adj_.data() + adj_start_[static_cast<std::size_t>(pc) + 1]};
  }
  // Pieces owned by a cell (empty span for cells not meeting the region).
  std::span<const std::int32_t> pieces_of_cell(std::int32_t cell) const {
    auto it = std::lower_bound(cell_ids_.begin(), cell_ids_.end(), cell);
    if (it == cell_ids_.end() || *it != cell) return {};
    std::size_t k = static_cast<std::size_t>(it - cell_ids_.begin());
    return {cell_pieces_.data() + cell_piece_start_[k],
            cell_pieces_.data() + cell_piece_start_[k + 1]};
  }
  bool adjacent(int a, int b) const {
    for (std::int32_t x : piece_neighbors(a))
      if (x == b) return true;
    return false;
  }

  // Materialized only: the convex sub-polygons composing each piece.
  const std::vector<std::vector<Poly>>& piece_polygons() const { return piece_polys_; }
  double piece_area(int pc) const { return piece_area_[static_cast<std::size_t>(pc)]; }
  double total_area() const {
    double s = 0;
    for (double a : piece_area_) s += a;
    return s;
  }

  void dump(std::ostream& os) const {
    for (int pc = 0; pc < piece_count(); ++pc) {
      for (const Poly& poly : piece_polys_[static_cast<std::size_t>(pc)]) {
        os << pc << ' ' << piece_cell(pc);
        for (const Vec2& v : poly) os << ' ' << v.x << ' ' << v.y;
        os << '\n';
      }
    }
  }

  friend ClippedComplex clip_to_region(const TessellationIndex&, const Region&,
                                       const ClipOptions&);

 private:
  std::vector<std::int32_t> piece_cell_;
  std::vector<std::uint8_t> piece_touch_;
  std::vector<std::int32_t> adj_start_, adj_;
  std::vector<std::int32_t> cell_ids_, cell_piece_start_, cell_pieces_;
  std::vector<std::vector<Poly>> piece_polys_;
  std::vector<double> piece_area_;
};

inline ClippedComplex clip_to_region(const TessellationIndex& ix, const Region& region,
                                     const ClipOptions& opt = {}) {
  ClippedComplex cc;
  const auto& pts = ix.env->points();
  const int n = ix.n();
  const int nparts = static_cast<int>(region.parts().size());
  const Rect rbb = region.bbox();

  // Sub-piece bookkeeping: per candidate cell, one slot per part, plus a
  // whole-cell fast slot. Slot values are provisional piece ids unified below.
  struct CellEntry {
    std::int32_t cell;
    std::int32_t first_slot;  // nparts consecutive slots, -1 entries unused
    bool whole = false;
    std::int32_t whole_part = -1;
  };
  std::vector<CellEntry> entries;
  std::vector<std::int32_t> slot_of_cell(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> slots;  // per (entry, part): provisional sub-piece mark

  std::vector<Poly> sub_poly;  // parallel to slots when materializing
  std::vector<std::uint8_t> sub_touch;

  auto cell_poly = [&](std::int32_t i) {
    auto sp = ix.cell(i);
    return Poly(sp.begin(), sp.end());
  };

  // 1. Candidates and sub-pieces.
  for (std::int32_t i = 0; i < n; ++i) {
    double rad = ix.cell_radius(i);
    Vec2 p = pts[static_cast<std::size_t>(i)];
    if (rbb.distance(p) > rad) continue;
    if (region.distance(p) > rad) continue;

    int home = region.part_containing(p);
    bool whole = false;
    if (home >= 0 && region.parts()[static_cast<std::size_t>(home)].inner_distance(p) > rad)
      whole = true;

    CellEntry e;
    e.cell = i;
    e.first_slot = static_cast<std::int32_t>(slots.size());
    e.whole = whole;
    e.whole_part = whole ? home : -1;
    bool any = false;
    if (whole) {
      for (int k = 0; k < nparts; ++k) {
        slots.push_back(k == home ? 1 : -1);
        if (opt.materialize) sub_poly.push_back(k == home ? cell_poly(i) : Poly{});
        sub_touch.push_back(0);
      }
      any = true;
    } else {
      Poly cp = cell_poly(i);
      Rect cbb = poly_bbox(cp);
      for (int k = 0; k < nparts; ++k) {
        const ConvexPart& part = region.parts()[static_cast<std::size_t>(k)];
        std::int32_t mark = -1;
        Poly piece;
        if (part.bbox.intersects(cbb)) {
          piece = clip_convex(cp, part.poly);
          if (piece.size() >= 3 && polygon_area(piece) > 1e-14) mark = 1;
        }
        slots.push_back(mark);
        if (opt.materialize) sub_poly.push_back(mark >= 0 ? std::move(piece) : Poly{});
        sub_touch.push_back(0);
        any = any || mark >= 0;
      }
      if (any) {
        // Boundary contacts, attributed to the sub-piece of the segment's part.
        for (const LabeledSegment& ls : region.boundary()) {
          if (slots[static_cast<std::size_t>(e.first_slot) + ls.part] < 0) continue;
          if (segment_distance(p, ls.a, ls.b) > rad) continue;
          Interval iv = segment_in_convex(ls.a, ls.b, cp);
          if (iv.length() * dist(ls.a, ls.b) > kSnapTol)
            sub_touch[static_cast<std::size_t>(e.first_slot) + ls.part] |= ls.label;
        }
      }
    }
    if (!any) {
      slots.resize(static_cast<std::size_t>(e.first_slot));
      if (opt.materialize) sub_poly.resize(static_cast<std::size_t>(e.first_slot));
      sub_touch.resize(static_cast<std::size_t>(e.first_slot));
      continue;
    }
    slot_of_cell[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(entries.size());
    entries.push_back(e);
  }

  // 2. Merge sub-pieces of one cell across part interfaces (union-find over
  // slot indices).
  std::vector<std::int32_t> uf(slots.size());
  for (std::size_t s = 0; s < uf.size(); ++s) uf[s] = static_cast<std::int32_t>(s);
  auto find = [&](std::int32_t x) {
    while (uf[static_cast<std::size_t>(x)] != x) {
      uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
      x = uf[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) uf[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  if (nparts > 1) {
    for (const CellEntry& e : entries) {
      if (e.whole) continue;
      Poly cp = cell_poly(e.cell);
      Vec2 p = pts[static_cast<std::size_t>(e.cell)];
      double rad = ix.cell_radius(e.cell);
      for (const PartInterface& itf : region.interfaces()) {
        std::int32_t sp_ = e.first_slot + itf.p, sq_ = e.first_slot + itf.q;
        if (slots[static_cast<std::size_t>(sp_)] < 0 || slots[static_cast<std::size_t>(sq_)] < 0)
          continue;
        if (segment_distance(p, itf.a, itf.b) > rad) continue;
        Interval iv = segment_in_convex(itf.a, itf.b, cp);
        if (iv.length() * dist(itf.a, itf.b) > kSnapTol) unite(sp_, sq_);
      }
    }
  }

  // 3. Piece ids.
  std::vector<std::int32_t> piece_of_slot(slots.size(), -1);
  for (const CellEntry& e : entries) {
    for (int k = 0; k < nparts; ++k) {
      std::size_t s = static_cast<std::size_t>(e.first_slot) + k;
      if (slots[s] < 0) continue;
      std::int32_t root = find(static_cast<std::int32_t>(s));
      if (piece_of_slot[static_cast<std::size_t>(root)] < 0) {
        piece_of_slot[static_cast<std::size_t>(root)] =
            static_cast<std::int32_t>(cc.piece_cell_.size());
        cc.piece_cell_.push_back(e.cell);
        cc.piece_touch_.push_back(0);
        if (opt.materialize) {
          cc.piece_polys_.emplace_back();
          cc.piece_area_.push_back(0.0);
        }
      }
      std::int32_t pid = piece_of_slot[static_cast<std::size_t>(root)];
      piece_of_slot[s] = pid;
      cc.piece_touch_[static_cast<std::size_t>(pid)] |= sub_touch[s];
      if (opt.materialize && !sub_poly[s].empty()) {
        cc.piece_area_[static_cast<std::size_t>(pid)] += polygon_area(sub_poly[s]);
        cc.piece_polys_[static_cast<std::size_t>(pid)].push_back(std::move(sub_poly[s]));
      }
    }
  }

  // Cell -> pieces map (cells are already in increasing order).
  for (const CellEntry& e : entries) {
    cc.cell_ids_.push_back(e.cell);
    cc.cell_piece_start_.push_back(static_cast<std::int32_t>(cc.cell_pieces_.size()));
    std::int32_t prev = -1;
    for (int k = 0; k < nparts; ++k) {
      std::size_t s = static_cast<std::size_t>(e.first_slot) + k;
      if (slots[s] < 0) continue;
      std::int32_t pid = piece_of_slot[s];
      if (pid != prev) {
        bool dup = false;
        for (std::int32_t q = cc.cell_piece_start_.back();
             q < static_cast<std::int32_t>(cc.cell_pieces_.size()); ++q)
          if (cc.cell_pieces_[static_cast<std::size_t>(q)] == pid) dup = true;
        if (!dup) cc.cell_pieces_.push_back(pid);
        prev = pid;
      }
    }
  }
  cc.cell_piece_start_.push_back(static_cast<std::int32_t>(cc.cell_pieces_.size()));

  // 4. Adjacency across Delaunay edges.
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (const CellEntry& e : entries) {
    std::int32_t i = e.cell;
    auto nbrs = ix.neighbors(i);
    auto flags = ix.neighbor_flags(i);
    for (std::size_t t = 0; t < nbrs.size(); ++t) {
      std::int32_t j = nbrs[t];
      if (j < i) continue;
      std::int32_t ej_idx = slot_of_cell[static_cast<std::size_t>(j)];
      if (ej_idx < 0) continue;
      const CellEntry& ej = entries[static_cast<std::size_t>(ej_idx)];
      const CellEntry& ei = *&e;
      if (flags[t] == 1) continue;  // cocircular tie: single-point contact
      if (ei.whole && ej.whole && flags[t] == 0) {
        // Shared Voronoi edge lies inside both disks, hence inside the part.
        std::int32_t a = piece_of_slot[static_cast<std::size_t>(ei.first_slot) + ei.whole_part];
        std::int32_t b = piece_of_slot[static_cast<std::size_t>(ej.first_slot) + ej.whole_part];
        pairs.push_back({std::min(a, b), std::max(a, b)});
        continue;
      }
      Vec2 sa, sb;
      if (!ix.shared_segment(i, j, sa, sb)) continue;
      double slen = dist(sa, sb);
      if (slen <= kSnapTol) continue;
      for (int k = 0; k < nparts; ++k) {
        std::size_t si = static_cast<std::size_t>(ei.first_slot) + k;
        std::size_t sj = static_cast<std::size_t>(ej.first_slot) + k;
        if (slots[si] < 0 || slots[sj] < 0) continue;
        Interval iv = segment_in_convex(sa, sb, region.parts()[static_cast<std::size_t>(k)].poly);
        if (iv.length() * slen <= kSnapTol) continue;
        std::int32_t a = piece_of_slot[si], b = piece_of_slot[sj];
        pairs.push_back({std::min(a, b), std::max(a, b)});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  const std::size_t np = cc.piece_cell_.size();
  cc.adj_start_.assign(np + 1, 0);
  for (auto [a, b] : pairs) {
    ++cc.adj_start_[static_cast<std::size_t>(a) + 1];
    ++cc.adj_start_[static_cast<std::size_t>(b) + 1];
  }
  for (std::size_t k = 1; k <= np; ++k) cc.adj_start_[k] += cc.adj_start_[k - 1];
  cc.adj_.resize(pairs.size() * 2);
  std::vector<std::int32_t> cursor(cc.adj_start_.begin(), cc.adj_start_.end() - 1);
  for (auto [a, b] : pairs) {
    cc.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(a)]++)] = b;
    cc.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(b)]++)] = a;
  }
  return cc;
}

}  // namespace perc
