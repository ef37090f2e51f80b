#pragma once

// Planar query regions: unions of disjoint convex parts with labeled boundary
// segments. All the region shapes used by the estimators reduce to this form:
// rectangles, square annuli A(r,R) = B_R \ int(B_r) (optionally clipped to a
// half-plane, quarter-plane or angular wedge), convex/simple polygon quads,
// and unions of axis-aligned boxes (used to resample configurations outside
// an annulus).

#include <cstdint>
#include <functional>
#include <vector>

#include "perclab/polygon.hpp"
#include "perclab/random.hpp"

namespace perc {

enum BoundaryLabel : std::uint8_t {
  kLabelNone = 0,
  kLabelA = 1,       // side a of a quad (rect: left)
  kLabelB = 2,       // side b of a quad (rect: right)
  kLabelC = 4,       // rect: top
  kLabelD = 8,       // rect: bottom
  kLabelInner = 16,  // annulus inner boundary (∂B_r)
  kLabelOuter = 32,  // annulus outer boundary (∂B_R)
  kLabelOther = 64,
};

enum class SectorKind { full, upper_half, quarter, wedge };

struct Sector {
  SectorKind kind = SectorKind::full;
  double angle_from = 0.0;  // wedge only; span at most pi
  double angle_to = 0.0;
};

struct ConvexPart {
  Poly poly;  // CCW
  Rect bbox;
  double area = 0.0;

  bool contains(Vec2 p) const {
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      Vec2 a = poly[i], b = poly[(i + 1) % m];
      if (cross(b - a, p - a) < -kSnapTol) return false;
    }
    return true;
  }
  double distance(Vec2 p) const {
    if (contains(p)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i)
      d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % m]));
    return d;
  }
  // Distance from an interior point to the boundary (negative if outside).
  double inner_distance(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      Vec2 a = poly[i], b = poly[(i + 1) % m];
      double len = dist(a, b);
      if (len <= kSnapTol) continue;
      d = std::min(d, cross(b - a, p - a) / len);
    }
    return d;
  }
};

struct LabeledSegment {
  Vec2 a, b;
  std::uint8_t label = kLabelNone;
  int part = -1;  // part whose boundary carries this segment
};

struct PartInterface {
  int p = -1, q = -1;
  Vec2 a, b;
};

class Region {
 public:
  Region() = default;

  // `labeler` maps a boundary-edge midpoint to its label mask.
  Region(std::vector<Poly> parts, const std::function<std::uint8_t(Vec2)>& labeler) {
    for (auto& poly : parts) {
      if (poly.size() < 3) continue;
      double a = polygon_area(poly);
      if (a <= 1e-14) continue;
      ConvexPart part;
      part.poly = std::move(poly);
      part.bbox = poly_bbox(part.poly);
      part.area = a;
      parts_.push_back(std::move(part));
    }
    if (parts_.empty()) throw std::invalid_argument("Region: degenerate (zero area)");
    finalize(labeler);
  }

  const std::vector<ConvexPart>& parts() const { return parts_; }
  const std::vector<LabeledSegment>& boundary() const { return boundary_; }
  const std::vector<PartInterface>& interfaces() const { return interfaces_; }
  Rect bbox() const { return bbox_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }

  bool contains(Vec2 p) const {
    for (const auto& part : parts_)
      if (part.bbox.distance(p) <= kSnapTol && part.contains(p)) return true;
    return false;
  }
  int part_containing(Vec2 p) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (parts_[i].bbox.distance(p) <= kSnapTol && parts_[i].contains(p))
        return static_cast<int>(i);
    return -1;
  }
  double distance(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& part : parts_) d = std::min(d, part.distance(p));
    return d;
  }

  Vec2 sample_uniform(RandomStream& stream) const {
    double u = stream.next_unit() * area_;
    std::size_t k = 0;
    double acc = 0.0;
    for (; k + 1 < parts_.size(); ++k) {
      acc += parts_[k].area;
      if (u < acc) break;
    }
    const ConvexPart& part = parts_[k];
    for (;;) {
      Vec2 p{part.bbox.x0 + stream.next_unit() * part.bbox.width(),
             part.bbox.y0 + stream.next_unit() * part.bbox.height()};
      if (part.contains(p)) return p;
    }
  }

  // --- factories ---

  // Rectangle with sides labeled A=left, B=right, C=top, D=bottom.
  static Region rectangle(const Rect& r) {
    if (!r.valid()) throw std::invalid_argument("Region::rectangle: degenerate");
    auto labeler = [r](Vec2 m) -> std::uint8_t {
      if (std::abs(m.x - r.x0) <= kSnapTol) return kLabelA;
      if (std::abs(m.x - r.x1) <= kSnapTol) return kLabelB;
      if (std::abs(m.y - r.y1) <= kSnapTol) return kLabelC;
      if (std::abs(m.y - r.y0) <= kSnapTol) return kLabelD;
      return kLabelOther;
    };
    return Region({rect_poly(r)}, labeler);
  }

  // Union of disjoint axis-aligned boxes, boundary all labeled Other.
  static Region boxes(const std::vector<Rect>& rects) {
    std::vector<Poly> polys;
    for (const Rect& r : rects)
      if (r.valid()) polys.push_back(rect_poly(r));
    return Region(std::move(polys), [](Vec2) { return kLabelOther; });
  }

  // Square annulus A(r,R) around c, optionally clipped by a sector. The inner
  // boundary ∂B_r is labeled Inner, the outer ∂B_R Outer, sector cuts Other.
  // r == 0 gives the full box B_R (no Inner label).
  static Region annulus(Vec2 c, double r, double R, const Sector& sector = {}) {
    if (!(r >= 0.0 && r < R)) throw std::invalid_argument("Region::annulus: need 0 <= r < R");
    std::vector<Poly> polys;
    if (r == 0.0) {
      polys.push_back(rect_poly(Rect::centered(c, R, R)));
    } else {
      polys.push_back(rect_poly({c.x - R, c.x + R, c.y + r, c.y + R}));  // top
      polys.push_back(rect_poly({c.x - R, c.x + R, c.y - R, c.y - r}));  // bottom
      polys.push_back(rect_poly({c.x - R, c.x - r, c.y - r, c.y + r}));  // left
      polys.push_back(rect_poly({c.x + r, c.x + R, c.y - r, c.y + r}));  // right
    }
    // Sector half-planes.
    std::vector<std::pair<Vec2, Vec2>> cuts;  // (origin, inward normal)
    switch (sector.kind) {
      case SectorKind::full:
        break;
      case SectorKind::upper_half:
        cuts.push_back({c, {0, 1}});
        break;
      case SectorKind::quarter:
        cuts.push_back({c, {0, 1}});
        cuts.push_back({c, {1, 0}});
        break;
      case SectorKind::wedge: {
        double a0 = sector.angle_from, a1 = sector.angle_to;
        if (!(a1 > a0 && a1 - a0 <= 3.14159265358979324 + kSnapTol))
          throw std::invalid_argument("Region::annulus: wedge span must be in (0, pi]");
        Vec2 d0{std::cos(a0), std::sin(a0)}, d1{std::cos(a1), std::sin(a1)};
        cuts.push_back({c, {-d0.y, d0.x}});  // left of start ray
        cuts.push_back({c, {d1.y, -d1.x}});  // right of end ray
        break;
      }
    }
    for (const auto& [o, n] : cuts) {
      std::vector<Poly> clipped;
      for (const Poly& p : polys) {
        Poly q = clip_halfplane(p, o, n);
        if (q.size() >= 3 && polygon_area(q) > 1e-14) clipped.push_back(std::move(q));
      }
      polys.swap(clipped);
    }
    Rect inner = Rect::centered(c, r, r), outer = Rect::centered(c, R, R);
    auto labeler = [inner, outer, r](Vec2 m) -> std::uint8_t {
      if (r > 0.0 && std::abs(inner.boundary_distance(m)) <= 1e3 * kSnapTol &&
          inner.distance(m) <= 1e3 * kSnapTol)
        return kLabelInner;
      if (outer.contains(m) && outer.boundary_distance(m) <= 1e3 * kSnapTol)
        return kLabelOuter;
      return kLabelOther;
    };
    return Region(std::move(polys), labeler);
  }

  // Convex polygon quad: side_a/side_b are inputs-edge indices (edge k runs
  // from vertex k to k+1).
  static Region convex_quad(const Poly& poly, const std::vector<int>& side_a,
                            const std::vector<int>& side_b) {
    Poly p = poly;
    if (polygon_area(p) < 0) throw std::invalid_argument("Region::convex_quad: need CCW polygon");
    auto labeler = make_edge_labeler(p, side_a, side_b);
    return Region({p}, labeler);
  }

  // Simple polygon quad (CCW), ear-clipped into triangle parts.
  static Region simple_polygon(const Poly& poly, const std::vector<int>& side_a,
                               const std::vector<int>& side_b) {
    if (polygon_area(poly) <= 0)
      throw std::invalid_argument("Region::simple_polygon: need CCW polygon");
    std::vector<Poly> tris = ear_clip(poly);
    auto labeler = make_edge_labeler(poly, side_a, side_b);
    return Region(std::move(tris), labeler);
  }

 private:
  static std::function<std::uint8_t(Vec2)> make_edge_labeler(
      const Poly& poly, const std::vector<int>& side_a, const std::vector<int>& side_b) {
    return [poly, side_a, side_b](Vec2 m) -> std::uint8_t {
      const std::size_t n = poly.size();
      int best = -1;
      double bestd = 1e3 * kSnapTol;
      for (std::size_t k = 0; k < n; ++k) {
        double d = segment_distance(m, poly[k], poly[(k + 1) % n]);
        if (d < bestd) {
          bestd = d;
          best = static_cast<int>(k);
        }
      }
      if (best < 0) return kLabelOther;
      for (int k : side_a)
        if (k == best) return kLabelA;
      for (int k : side_b)
        if (k == best) return kLabelB;
      return kLabelOther;
    };
  }

  static std::vector<Poly> ear_clip(Poly poly) {
    std::vector<Poly> out;
    while (poly.size() > 3) {
      const std::size_t n = poly.size();
      bool clipped = false;
      for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
        if (cross(b - a, c - a) <= kSnapTol) continue;  // reflex or flat
        bool ear = true;
        for (std::size_t j = 0; j < n && ear; ++j) {
          if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
          Vec2 p = poly[j];
          if (cross(b - a, p - a) >= -kSnapTol && cross(c - b, p - b) >= -kSnapTol &&
              cross(a - c, p - c) >= -kSnapTol)
            ear = false;
        }
        if (!ear) continue;
        out.push_back({a, b, c});
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
      if (!clipped) throw std::invalid_argument("Region::simple_polygon: ear clipping failed");
    }
    out.push_back(poly);
    return out;
  }

  void finalize(const std::function<std::uint8_t(Vec2)>& labeler) {
    area_ = 0.0;
    bbox_ = parts_[0].bbox;
    for (const auto& part : parts_) {
      area_ += part.area;
      bbox_.x0 = std::min(bbox_.x0, part.bbox.x0);
      bbox_.x1 = std::max(bbox_.x1, part.bbox.x1);
      bbox_.y0 = std::min(bbox_.y0, part.bbox.y0);
      bbox_.y1 = std::max(bbox_.y1, part.bbox.y1);
    }
    diameter_ = 0.0;
    for (const auto& pa : parts_)
      for (const Vec2& u : pa.poly)
        for (const auto& pb : parts_)
          for (const Vec2& v : pb.poly) diameter_ = std::max(diameter_, dist(u, v));

    // Split every part edge into interface pieces (shared with another part)
    // and boundary pieces (labeled via the midpoint).
    for (std::size_t pi = 0; pi < parts_.size(); ++pi) {
      const Poly& poly = parts_[pi].poly;
      const std::size_t m = poly.size();
      for (std::size_t e = 0; e < m; ++e) {
        Vec2 a = poly[e], b = poly[(e + 1) % m];
        double len = dist(a, b);
        if (len <= kSnapTol) continue;
        std::vector<Interval> shared;
        for (std::size_t pj = 0; pj < parts_.size(); ++pj) {
          if (pj == pi) continue;
          const Poly& other = parts_[pj].poly;
          const std::size_t mo = other.size();
          for (std::size_t f = 0; f < mo; ++f) {
            Interval ov = collinear_overlap(a, b, other[f], other[(f + 1) % mo]);
            if (ov.length() * len > kSnapTol) {
              shared.push_back(ov);
              if (pj > pi)
                interfaces_.push_back({static_cast<int>(pi), static_cast<int>(pj),
                                       a + ov.t0 * (b - a), a + ov.t1 * (b - a)});
            }
          }
        }
        // Complement of the shared intervals: true region boundary.
        std::sort(shared.begin(), shared.end(),
                  [](const Interval& x, const Interval& y) { return x.t0 < y.t0; });
        double t = 0.0;
        auto emit = [&](double t0, double t1) {
          if ((t1 - t0) * len <= kSnapTol) return;
          Vec2 sa = a + t0 * (b - a), sb = a + t1 * (b - a);
          boundary_.push_back({sa, sb, labeler(0.5 * (sa + sb)), static_cast<int>(pi)});
        };
        for (const Interval& iv : shared) {
          if (iv.t0 > t) emit(t, iv.t0);
          t = std::max(t, iv.t1);
        }
        if (t < 1.0) emit(t, 1.0);
      }
    }
  }

  std::vector<ConvexPart> parts_;
  std::vector<LabeledSegment> boundary_;
  std::vector<PartInterface> interfaces_;
  Rect bbox_;
  double area_ = 0.0;
  double diameter_ = 0.0;
};

}  // namespace perc
