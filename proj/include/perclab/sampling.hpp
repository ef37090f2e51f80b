#pragma once

// Sampling of the point environment (intensity-1 Poisson in a padded window)
// and of independent p-colorings, with region-restricted resampling.
//
// Colorings are stored as uniform marks: point i is black iff mark[i] < p.
// Coupling colors across p through shared marks makes monotonicity in p exact
// per sample and lets Russo finite differences use common random numbers.
// Forced colors use sentinel marks (-1 black, 2 white).

#include <cstdint>
#include <cstring>
#include <istream>
#include <memory>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "perclab/common.hpp"
#include "perclab/random.hpp"
#include "perclab/region.hpp"

namespace perc {

inline constexpr double kMarkBlack = -1.0;
inline constexpr double kMarkWhite = 2.0;

struct Window {
  Rect roi;
  double padding = 0.0;

  Rect dilated() const { return roi.dilated(padding); }

  static double default_padding(double roi_diameter) {
    return std::max(6.0, 3.0 * std::log10(std::max(roi_diameter, 1.0)));
  }

  // Window whose geometric queries are valid on `roi`.
  static Window around(const Rect& roi) {
    return {roi, default_padding(roi.diameter())};
  }

  // Upper bound on the probability that some Voronoi cell meeting the ROI has
  // its nucleus outside the dilated window: cover the ROI by squares of side
  // padding/sqrt(2); a far nucleus forces one of them empty of points.
  double truncation_bound() const {
    double s2 = padding * padding / 2.0;
    double n = std::ceil(roi.area() / s2) + std::ceil(2.0 * (roi.width() + roi.height()) /
                                                      (padding / 1.4142135623730951));
    return std::min(1.0, n * std::exp(-s2));
  }
};

enum class Provenance { sampled, explicit_points };

class Environment {
 public:
  Environment(std::vector<Vec2> points, Window window,
              Provenance provenance = Provenance::explicit_points)
      : points_(std::move(points)), window_(window), provenance_(provenance) {
    const Rect box = window_.dilated();
    if (!box.valid()) throw std::invalid_argument("Environment: window has no area");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(points_.size() * 2);
    for (const Vec2& p : points_) {
      if (!box.contains(p))
        throw std::invalid_argument("Environment: point outside dilated window");
      std::uint64_t hx, hy;
      static_assert(sizeof(double) == 8);
      std::memcpy(&hx, &p.x, 8);
      std::memcpy(&hy, &p.y, 8);
      if (!seen.insert(hx * 0x9E3779B97F4A7C15ull ^ hy).second) {
        // Hash collision or true duplicate; confirm before rejecting.
        int dup = 0;
        for (const Vec2& q : points_)
          if (q == p) ++dup;
        if (dup > 1) throw std::invalid_argument("Environment: duplicate point");
      }
    }
  }

  const std::vector<Vec2>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  const Window& window() const { return window_; }
  Provenance provenance() const { return provenance_; }

 private:
  std::vector<Vec2> points_;
  Window window_;
  Provenance provenance_;
};

using EnvPtr = std::shared_ptr<const Environment>;

struct Configuration {
  EnvPtr env;
  std::vector<double> marks;  // one per point
  double p = 0.5;

  bool black(int i) const { return marks[static_cast<std::size_t>(i)] < p; }
  int color(int i) const { return black(i) ? +1 : -1; }
  int size() const { return env->size(); }
};

inline EnvPtr sample_environment(const Window& window, RandomStream& stream) {
  const Rect box = window.dilated();
  if (!(box.area() > 0.0))
    throw std::invalid_argument("sample_environment: window has non-positive area");
  std::uint64_t n = stream.poisson(box.area());
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    double x = box.x0 + stream.next_unit() * box.width();
    double y = box.y0 + stream.next_unit() * box.height();
    pts.push_back({x, y});
  }
  return std::make_shared<Environment>(std::move(pts), window, Provenance::sampled);
}

inline Configuration sample_coloring(EnvPtr env, double p, RandomStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_coloring: p outside [0,1]");
  Configuration cfg;
  cfg.env = std::move(env);
  cfg.p = p;
  cfg.marks.resize(static_cast<std::size_t>(cfg.env->size()));
  for (double& m : cfg.marks) m = stream.next_unit();
  return cfg;
}

// Redraw colors of the points inside `region`; environment untouched.
inline Configuration resample_colors_in(const Configuration& config, const Region& region,
                                        RandomStream& stream) {
  Configuration out = config;
  const auto& pts = config.env->points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (region.bbox().contains(pts[i]) && region.contains(pts[i]))
      out.marks[i] = stream.next_unit();
  return out;
}

// Redraw the colored point process inside `region`: points outside keep their
// identity and color; inside, a fresh Poisson(area) draw with fresh marks.
inline Configuration resample_points_in(const Configuration& config, const Region& region,
                                        RandomStream& stream) {
  std::vector<Vec2> pts;
  std::vector<double> marks;
  const auto& old = config.env->points();
  pts.reserve(old.size());
  marks.reserve(old.size());
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (region.bbox().contains(old[i]) && region.contains(old[i])) continue;
    pts.push_back(old[i]);
    marks.push_back(config.marks[i]);
  }
  std::uint64_t n = stream.poisson(region.area());
  for (std::uint64_t i = 0; i < n; ++i) {
    pts.push_back(region.sample_uniform(stream));
    marks.push_back(stream.next_unit());
  }
  Configuration out;
  out.env = std::make_shared<Environment>(std::move(pts), config.env->window(),
                                          config.env->provenance());
  out.marks = std::move(marks);
  out.p = config.p;
  return out;
}

// Replace the points inside `region` by a monochromatic square grid of the
// given spacing, anchored at the region's bounding-box lower-left corner and
// inclusive of boundary points inside the region.
inline Configuration fill_region(const Configuration& config, const Region& region, bool black,
                                 double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("fill_region: spacing must be positive");
  if (spacing > region.diameter())
    throw std::invalid_argument("fill_region: spacing exceeds region diameter");
  std::vector<Vec2> pts;
  std::vector<double> marks;
  const auto& old = config.env->points();
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (region.bbox().contains(old[i]) && region.contains(old[i])) continue;
    pts.push_back(old[i]);
    marks.push_back(config.marks[i]);
  }
  const Rect bb = region.bbox();
  const double mark = black ? kMarkBlack : kMarkWhite;
  const Rect window_box = config.env->window().dilated();
  for (double y = bb.y0; y <= bb.y1 + kSnapTol; y += spacing)
    for (double x = bb.x0; x <= bb.x1 + kSnapTol; x += spacing) {
      Vec2 g{x, y};
      if (!region.contains(g) || !window_box.contains(g)) continue;
      pts.push_back(g);
      marks.push_back(mark);
    }
  Configuration out;
  out.env = std::make_shared<Environment>(std::move(pts), config.env->window(),
                                          config.env->provenance());
  out.marks = std::move(marks);
  out.p = config.p;
  return out;
}

// Plain-text environments: one "x y [color]" triple per line, '#' comments,
// colors as B/W or +1/-1. Returns the environment and forced marks for any
// colored points (uncolored points get mark 0.5).
struct LoadedEnvironment {
  EnvPtr env;
  std::vector<double> marks;
  bool any_colors = false;
};

inline LoadedEnvironment load_environment(std::istream& in, const Window& window) {
  std::vector<Vec2> pts;
  std::vector<double> marks;
  bool any_colors = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) continue;  // blank
    if (!(ls >> y))
      throw std::invalid_argument("load_environment: line " + std::to_string(lineno) +
                                  ": expected 'x y [color]'");
    std::string color;
    double mark = 0.5;
    if (ls >> color) {
      if (color == "B" || color == "b" || color == "+1") {
        mark = kMarkBlack;
      } else if (color == "W" || color == "w" || color == "-1") {
        mark = kMarkWhite;
      } else {
        throw std::invalid_argument("load_environment: line " + std::to_string(lineno) +
                                    ": bad color '" + color + "'");
      }
      any_colors = true;
    }
    pts.push_back({x, y});
    marks.push_back(mark);
  }
  LoadedEnvironment out;
  out.env = std::make_shared<Environment>(std::move(pts), window, Provenance::explicit_points);
  out.marks = std::move(marks);
  out.any_colors = any_colors;
  return out;
}

// Deterministic explicit configuration for tests: colors +1/-1 per point.
inline Configuration explicit_configuration(std::vector<Vec2> points, const Window& window,
                                            const std::vector<int>& colors, double p = 0.5) {
  Configuration cfg;
  cfg.env = std::make_shared<Environment>(std::move(points), window, Provenance::explicit_points);
  cfg.p = p;
  cfg.marks.reserve(colors.size());
  for (int c : colors) cfg.marks.push_back(c > 0 ? kMarkBlack : kMarkWhite);
  if (cfg.env->size() != static_cast<int>(cfg.marks.size()))
    throw std::invalid_argument("explicit_configuration: colors length mismatch");
  return cfg;
}

}  // namespace perc
