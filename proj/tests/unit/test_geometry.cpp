#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "perclab/clipped.hpp"
#include "support/oracles.hpp"

using namespace perc;

namespace {

EnvPtr make_env(std::vector<Vec2> pts, Rect roi, double padding) {
  return std::make_shared<Environment>(std::move(pts), Window{roi, padding},
                                       Provenance::explicit_points);
}

std::vector<Vec2> random_points(int n, Rect box, std::uint64_t seed_index) {
  auto s = derive_stream({kDefaultMasterSeed, "geomtest"}, seed_index, StreamRole::auxiliary);
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    pts.push_back({box.x0 + s.next_unit() * box.width(), box.y0 + s.next_unit() * box.height()});
  return pts;
}

}  // namespace

TEST_CASE("predicate sign conventions", "[geometry]") {
  Vec2 a{0, 0}, b{2, 0}, c{0, 2};
  CHECK(orient2d_sign(a, b, c) > 0);
  CHECK(orient2d_sign(a, c, b) < 0);
  CHECK(orient2d_sign(a, b, {1, 0}) == 0);
  CHECK(incircle_sign(a, b, c, {1, 1}) > 0);    // inside circumcircle
  CHECK(incircle_sign(a, b, c, {5, 5}) < 0);    // outside
  CHECK(incircle_sign(a, b, c, {2, 2}) == 0);   // cocircular
  // Perturbed versions never return zero for distinct points.
  CHECK(orient2d_sos(a, 0, b, 1, {1, 0}, 2) != 0);
  CHECK(incircle_sos(a, 0, b, 1, c, 2, {2, 2}, 3) != 0);
}

TEST_CASE("single point and pair environments", "[geometry]") {
  auto env1 = make_env({{0, 0}}, {-1, 1, -1, 1}, 1.0);
  auto ix1 = build_index(env1);
  CHECK(ix1.neighbors(0).empty());
  REQUIRE(ix1.cell(0).size() == 4);
  CHECK(std::abs(polygon_area(Poly(ix1.cell(0).begin(), ix1.cell(0).end())) -
                 ix1.window.area()) < 1e-9);

  auto env2 = make_env({{-1, 0}, {1, 0}}, {-2, 2, -1, 1}, 1.0);
  auto ix2 = build_index(env2);
  REQUIRE(ix2.neighbors(0).size() == 1);
  CHECK(ix2.neighbors(0)[0] == 1);
  double total = 0;
  for (int i = 0; i < 2; ++i)
    total += polygon_area(Poly(ix2.cell(i).begin(), ix2.cell(i).end()));
  CHECK(std::abs(total - ix2.window.area()) < 1e-9 * ix2.window.area());
}

TEST_CASE("triangle environment has three edges", "[geometry]") {
  auto env = make_env({{0, 0}, {4, 0}, {1, 3}}, {-1, 5, -1, 4}, 2.0);
  auto ix = build_index(env);
  auto edges = perc::testing::index_edges(ix);
  CHECK(edges.size() == 3);
}

TEST_CASE("cocircular quadruple resolves to the documented diagonal", "[geometry]") {
  // Unit-square corners, indices 0..3 CCW from the origin: exactly 5 edges,
  // with the diagonal picked by the smallest-index perturbation rule.
  std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto env = make_env(pts, {-1, 2, -1, 2}, 1.0);
  auto ix = build_index(env);
  auto got = perc::testing::index_edges(ix);
  auto want = perc::testing::brute_force_delaunay_edges(pts);
  CHECK(got == want);
  CHECK(got.size() == 5);
  CHECK(got.count({0, 2}) == 1);
  CHECK(got.count({1, 3}) == 0);

  // The tie-break edge carries zero dual length; the side edges do not.
  int zero_flags = 0;
  for (int i = 0; i < 4; ++i) {
    auto fl = ix.neighbor_flags(i);
    for (std::uint8_t f : fl) zero_flags += f == 1 ? 1 : 0;
  }
  CHECK(zero_flags == 2);  // the (0,2) diagonal, seen from both endpoints
}

TEST_CASE("adjacency matches the brute-force oracle on random inputs", "[geometry]") {
  for (std::uint64_t rep = 0; rep < 6; ++rep) {
    int n = 10 + static_cast<int>(rep) * 25;
    Rect roi{0, 12, 0, 9};
    auto pts = random_points(n, roi, rep);
    auto env = make_env(pts, roi, 3.0);
    auto ix = build_index(env);
    auto got = perc::testing::index_edges(ix);
    auto want = perc::testing::brute_force_delaunay_edges(pts);
    REQUIRE(got == want);
  }
}

TEST_CASE("collinear environments triangulate to a path", "[geometry]") {
  std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
  auto env = make_env(pts, {-1, 5, -1, 1}, 1.0);
  auto ix = build_index(env);
  auto got = perc::testing::index_edges(ix);
  auto want = perc::testing::brute_force_delaunay_edges(pts);
  CHECK(got == want);
  // Consecutive points along the line must be adjacent.
  for (int i = 0; i + 1 < 5; ++i) CHECK(got.count({i, i + 1}) == 1);
}

TEST_CASE("cells tile the window and share positive-length edges", "[geometry]") {
  Rect roi{0, 20, 0, 20};
  auto pts = random_points(400, roi, 17);
  auto env = make_env(pts, roi, 4.0);
  auto ix = build_index(env);

  double total = 0;
  for (int i = 0; i < ix.n(); ++i)
    total += polygon_area(Poly(ix.cell(i).begin(), ix.cell(i).end()));
  CHECK(std::abs(total - ix.window.area()) < 1e-6 * ix.window.area());

  // Delaunay-adjacent cells share a segment (length > 1e-9) whenever the
  // shared edge meets the open window; non-adjacent nearby cells never do.
  int checked = 0;
  for (int i = 0; i < ix.n(); ++i) {
    for (std::int32_t j : ix.neighbors(i)) {
      if (j < i) continue;
      Vec2 a, b;
      if (ix.shared_segment(i, static_cast<int>(j), a, b)) {
        CHECK(dist(a, b) > 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked > 900);

  auto nbr_set = [&](int i) {
    std::set<int> s;
    for (auto j : ix.neighbors(i)) s.insert(static_cast<int>(j));
    return s;
  };
  int nonadj_checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto ns = nbr_set(i);
    for (int j = 0; j < ix.n(); ++j) {
      if (j == i || ns.count(j)) continue;
      if (dist(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]) > 4.0)
        continue;
      Vec2 a, b;
      bool shares = ix.shared_segment(i, j, a, b) && dist(a, b) > 1e-9;
      CHECK_FALSE(shares);
      ++nonadj_checked;
    }
  }
  CHECK(nonadj_checked > 100);
}

TEST_CASE("build_index is permutation invariant", "[geometry]") {
  Rect roi{0, 10, 0, 10};
  auto pts = random_points(120, roi, 23);
  auto env = build_index(make_env(pts, roi, 3.0));

  std::vector<int> perm(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) perm[i] = static_cast<int>(i);
  std::reverse(perm.begin(), perm.end());
  std::vector<Vec2> shuffled(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    shuffled[static_cast<std::size_t>(perm[i])] = pts[i];
  auto env2 = build_index(make_env(shuffled, roi, 3.0));

  for (std::size_t i = 0; i < pts.size(); ++i) {
    int i2 = perm[i];
    // isomorphic adjacency
    std::set<int> a, b;
    for (auto j : env.neighbors(static_cast<int>(i))) a.insert(perm[static_cast<std::size_t>(j)]);
    for (auto j : env2.neighbors(i2)) b.insert(static_cast<int>(j));
    REQUIRE(a == b);
    // identical cell polygon vertex sets (up to rotation)
    auto ca = env.cell(static_cast<int>(i));
    auto cb = env2.cell(i2);
    REQUIRE(ca.size() == cb.size());
    double worst = 1e9;
    for (std::size_t rot = 0; rot < cb.size(); ++rot) {
      double m = 0;
      for (std::size_t k = 0; k < ca.size(); ++k)
        m = std::max(m, dist(ca[k], cb[(k + rot) % cb.size()]));
      worst = std::min(worst, m);
    }
    REQUIRE(worst < 1e-9);
  }
}

TEST_CASE("nearest_point agrees with a linear scan and breaks ties low", "[geometry]") {
  Rect roi{0, 15, 0, 15};
  auto pts = random_points(300, roi, 31);
  auto env = make_env(pts, roi, 2.0);
  auto ix = build_index(env);
  auto s = derive_stream({kDefaultMasterSeed, "nearest"}, 0, StreamRole::auxiliary);
  Rect box = ix.window;
  for (int t = 0; t < 10000; ++t) {
    Vec2 q{box.x0 + s.next_unit() * box.width(), box.y0 + s.next_unit() * box.height()};
    int got = nearest_point(ix, q);
    int want = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ix.n(); ++i) {
      double d2 = dist2(pts[static_cast<std::size_t>(i)], q);
      if (d2 < best) {
        best = d2;
        want = i;
      }
    }
    REQUIRE(got == want);
  }
  // Exact equidistance: tie broken by the lower index.
  auto envt = make_env({{1, 1}, {5, 5}, {-1, -1}}, {-4, 6, -4, 6}, 1.0);
  auto ixt = build_index(envt);
  CHECK(nearest_point(ixt, {0, 0}) == 0);  // points 0 and 2 both at distance sqrt(2)
}

TEST_CASE("clip_to_region: region inside one cell", "[geometry]") {
  auto env = make_env({{5, 5}, {20, 20}}, {0, 24, 0, 24}, 2.0);
  auto ix = build_index(env);
  Region r = Region::rectangle({3, 6, 3, 6});
  auto cc = clip_to_region(ix, r, {true});
  REQUIRE(cc.piece_count() == 1);
  CHECK(cc.piece_cell(0) == 0);
  CHECK(cc.piece_neighbors(0).empty());
  CHECK(cc.piece_touch(0) == (kLabelA | kLabelB | kLabelC | kLabelD));
  CHECK(std::abs(cc.total_area() - r.area()) < 1e-9);
}

TEST_CASE("clip_to_region: bisector split rectangle", "[geometry]") {
  auto env = make_env({{-2, 0}, {2, 0}}, {-4, 4, -2, 2}, 2.0);
  auto ix = build_index(env);
  Region r = Region::rectangle({-3, 3, -1, 1});
  auto cc = clip_to_region(ix, r, {true});
  REQUIRE(cc.piece_count() == 2);
  CHECK(cc.adjacent(0, 1));
  CHECK(std::abs(cc.total_area() - r.area()) < 1e-9);
  // Left piece touches A (left side), right piece touches B.
  for (int pc = 0; pc < 2; ++pc) {
    if (cc.piece_cell(pc) == 0) CHECK((cc.piece_touch(pc) & kLabelA) != 0);
    if (cc.piece_cell(pc) == 1) CHECK((cc.piece_touch(pc) & kLabelB) != 0);
  }
}

TEST_CASE("clip_to_region matches the arrangement oracle on an annulus", "[geometry]") {
  Rect roi{-10, 10, -10, 10};
  auto pts = random_points(40, roi, 7);
  auto env = make_env(pts, roi, 3.0);
  auto ix = build_index(env);
  Region annulus = Region::annulus({0, 0}, 2, 8);
  auto cc = clip_to_region(ix, annulus, {true});
  auto oracle = perc::testing::arrangement_oracle(pts, ix.window, annulus);

  REQUIRE(cc.piece_count() == static_cast<int>(oracle.pieces.size()));
  std::map<int, int> impl_counts, oracle_counts;
  for (int pc = 0; pc < cc.piece_count(); ++pc) ++impl_counts[cc.piece_cell(pc)];
  for (auto& [cell, polys] : oracle.pieces) ++oracle_counts[cell];
  REQUIRE(impl_counts == oracle_counts);

  std::set<std::pair<int, int>> impl_cell_adj;
  for (int pc = 0; pc < cc.piece_count(); ++pc)
    for (std::int32_t q : cc.piece_neighbors(pc))
      impl_cell_adj.insert({std::min<int>(cc.piece_cell(pc), cc.piece_cell(q)),
                            std::max<int>(cc.piece_cell(pc), cc.piece_cell(q))});
  REQUIRE(impl_cell_adj == oracle.cell_adjacency);

  CHECK(std::abs(cc.total_area() - annulus.area()) < 1e-6 * annulus.area());
  CHECK(std::abs(oracle.total_area - annulus.area()) < 1e-6 * annulus.area());

  // Adjacency is symmetric and never reflexive.
  for (int pc = 0; pc < cc.piece_count(); ++pc)
    for (std::int32_t q : cc.piece_neighbors(pc)) {
      CHECK(q != pc);
      CHECK(cc.adjacent(static_cast<int>(q), pc));
    }
}

TEST_CASE("clip_to_region: cell straddling the annulus hole splits", "[geometry]") {
  // One point inside the hole owns a ring-shaped piece; the four outer points
  // carve it but keep it connected, so the big cell contributes one piece.
  std::vector<Vec2> pts{{0, 0}, {9, 0}, {-9, 0}, {0, 9}, {0, -9}};
  auto env = make_env(pts, {-12, 12, -12, 12}, 2.0);
  auto ix = build_index(env);
  Region annulus = Region::annulus({0, 0}, 1, 4);
  auto cc = clip_to_region(ix, annulus, {true});
  REQUIRE(cc.pieces_of_cell(0).size() == 1);
  int pc = cc.pieces_of_cell(0)[0];
  CHECK((cc.piece_touch(pc) & kLabelInner) != 0);
  CHECK(std::abs(cc.total_area() - annulus.area()) < 1e-6 * annulus.area());
}

TEST_CASE("window tiling holds across explicit degenerate inputs", "[geometry]") {
  // 5x5 integer grid: every interior vertex is a cocircular tie.
  std::vector<Vec2> pts;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
  auto env = make_env(pts, {-1, 5, -1, 5}, 1.0);
  auto ix = build_index(env);
  double total = 0;
  for (int i = 0; i < ix.n(); ++i)
    total += polygon_area(Poly(ix.cell(i).begin(), ix.cell(i).end()));
  CHECK(std::abs(total - ix.window.area()) < 1e-6 * ix.window.area());
  auto got = perc::testing::index_edges(ix);
  auto want = perc::testing::brute_force_delaunay_edges(pts);
  CHECK(got == want);
}
