#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "perclab/random.hpp"

using namespace perc;

namespace {

// Upper chi-square quantile via the Wilson-Hilferty approximation; good to a
// few parts in 1e3 for the df used here, which is plenty for a smoke test.
double chi2_quantile(double df, double z) {
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

}  // namespace

TEST_CASE("derive_stream is deterministic and separates roles/indices", "[random]") {
  SeedSpec seed{42, "unit"};
  auto s1 = derive_stream(seed, 0, StreamRole::environment);
  auto s2 = derive_stream(seed, 0, StreamRole::environment);
  auto sc = derive_stream(seed, 0, StreamRole::color);
  auto s3 = derive_stream(seed, 1, StreamRole::color);

  bool same = true, role_diff = false, index_diff = false;
  auto sc2 = derive_stream(seed, 0, StreamRole::color);
  for (int i = 0; i < 1000; ++i) {
    auto a = s1.next_u64();
    if (a != s2.next_u64()) same = false;
    auto c = sc.next_u64();
    if (c != a) role_diff = true;
    if (s3.next_u64() != sc2.next_u64()) index_diff = true;
  }
  CHECK(same);
  CHECK(role_diff);
  CHECK(index_diff);
}

TEST_CASE("tag and master seed change the stream", "[random]") {
  auto a = derive_stream({7, "x"}, 0, StreamRole::environment);
  auto b = derive_stream({7, "y"}, 0, StreamRole::environment);
  auto c = derive_stream({8, "x"}, 0, StreamRole::environment);
  bool tag_diff = false, seed_diff = false;
  auto a2 = derive_stream({7, "x"}, 0, StreamRole::environment);
  auto a3 = derive_stream({7, "x"}, 0, StreamRole::environment);
  for (int i = 0; i < 100; ++i) {
    if (a.next_u64() != b.next_u64()) tag_diff = true;
    if (a2.next_u64() != c.next_u64()) seed_diff = true;
    (void)a3.next_u64();
  }
  CHECK(tag_diff);
  CHECK(seed_diff);
}

TEST_CASE("uniform draws pass a chi-square test at 1e-3", "[random]") {
  auto s = derive_stream({kDefaultMasterSeed, "chi2"}, 0, StreamRole::auxiliary);
  const int bins = 128;
  const int n = 1'000'000;
  std::vector<int> count(bins, 0);
  for (int i = 0; i < n; ++i) {
    double u = s.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++count[static_cast<int>(u * bins)];
  }
  double expect = static_cast<double>(n) / bins;
  double chi2 = 0;
  for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
  // z_{1-1e-3} = 3.0902
  CHECK(chi2 < chi2_quantile(bins - 1, 3.0902));
}

TEST_CASE("poisson sampling matches mean and variance", "[random]") {
  auto s = derive_stream({kDefaultMasterSeed, "poisson"}, 0, StreamRole::auxiliary);

  SECTION("small mean (inversion branch)") {
    const double mean = 4.0;
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      double k = static_cast<double>(s.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    double m = sum / n, v = sum2 / n - m * m;
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
    CHECK(std::abs(v - mean) < 0.05 * mean);
  }

  SECTION("large mean (rejection branch)") {
    const double mean = 400.0;
    const int n = 10000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      double k = static_cast<double>(s.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    double m = sum / n, v = sum2 / n - m * m;
    CHECK(std::abs(m - mean) < 3.0 * std::sqrt(mean / n));
    CHECK(std::abs(v - mean) < 0.05 * mean);
  }

  SECTION("zero and tiny means") {
    CHECK(s.poisson(0.0) == 0);
    int nonzero = 0;
    for (int i = 0; i < 1000; ++i) nonzero += s.poisson(1e-9) != 0 ? 1 : 0;
    CHECK(nonzero == 0);
  }
}
