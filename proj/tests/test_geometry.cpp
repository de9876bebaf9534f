#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "disten/errors.hpp"
#include "disten/geometry.hpp"

using namespace disten;
using namespace disten::geometry;

namespace {

DistanceHistogram hist_of(std::vector<i64> coords, int dim, int workers = 1) {
  return distance_histogram(make_point_set(dim, std::move(coords)), workers);
}

}  // namespace

TEST_CASE("two points at distance 5") {
  const DistanceHistogram h = hist_of({0, 0, 3, 4}, 2);
  CHECK(h.n_points == 2);
  REQUIRE(h.counts.size() == 1);
  CHECK(h.counts.at(25) == 2);  // both ordered pairs
  CHECK(h.total_pairs() == 2);
  CHECK(energy(h, 2) == 4);
  CHECK(holder_lower_bound(h, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2x2 grid histogram and energies") {
  const DistanceHistogram h = distance_histogram(make_square_grid(2, 2));
  REQUIRE(h.counts.size() == 2);
  CHECK(h.counts.at(1) == 8);
  CHECK(h.counts.at(2) == 4);
  CHECK(h.total_pairs() == 12);
  CHECK(energy(h, 1) == 12);
  CHECK(energy(h, 2) == 80);
  CHECK(energy(h, 3) == 576);  // 8^3 + 4^3
  CHECK(energy(h, 0) == 2);
  CHECK(holder_lower_bound(h, 2) == doctest::Approx(144.0 / 80.0).epsilon(1e-12));
}

TEST_CASE("five collinear points") {
  const DistanceHistogram h = distance_histogram(make_square_grid(1, 5));
  const std::map<i64, u64> expect{{1, 8}, {4, 6}, {9, 4}, {16, 2}};
  CHECK(std::map<i64, u64>(h.counts.begin(), h.counts.end()) == expect);
  CHECK(h.total_pairs() == 20);
}

TEST_CASE("make_square_grid uses 1-based coordinates") {
  const PointSet g = make_square_grid(2, 3);
  REQUIRE(g.size() == 9);
  std::set<std::pair<i64, i64>> pts;
  for (i64 i = 0; i < g.size(); ++i) {
    CHECK(g.coord(i, 0) >= 1);
    CHECK(g.coord(i, 0) <= 3);
    CHECK(g.coord(i, 1) >= 1);
    CHECK(g.coord(i, 1) <= 3);
    pts.insert({g.coord(i, 0), g.coord(i, 1)});
  }
  CHECK(pts.size() == 9);
}

TEST_CASE("grid difference histogram equals the brute-force scan") {
  for (i64 side : {1, 2, 3, 5, 8, 12}) {
    const auto fast = grid_difference_histogram(1, side);
    const auto slow = distance_histogram(make_square_grid(1, side));
    CHECK(fast.n_points == slow.n_points);
    CHECK(fast.counts == slow.counts);
  }
  for (i64 side : {1, 2, 3, 5, 8}) {
    const auto fast = grid_difference_histogram(2, side);
    const auto slow = distance_histogram(make_square_grid(2, side));
    CHECK(fast.counts == slow.counts);
  }
  for (i64 side : {1, 2, 3, 4, 5}) {
    const auto fast = grid_difference_histogram(3, side);
    const auto slow = distance_histogram(make_square_grid(3, side));
    CHECK(fast.counts == slow.counts);
  }
  for (i64 side : {2, 3}) {
    const auto fast = grid_difference_histogram(4, side);
    const auto slow = distance_histogram(make_square_grid(4, side));
    CHECK(fast.counts == slow.counts);
  }
}

TEST_CASE("histogram counts are even and sum to N(N-1)") {
  for (u64 seed : {1ULL, 7ULL, 42ULL}) {
    const PointSet ps = random_point_set(3, 50, -100, 100, seed);
    const DistanceHistogram h = distance_histogram(ps);
    u64 total = 0;
    for (const auto& [d2, cnt] : h.counts) {
      CHECK(d2 > 0);
      CHECK(cnt % 2 == 0);
      total += cnt;
    }
    CHECK(total == 50u * 49u);
    CHECK(h.total_pairs() == total);
  }
}

TEST_CASE("worker count never changes the histogram") {
  const PointSet ps = random_point_set(2, 257, 0, 5000, 9001);
  const DistanceHistogram base = distance_histogram(ps, 1);
  for (int workers : {2, 3, 4, 7, 16}) {
    const DistanceHistogram h = distance_histogram(ps, workers);
    CHECK(h.counts == base.counts);
  }
}

TEST_CASE("energies are log-convex in k") {
  // Cauchy-Schwarz on the count vector: E_{k-1} E_{k+1} >= E_k^2.
  const std::vector<PointSet> sets = {
      make_square_grid(2, 6),
      random_point_set(2, 80, 0, 30, 5),
      random_point_set(3, 60, -20, 20, 6),
  };
  for (const PointSet& ps : sets) {
    const DistanceHistogram h = distance_histogram(ps);
    for (int k = 1; k <= 5; ++k)
      CHECK(energy(h, k - 1) * energy(h, k + 1) >= energy(h, k) * energy(h, k));
  }
}

TEST_CASE("Holder bound never exceeds the true distinct count") {
  const std::vector<PointSet> sets = {
      make_square_grid(2, 7),
      make_square_grid(3, 4),
      random_point_set(2, 120, 0, 40, 11),
      random_point_set(4, 40, 0, 9, 12),
  };
  for (const PointSet& ps : sets) {
    const DistanceHistogram h = distance_histogram(ps);
    for (int k : {2, 3, 4})
      CHECK(static_cast<double>(h.distinct()) >=
            holder_lower_bound(h, k) * (1 - 1e-12));
  }
}

TEST_CASE("energy_report mirrors the raw pieces") {
  const DistanceHistogram h = distance_histogram(make_square_grid(2, 4));
  const EnergyReport r2 = energy_report(h, 2);
  CHECK(r2.k == 2);
  CHECK(r2.n_points == 16);
  CHECK(r2.distinct == h.distinct());
  CHECK(r2.energy == energy(h, 2));
  CHECK(r2.holder_bound == doctest::Approx(holder_lower_bound(h, 2)));
  const EnergyReport r1 = energy_report(h, 1);
  CHECK(std::isnan(r1.holder_bound));
  CHECK(r1.energy == 16 * 15);
}

TEST_CASE("random point sets are deterministic in the seed and distinct") {
  const PointSet a = random_point_set(2, 200, 0, 1000, 77);
  const PointSet b = random_point_set(2, 200, 0, 1000, 77);
  const PointSet c = random_point_set(2, 200, 0, 1000, 78);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != c.coords);
  std::set<std::pair<i64, i64>> seen;
  for (i64 i = 0; i < a.size(); ++i) {
    CHECK(a.coord(i, 0) >= 0);
    CHECK(a.coord(i, 0) <= 1000);
    seen.insert({a.coord(i, 0), a.coord(i, 1)});
  }
  CHECK(static_cast<i64>(seen.size()) == a.size());
}

TEST_CASE("random point set fills a tight box exactly") {
  // 16 cells, 16 points: only one possible set, reached by the dense branch.
  const PointSet ps = random_point_set(2, 16, 0, 3, 123);
  REQUIRE(ps.size() == 16);
  std::set<std::pair<i64, i64>> seen;
  for (i64 i = 0; i < 16; ++i) seen.insert({ps.coord(i, 0), ps.coord(i, 1)});
  CHECK(seen.size() == 16);
}

TEST_CASE("point file round trip with comments") {
  std::stringstream ss;
  ss << "# sample file\n\n1 2\n3 4\n# trailing comment\n-5 -6\n";
  const PointSet ps = load_points(ss);
  REQUIRE(ps.size() == 3);
  CHECK(ps.dim == 2);
  CHECK(ps.coord(2, 0) == -5);
  std::stringstream out;
  save_points(out, ps);
  const PointSet again = load_points(out);
  CHECK(again.coords == ps.coords);
  CHECK(again.dim == ps.dim);
}

TEST_CASE("input validation raises the right categories") {
  CHECK_THROWS_AS((void)make_point_set(0, {}), domain_error);
  CHECK_THROWS_AS((void)make_point_set(17, std::vector<i64>(17, 0)), domain_error);
  CHECK_THROWS_AS((void)make_point_set(2, {0, 0, 0}), format_error);
  CHECK_THROWS_AS((void)make_point_set(2, {1, 2, 1, 2}), domain_error);
  CHECK_THROWS_AS((void)make_point_set(1, {i64(1) << 29}), domain_error);
  CHECK_THROWS_AS((void)make_square_grid(2, 0), domain_error);
  CHECK_THROWS_AS((void)random_point_set(2, 10, 0, 2, 1), domain_error);
  CHECK_THROWS_AS((void)grid_difference_histogram(0, 4), domain_error);

  std::stringstream bad1("1 2\n3\n");
  CHECK_THROWS_AS((void)load_points(bad1), format_error);
  std::stringstream bad2("1 x\n");
  CHECK_THROWS_AS((void)load_points(bad2), format_error);

  const DistanceHistogram h = distance_histogram(make_square_grid(2, 2));
  CHECK_THROWS_AS((void)holder_lower_bound(h, 1), domain_error);
  CHECK_THROWS_AS((void)energy(h, -1), domain_error);
}

TEST_CASE("degenerate small sets") {
  const PointSet one = make_point_set(2, {5, 5});
  const DistanceHistogram h = distance_histogram(one);
  CHECK(h.n_points == 1);
  CHECK(h.counts.empty());
  CHECK(energy(h, 2) == 0);
  CHECK(h.distinct() == 0);

  const auto g1 = grid_difference_histogram(3, 1);
  CHECK(g1.n_points == 1);
  CHECK(g1.counts.empty());
}
