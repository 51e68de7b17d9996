#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"
#include "meandim/common.hpp"
#include "meandim/geometry.hpp"

using namespace meandim;

namespace {

PointCloud line_cloud(const std::vector<double>& xs,
                      Metric m = Metric::linf()) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back(Point{x});
  return PointCloud(std::move(pts), m);
}

PointCloud unit_square_corners() {
  return PointCloud({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}},
                    Metric::linf());
}

PointCloud random_cloud(Rng& rng, std::size_t max_dim, std::size_t max_pts) {
  std::size_t dim = 1 + rng.next_below(max_dim);
  std::size_t count = 1 + rng.next_below(max_pts);
  std::vector<Point> pts(count, Point(dim));
  for (auto& p : pts) {
    for (auto& c : p) c = rng.next_uniform();
  }
  return PointCloud(std::move(pts), Metric::linf());
}

// Exact minimum cluster cover by subset dynamic programming, independent of
// the library's branch-and-bound search.  Usable up to ~12 points.
std::size_t dp_cover_oracle(const PointCloud& cloud, double eps) {
  const std::size_t n = cloud.size();
  REQUIRE(n <= 12);
  const std::uint32_t full = static_cast<std::uint32_t>((1u << n) - 1);
  std::vector<char> valid(full + 1, 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (std::size_t i = 0; i + 1 < n && valid[mask]; ++i) {
      if (!(mask & (1u << i))) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!(mask & (1u << j))) continue;
        if (distance(cloud.points[i], cloud.points[j], cloud.metric) >= eps) {
          valid[mask] = 0;
          break;
        }
      }
    }
  }
  std::vector<int> cover(full + 1, std::numeric_limits<int>::max());
  cover[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low = mask & (~mask + 1u);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || !valid[sub]) continue;
      if (cover[mask ^ sub] != std::numeric_limits<int>::max()) {
        cover[mask] = std::min(cover[mask], cover[mask ^ sub] + 1);
      }
    }
  }
  return static_cast<std::size_t>(cover[full]);
}

}  // namespace

TEST_CASE("distance evaluates each metric family") {
  Point a{0.0, 0.0};
  Point b{1.0, 1.0};
  Point c{1.0, 0.0};

  CHECK(distance(a, a, Metric::linf()) == 0.0);
  CHECK(distance(b, b, Metric::lp(2.0)) == 0.0);
  CHECK(distance(a, b, Metric::linf()) == 1.0);
  CHECK(distance(a, c, Metric::lp(1.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(distance(a, b, Metric::lp(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distance(a, c, Metric::lp(2.0)) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  CHECK(distance(a, b, Metric::linf()) == distance(b, a, Metric::linf()));
  CHECK(distance(a, c, Metric::lp(3.0)) == distance(c, a, Metric::lp(3.0)));

  CHECK_THROWS_AS(distance(Point{0.5}, b, Metric::linf()), config_error);
  CHECK_THROWS_AS(Metric::lp(0.5), config_error);
  CHECK_THROWS_AS(Metric::tau_truncated(-1), config_error);
}

TEST_CASE("distance satisfies the triangle inequality on random triples") {
  Rng rng(42);
  std::vector<Metric> metrics = {Metric::linf(), Metric::lp(1.0),
                                 Metric::lp(2.0), Metric::tau_truncated(3)};
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t dim = 1 + rng.next_below(4);
    Point x(dim), y(dim), z(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = rng.next_uniform();
      y[i] = rng.next_uniform();
      z[i] = rng.next_uniform();
    }
    for (const auto& m : metrics) {
      double xy = distance(x, y, m);
      double yz = distance(y, z, m);
      double xz = distance(x, z, m);
      CHECK(xz <= xy + yz + 1e-12);
    }
  }
}

TEST_CASE("tau-truncated distance grows with the radius toward its series bound") {
  Point x{0.1, 0.9, 0.2, 0.8, 0.3};
  Point y{0.9, 0.1, 0.8, 0.2, 0.7};
  CHECK(distance(x, y, Metric::tau_truncated(0)) ==
        doctest::Approx(0.8).epsilon(1e-12));
  double prev = 0.0;
  for (int r = 0; r <= 8; ++r) {
    double d = distance(x, y, Metric::tau_truncated(r));
    CHECK(d >= prev - 1e-15);
    CHECK(d <= 3.0);
    prev = d;
  }
}

TEST_CASE("exact covering reproduces hand-checked configurations") {
  CHECK(covering_number_exact(line_cloud({0.4}), 0.1) == 1);
  CHECK(covering_number_exact(line_cloud({0.0, 0.25, 0.5, 0.75, 1.0}), 0.3) ==
        3);
  CHECK(covering_number_exact(unit_square_corners(), 0.5) == 4);
  // One cluster covers everything once the scale exceeds the diameter.
  CHECK(covering_number_exact(unit_square_corners(), 1.5) == 1);
}

TEST_CASE("exact covering matches the subset-DP oracle on random clouds") {
  Rng rng(2026);
  for (int trial = 0; trial < 60; ++trial) {
    PointCloud cloud = random_cloud(rng, 3, 12);
    double eps = 0.1 + 0.9 * rng.next_uniform();
    CHECK(covering_number_exact(cloud, eps) == dp_cover_oracle(cloud, eps));
  }
}

TEST_CASE("exact covering enforces its search cap") {
  Rng rng(7);
  std::vector<Point> pts(kExactCoverCap + 1, Point(1));
  for (auto& p : pts) p[0] = rng.next_uniform();
  PointCloud cloud(std::move(pts), Metric::linf());
  CHECK_THROWS_AS(covering_number_exact(cloud, 0.2), cap_exceeded);
  std::size_t exact = covering_number_exact(cloud, 0.2, kExactCoverCap + 1);
  CHECK(exact >= 1);
  CHECK(exact <= covering_number_greedy(cloud, 0.2));
}

TEST_CASE("greedy covering upper-bounds the exact count") {
  CHECK(covering_number_greedy(line_cloud({0.4}), 0.1) == 1);
  CHECK(covering_number_greedy(unit_square_corners(), 1.5) == 1);

  std::size_t greedy =
      covering_number_greedy(line_cloud({0.0, 0.25, 0.5, 0.75, 1.0}), 0.3);
  CHECK(greedy >= 3);
  CHECK(greedy <= 4);

  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    PointCloud cloud = random_cloud(rng, 3, 12);
    double eps = 0.1 + 0.9 * rng.next_uniform();
    std::size_t exact = covering_number_exact(cloud, eps);
    std::size_t upper = covering_number_greedy(cloud, eps);
    CHECK(upper >= exact);
    CHECK(static_cast<double>(upper) <=
          static_cast<double>(exact) *
              (1.0 + std::log(static_cast<double>(cloud.size()))) + 1e-9);
  }
}

TEST_CASE("packing numbers reproduce hand-checked configurations") {
  CHECK(packing_number(line_cloud({0.4}), 0.1) == 1);
  CHECK(packing_number(line_cloud({0.0, 0.25, 0.5, 0.75, 1.0}), 0.3) == 3);
  CHECK(packing_number(unit_square_corners(), 0.5) == 4);
}

TEST_CASE("packing and covering sandwich each other on random clouds") {
  Rng rng(314);
  for (int trial = 0; trial < 40; ++trial) {
    PointCloud cloud = random_cloud(rng, 3, 12);
    double eps = 0.1 + 0.5 * rng.next_uniform();
    std::size_t pack = packing_number(cloud, eps);
    std::size_t exact = covering_number_exact(cloud, eps);
    CHECK(pack <= exact);
    CHECK(exact <= covering_number_greedy(cloud, eps));
    // Doubling the scale around a maximal separated set yields a cover.
    CHECK(covering_number_exact(cloud, 2.0 * eps + kCoverPackSlack) <= pack);
  }
}

TEST_CASE("exact covering is nonincreasing in the scale") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    PointCloud cloud = random_cloud(rng, 2, 10);
    std::size_t prev = cloud.size() + 1;
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.2}) {
      std::size_t cur = covering_number_exact(cloud, eps);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("grid box count bins points at the cell pitch") {
  CHECK(grid_box_count(line_cloud({0.0, 0.3, 0.9}), 0.5) == 2);
  CHECK(grid_box_count(line_cloud({0.0, 0.25, 0.5, 0.75, 1.0}), 0.25) == 4);
  CHECK(grid_box_count(unit_square_corners(), 0.5) == 4);
  CHECK(grid_box_count(unit_square_corners(), 1.0) == 1);
}

TEST_CASE("quantizer cells follow the half-open layout") {
  Quantizer q2 = grid_center_quantizer(1, 0.5);
  CHECK(q2.cells_per_axis == 2);
  CHECK(q2.center({0.3})[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(q2.center({0.75})[0] == doctest::Approx(0.75).epsilon(1e-12));

  Quantizer q4 = grid_center_quantizer(1, 0.3);
  CHECK(q4.cells_per_axis == 4);
  // 0.5 sits on a cell boundary and belongs to the right-hand cell.
  CHECK(q4.center({0.5})[0] == doctest::Approx(0.625).epsilon(1e-12));

  Quantizer whole = grid_center_quantizer(2, 1.0);
  Point c = whole.center({0.99, 0.01});
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-12));

  // The closed last cell keeps the endpoint inside the grid.
  Quantizer q10 = grid_center_quantizer(1, 0.1);
  CHECK(q10.cells_per_axis == 10);
  CHECK(q10.cell_index({1.0})[0] == 9);
  CHECK(q10.center({1.0})[0] == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("quantizer centers stay within half a cell and are idempotent") {
  Rng rng(777);
  for (double eps : {0.5, 0.3, 0.1}) {
    for (std::size_t k : {std::size_t{1}, std::size_t{3}}) {
      Quantizer q = grid_center_quantizer(k, eps);
      for (int trial = 0; trial < 10000 / 6; ++trial) {
        Point x(k);
        for (auto& v : x) v = rng.next_uniform();
        Point c = q.center(x);
        double d = distance(x, c, Metric::linf());
        CHECK(d <= eps / 2.0 + 1e-15);
        CHECK(q.cell_index(c) == q.cell_index(x));
        Point cc = q.center(c);
        for (std::size_t i = 0; i < k; ++i) {
          CHECK(cc[i] == doctest::Approx(c[i]).epsilon(1e-14));
        }
      }
    }
  }
}
