#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"
#include "viamr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace viamr;

namespace {

Vector halfplane_indicator(const Mesh& m, double cut) {
  Vector s0(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) s0[v] = (m.vertices[v].x() <= cut) ? 1.0 : 0.0;
  return s0;
}

}  // namespace

TEST_CASE("contact cells require all three vertices on the obstacle") {
  const Mesh m = build_structured_square(4, -1.0, 1.0);
  const Vector s0 = halfplane_indicator(m, 0.0);
  const auto mask = active_cells(m, s0);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    const bool all = s0[t[0]] == 1.0 && s0[t[1]] == 1.0 && s0[t[2]] == 1.0;
    CHECK(static_cast<bool>(mask[c]) == all);
  }
  // exactly half of the quad columns are fully on the obstacle
  CHECK(std::count(mask.begin(), mask.end(), 1) == 16);
  CHECK_THROWS_AS(active_cells(m, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("free boundary of a half plane is the interior cut line") {
  const Mesh m = build_structured_square(4, -1.0, 1.0);
  const Adjacency adj = build_adjacency(m);
  const auto mask = active_cells(m, halfplane_indicator(m, 0.0));

  const FreeBoundary fb = extract_free_boundary(m, adj, mask, 16);
  REQUIRE(!fb.empty);
  REQUIRE(!fb.points.empty());
  for (const auto& p : fb.points) {
    CHECK(p.x() == 0.0);  // every sampled point sits on the cut line
    CHECK(p.y() >= -1.0);
    CHECK(p.y() <= 1.0);
  }
  // the samples cover the whole segment
  double lo = 1e9, hi = -1e9;
  for (const auto& p : fb.points) {
    lo = std::min(lo, p.y());
    hi = std::max(hi, p.y());
  }
  CHECK(lo == -1.0);
  CHECK(hi == 1.0);

  // distance to a dense analytic sampling of the segment is tiny
  std::vector<Eigen::Vector2d> exact;
  for (int k = 0; k <= 512; ++k) exact.emplace_back(0.0, -1.0 + 2.0 * k / 512.0);
  // bounded by half the sample spacing along the edges (0.5/15/2)
  CHECK(hausdorff(fb.points, exact) <= 0.5 / 15.0 / 2.0 + 1e-12);
}

TEST_CASE("free boundary reports an empty contact region") {
  const Mesh m = build_structured_square(2, 0.0, 1.0);
  const Adjacency adj = build_adjacency(m);
  const std::vector<std::uint8_t> none(m.cells.size(), 0);
  const FreeBoundary fb = extract_free_boundary(m, adj, none, 8);
  CHECK(fb.empty);
  CHECK(fb.points.empty());

  // a fully contacted mesh has no interior interface either
  const std::vector<std::uint8_t> all(m.cells.size(), 1);
  const FreeBoundary full = extract_free_boundary(m, adj, all, 8);
  CHECK(!full.empty);
  CHECK(full.points.empty());

  CHECK_THROWS_AS(extract_free_boundary(m, adj, std::vector<std::uint8_t>(2, 0), 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(extract_free_boundary(m, adj, none, 1), std::invalid_argument);
}

TEST_CASE("jaccard index against analytic half planes is exact") {
  const Mesh m = build_structured_square(4, -1.0, 1.0);
  const auto mask = active_cells(m, halfplane_indicator(m, 0.0));

  // identical region
  CHECK(jaccard(m, mask, [](double x, double) { return x <= 0.0; }) == 1.0);
  // disjoint region
  CHECK(jaccard(m, mask, [](double x, double) { return x > 10.0; }) == 0.0);
  // half overlap: intersection area 1, union area 2
  CHECK(jaccard(m, mask, [](double x, double) { return x <= -0.5; }) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // both regions empty counts as identical
  const std::vector<std::uint8_t> none(m.cells.size(), 0);
  CHECK(jaccard(m, none, [](double, double) { return false; }) == 1.0);

  CHECK_THROWS_AS(jaccard(m, std::vector<std::uint8_t>(3, 0), [](double, double) { return true; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(jaccard(m, mask, [](double, double) { return true; }, 0),
                  std::invalid_argument);
}

TEST_CASE("jaccard of a lattice disk improves under refinement") {
  const auto in_disk = [](double x, double y) { return std::hypot(x, y) <= 0.7; };
  double prev = 0.0;
  for (int k = 0; k < 2; ++k) {
    const int n = 16 << k;
    const Mesh m = build_structured_square(n, -1.0, 1.0);
    Vector s0(m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v)
      s0[v] = in_disk(m.vertices[v].x(), m.vertices[v].y()) ? 1.0 : 0.0;
    const double j = jaccard(m, active_cells(m, s0), in_disk);
    CHECK(j > 0.75);
    CHECK(j < 1.0);
    if (k == 1) CHECK(j > prev);
    prev = j;
  }
}

TEST_CASE("hausdorff distance on hand point sets") {
  using P = Eigen::Vector2d;
  CHECK(hausdorff({P(0, 0)}, {P(3, 4)}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(hausdorff({P(0, 0), P(1, 0)}, {P(0, 0)}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hausdorff({P(0, 0)}, {P(0, 0), P(1, 0)}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hausdorff({P(0, 0), P(2, 0)}, {P(1, 0)}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hausdorff({P(1, 1)}, {P(1, 1)}) == 0.0);
  CHECK_THROWS_AS(hausdorff({}, {P(0, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff({P(0, 0)}, {}), std::invalid_argument);
}

TEST_CASE("coordinate bisection balances and separates deterministically") {
  for (int n : {4, 7}) {
    const Mesh m = build_structured_square(n, 0.0, 1.0);
    for (int parts : {1, 2, 3, 5, 7}) {
      const std::vector<int> part = rcb_partition(m, parts);
      REQUIRE(part.size() == m.cells.size());

      std::vector<int> counts(parts, 0);
      for (int p : part) {
        REQUIRE(p >= 0);
        REQUIRE(p < parts);
        ++counts[p];
      }
      const int lo = *std::min_element(counts.begin(), counts.end());
      const int hi = *std::max_element(counts.begin(), counts.end());
      CHECK(lo >= 1);
      CHECK(hi - lo <= 1);  // every part gets floor or ceil of the share

      CHECK(rcb_partition(m, parts) == part);  // deterministic
    }
  }

  // a two-way split of the unit square separates along x
  const Mesh m = build_structured_square(6, 0.0, 1.0);
  const std::vector<int> part = rcb_partition(m, 2);
  double max0 = -1e9, min1 = 1e9;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    const double cx =
        (m.vertices[t[0]].x() + m.vertices[t[1]].x() + m.vertices[t[2]].x()) / 3.0;
    if (part[c] == 0)
      max0 = std::max(max0, cx);
    else
      min1 = std::min(min1, cx);
  }
  CHECK(max0 <= min1);

  CHECK_THROWS_AS(rcb_partition(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(rcb_partition(m, m.num_cells() + 1), std::invalid_argument);
}

TEST_CASE("partition ratios split a subset and sum to one") {
  const std::vector<int> parts = {0, 0, 1, 1, 2};
  const std::vector<std::uint8_t> subset = {1, 0, 1, 1, 0};
  const auto r = partition_ratios(parts, subset, 3);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r[2] == 0.0);
  CHECK(r[0] + r[1] + r[2] == doctest::Approx(1.0).epsilon(1e-12));

  const auto empty = partition_ratios(parts, {0, 0, 0, 0, 0}, 3);
  CHECK(empty == std::vector<double>{0.0, 0.0, 0.0});

  CHECK_THROWS_AS(partition_ratios(parts, {1, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(partition_ratios({0, 5}, {1, 1}, 3), std::invalid_argument);
}

TEST_CASE("partition of a refined mesh keeps the balance guarantee") {
  Mesh m = build_structured_square(4, -1.0, 1.0);
  std::mt19937 rng(12);
  for (int round = 0; round < 2; ++round) {
    std::vector<std::uint8_t> mark(m.cells.size(), 0);
    for (std::size_t c = 0; c < mark.size(); ++c) mark[c] = (rng() % 4 == 0) ? 1 : 0;
    m = refine_marked(m, mark);
  }
  for (int parts : {3, 5}) {
    const std::vector<int> part = rcb_partition(m, parts);
    std::vector<int> counts(parts, 0);
    for (int p : part) ++counts[p];
    const int lo = *std::min_element(counts.begin(), counts.end());
    const int hi = *std::max_element(counts.begin(), counts.end());
    CHECK(hi - lo <= 1);
  }
}
