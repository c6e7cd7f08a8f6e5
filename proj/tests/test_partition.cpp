#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udrs/oracle.hpp"
#include "udrs/partition.hpp"
#include "udrs/verify.hpp"

using namespace udrs;

namespace {

const CellPairFrame kUp = make_frame_offset({0, -kSide}, 1, 0);

}  // namespace

TEST_CASE("small test sets are valid spanning arcs") {
  Rng rng(1);
  auto P = random_in_point_cell(8, rng);
  for (double r : {1.0, 4.0, 8.0}) {
    TestSet ts = build_test_set(P, kUp, r);
    CHECK(static_cast<double>(ts.centers.size()) <= r);
    for (Point c : ts.centers) {
      CHECK(kUp.query_cell().contains(c, 1e-12));
      auto a = clip_disk_boundary(c, kUp);
      if (a) CHECK(a->x_lo < a->x_hi);
    }
  }
}

TEST_CASE("test arcs come from vertices of the dual decomposition") {
  Rng rng(2);
  auto P = random_in_point_cell(4, rng);
  TestSet ts = build_test_set(P, kUp, 4);
  REQUIRE(ts.centers.size() == ts.dual_vertices.size());
  for (std::size_t i = 0; i < ts.centers.size(); ++i) {
    Point v = ts.dual_vertices[i];
    bool corner = false;
    for (const PseudoTrapezoid& t : ts.cells) {
      Point q[4];
      t.corners(q);
      for (Point c : q) corner = corner || c == v;
    }
    CHECK(corner);
    Point back = kUp.from_dual(v);
    CHECK(kUp.query_cell().contains(back, 1e-12));
    CHECK(dist2(back, ts.centers[i]) <= 1e-24);
  }
}

TEST_CASE("test set size is capped by r") {
  Rng rng(3);
  auto P = random_in_point_cell(1024, rng);
  TestSet ts = build_test_set(P, kUp, 64);
  CHECK(ts.centers.size() <= 64);
  CHECK(ts.centers.size() > 8);
}

TEST_CASE("too few points give a single class") {
  Rng rng(4);
  auto P = random_in_point_cell(15, rng);
  TrapezoidalPartition part = build_partition(P, kUp, 8);
  REQUIRE(part.classes.size() == 1);
  CHECK(part.classes[0].idx.size() == 15);
  CHECK_THROWS_AS(build_partition(P, kUp, 1), PartitionError);
  CHECK_THROWS_AS(build_partition(P, kUp, 15), PartitionError);
}

TEST_CASE("partition invariants") {
  Rng rng(5);
  for (auto [n, s] : {std::pair{64, 8}, std::pair{1024, 32}, std::pair{1024, 16}}) {
    auto P = random_in_point_cell(static_cast<std::size_t>(n), rng);
    TrapezoidalPartition part = build_partition(P, kUp, s);
    PartitionAudit a = audit_partition(part, P, kUp, 2000, 9);
    CHECK(a.sizes_ok);
    CHECK(a.disjoint_union);
    CHECK(a.inside_ok);
    CHECK(a.max_crossing <= a.bound);
    CHECK(a.bound == doctest::Approx(8 * std::sqrt(static_cast<double>(n) / s)));
  }
}

TEST_CASE("the four point example") {
  std::vector<Point> P{{0.1, 0.1}, {0.2, 0.3}, {0.5, 0.2}, {0.3, 0.6}};
  PartitionTree tree = build_partition_tree(P, kUp);
  CHECK(query_count(tree, {0.2, -0.5}) == 3);
  CHECK(query_count(tree, {0.2, -0.5}, Mode::outside) == 1);
  CHECK(oracle::brute_count(P, {0.2, -0.5}, 1.0) == 3);
}

TEST_CASE("tree shape") {
  Rng rng(6);
  auto small = random_in_point_cell(20, rng);
  PartitionTree leaf = build_partition_tree(small, kUp);
  CHECK(leaf.nodes.size() == 1);
  CHECK(leaf.height() == 0);

  auto P = random_in_point_cell(1024, rng);
  PartitionTree tree = build_partition_tree(P, kUp);
  CHECK(tree.height() <= 10);
  std::int64_t leaves = 0;
  for (const PartitionNode& nd : tree.nodes) {
    CHECK(nd.count == nd.pt_end - nd.pt_begin);
    if (nd.leaf()) leaves += nd.count;
  }
  CHECK(leaves == 1024);
}

TEST_CASE("tree queries are exact") {
  Rng rng(7);
  auto P = random_in_point_cell(10000, rng);
  PartitionTree tree = build_partition_tree(P, kUp);
  QueryStats st;
  for (Point q : random_in_query_cell(kUp, 1000, rng)) {
    REQUIRE(query_count(tree, q, Mode::inside, &st) == oracle::brute_count(P, q, 1.0));
    REQUIRE(query_count(tree, q, Mode::outside) == oracle::brute_count(P, q, 1.0, Mode::outside));
  }
  // sublinear work per query on average
  CHECK(st.scanned / 1000 < 10000 / 2);
  Point top{kSide / 2, -0.01};
  CHECK(query_count(tree, top) == 10000);
  CHECK(query_count(tree, top, Mode::outside) == 0);
}

TEST_CASE("trees in input units and other frames") {
  Rng rng(8);
  const double radius = 3.5;
  Square C{{2 * kSide * radius, 0}, kSide * radius};
  for (auto [dr, dc] : {std::pair{1, 1}, std::pair{-2, 0}, std::pair{0, 2}, std::pair{-1, -2}}) {
    Square Cp{{C.lo.x + dc * kSide * radius, C.lo.y + dr * kSide * radius}, kSide * radius};
    CellPairFrame f = make_frame({{C.lo.x / radius, C.lo.y / radius}, kSide}, {{Cp.lo.x / radius, Cp.lo.y / radius}, kSide});
    std::vector<Point> P;
    for (int i = 0; i < 600; ++i) P.push_back({Cp.lo.x + rng.uniform() * Cp.side, Cp.lo.y + rng.uniform() * Cp.side});
    PartitionTree tree = build_partition_tree(P, f, radius);
    for (int k = 0; k < 300; ++k) {
      Point q{C.lo.x + rng.uniform() * C.side, C.lo.y + rng.uniform() * C.side};
      REQUIRE(query_count(tree, q) == oracle::brute_count(P, q, radius));
    }
    CHECK_THROWS_AS(query_count(tree, {C.lo.x - 10, C.lo.y}), GeomError);
  }
}
