#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "udrs/oracle.hpp"
#include "udrs/tradeoff.hpp"
#include "udrs/verify.hpp"

using namespace udrs;

namespace {

const CellPairFrame kUp = make_frame_offset({0, -kSide}, 1, 0);

}  // namespace

TEST_CASE("r = 1 is a plain partition tree") {
  Rng rng(1);
  auto P = random_in_point_cell(2000, rng);
  TradeoffIndex idx = build_tradeoff(P, kUp, 1.0, 1);
  CHECK(idx.cut.cells.size() == 1);
  CHECK(idx.trees.size() <= 1);
  PartitionTree tree = build_partition_tree(P, kUp);
  for (Point q : random_in_query_cell(kUp, 1000, rng)) {
    std::int64_t in = query_tradeoff(idx, q);
    REQUIRE(in == query_count(tree, q));
    REQUIRE(in + query_tradeoff(idx, q, Mode::outside) == 2000);
  }
}

TEST_CASE("canonical subsets split every parent list") {
  Rng rng(2);
  auto P = random_in_point_cell(512, rng);
  TradeoffParams tp;
  tp.keep_lists = true;
  TradeoffIndex idx = build_tradeoff(P, kUp, 1.0, 8, tp);
  const HierarchicalCutting& hc = idx.cut;
  REQUIRE(hc.cells.size() > 1);
  CHECK(static_cast<std::int64_t>(idx.cells[0].h1 + idx.cells[0].h2) + static_cast<std::int64_t>(idx.list(0).size()) == 512);
  for (std::size_t c = 1; c < hc.cells.size(); ++c) {
    auto lp = idx.list(hc.cells[c].parent);
    auto lc = idx.list(static_cast<std::int32_t>(c));
    std::vector<std::int32_t> child(lc.begin(), lc.end());
    std::sort(child.begin(), child.end());
    std::int32_t h1 = 0, h2 = 0;
    for (std::int32_t p : lp) {
      Point d = idx.dual(P[static_cast<std::size_t>(p)]);
      const PseudoTrapezoid& t = hc.cells[c].trap;
      bool kept = std::binary_search(child.begin(), child.end(), p);
      // a disk containing the cell contains every point of it, and so on
      Point corner[4];
      t.corners(corner);
      int inside = 0;
      for (Point q : corner) inside += dist2(q, d) <= 1;
      Rel rel = relate_safe(d, t);
      if (rel == Rel::contains) {
        ++h1;
        CHECK(inside == 4);
      } else if (rel == Rel::disjoint) {
        ++h2;
        CHECK(inside == 0);
      }
      CHECK(kept == (rel == Rel::crosses));
    }
    CHECK(idx.cells[c].h1 == h1);
    CHECK(idx.cells[c].h2 == h2);
    CHECK(static_cast<std::size_t>(h1 + h2) + child.size() == lp.size());
  }
}

TEST_CASE("larger r trades space for query work") {
  Rng rng(3);
  auto P = random_in_point_cell(4096, rng);
  TradeoffIndex one = build_tradeoff(P, kUp, 1.0, 1);
  TradeoffIndex many = build_tradeoff(P, kUp, 1.0, 16);
  QueryStats s1, s16;
  for (Point q : random_in_query_cell(kUp, 1000, rng)) {
    std::int64_t want = oracle::brute_count(P, q, 1.0);
    REQUIRE(query_tradeoff(one, q, Mode::inside, &s1) == want);
    REQUIRE(query_tradeoff(many, q, Mode::inside, &s16) == want);
    REQUIRE(query_tradeoff(many, q, Mode::outside) == 4096 - want);
  }
  MESSAGE("work per query, r=1: " << (s1.nodes + s1.scanned) / 1000.0 << ", r=16: " << (s16.nodes + s16.scanned) / 1000.0);
  CHECK(s16.nodes + s16.scanned < s1.nodes + s1.scanned);
  CHECK(many.cut.cells.size() > one.cut.cells.size());
}

TEST_CASE("whole-cell disks") {
  Rng rng(4);
  auto P = random_in_point_cell(700, rng);
  TradeoffIndex idx = build_tradeoff(P, kUp, 1.0, 4);
  CHECK(query_tradeoff(idx, {kSide / 2, -0.01}) == 700);
  CHECK(query_tradeoff(idx, {kSide / 2, -0.01}, Mode::outside) == 0);
}

TEST_CASE("input units") {
  Rng rng(5);
  const double radius = 0.25;
  std::vector<Point> P;
  for (Point p : random_in_point_cell(800, rng)) P.push_back({p.x * radius, p.y * radius});
  TradeoffIndex idx = build_tradeoff(P, kUp, radius, 4);
  for (Point q : random_in_query_cell(kUp, 300, rng)) {
    Point w{q.x * radius, q.y * radius};
    REQUIRE(query_tradeoff(idx, w) == oracle::brute_count(P, w, radius));
  }
  CHECK_THROWS_AS(build_tradeoff(P, kUp, 0, 4), GeomError);
}
