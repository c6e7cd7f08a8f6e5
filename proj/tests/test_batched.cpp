#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "udrs/batched.hpp"
#include "udrs/io.hpp"
#include "udrs/oracle.hpp"

using namespace udrs;

TEST_CASE("hand examples") {
  std::vector<Point> P{{0, 0}, {1, 0}, {3, 0}};
  CHECK(batched_count(P, {{0, 0}}, 1.0).counts == std::vector<std::int64_t>{2});
  CHECK(batched_count_chi(P, {{0, 0}}, 1.0).counts == std::vector<std::int64_t>{2});
  CHECK(batched_count(P, {}, 1.0).counts.empty());
  CHECK(batched_count({}, P, 1.0).counts == std::vector<std::int64_t>{0, 0, 0});
  CHECK_THROWS(batched_count(P, P, 0));
}

TEST_CASE("all algorithms match brute force") {
  for (Dist d : {Dist::uniform, Dist::clustered}) {
    for (auto [n, m] : {std::pair{4096, 4096}, std::pair{300, 5000}, std::pair{5000, 300}, std::pair{2000, 40}}) {
      auto P = generate(static_cast<std::size_t>(n), d, {0, 0, 20, 20}, 1);
      auto Q = generate(static_cast<std::size_t>(m), d, {0, 0, 20, 20}, 2);
      auto want = oracle::brute_batched(P, Q, 1.0);
      CHECK(batched_count(P, Q, 1.0).counts == want);
      CHECK(batched_count(P, Q, 1.0, BatchAlgo::brute).counts == want);
      CHECK(batched_count_chi(P, Q, 1.0).counts == want);
    }
  }
}

TEST_CASE("dense instances recurse and stay exact") {
  auto P = generate(3000, Dist::uniform, {0, 0, 1.5, 1.5}, 3);
  auto Q = generate(3000, Dist::uniform, {0, 0, 1.5, 1.5}, 4);
  CountReport rep = batched_count(P, Q, 1.0);
  CHECK(rep.counts == oracle::brute_batched(P, Q, 1.0));
  CHECK(rep.stats.steps_primal + rep.stats.steps_dual > 0);
  CHECK(rep.stats.cells > 0);
  CHECK(rep.stats.depth > 0);
  // far from quadratic work
  CHECK(rep.stats.base_pairs < 3000ull * 3000ull / 2);
}

TEST_CASE("other radii") {
  for (double radius : {0.05, 0.7, 13.0}) {
    auto P = generate(1500, Dist::clustered, {0, 0, 30 * radius, 30 * radius}, 5);
    auto Q = generate(1500, Dist::uniform, {0, 0, 30 * radius, 30 * radius}, 6);
    CHECK(batched_count(P, Q, radius).counts == oracle::brute_batched(P, Q, radius));
    CHECK(batched_count_chi(P, Q, radius).counts == oracle::brute_batched(P, Q, radius));
  }
}

TEST_CASE("points on the circles count") {
  std::vector<Point> P, Q{{0, 0}, {0.5, 0.5}};
  for (int i = 0; i < 400; ++i) {
    double a = 6.283185307179586 * i / 400;
    P.push_back({std::cos(a), std::sin(a)});
  }
  P.push_back({0.6, 0.8});
  P.push_back({1, 0});
  CHECK(batched_count(P, Q, 1.0).counts == oracle::brute_batched(P, Q, 1.0));
}

TEST_CASE("degenerate inputs") {
  std::vector<Point> same(2000, Point{0.3, 0.3});
  auto Q = generate(1000, Dist::uniform, {0, 0, 2, 2}, 7);
  CHECK(batched_count(same, Q, 1.0).counts == oracle::brute_batched(same, Q, 1.0));
  CHECK(batched_count_chi(Q, same, 1.0).counts == oracle::brute_batched(Q, same, 1.0));
  auto grid = generate(2500, Dist::grid, {0, 0, 5, 5}, 0);
  CHECK(batched_count(grid, grid, 0.1).counts == oracle::brute_batched(grid, grid, 0.1));
  CHECK(batched_count_chi(grid, grid, 0.1).counts == oracle::brute_batched(grid, grid, 0.1));
}

TEST_CASE("chi-sensitive guesses") {
  // far apart disks end on an early guess
  std::vector<Point> far;
  for (int i = 0; i < 1000; ++i) far.push_back({i * 3.0, 0});
  CountReport f = batched_count_chi(far, far, 1.0);
  CHECK(f.counts == oracle::brute_batched(far, far, 1.0));
  CHECK(f.stats.chi_rounds <= 2);

  auto Pu = generate(2048, Dist::uniform, {0, 0, 8, 8}, 1);
  auto Qu = generate(2048, Dist::uniform, {0, 0, 8, 8}, 2);
  auto Pc = generate(2048, Dist::clustered, {0, 0, 8, 8}, 1);
  auto Qc = generate(2048, Dist::clustered, {0, 0, 8, 8}, 2);
  CountReport u = batched_count_chi(Pu, Qu, 1.0);
  CountReport c = batched_count_chi(Pc, Qc, 1.0);
  CHECK(u.counts == oracle::brute_batched(Pu, Qu, 1.0));
  CHECK(c.counts == oracle::brute_batched(Pc, Qc, 1.0));
  double ratio = std::max(u.stats.chi_guess, c.stats.chi_guess) / std::min(u.stats.chi_guess, c.stats.chi_guess);
  MESSAGE("guessed chi: uniform " << u.stats.chi_guess << ", clustered " << c.stats.chi_guess);
  CHECK(ratio >= 4);
}

TEST_CASE("circle intersections") {
  CHECK(count_circle_intersections({{0, 0}, {1, 0}, {10, 10}}, 1.0) == 1);
  CHECK(count_circle_intersections({{0, 0}}, 1.0) == 0);
  CHECK(count_circle_intersections({}, 1.0) == 0);
  std::vector<Point> same(50, Point{1, 1});
  CHECK(count_circle_intersections(same, 1.0) == 50 * 49 / 2);
  CHECK(count_circle_intersections({{0, 0}, {2, 0}}, 1.0) == 1);
  for (Dist d : {Dist::uniform, Dist::clustered}) {
    auto C = generate(4096, d, {0, 0, 40, 40}, 3);
    CHECK(count_circle_intersections(C, 0.5) == oracle::brute_circle_pairs(C, 0.5));
  }
}

TEST_CASE("unit distance") {
  CHECK(unit_distance_detect({{0, 0}, {1, 0}, {3, 0}}).exists);
  CHECK_FALSE(unit_distance_detect({{0, 0}, {0.5, 0}}).exists);
  CHECK_FALSE(unit_distance_detect({}).exists);
  Rng rng(4);
  for (int k = 0; k < 40; ++k) {
    auto P = generate(500, Dist::uniform, {0, 0, 30, 30}, 100 + static_cast<std::uint64_t>(k));
    if (k % 2 == 0) {
      double a = rng.uniform(0, 6.283185307179586);
      P.push_back({P[3].x + std::cos(a), P[3].y + std::sin(a)});
    }
    auto rep = unit_distance_detect(P);
    CHECK(rep.exists == oracle::brute_unit_distance(P));
    if (k % 2 == 0) CHECK(rep.exists);
    CHECK(rep.within_hi >= rep.within_lo);
  }
}

TEST_CASE("pairs within a squared threshold") {
  auto P = generate(3000, Dist::clustered, {0, 0, 10, 10}, 9);
  for (double lam : {0.0, 0.2, 1.0, 3.0}) CHECK(count_pairs_within_sq(P, lam * lam) == oracle::brute_pairs_within(P, lam));
  CHECK(count_pairs_within_sq(P, INFINITY) == 3000ll * 2999 / 2);
  std::vector<Point> dup{{0, 0}, {0, 0}, {1, 1}, {0, 0}};
  CHECK(count_pairs_within_sq(dup, 0) == 3);
}
