#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "udrs/distsel.hpp"
#include "udrs/io.hpp"
#include "udrs/oracle.hpp"

using namespace udrs;

TEST_CASE("pair counts through batched counting") {
  std::vector<Point> P{{0, 0}, {1, 0}, {3, 0}};
  BatchStats st;
  CHECK(count_pairs_within_sq(P, 1, {}, &st) == 1);
  auto S = batched_count(P, P, 1.0).counts;
  CHECK(std::accumulate(S.begin(), S.end(), std::int64_t{0}) == 5);
  CHECK(count_pairs_within(P, 1) == 1);
  CHECK(count_pairs_within(P, 0) == 0);
  CHECK(count_pairs_within(P, 3) == 3);
  CHECK(count_pairs_within(P, 100) == 3);
  CHECK_THROWS(count_pairs_within(P, -1));
}

TEST_CASE("decision examples") {
  std::vector<Point> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK_FALSE(decide(sq, 1.0, 5));
  CHECK(decide(sq, 1.5, 5));
  CHECK(decide(sq, std::sqrt(2.0), 5));
  CHECK_THROWS_AS(decide(sq, 1.0, 0), std::out_of_range);
  CHECK_THROWS_AS(decide(sq, 1.0, 7), std::out_of_range);
  CHECK_THROWS_AS(decide({{0, 0}}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("selection examples") {
  Rng rng(0);
  std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(select_distance(tri, 1, rng) == 1.0);
  CHECK(select_distance(tri, 2, rng) == 1.0);
  CHECK(select_distance(tri, 3, rng) == std::sqrt(2.0));
  std::vector<Point> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK(select_distance(sq, 5, rng) == std::sqrt(2.0));
  std::vector<Point> dup(10, Point{2, 3});
  CHECK(select_distance(dup, 1, rng) == 0.0);
  CHECK(select_distance(dup, 45, rng) == 0.0);
}

TEST_CASE("selection equals the sorted distances") {
  Rng rng(42);
  auto P = generate(500, Dist::uniform, {0, 0, 10, 10}, 5);
  const std::int64_t N = 500 * 499 / 2;
  for (int t = 0; t < 100; ++t) {
    std::int64_t k = 1 + static_cast<std::int64_t>(rng.below(N));
    REQUIRE(select_distance(P, k, rng) == oracle::brute_kth_distance(P, k));
  }
  CHECK(select_distance(P, N, rng) == oracle::brute_kth_distance(P, N));
  CHECK(select_distance(P, 1, rng) == oracle::brute_kth_distance(P, 1));
}

TEST_CASE("selection on clustered and duplicated points") {
  Rng rng(7);
  auto P = generate(400, Dist::clustered, {0, 0, 4, 4}, 6);
  for (int i = 0; i < 30; ++i) P.push_back(P[static_cast<std::size_t>(i)]);
  const std::int64_t N = static_cast<std::int64_t>(P.size() * (P.size() - 1) / 2);
  SelectStats st;
  for (int t = 0; t < 40; ++t) {
    std::int64_t k = 1 + static_cast<std::int64_t>(rng.below(N));
    REQUIRE(select_distance(P, k, rng, {}, &st) == oracle::brute_kth_distance(P, k));
  }
  CHECK(st.decisions > 0);
}

TEST_CASE("decide is monotone") {
  auto P = generate(300, Dist::uniform, {0, 0, 5, 5}, 8);
  for (std::int64_t k : {1, 100, 20000, 44850}) {
    bool prev = false;
    for (double lam = 0.01; lam < 10; lam *= 1.3) {
      bool d = decide(P, lam, k);
      CHECK((d || !prev));
      prev = d;
    }
  }
}

TEST_CASE("annulus enumeration") {
  auto P = generate(400, Dist::uniform, {0, 0, 3, 3}, 9);
  auto got = pairs_in_annulus(P, 0.25, 1.0);
  std::int64_t want = 0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      double d = dist2(P[i], P[j]);
      want += d > 0.25 && d <= 1.0;
    }
  CHECK(static_cast<std::int64_t>(got.size()) == want);
}
