#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udrs/oracle.hpp"

using namespace udrs;
using namespace udrs::oracle;

TEST_CASE("single disk counts") {
  CHECK(brute_count({}, {0, 0}, 1) == 0);
  std::vector<Point> P{{0.1, 0.1}, {0.2, 0.3}, {0.5, 0.2}, {0.3, 0.6}};
  CHECK(brute_count(P, {0.2, -0.5}, 1) == 3);
  CHECK(brute_count(P, {0.2, -0.5}, 1, Mode::outside) == 1);
  CHECK(brute_count({{1, 0}}, {0, 0}, 1) == 1);
}

TEST_CASE("batched reference") {
  CHECK(brute_batched({{0, 0}}, {}, 1).empty());
  std::vector<Point> P{{0, 0}, {1, 0}, {3, 0}, {2.5, 0.5}};
  std::vector<Point> Q{{0, 0}, {2, 0}, {9, 9}};
  auto c = brute_batched(P, Q, 1.2);
  for (std::size_t j = 0; j < Q.size(); ++j) CHECK(c[j] == brute_count(P, Q[j], 1.2));
  auto self = brute_batched(P, P, 1.2);
  for (std::size_t i = 0; i < P.size(); ++i) CHECK(self[i] == brute_count(P, P[i], 1.2));
}

TEST_CASE("k-th distance") {
  std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(brute_kth_distance(tri, 1) == 1);
  CHECK(brute_kth_distance(tri, 2) == 1);
  CHECK(brute_kth_distance(tri, 3) == std::sqrt(2.0));
  std::vector<Point> dup{{0, 0}, {0, 0}, {3, 4}};
  CHECK(brute_kth_distance(dup, 1) == 0);
  CHECK(brute_kth_distance(dup, 3) == 5);
}

TEST_CASE("circle pairs") {
  CHECK(brute_circle_pairs({{0, 0}}, 1) == 0);
  CHECK(brute_circle_pairs({{0, 0}, {1, 0}, {10, 10}}, 1) == 1);
  std::vector<Point> same(7, Point{2, 2});
  CHECK(brute_circle_pairs(same, 1) == 21);
}

TEST_CASE("pairs within and unit distance") {
  std::vector<Point> P{{0, 0}, {1, 0}, {3, 0}};
  CHECK(brute_pairs_within(P, 1) == 1);
  CHECK(brute_pairs_within(P, 0.5) == 0);
  CHECK(brute_pairs_within(P, 3) == 3);
  CHECK(brute_unit_distance(P));
  CHECK_FALSE(brute_unit_distance({{0, 0}, {0.5, 0}}));
  CHECK(brute_unit_distance({{0, 0}, {0.6, 0.8}}));
}
