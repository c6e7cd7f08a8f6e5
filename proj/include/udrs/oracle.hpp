#pragma once

#include <cstdint>
#include <vector>

#include "udrs/geom.hpp"

// Naive reference implementations. They depend on nothing but the point type
// and the closed-disk convention.
namespace udrs::oracle {

std::int64_t brute_count(const std::vector<Point>& P, Point q, double radius,
                         Mode mode = Mode::inside);
std::vector<std::int64_t> brute_batched(const std::vector<Point>& P, const std::vector<Point>& Q,
                                        double radius);
double brute_kth_distance(const std::vector<Point>& P, std::int64_t k);
std::int64_t brute_circle_pairs(const std::vector<Point>& centers, double rc);
std::int64_t brute_pairs_within(const std::vector<Point>& P, double lambda);
bool brute_unit_distance(const std::vector<Point>& P, double tol = 1e-9);

}  // namespace udrs::oracle
