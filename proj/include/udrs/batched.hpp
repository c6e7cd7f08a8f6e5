#pragma once

#include <cstdint>
#include <vector>

#include "udrs/geom.hpp"

namespace udrs {

enum class BatchAlgo : std::uint8_t { primal_dual, chi, brute };

struct BatchParams {
  double r0 = 4;            // cutting parameter of the balanced steps
  std::size_t base = 256;   // brute force at or below this total size
  std::size_t small = 8;    // ... or when one side is this small
  int max_depth = 40;
  double delta = 0.125;     // exponent slack of the chi-sensitive variant
  double c_t = 8;           // budget constant of the chi-sensitive variant
  std::uint64_t seed = 0;
};

struct BatchStats {
  std::uint64_t ops = 0;         // elementary operations
  std::uint64_t cells = 0;       // cutting cells created
  std::uint64_t steps_primal = 0;
  std::uint64_t steps_dual = 0;
  std::uint64_t base_cases = 0;
  std::uint64_t base_pairs = 0;  // point-disk tests done by brute force
  std::uint64_t max_base = 0;    // largest base case, n + m
  int depth = 0;
  std::uint64_t cell_pairs = 0;
  double chi_guess = 0;          // summed final guesses (chi variant)
  std::uint64_t chi_rounds = 0;  // budget restarts (chi variant)
};

struct CountReport {
  std::vector<std::int64_t> counts;
  BatchStats stats;
};

// counts[j] = |{p in P : |p - Q[j]| <= radius}|.
CountReport batched_count(const std::vector<Point>& P, const std::vector<Point>& Q, double radius,
                          BatchAlgo algo = BatchAlgo::primal_dual, const BatchParams& params = {});
CountReport batched_count_chi(const std::vector<Point>& P, const std::vector<Point>& Q, double radius,
                              const BatchParams& params = {});
// Same, with the closed threshold given as a squared distance (> 0).
CountReport batched_count_sq(const std::vector<Point>& P, const std::vector<Point>& Q, double r2,
                             BatchAlgo algo = BatchAlgo::primal_dual, const BatchParams& params = {});

// Unordered pairs of radius-rc circles that meet (tangent counts).
std::int64_t count_circle_intersections(const std::vector<Point>& centers, double rc,
                                        const BatchParams& params = {});

struct UnitDistanceReport {
  bool exists = false;
  std::int64_t within_hi = 0;  // pairs within 1 + tol
  std::int64_t within_lo = 0;  // pairs within 1 - tol
};

UnitDistanceReport unit_distance_detect(const std::vector<Point>& P, double tol = 1e-9,
                                        const BatchParams& params = {});

// Unordered pairs at squared distance <= t (t >= 0), through batched counting.
std::int64_t count_pairs_within_sq(const std::vector<Point>& P, double t, const BatchParams& params = {},
                                   BatchStats* stats = nullptr);

}  // namespace udrs
