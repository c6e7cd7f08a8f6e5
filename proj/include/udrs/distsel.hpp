#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "udrs/batched.hpp"
#include "udrs/geom.hpp"

namespace udrs {

// Unordered pairs of P at distance <= lambda (closed).
std::int64_t count_pairs_within(const std::vector<Point>& P, double lambda, const BatchParams& params = {});

// True iff the k-th smallest pairwise distance is <= lambda.
bool decide(const std::vector<Point>& P, double lambda, std::int64_t k, const BatchParams& params = {});

struct SelectParams {
  double c_s = 4;          // per-round sample budget c_s * n^(2/3) * k^(1/3)
  double enumerate_at = 4;  // enumerate once the interval holds <= this * n pairs
  int max_rounds = 64;
  BatchParams batch;
};

struct SelectStats {
  int rounds = 0;
  int decisions = 0;
  std::int64_t enumerated = 0;
};

double select_distance(const std::vector<Point>& P, std::int64_t k, Rng& rng, const SelectParams& params = {},
                       SelectStats* stats = nullptr);

// Squared distances d with lo < d <= hi, over unordered pairs.
std::vector<double> pairs_in_annulus(const std::vector<Point>& P, double lo2, double hi2);

}  // namespace udrs
