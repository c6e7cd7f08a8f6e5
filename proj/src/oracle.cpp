#include "udrs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace udrs::oracle {

std::int64_t brute_count(const std::vector<Point>& P, Point q, double radius, Mode mode) {
  double r2 = radius * radius;
  std::int64_t in = 0;
  for (const Point& p : P) {
    double dx = p.x - q.x;
    double dy = p.y - q.y;
    if (dx * dx + dy * dy <= r2) ++in;
  }
  return mode == Mode::inside ? in : static_cast<std::int64_t>(P.size()) - in;
}

std::vector<std::int64_t> brute_batched(const std::vector<Point>& P, const std::vector<Point>& Q,
                                        double radius) {
  std::vector<std::int64_t> out(Q.size());
  for (std::size_t j = 0; j < Q.size(); ++j) out[j] = brute_count(P, Q[j], radius);
  return out;
}

double brute_kth_distance(const std::vector<Point>& P, std::int64_t k) {
  std::vector<double> d;
  d.reserve(P.size() * (P.size() - 1) / 2);
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      double dx = P[i].x - P[j].x;
      double dy = P[i].y - P[j].y;
      d.push_back(std::sqrt(dx * dx + dy * dy));
    }
  if (k < 1 || k > static_cast<std::int64_t>(d.size())) throw std::out_of_range("k out of range");
  std::sort(d.begin(), d.end());
  return d[k - 1];
}

std::int64_t brute_pairs_within(const std::vector<Point>& P, double lambda) {
  double l2 = lambda * lambda;
  std::int64_t c = 0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      double dx = P[i].x - P[j].x;
      double dy = P[i].y - P[j].y;
      if (dx * dx + dy * dy <= l2) ++c;
    }
  return c;
}

std::int64_t brute_circle_pairs(const std::vector<Point>& centers, double rc) {
  return brute_pairs_within(centers, 2 * rc);
}

bool brute_unit_distance(const std::vector<Point>& P, double tol) {
  return brute_pairs_within(P, 1 + tol) - brute_pairs_within(P, 1 - tol) > 0;
}

}  // namespace udrs::oracle
