#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "udrs/geom.hpp"

namespace udrs {

class CuttingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upper arcs given by their centers, in the canonical coordinates of an
// enlarged cell (region). Weights are optional and parallel to centers.
struct ArcSet {
  std::vector<Point> centers;
  std::vector<double> weights;
  PseudoTrapezoid region = standard_enlarged();

  std::size_t size() const { return centers.size(); }
  bool weighted() const { return !weights.empty(); }
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

struct CutCell {
  PseudoTrapezoid trap;
  std::int32_t level = 0;
  std::int32_t parent = -1;
  std::int32_t child_begin = 0;  // children are contiguous in cells
  std::int32_t child_end = 0;
  std::int32_t h_begin = 0;  // crossing list H_sigma in hlist
  std::int32_t h_end = 0;
  double weight = 0;  // w(H_sigma)
  std::int32_t nchildren() const { return child_end - child_begin; }
};

struct CuttingParams {
  int rho = 2;
  double c_eps = 8;     // eps = 1 / (c_eps * rho0)
  double c_net = 0.2;  // net size = c_net / eps * ln(1 / eps)
  double c_a = 4;
  double c_b = 16;
  int min_net = 2;
  int max_retries = 64;
  int max_children = 64;
  std::size_t max_cells = 0;   // stop before a level grows beyond this (0: no cap)
  std::uint64_t op_budget = 0;  // abort with BudgetExceeded past this (0: none)
  std::uint64_t seed = 0;
  // Fully decompose a cell instead of failing when its retries run out.
  bool fallback_full = false;
};

struct HierarchicalCutting {
  std::vector<CutCell> cells;
  std::vector<std::vector<std::int32_t>> levels;
  std::vector<std::int32_t> hlist;
  ArcSet arcs;
  int rho = 2;
  double r = 1;
  double total = 0;      // n, or W when weighted
  bool finished = false;  // last level fully decomposes its parents
  int c_max = 0;
  std::uint64_t ops = 0;
  std::uint64_t retries = 0;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  const std::vector<std::int32_t>& leaves() const { return levels.back(); }
  std::span<const std::int32_t> H(std::int32_t c) const {
    return {hlist.data() + cells[c].h_begin, static_cast<std::size_t>(cells[c].h_end - cells[c].h_begin)};
  }
  double bound(int level) const;
  // Cell of the given level (default: leaves) containing p.
  std::int32_t locate(Point p, int level = -1) const;
  // Child of c containing p (best fit).
  std::int32_t child_containing(std::int32_t c, Point p) const;
};

// VD of the arcs (upper, canonical coordinates) inside sigma.
std::vector<PseudoTrapezoid> vertical_decomposition(const PseudoTrapezoid& sigma,
                                                    std::span<const Point> arcs,
                                                    std::uint64_t* ops = nullptr);

// Number of pairwise intersections of the arcs inside sigma.
std::int64_t intersections_inside(const PseudoTrapezoid& sigma, std::span<const Point> arcs);

// Random sample of size min(ceil(c_net / eps * log|S|), |S|), weighted when S is.
ArcSet sample_epsilon_net_sparse(const ArcSet& S, const PseudoTrapezoid& sigma, double eps, Rng& rng,
                                 double c_net = 5.0);
// True when every cell of VD_sigma(R) is crossed by at most eps * w(S) of S,
// and R is sparse for sigma.
bool validate_epsilon_net(const ArcSet& S, const ArcSet& R, const PseudoTrapezoid& sigma, double eps,
                          bool check_sparse = true);
ArcSet sample_epsilon_approximation(const ArcSet& S, double eps, Rng& rng, double c_a = 4,
                                    double c_b = 16);

HierarchicalCutting hierarchical_cutting(const ArcSet& S, double r, const CuttingParams& params = {});
HierarchicalCutting weighted_hierarchical_cutting(const ArcSet& S, double r,
                                                  const CuttingParams& params = {});

}  // namespace udrs
