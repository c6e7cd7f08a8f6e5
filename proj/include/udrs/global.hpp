#pragma once

#include <cstdint>
#include <vector>

#include "udrs/grid.hpp"
#include "udrs/partition.hpp"
#include "udrs/tradeoff.hpp"

namespace udrs {

enum class StructureKind : std::uint8_t { partition_tree, tradeoff };

struct GlobalParams {
  StructureKind kind = StructureKind::partition_tree;
  double r = 1;  // trade-off parameter
  std::uint64_t seed = 0;
  TreeParams tree;
};

// Grid plus one structure per cell pair (C, C') with C' in N(C), C' != C.
struct GlobalIndex {
  GlobalParams params;
  GridIndex grid;
  std::vector<std::int32_t> pair;  // parallel to grid.nbrs: structure index, -1 when C' = C
  std::vector<PartitionTree> trees;
  std::vector<TradeoffIndex> tradeoffs;
  std::vector<double> xs;  // grid.orig as SoA
  std::vector<double> ys;
  std::vector<Point> box_lo;  // per cell bounding box of its points, input units
  std::vector<Point> box_hi;

  std::int64_t size() const { return static_cast<std::int64_t>(grid.num_points()); }
};

// Trade-off parameter used for a cell pair with n points: r, capped at
// n / log2(n)^2 (at least 1).
double pair_r(double r, std::size_t n);

GlobalIndex compose_global(const std::vector<Point>& P, double radius, const GlobalParams& params = {});
std::int64_t query_global(const GlobalIndex& g, Point q, Mode mode = Mode::inside, QueryStats* stats = nullptr);

// Count of one cell's own points in the disk about q (q inside that cell).
std::int64_t same_cell_count(const GlobalIndex& g, std::int32_t cell, Point q);

}  // namespace udrs
