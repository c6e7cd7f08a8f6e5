#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "udrs/cutting.hpp"
#include "udrs/partition.hpp"

namespace udrs {

struct TradeoffParams {
  TreeParams tree;
  std::uint64_t seed = 0;
  bool keep_lists = false;  // retain the per-cell point lists (verification)
};

struct TradeoffCell {
  std::int32_t h1 = 0;    // disks containing the cell
  std::int32_t h2 = 0;    // disks avoiding the cell
  std::int32_t tree = -1;  // secondary tree of a leaf
  std::int32_t l_begin = 0;  // undecided points (kept only on request)
  std::int32_t l_end = 0;
};

// Hierarchical cutting on the duals of the points of one cell pair, with
// canonical counts on every cell and a partition tree under every leaf.
struct TradeoffIndex {
  CellPairFrame frame;
  double radius = 1;
  double scale = 1;
  double r = 1;
  HierarchicalCutting cut;
  std::vector<TradeoffCell> cells;  // parallel to cut.cells
  std::vector<PartitionTree> trees;
  std::vector<std::int32_t> lists;
  std::vector<double> xs;  // all points, input units
  std::vector<double> ys;

  std::int32_t size() const { return static_cast<std::int32_t>(xs.size()); }
  Point dual(Point world) const { return frame.to_dual(frame.to_local({world.x * scale, world.y * scale})); }
  std::span<const std::int32_t> list(std::int32_t c) const {
    return {lists.data() + cells[c].l_begin, static_cast<std::size_t>(cells[c].l_end - cells[c].l_begin)};
  }
};

TradeoffIndex build_tradeoff(std::span<const Point> P, const CellPairFrame& f, double radius, double r,
                             const TradeoffParams& params = {});
std::int64_t query_tradeoff(const TradeoffIndex& idx, Point q, Mode mode = Mode::inside,
                            QueryStats* stats = nullptr);

}  // namespace udrs
