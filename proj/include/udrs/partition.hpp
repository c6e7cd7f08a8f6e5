#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "udrs/cutting.hpp"
#include "udrs/geom.hpp"

namespace udrs {

class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Upper arcs in the enlarged point cell, given by centers in the query cell
// (canonical coordinates of the frame).
struct TestSet {
  std::vector<Point> centers;
  double r = 0;
  double t = 0;                      // sample size of the dual decomposition
  std::vector<PseudoTrapezoid> cells;  // the dual decomposition (dual coordinates)
  std::vector<Point> dual_vertices;  // its vertices behind each center
};

struct PartitionParams {
  double c = 1;       // t_i >= c * sqrt(n_i / s)
  double cell_factor = 4;  // cell cap of each round's cutting, in units of n_i / s
  std::uint64_t seed = 0;
};

struct PartitionClass {
  std::vector<std::int32_t> idx;  // indices into the input points
  PseudoTrapezoid trap;
};

struct TrapezoidalPartition {
  std::vector<PartitionClass> classes;
  std::int32_t s = 0;
  TestSet test;
};

// Points are canonical coordinates inside the point cell of the frame.
TestSet build_test_set(std::span<const Point> P, const CellPairFrame& f, double r,
                       const PartitionParams& params = {});
TrapezoidalPartition build_partition(std::span<const Point> P, const CellPairFrame& f, std::int32_t s,
                                     const PartitionParams& params = {});

// Number of classes of the partition whose trapezoid the arc about q crosses.
std::int32_t crossing_number(const TrapezoidalPartition& part, const CellPairFrame& f, Point q);

struct PartitionNode {
  PseudoTrapezoid trap;  // canonical
  std::int32_t count = 0;
  std::int32_t child_begin = 0;
  std::int32_t child_end = 0;
  std::int32_t pt_begin = 0;  // subtree points in PartitionTree::xs / ys
  std::int32_t pt_end = 0;
  bool leaf() const { return child_begin == child_end; }
};

struct TreeParams {
  std::int32_t n0 = 32;
  PartitionParams part;
};

struct QueryStats {
  std::uint64_t nodes = 0;
  std::uint64_t scanned = 0;
};

// Partition tree over the points of one cell pair. Points and queries are in
// input units; the frame lives in units of the radius.
struct PartitionTree {
  CellPairFrame frame;
  double radius = 1;
  double scale = 1;  // 1 / radius
  std::vector<PartitionNode> nodes;
  std::vector<double> xs;  // input units, subtree-contiguous
  std::vector<double> ys;
  std::vector<std::int32_t> ids;  // position of each stored point in the build input

  std::int32_t size() const { return static_cast<std::int32_t>(xs.size()); }
  std::int32_t height() const;
  Point local(Point world) const { return frame.to_local({world.x * scale, world.y * scale}); }
};

PartitionTree build_partition_tree(std::span<const Point> P, const CellPairFrame& f, double radius = 1,
                                   const TreeParams& params = {});
std::int64_t query_count(const PartitionTree& tree, Point q, Mode mode = Mode::inside,
                         QueryStats* stats = nullptr);

// Squared-distance count over a contiguous run of stored points.
std::int64_t scan_within(const double* xs, const double* ys, std::size_t n, Point q, double r2);

}  // namespace udrs
