#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "udrs/cutting.hpp"
#include "udrs/partition.hpp"

namespace udrs {

struct Check {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"grid", "cutting", "partition", "query", "tradeoff", "batched", "distsel"};
  return s;
}

// Runs one suite (or "all"); throws std::invalid_argument on an unknown name.
std::vector<Check> run_verify(const std::string& suite, std::size_t n, std::uint64_t seed);

// Shared invariant checks, also used by the tests.
struct CuttingAudit {
  bool crossing_ok = true;     // |H| <= bound on every level, recounted
  bool lists_exact = true;     // stored lists equal the recount
  bool cover_ok = true;        // each sample lies in exactly one cell per level
  bool nesting_ok = true;      // children inside their parent
  double worst_ratio = 0;      // max |H| / bound
};
CuttingAudit audit_cutting(const HierarchicalCutting& hc, std::size_t samples, std::uint64_t seed);

struct PartitionAudit {
  bool sizes_ok = true;
  bool disjoint_union = true;
  bool inside_ok = true;  // every point inside its class trapezoid
  std::int32_t max_crossing = 0;
  double bound = 0;
};
PartitionAudit audit_partition(const TrapezoidalPartition& part, std::span<const Point> P, const CellPairFrame& f,
                               std::size_t probes, std::uint64_t seed);

// Points uniform in the point cell and centers uniform in the query cell of f
// (canonical coordinates).
std::vector<Point> random_in_point_cell(std::size_t n, Rng& rng);
std::vector<Point> random_in_query_cell(const CellPairFrame& f, std::size_t n, Rng& rng);

}  // namespace udrs
