#include "udrs/global.hpp"

#include <algorithm>
#include <cmath>

namespace udrs {

double pair_r(double r, std::size_t n) {
  double nn = static_cast<double>(n);
  double cap = n < 4 ? 1.0 : nn / (std::log2(nn) * std::log2(nn));
  return std::clamp(cap, 1.0, std::max(1.0, r));
}

GlobalIndex compose_global(const std::vector<Point>& P, double radius, const GlobalParams& params) {
  GlobalIndex g;
  g.params = params;
  g.grid = build_grid(P, radius);
  const GridIndex& G = g.grid;
  for (Point p : G.orig) {
    g.xs.push_back(p.x);
    g.ys.push_back(p.y);
  }
  g.box_lo.assign(G.cells.size(), {INFINITY, INFINITY});
  g.box_hi.assign(G.cells.size(), {-INFINITY, -INFINITY});
  for (std::size_t c = 0; c < G.cells.size(); ++c)
    for (std::int32_t i = G.cells[c].pt_begin; i < G.cells[c].pt_end; ++i) {
      Point p = G.orig[static_cast<std::size_t>(i)];
      g.box_lo[c] = {std::min(g.box_lo[c].x, p.x), std::min(g.box_lo[c].y, p.y)};
      g.box_hi[c] = {std::max(g.box_hi[c].x, p.x), std::max(g.box_hi[c].y, p.y)};
    }

  g.pair.assign(G.nbrs.size(), -1);
  for (std::size_t c = 0; c < G.cells.size(); ++c) {
    const GridCell& C = G.cells[c];
    for (std::int32_t k = C.nb_begin; k < C.nb_end; ++k) {
      std::int32_t cp = G.nbrs[static_cast<std::size_t>(k)];
      if (cp == static_cast<std::int32_t>(c)) continue;
      const GridCell& Cp = G.cells[static_cast<std::size_t>(cp)];
      CellPairFrame f = make_frame(G.cell_square(static_cast<std::int32_t>(c)), G.cell_square(cp));
      std::vector<Point> pts(G.orig.begin() + Cp.pt_begin, G.orig.begin() + Cp.pt_end);
      std::uint64_t seed = params.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k);
      if (params.kind == StructureKind::partition_tree) {
        TreeParams tp = params.tree;
        tp.part.seed = seed;
        g.pair[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(g.trees.size());
        g.trees.push_back(build_partition_tree(pts, f, radius, tp));
      } else {
        TradeoffParams tp;
        tp.tree = params.tree;
        tp.seed = seed;
        g.pair[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(g.tradeoffs.size());
        g.tradeoffs.push_back(build_tradeoff(pts, f, radius, pair_r(params.r, pts.size()), tp));
      }
    }
  }
  return g;
}

std::int64_t same_cell_count(const GlobalIndex& g, std::int32_t cell, Point q) {
  const GridCell& C = g.grid.cells[static_cast<std::size_t>(cell)];
  if (C.size() == 0) return 0;
  const double r2 = g.grid.radius * g.grid.radius;
  Point lo = g.box_lo[static_cast<std::size_t>(cell)], hi = g.box_hi[static_cast<std::size_t>(cell)];
  double fx = std::max(q.x - lo.x, hi.x - q.x);
  double fy = std::max(q.y - lo.y, hi.y - q.y);
  if (fx * fx + fy * fy <= r2 * (1 - 4e-9)) return C.size();
  return scan_within(g.xs.data() + C.pt_begin, g.ys.data() + C.pt_begin, static_cast<std::size_t>(C.size()), q, r2);
}

std::int64_t query_global(const GlobalIndex& g, Point q, Mode mode, QueryStats* stats) {
  require_finite(q);
  std::int64_t in = 0;
  if (auto c = g.grid.locate_world(q)) {
    const GridCell& C = g.grid.cells[static_cast<std::size_t>(*c)];
    for (std::int32_t k = C.nb_begin; k < C.nb_end; ++k) {
      std::int32_t s = g.pair[static_cast<std::size_t>(k)];
      if (s < 0)
        in += same_cell_count(g, *c, q);
      else if (g.params.kind == StructureKind::partition_tree)
        in += query_count(g.trees[static_cast<std::size_t>(s)], q, Mode::inside, stats);
      else
        in += query_tradeoff(g.tradeoffs[static_cast<std::size_t>(s)], q, Mode::inside, stats);
    }
  }
  return mode == Mode::inside ? in : g.size() - in;
}

}  // namespace udrs
