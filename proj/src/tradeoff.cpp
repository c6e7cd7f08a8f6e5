#include "udrs/tradeoff.hpp"

#include <cmath>

namespace udrs {

TradeoffIndex build_tradeoff(std::span<const Point> P, const CellPairFrame& f, double radius, double r,
                             const TradeoffParams& params) {
  if (!(radius > 0) || !std::isfinite(radius)) throw GeomError("radius must be positive");
  TradeoffIndex idx;
  idx.frame = f;
  idx.radius = radius;
  idx.scale = 1.0 / radius;
  idx.r = std::max(1.0, r);
  std::vector<Point> D;
  D.reserve(P.size());
  for (Point p : P) {
    require_finite(p);
    idx.xs.push_back(p.x);
    idx.ys.push_back(p.y);
    D.push_back(idx.dual(p));
  }

  ArcSet S;
  S.centers = D;
  CuttingParams cp;
  cp.seed = params.seed;
  cp.fallback_full = true;
  cp.max_children = 1024;
  idx.cut = hierarchical_cutting(S, idx.r, cp);
  const HierarchicalCutting& hc = idx.cut;
  idx.cells.assign(hc.cells.size(), {});

  // conservative lists, level by level
  std::vector<std::vector<std::int32_t>> L(hc.cells.size());
  auto classify = [&](std::int32_t c, const std::vector<std::int32_t>& from) {
    TradeoffCell& tc = idx.cells[static_cast<std::size_t>(c)];
    const PseudoTrapezoid& t = hc.cells[static_cast<std::size_t>(c)].trap;
    for (std::int32_t p : from) {
      Rel rel = relate_safe(D[static_cast<std::size_t>(p)], t);
      if (rel == Rel::contains)
        ++tc.h1;
      else if (rel == Rel::disjoint)
        ++tc.h2;
      else
        L[static_cast<std::size_t>(c)].push_back(p);
    }
  };
  std::vector<std::int32_t> all(P.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
  classify(0, all);
  for (std::size_t lv = 1; lv < hc.levels.size(); ++lv)
    for (std::int32_t c : hc.levels[lv]) classify(c, L[static_cast<std::size_t>(hc.cells[static_cast<std::size_t>(c)].parent)]);

  for (std::int32_t c : hc.leaves()) {
    const std::vector<std::int32_t>& l = L[static_cast<std::size_t>(c)];
    if (l.empty()) continue;
    std::vector<Point> sub;
    sub.reserve(l.size());
    for (std::int32_t p : l) sub.push_back(P[static_cast<std::size_t>(p)]);
    TreeParams tp = params.tree;
    tp.part.seed = params.tree.part.seed + static_cast<std::uint64_t>(c);
    idx.cells[static_cast<std::size_t>(c)].tree = static_cast<std::int32_t>(idx.trees.size());
    idx.trees.push_back(build_partition_tree(sub, f, radius, tp));
  }
  if (params.keep_lists)
    for (std::size_t c = 0; c < L.size(); ++c) {
      idx.cells[c].l_begin = static_cast<std::int32_t>(idx.lists.size());
      idx.lists.insert(idx.lists.end(), L[c].begin(), L[c].end());
      idx.cells[c].l_end = static_cast<std::int32_t>(idx.lists.size());
    }
  return idx;
}

std::int64_t query_tradeoff(const TradeoffIndex& idx, Point q, Mode mode, QueryStats* stats) {
  require_finite(q);
  const Point ql = idx.frame.to_local({q.x * idx.scale, q.y * idx.scale});
  if (!idx.frame.query_cell().contains(ql, 1e-9)) throw GeomError("query center outside the query cell");
  const Point dq = idx.frame.to_dual(ql);
  const HierarchicalCutting& hc = idx.cut;
  std::int64_t acc = 0;
  std::int32_t c = 0;
  for (;;) {
    if (stats) ++stats->nodes;
    const TradeoffCell& tc = idx.cells[static_cast<std::size_t>(c)];
    acc += mode == Mode::inside ? tc.h1 : tc.h2;
    const CutCell& cc = hc.cells[static_cast<std::size_t>(c)];
    if (cc.child_begin == cc.child_end) break;
    c = hc.child_containing(c, dq);
    if (hc.cells[static_cast<std::size_t>(c)].trap.violation(dq) > 1e-10) {
      // lost in the hierarchy; count directly
      auto n = static_cast<std::size_t>(idx.size());
      std::int64_t in = scan_within(idx.xs.data(), idx.ys.data(), n, q, idx.radius * idx.radius);
      if (stats) stats->scanned += n;
      return mode == Mode::inside ? in : static_cast<std::int64_t>(n) - in;
    }
  }
  const TradeoffCell& leaf = idx.cells[static_cast<std::size_t>(c)];
  if (leaf.tree >= 0) acc += query_count(idx.trees[static_cast<std::size_t>(leaf.tree)], q, mode, stats);
  return acc;
}

}  // namespace udrs
