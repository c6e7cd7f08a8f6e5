#include "udrs/partition.hpp"

#include <algorithm>
#include <cmath>

#include "udrs/kernels.hpp"

namespace udrs {

namespace {

bool point_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

HierarchicalCutting safe_cutting(const ArcSet& S, double t, CuttingParams cp) {
  cp.fallback_full = true;
  cp.max_children = 1024;
  try {
    return S.weighted() ? weighted_hierarchical_cutting(S, t, cp) : hierarchical_cutting(S, t, cp);
  } catch (const CuttingError&) {
    return S.weighted() ? weighted_hierarchical_cutting(S, 1, cp) : hierarchical_cutting(S, 1, cp);
  }
}

}  // namespace

std::int64_t scan_within(const double* xs, const double* ys, std::size_t n, Point q, double r2) {
  return static_cast<std::int64_t>(kernels::count_within(xs, ys, n, q.x, q.y, r2));
}

TestSet build_test_set(std::span<const Point> P, const CellPairFrame& f, double r,
                       const PartitionParams& params) {
  TestSet ts;
  ts.r = r;
  if (P.empty() || r < 1) return ts;
  const PseudoTrapezoid E = standard_enlarged();
  std::vector<Point> D;
  for (Point p : P) {
    Point d = f.to_dual(p);
    if (crosses_interior(d, E)) D.push_back(d);
  }
  Rng rng(params.seed);
  for (std::size_t i = D.size(); i > 1; --i) std::swap(D[i - 1], D[rng.below(i)]);

  // grow a random sample while its decomposition has at most r usable vertices
  const Square C = f.query_cell();
  auto usable = [&](const std::vector<PseudoTrapezoid>& cells) {
    std::vector<Point> v;
    for (const PseudoTrapezoid& t : cells) {
      Point q[4];
      t.corners(q);
      for (Point c : q)
        if (C.contains(f.from_dual(c), 1e-12)) v.push_back(c);
    }
    std::sort(v.begin(), v.end(), point_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<PseudoTrapezoid> cells{E};
  std::vector<Point> verts = usable(cells);
  for (std::size_t m = 1; m <= D.size(); ++m) {
    std::vector<PseudoTrapezoid> next = vertical_decomposition(E, std::span<const Point>(D.data(), m));
    std::vector<Point> v = usable(next);
    if (static_cast<double>(v.size()) > r) break;
    cells = std::move(next);
    verts = std::move(v);
    ts.t = static_cast<double>(m);
  }
  if (static_cast<double>(verts.size()) > r) verts.resize(static_cast<std::size_t>(r));

  ts.cells = std::move(cells);
  for (Point v : verts) {
    Point w = f.from_dual(v);
    w.x = std::clamp(w.x, C.lo.x, C.lo.x + kSide);
    w.y = std::clamp(w.y, C.lo.y, C.lo.y + kSide);
    ts.centers.push_back(w);
    ts.dual_vertices.push_back(v);
  }
  return ts;
}

TrapezoidalPartition build_partition(std::span<const Point> P, const CellPairFrame& f, std::int32_t s,
                                     const PartitionParams& params) {
  const auto n = static_cast<std::int32_t>(P.size());
  if (s < 2 || s >= n) throw PartitionError("class size out of range");
  TrapezoidalPartition part;
  part.s = s;
  std::vector<std::int32_t> U(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) U[static_cast<std::size_t>(i)] = i;
  if (n < 2 * s) {
    part.classes.push_back({U, standard_enlarged()});
    return part;
  }

  part.test = build_test_set(P, f, static_cast<double>(n) / s, params);
  const std::vector<Point>& Q = part.test.centers;
  std::vector<int> k(Q.size(), 0);

  for (std::uint64_t iter = 0; static_cast<std::int32_t>(U.size()) >= 2 * s; ++iter) {
    const double ni = static_cast<double>(U.size());
    ArcSet W;
    W.centers = Q;
    int kmax = Q.empty() ? 0 : *std::max_element(k.begin(), k.end());
    for (int kh : k) W.weights.push_back(std::ldexp(1.0, kh - kmax));
    CuttingParams cp;
    cp.seed = params.seed * 0x9E3779B97F4A7C15ULL + iter;
    cp.max_cells = static_cast<std::size_t>(params.cell_factor * ni / s);
    HierarchicalCutting hc = safe_cutting(W, std::max(1.0, params.c * std::sqrt(ni / s)), cp);

    // deepest level with a cell holding s uncovered points
    const int depth = hc.depth();
    std::vector<std::vector<std::int32_t>> path(U.size(), std::vector<std::int32_t>(static_cast<std::size_t>(depth) + 1));
    for (std::size_t u = 0; u < U.size(); ++u) {
      Point p = P[static_cast<std::size_t>(U[u])];
      std::int32_t c = 0;
      path[u][0] = 0;
      for (int l = 1; l <= depth; ++l) path[u][static_cast<std::size_t>(l)] = c = hc.child_containing(c, p);
    }
    std::int32_t best = 0;
    int lvl = 0;
    std::vector<std::int32_t> cnt(hc.cells.size(), 0);
    for (int l = depth; l >= 0; --l) {
      for (std::size_t u = 0; u < U.size(); ++u) ++cnt[static_cast<std::size_t>(path[u][static_cast<std::size_t>(l)])];
      std::int32_t top = -1;
      for (std::int32_t c : hc.levels[static_cast<std::size_t>(l)])
        if (top < 0 || cnt[static_cast<std::size_t>(c)] > cnt[static_cast<std::size_t>(top)]) top = c;
      if (cnt[static_cast<std::size_t>(top)] >= s) {
        best = top;
        lvl = l;
        break;
      }
    }

    PartitionClass cls;
    cls.trap = hc.cells[static_cast<std::size_t>(best)].trap;
    std::vector<std::int32_t> rest;
    rest.reserve(U.size());
    for (std::size_t u = 0; u < U.size(); ++u) {
      if (path[u][static_cast<std::size_t>(lvl)] == best && static_cast<std::int32_t>(cls.idx.size()) < s)
        cls.idx.push_back(U[u]);
      else
        rest.push_back(U[u]);
    }
    U.swap(rest);
    for (std::size_t h = 0; h < Q.size(); ++h)
      if (crosses_interior(Q[h], cls.trap)) ++k[h];
    part.classes.push_back(std::move(cls));
  }
  part.classes.push_back({U, standard_enlarged()});
  return part;
}

std::int32_t crossing_number(const TrapezoidalPartition& part, const CellPairFrame& f, Point q) {
  auto arc = clip_disk_boundary(q, f);
  if (!arc) return 0;
  std::int32_t n = 0;
  for (const PartitionClass& c : part.classes)
    if (classify_arc_vs_trapezoid(*arc, c.trap) == ArcCell::crosses) ++n;
  return n;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const Point> P, const CellPairFrame& f, double radius, const TreeParams& prm)
      : P_(P), prm_(prm) {
    t_.frame = f;
    t_.radius = radius;
    t_.scale = 1.0 / radius;
    L_.reserve(P.size());
    for (Point p : P) L_.push_back(t_.local(p));
  }

  PartitionTree run() {
    std::vector<std::int32_t> all(P_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
    PartitionNode root;
    root.trap = standard_enlarged();
    root.count = static_cast<std::int32_t>(all.size());
    t_.nodes.push_back(root);
    build(0, all);
    return std::move(t_);
  }

 private:
  void build(std::int32_t v, const std::vector<std::int32_t>& idx) {
    t_.nodes[static_cast<std::size_t>(v)].pt_begin = t_.size();
    const auto n = static_cast<std::int32_t>(idx.size());
    if (n <= prm_.n0) {
      for (std::int32_t i : idx) {
        t_.xs.push_back(P_[static_cast<std::size_t>(i)].x);
        t_.ys.push_back(P_[static_cast<std::size_t>(i)].y);
        t_.ids.push_back(i);
      }
      t_.nodes[static_cast<std::size_t>(v)].pt_end = t_.size();
      return;
    }
    std::vector<Point> loc;
    loc.reserve(idx.size());
    for (std::int32_t i : idx) loc.push_back(L_[static_cast<std::size_t>(i)]);
    PartitionParams pp = prm_.part;
    pp.seed = prm_.part.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(v);
    auto s = static_cast<std::int32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    TrapezoidalPartition part = build_partition(loc, t_.frame, s, pp);

    auto first = static_cast<std::int32_t>(t_.nodes.size());
    for (const PartitionClass& c : part.classes) {
      PartitionNode ch;
      ch.trap = c.trap;
      ch.count = static_cast<std::int32_t>(c.idx.size());
      t_.nodes.push_back(ch);
    }
    t_.nodes[static_cast<std::size_t>(v)].child_begin = first;
    t_.nodes[static_cast<std::size_t>(v)].child_end = static_cast<std::int32_t>(t_.nodes.size());
    for (std::size_t c = 0; c < part.classes.size(); ++c) {
      std::vector<std::int32_t> sub;
      sub.reserve(part.classes[c].idx.size());
      for (std::int32_t j : part.classes[c].idx) sub.push_back(idx[static_cast<std::size_t>(j)]);
      build(first + static_cast<std::int32_t>(c), sub);
    }
    t_.nodes[static_cast<std::size_t>(v)].pt_end = t_.size();
  }

  std::span<const Point> P_;
  TreeParams prm_;
  std::vector<Point> L_;
  PartitionTree t_;
};

}  // namespace

std::int32_t PartitionTree::height() const {
  if (nodes.empty()) return 0;
  std::int32_t h = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> st{{0, 0}};
  while (!st.empty()) {
    auto [v, d] = st.back();
    st.pop_back();
    h = std::max(h, d);
    const PartitionNode& nd = nodes[static_cast<std::size_t>(v)];
    for (std::int32_t c = nd.child_begin; c < nd.child_end; ++c) st.push_back({c, d + 1});
  }
  return h;
}

PartitionTree build_partition_tree(std::span<const Point> P, const CellPairFrame& f, double radius,
                                   const TreeParams& params) {
  if (!(radius > 0) || !std::isfinite(radius)) throw GeomError("radius must be positive");
  for (Point p : P) require_finite(p);
  return TreeBuilder(P, f, radius, params).run();
}

std::int64_t query_count(const PartitionTree& tree, Point q, Mode mode, QueryStats* stats) {
  require_finite(q);
  const Point ql = tree.local(q);
  if (!tree.frame.query_cell().contains(ql, 1e-9)) throw GeomError("query center outside the query cell");
  const double r2 = tree.radius * tree.radius;
  std::int64_t inside = 0, outside = 0;
  std::vector<std::int32_t> st;
  if (!tree.nodes.empty() && tree.nodes[0].count > 0) st.push_back(0);
  while (!st.empty()) {
    const PartitionNode& nd = tree.nodes[static_cast<std::size_t>(st.back())];
    st.pop_back();
    if (stats) ++stats->nodes;
    Rel rel = relate_safe(ql, nd.trap);
    if (rel == Rel::contains) {
      inside += nd.count;
    } else if (rel == Rel::disjoint) {
      outside += nd.count;
    } else if (nd.leaf()) {
      auto len = static_cast<std::size_t>(nd.pt_end - nd.pt_begin);
      std::int64_t in = scan_within(tree.xs.data() + nd.pt_begin, tree.ys.data() + nd.pt_begin, len, q, r2);
      if (stats) stats->scanned += len;
      inside += in;
      outside += static_cast<std::int64_t>(len) - in;
    } else {
      for (std::int32_t c = nd.child_begin; c < nd.child_end; ++c)
        if (tree.nodes[static_cast<std::size_t>(c)].count > 0) st.push_back(c);
    }
  }
  return mode == Mode::inside ? inside : outside;
}

}  // namespace udrs
