#include "udrs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "udrs/batched.hpp"
#include "udrs/distsel.hpp"
#include "udrs/global.hpp"
#include "udrs/grid.hpp"
#include "udrs/io.hpp"
#include "udrs/oracle.hpp"
#include "udrs/tradeoff.hpp"

namespace udrs {

std::vector<Point> random_in_point_cell(std::size_t n, Rng& rng) {
  std::vector<Point> P(n);
  for (Point& p : P) p = {rng.uniform() * kSide, rng.uniform() * kSide};
  return P;
}

std::vector<Point> random_in_query_cell(const CellPairFrame& f, std::size_t n, Rng& rng) {
  Square C = f.query_cell();
  std::vector<Point> Q(n);
  for (Point& q : Q) q = {C.lo.x + rng.uniform() * kSide, C.lo.y + rng.uniform() * kSide};
  return Q;
}

namespace {

Point sample_in(const PseudoTrapezoid& t, Rng& rng) {
  double ymax = -INFINITY, ymin = INFINITY;
  for (int i = 0; i <= 8; ++i) {
    double x = t.x_lo + (t.x_hi - t.x_lo) * i / 8;
    ymax = std::max(ymax, t.top.eval(x));
    ymin = std::min(ymin, t.bottom.eval(x));
  }
  ymax += 0.01;
  for (;;) {
    Point p{rng.uniform(t.x_lo, t.x_hi), rng.uniform(ymin, ymax)};
    if (p.y < t.top.eval(p.x) && p.y > t.bottom.eval(p.x)) return p;
  }
}

}  // namespace

CuttingAudit audit_cutting(const HierarchicalCutting& hc, std::size_t samples, std::uint64_t seed) {
  CuttingAudit a;
  const std::vector<Point>& A = hc.arcs.centers;
  for (int lv = 0; lv <= hc.depth(); ++lv) {
    double bound = hc.bound(lv);
    for (std::int32_t c : hc.levels[static_cast<std::size_t>(lv)]) {
      const CutCell& cc = hc.cells[static_cast<std::size_t>(c)];
      std::vector<std::int32_t> rec;
      double w = 0;
      for (std::size_t i = 0; i < A.size(); ++i)
        if (crosses_interior(A[i], cc.trap)) {
          rec.push_back(static_cast<std::int32_t>(i));
          w += hc.arcs.weight(i);
        }
      auto H = hc.H(c);
      std::vector<std::int32_t> stored(H.begin(), H.end());
      std::sort(stored.begin(), stored.end());
      if (stored != rec) a.lists_exact = false;
      if (w > bound * (1 + 1e-12) + 1e-12) a.crossing_ok = false;
      if (bound > 0) a.worst_ratio = std::max(a.worst_ratio, w / bound);
      if (cc.parent >= 0) {
        const PseudoTrapezoid& par = hc.cells[static_cast<std::size_t>(cc.parent)].trap;
        Point q[4];
        cc.trap.corners(q);
        for (Point p : q)
          if (!par.contains(p, 1e-9)) a.nesting_ok = false;
        double xm = (cc.trap.x_lo + cc.trap.x_hi) / 2;
        Point mid{xm, (cc.trap.top.eval(xm) + cc.trap.bottom.eval(xm)) / 2};
        if (!par.contains(mid, 1e-9)) a.nesting_ok = false;
      }
    }
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    // with nesting, only children of the cells hit one level up can be hit
    Point p = sample_in(hc.cells[0].trap, rng);
    std::vector<std::int32_t> hit{0}, next;
    for (int lv = 1; lv <= hc.depth() && a.cover_ok; ++lv) {
      next.clear();
      for (std::int32_t c : hit)
        for (std::int32_t k = hc.cells[static_cast<std::size_t>(c)].child_begin;
             k < hc.cells[static_cast<std::size_t>(c)].child_end; ++k)
          if (hc.cells[static_cast<std::size_t>(k)].trap.violation(p) <= 0) next.push_back(k);
      if (next.size() != 1) a.cover_ok = false;
      hit.swap(next);
    }
  }
  return a;
}

PartitionAudit audit_partition(const TrapezoidalPartition& part, std::span<const Point> P, const CellPairFrame& f,
                               std::size_t probes, std::uint64_t seed) {
  PartitionAudit a;
  std::vector<int> seen(P.size(), 0);
  for (std::size_t c = 0; c < part.classes.size(); ++c) {
    const PartitionClass& cl = part.classes[c];
    auto sz = static_cast<std::int32_t>(cl.idx.size());
    if (sz < part.s || sz >= 2 * part.s) a.sizes_ok = false;
    for (std::int32_t i : cl.idx) {
      ++seen[static_cast<std::size_t>(i)];
      if (!cl.trap.contains(P[static_cast<std::size_t>(i)], 1e-12)) a.inside_ok = false;
    }
  }
  for (int s : seen)
    if (s != 1) a.disjoint_union = false;
  for (Point q : part.test.centers) a.max_crossing = std::max(a.max_crossing, crossing_number(part, f, q));
  Rng rng(seed);
  for (Point q : random_in_query_cell(f, probes, rng)) a.max_crossing = std::max(a.max_crossing, crossing_number(part, f, q));
  a.bound = 8 * std::sqrt(static_cast<double>(P.size()) / part.s);
  return a;
}

namespace {

class Table {
 public:
  Table(std::vector<Check>& out, std::string suite) : out_(out), suite_(std::move(suite)) {}
  void add(const std::string& name, bool pass, const std::string& detail = {}) {
    out_.push_back({suite_, name, pass, detail});
  }

 private:
  std::vector<Check>& out_;
  std::string suite_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

double side_for(std::size_t n) { return std::max(2.0, std::sqrt(static_cast<double>(n) / 64.0) * 2); }

void suite_grid(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "grid");
  for (Dist d : {Dist::uniform, Dist::clustered}) {
    const char* dn = d == Dist::uniform ? "uniform" : "clustered";
    double L = side_for(n);
    auto P = generate(n, d, {0, 0, L, L}, seed);
    GridIndex g = build_grid(P, 1.0);
    bool inside = true, part = true, cover = true;
    std::vector<int> seen(n, 0);
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
      Square sq = g.cell_square(static_cast<std::int32_t>(c));
      for (std::int32_t i = g.cells[c].pt_begin; i < g.cells[c].pt_end; ++i) {
        if (!sq.contains(g.pts[static_cast<std::size_t>(i)], 1e-9)) inside = false;
        ++seen[static_cast<std::size_t>(g.ids[static_cast<std::size_t>(i)])];
      }
    }
    for (int s : seen) part = part && s == 1;
    Rng rng(seed + 1);
    for (int k = 0; k < 200; ++k) {
      Point q{rng.uniform(-1, L + 1), rng.uniform(-1, L + 1)};
      std::int64_t want = oracle::brute_count(P, q, 1.0), got = 0;
      if (auto c = g.locate_world(q)) {
        const GridCell& C = g.cells[static_cast<std::size_t>(*c)];
        for (std::int32_t j = C.nb_begin; j < C.nb_end; ++j) {
          const GridCell& Cp = g.cells[static_cast<std::size_t>(g.nbrs[static_cast<std::size_t>(j)])];
          for (std::int32_t i = Cp.pt_begin; i < Cp.pt_end; ++i)
            if (point_in_disk(g.orig[static_cast<std::size_t>(i)], q)) ++got;
        }
      }
      if (got != want) cover = false;
    }
    t.add(std::string("points inside their cells (") + dn + ")", inside);
    t.add(std::string("cells partition the points (") + dn + ")", part);
    t.add(std::string("neighbourhoods cover every disk (") + dn + ")", cover);
  }
}

void suite_cutting(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "cutting");
  CellPairFrame f = make_frame_offset({0, -kSide}, 1, 0);
  std::size_t m = std::min<std::size_t>(n, 512);
  for (double r : {4.0, 8.0, 16.0}) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    ArcSet S;
    S.centers = random_in_query_cell(f, m, rng);
    CuttingParams cp;
    cp.seed = seed;
    HierarchicalCutting hc = hierarchical_cutting(S, r, cp);
    CuttingAudit a = audit_cutting(hc, 2000, seed);
    std::string tag = " (r=" + fmt(r) + ")";
    t.add("crossing bound per level" + tag, a.crossing_ok, "worst ratio " + fmt(a.worst_ratio));
    t.add("crossing lists exact" + tag, a.lists_exact);
    t.add("levels cover the cell once" + tag, a.cover_ok);
    t.add("children nest in parents" + tag, a.nesting_ok);
    t.add("children per cell <= 64" + tag, hc.c_max <= 64, "c_max " + fmt(hc.c_max));

    ArcSet W = S;
    for (std::size_t i = 0; i < W.size(); ++i) W.weights.push_back(std::ldexp(1.0, static_cast<int>(i % 4)));
    HierarchicalCutting wc = weighted_hierarchical_cutting(W, r, cp);
    CuttingAudit wa = audit_cutting(wc, 1000, seed + 1);
    t.add("weighted crossing bound" + tag, wa.crossing_ok && wa.lists_exact && wa.cover_ok && wa.nesting_ok,
          "worst ratio " + fmt(wa.worst_ratio));
  }
}

void suite_partition(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "partition");
  CellPairFrame f = make_frame_offset({0, -kSide}, 1, 0);
  std::size_t m = std::min<std::size_t>(n, 2048);
  Rng rng(seed);
  auto P = random_in_point_cell(m, rng);
  for (std::int32_t s : {16, 64}) {
    if (static_cast<std::size_t>(2 * s) > m) continue;
    PartitionParams pp;
    pp.seed = seed;
    TrapezoidalPartition part = build_partition(P, f, s, pp);
    PartitionAudit a = audit_partition(part, P, f, 2000, seed + 3);
    std::string tag = " (s=" + fmt(s) + ")";
    t.add("class sizes in [s, 2s)" + tag, a.sizes_ok);
    t.add("classes partition the points" + tag, a.disjoint_union);
    t.add("points inside their trapezoids" + tag, a.inside_ok);
    t.add("crossing number <= 8 sqrt(n/s)" + tag, a.max_crossing <= a.bound,
          fmt(a.max_crossing) + " vs " + fmt(a.bound));
  }
  PartitionTree tree = build_partition_tree(P, f);
  double bound = 2 * std::log2(std::log2(static_cast<double>(m))) + 4;
  t.add("tree height", tree.height() <= bound, fmt(tree.height()) + " vs " + fmt(bound));
  bool counts = true;
  for (const PartitionNode& nd : tree.nodes) counts = counts && nd.count == nd.pt_end - nd.pt_begin;
  t.add("stored counts match subtrees", counts && tree.size() == static_cast<std::int32_t>(m));
  bool exact = true;
  for (Point q : random_in_query_cell(f, 300, rng))
    for (Mode md : {Mode::inside, Mode::outside})
      exact = exact && query_count(tree, q, md) == oracle::brute_count(P, q, 1.0, md);
  t.add("tree queries match brute force", exact);
}

void global_checks(Table& t, const std::string& tag, std::size_t n, std::uint64_t seed, const GlobalParams& gp) {
  for (Dist d : {Dist::uniform, Dist::clustered}) {
    const char* dn = d == Dist::uniform ? "uniform" : "clustered";
    double L = side_for(n);
    auto P = generate(n, d, {0, 0, L, L}, seed);
    GlobalIndex g = compose_global(P, 1.0, gp);
    Rng rng(seed + 11);
    bool exact = true, conserve = true;
    for (int k = 0; k < 300; ++k) {
      Point q{rng.uniform(-1, L + 1), rng.uniform(-1, L + 1)};
      std::int64_t in = query_global(g, q, Mode::inside), outc = query_global(g, q, Mode::outside);
      exact = exact && in == oracle::brute_count(P, q, 1.0) && outc == oracle::brute_count(P, q, 1.0, Mode::outside);
      conserve = conserve && in + outc == static_cast<std::int64_t>(n);
    }
    t.add(tag + " matches brute force (" + dn + ")", exact);
    t.add(tag + " inside + outside = n (" + dn + ")", conserve);
    GlobalIndex back = deserialize_index(serialize_index(g));
    bool same = true;
    for (int k = 0; k < 200; ++k) {
      Point q{rng.uniform(-1, L + 1), rng.uniform(-1, L + 1)};
      same = same && query_global(back, q) == query_global(g, q);
    }
    t.add(tag + " survives save and load (" + dn + ")", same);
  }
}

void suite_query(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "query");
  GlobalParams gp;
  gp.seed = seed;
  global_checks(t, "partition-tree index", n, seed, gp);
}

void suite_tradeoff(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "tradeoff");
  for (double r : {1.0, 4.0}) {
    GlobalParams gp;
    gp.kind = StructureKind::tradeoff;
    gp.r = r;
    gp.seed = seed;
    global_checks(t, "trade-off index r=" + fmt(r), n, seed, gp);
  }
  CellPairFrame f = make_frame_offset({0, -kSide}, 1, 0);
  Rng rng(seed);
  auto P = random_in_point_cell(std::min<std::size_t>(n, 1024), rng);
  TradeoffParams tp;
  tp.keep_lists = true;
  tp.seed = seed;
  TradeoffIndex idx = build_tradeoff(P, f, 1.0, 8, tp);
  bool split = true;
  const HierarchicalCutting& hc = idx.cut;
  for (std::size_t c = 1; c < hc.cells.size(); ++c) {
    auto par = static_cast<std::int32_t>(hc.cells[c].parent);
    auto lp = idx.list(par);
    auto lc = idx.list(static_cast<std::int32_t>(c));
    std::vector<std::int32_t> child(lc.begin(), lc.end());
    std::sort(child.begin(), child.end());
    std::int32_t h1 = 0, h2 = 0;
    for (std::int32_t p : lp) {
      bool in_child = std::binary_search(child.begin(), child.end(), p);
      Rel rel = relate_safe(idx.dual(P[static_cast<std::size_t>(p)]), hc.cells[c].trap);
      if (in_child != (rel == Rel::crosses)) split = false;
      if (rel == Rel::contains) ++h1;
      if (rel == Rel::disjoint) ++h2;
    }
    const TradeoffCell& tc = idx.cells[c];
    if (tc.h1 != h1 || tc.h2 != h2 || static_cast<std::size_t>(h1 + h2) + child.size() != lp.size()) split = false;
  }
  t.add("canonical subsets split every parent list", split);
}

void suite_batched(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "batched");
  double L = std::max(2.0, std::sqrt(static_cast<double>(n) / 256.0) * 2);
  for (Dist d : {Dist::uniform, Dist::clustered}) {
    const char* dn = d == Dist::uniform ? "uniform" : "clustered";
    auto P = generate(n, d, {0, 0, L, L}, seed);
    auto Q = generate(n, d, {0, 0, L, L}, seed + 1);
    auto ref = oracle::brute_batched(P, Q, 1.0);
    t.add(std::string("primal-dual counts (") + dn + ")", batched_count(P, Q, 1.0).counts == ref);
    t.add(std::string("chi-sensitive counts (") + dn + ")", batched_count_chi(P, Q, 1.0).counts == ref);
    t.add(std::string("circle intersections (") + dn + ")",
          count_circle_intersections(P, 0.5) == oracle::brute_circle_pairs(P, 0.5));
    auto S = batched_count(P, P, 1.0).counts;
    std::int64_t sum = std::accumulate(S.begin(), S.end(), std::int64_t{0});
    t.add(std::string("self-incidence identity (") + dn + ")",
          (sum - static_cast<std::int64_t>(n)) / 2 == oracle::brute_pairs_within(P, 1.0));
  }
  Rng rng(seed + 5);
  bool ud = true;
  for (int k = 0; k < 10; ++k) {
    auto P = generate(std::min<std::size_t>(n, 256), Dist::uniform, {0, 0, 20, 20}, seed + 100 + static_cast<std::uint64_t>(k));
    if (k % 2 == 0) {
      double a = rng.uniform(0, 6.283185307179586);
      P.push_back({P[0].x + std::cos(a), P[0].y + std::sin(a)});
      P.push_back({P[1].x + 1, P[1].y});
    }
    ud = ud && unit_distance_detect(P).exists == oracle::brute_unit_distance(P);
  }
  t.add("unit-distance detection", ud);
}

void suite_distsel(std::vector<Check>& out, std::size_t n, std::uint64_t seed) {
  Table t(out, "distsel");
  std::size_t m = std::min<std::size_t>(n, 300);
  auto P = generate(m, Dist::uniform, {0, 0, 10, 10}, seed);
  Rng rng(seed);
  std::int64_t N = static_cast<std::int64_t>(m * (m - 1) / 2);
  bool sel = true, rank = true;
  for (int k = 0; k < 10; ++k) {
    std::int64_t kk = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N)));
    double v = select_distance(P, kk, rng);
    sel = sel && v == oracle::brute_kth_distance(P, kk);
    rank = rank && count_pairs_within(P, v * (1 + 1e-12)) >= kk && count_pairs_within(P, v * (1 - 1e-9)) < kk;
  }
  t.add("selection equals sorted distances", sel);
  t.add("rank brackets the answer", rank);
  bool mono = true;
  std::int64_t k = N / 3 + 1;
  bool prev = false;
  for (double lam = 0.25; lam <= 16; lam *= 1.5) {
    bool d = decide(P, lam, k);
    if (prev && !d) mono = false;
    prev = d;
  }
  t.add("decide is monotone in lambda", mono);
  bool pairs = true;
  for (double lam : {0.5, 1.0, 2.5}) pairs = pairs && count_pairs_within(P, lam) == oracle::brute_pairs_within(P, lam);
  t.add("pair counts match brute force", pairs);
}

}  // namespace

std::vector<Check> run_verify(const std::string& suite, std::size_t n, std::uint64_t seed) {
  std::vector<Check> out;
  bool all = suite == "all";
  bool known = all;
  auto want = [&](const char* s) {
    bool w = all || suite == s;
    known = known || w;
    return w;
  };
  if (want("grid")) suite_grid(out, n, seed);
  if (want("cutting")) suite_cutting(out, n, seed);
  if (want("partition")) suite_partition(out, n, seed);
  if (want("query")) suite_query(out, n, seed);
  if (want("tradeoff")) suite_tradeoff(out, n, seed);
  if (want("batched")) suite_batched(out, n, seed);
  if (want("distsel")) suite_distsel(out, n, seed);
  if (!known) throw std::invalid_argument("unknown suite " + suite);
  return out;
}

}  // namespace udrs
