#include "udrs/batched.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "udrs/cutting.hpp"
#include "udrs/grid.hpp"
#include "udrs/kernels.hpp"

namespace udrs {

namespace {

using Ids = std::vector<std::int32_t>;

constexpr double kLost = 1e-10;
constexpr int kMaxChildren = 1024;

// Counting between the points of C' and the query centers of C, in the
// canonical frame of the pair.
class PairSolver {
 public:
  PairSolver(const CellPairFrame& f, const std::vector<Point>& pc, const std::vector<Point>& po,
             const std::vector<Point>& qc, const std::vector<Point>& qo, double r2, const BatchParams& prm,
             BatchStats& st, std::int64_t* out)
      : pc_(pc), po_(po), qc_(qc), qo_(qo), r2_(r2), prm_(prm), st_(st), out_(out) {
    pd_.reserve(pc.size());
    for (Point p : pc) pd_.push_back(f.to_dual(p));
    qd_.reserve(qc.size());
    for (Point q : qc) qd_.push_back(f.to_dual(q));
  }

  void solve(const Ids& pi, const Ids& qi, int depth, bool last_dual) {
    const double n = static_cast<double>(pi.size()), m = static_cast<double>(qi.size());
    if (pi.empty() || qi.empty()) return;
    st_.depth = std::max(st_.depth, depth);
    if (pi.size() + qi.size() <= prm_.base || std::min(pi.size(), qi.size()) <= prm_.small ||
        depth >= prm_.max_depth) {
      brute(pi, qi);
      return;
    }
    if (m >= n * n)
      step(pi, qi, false, n, depth);
    else if (n >= m * m)
      step(pi, qi, true, m, depth);
    else if (m >= prm_.r0 * n)
      step(pi, qi, false, m / n, depth);
    else if (n >= prm_.r0 * m)
      step(pi, qi, true, n / m, depth);
    else
      step(pi, qi, last_dual, prm_.r0, depth);
  }

  void brute(const Ids& pi, const Ids& qi) {
    ++st_.base_cases;
    st_.base_pairs += pi.size() * qi.size();
    st_.ops += pi.size() * qi.size();
    st_.max_base = std::max<std::uint64_t>(st_.max_base, pi.size() + qi.size());
    xs_.resize(pi.size());
    ys_.resize(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) {
      xs_[i] = po_[static_cast<std::size_t>(pi[i])].x;
      ys_[i] = po_[static_cast<std::size_t>(pi[i])].y;
    }
    for (std::int32_t q : qi) {
      Point c = qo_[static_cast<std::size_t>(q)];
      out_[q] += static_cast<std::int64_t>(kernels::count_within(xs_.data(), ys_.data(), pi.size(), c.x, c.y, r2_));
    }
  }

  // One step with a cutting of the query arcs (primal) or the point duals.
  void step(const Ids& pi, const Ids& qi, bool primal, double r, int depth) {
    const Ids& arcs = primal ? qi : pi;
    ArcSet S;
    S.centers.reserve(arcs.size());
    for (std::int32_t a : arcs) S.centers.push_back(primal ? qc_[static_cast<std::size_t>(a)] : pd_[static_cast<std::size_t>(a)]);
    CuttingParams cp;
    cp.seed = prm_.seed + st_.cells;
    cp.fallback_full = true;
    cp.max_children = kMaxChildren;
    HierarchicalCutting hc = hierarchical_cutting(S, std::max(1.0, r), cp);
    const double located = static_cast<double>(primal ? pi.size() : qi.size());
    auto chunk = static_cast<std::size_t>(std::max(1.0, std::ceil(located / (r * r))));
    descend(hc, pi, qi, primal, chunk, depth);
  }

  void descend(const HierarchicalCutting& hc, const Ids& pi, const Ids& qi, bool primal, std::size_t chunk,
               int depth) {
    (primal ? st_.steps_primal : st_.steps_dual) += 1;
    st_.cells += hc.cells.size();
    st_.ops += hc.ops;
    const Ids& arcs = primal ? qi : pi;
    const Ids& loc = primal ? pi : qi;
    auto apos = [&](std::int32_t a) { return primal ? qc_[static_cast<std::size_t>(a)] : pd_[static_cast<std::size_t>(a)]; };
    auto lpos = [&](std::int32_t l) { return primal ? pc_[static_cast<std::size_t>(l)] : qd_[static_cast<std::size_t>(l)]; };
    const std::size_t nc = hc.cells.size();

    // locate
    std::vector<std::int32_t> leaf(loc.size());
    std::vector<std::int32_t> sub(nc, 0);
    Ids stray;
    for (std::size_t i = 0; i < loc.size(); ++i) {
      Point p = lpos(loc[i]);
      std::int32_t c = 0;
      bool lost = hc.cells[0].trap.violation(p) > kLost;
      while (!lost && hc.cells[static_cast<std::size_t>(c)].nchildren() > 0) {
        c = hc.child_containing(c, p);
        st_.ops += static_cast<std::uint64_t>(hc.cells[static_cast<std::size_t>(hc.cells[static_cast<std::size_t>(c)].parent)].nchildren());
        lost = hc.cells[static_cast<std::size_t>(c)].trap.violation(p) > kLost;
      }
      if (lost) {
        leaf[i] = -1;
        stray.push_back(loc[i]);
        continue;
      }
      leaf[i] = c;
      ++sub[static_cast<std::size_t>(c)];
    }
    for (std::size_t c = nc; c-- > 1;) sub[static_cast<std::size_t>(hc.cells[c].parent)] += sub[c];

    // conservative descent of the arcs
    std::vector<Ids> L(nc);
    std::vector<std::int64_t> add(nc, 0);
    auto classify = [&](std::size_t c, const Ids& from) {
      const PseudoTrapezoid& t = hc.cells[c].trap;
      st_.ops += from.size();
      for (std::int32_t a : from) {
        Rel rel = relate_safe(apos(a), t);
        if (rel == Rel::contains) {
          if (primal)
            out_[a] += sub[c];
          else
            ++add[c];
        } else if (rel == Rel::crosses) {
          L[c].push_back(a);
        }
      }
    };
    if (sub[0] > 0) classify(0, arcs);
    for (std::size_t lv = 1; lv < hc.levels.size(); ++lv) {
      for (std::int32_t c : hc.levels[lv]) {
        auto cu = static_cast<std::size_t>(c);
        if (sub[cu] > 0) classify(cu, L[static_cast<std::size_t>(hc.cells[cu].parent)]);
      }
      for (std::int32_t c : hc.levels[lv - 1])
        if (hc.cells[static_cast<std::size_t>(c)].nchildren() > 0) Ids().swap(L[static_cast<std::size_t>(c)]);
    }
    if (!primal) {
      for (std::size_t c = 1; c < nc; ++c) add[c] += add[static_cast<std::size_t>(hc.cells[c].parent)];
      for (std::size_t i = 0; i < loc.size(); ++i)
        if (leaf[i] >= 0) out_[loc[i]] += add[static_cast<std::size_t>(leaf[i])];
    }

    // subproblems, located side cut into standard subsets
    std::vector<Ids> group(nc);
    for (std::size_t i = 0; i < loc.size(); ++i)
      if (leaf[i] >= 0) group[static_cast<std::size_t>(leaf[i])].push_back(loc[i]);
    for (std::int32_t c : hc.leaves()) {
      const Ids& g = group[static_cast<std::size_t>(c)];
      const Ids& l = L[static_cast<std::size_t>(c)];
      if (g.empty() || l.empty()) continue;
      for (std::size_t b = 0; b < g.size(); b += chunk) {
        Ids part(g.begin() + static_cast<std::ptrdiff_t>(b), g.begin() + static_cast<std::ptrdiff_t>(std::min(g.size(), b + chunk)));
        const Ids& np = primal ? part : l;
        const Ids& nq = primal ? l : part;
        if (np.size() == pi.size() && nq.size() == qi.size())
          brute(np, nq);
        else
          solve(np, nq, depth + 1, !primal);
      }
    }
    if (!stray.empty()) {
      if (primal)
        brute(stray, qi);
      else
        brute(pi, stray);
    }
  }

  // Theorem-7 style: one budgeted cutting of the query arcs, guessing chi.
  void solve_chi(const Ids& pi, const Ids& qi) {
    const double m = static_cast<double>(qi.size()), n = static_cast<double>(pi.size());
    if (pi.empty() || qi.empty()) return;
    double chi = 1;
    ArcSet S;
    for (std::int32_t a : qi) S.centers.push_back(qc_[static_cast<std::size_t>(a)]);
    for (;;) {
      double r = std::min(m / 8, std::pow(m * m / chi, 1 / (1 - prm_.delta)));
      if (r < 2) {
        st_.chi_guess += chi;
        solve(pi, qi, 0, false);
        return;
      }
      double budget =
          prm_.c_t * (m * std::pow(r, prm_.delta) + chi * r / m + n * std::log2(std::max(2.0, m))) + 64;
      CuttingParams cp;
      cp.seed = prm_.seed + st_.chi_rounds;
      cp.fallback_full = true;
    cp.max_children = kMaxChildren;
      cp.op_budget = static_cast<std::uint64_t>(budget);
      try {
        HierarchicalCutting hc = hierarchical_cutting(S, r, cp);
        st_.chi_guess += chi;
        auto K = static_cast<double>(std::max<std::size_t>(1, hc.leaves().size()));
        auto chunk = static_cast<std::size_t>(std::max(1.0, std::ceil(n / K)));
        descend(hc, pi, qi, true, chunk, 0);
        return;
      } catch (const BudgetExceeded&) {
        st_.ops += cp.op_budget;
        ++st_.chi_rounds;
        chi *= 2;
      }
    }
  }

 private:
  const std::vector<Point>& pc_;
  const std::vector<Point>& po_;
  const std::vector<Point>& qc_;
  const std::vector<Point>& qo_;
  std::vector<Point> pd_, qd_;
  double r2_;
  const BatchParams& prm_;
  BatchStats& st_;
  std::int64_t* out_;
  std::vector<double> xs_, ys_;
};

CountReport run(const std::vector<Point>& P, const std::vector<Point>& Q, double radius, double r2,
                BatchAlgo algo, const BatchParams& prm) {
  for (Point p : P) require_finite(p);
  for (Point q : Q) require_finite(q);
  CountReport rep;
  rep.counts.assign(Q.size(), 0);
  if (P.empty() || Q.empty()) return rep;
  BatchStats& st = rep.stats;
  if (algo == BatchAlgo::brute) {
    std::vector<double> xs, ys;
    for (Point p : P) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    for (std::size_t j = 0; j < Q.size(); ++j)
      rep.counts[j] = static_cast<std::int64_t>(kernels::count_within(xs.data(), ys.data(), P.size(), Q[j].x, Q[j].y, r2));
    st.ops = st.base_pairs = P.size() * Q.size();
    st.base_cases = 1;
    return rep;
  }

  const GridIndex g = build_grid(P, radius);
  std::vector<std::vector<std::int32_t>> byCell(g.cells.size());
  for (std::size_t j = 0; j < Q.size(); ++j)
    if (auto c = g.locate_world(Q[j])) byCell[static_cast<std::size_t>(*c)].push_back(static_cast<std::int32_t>(j));
  st.ops += Q.size() + P.size();

  std::vector<double> xs, ys;
  for (Point p : g.orig) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  for (std::size_t c = 0; c < g.cells.size(); ++c) {
    const Ids& qs = byCell[c];
    if (qs.empty()) continue;
    const GridCell& C = g.cells[c];
    std::vector<Point> qc(qs.size()), qo(qs.size());
    for (std::int32_t k = C.nb_begin; k < C.nb_end; ++k) {
      const std::int32_t cp = g.nbrs[static_cast<std::size_t>(k)];
      const GridCell& Cp = g.cells[static_cast<std::size_t>(cp)];
      if (cp == static_cast<std::int32_t>(c)) {
        // the closed disk about a center in C covers C up to rounding
        Point lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
        for (std::int32_t i = C.pt_begin; i < C.pt_end; ++i) {
          Point p = g.orig[static_cast<std::size_t>(i)];
          lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
          hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        for (std::int32_t j : qs) {
          Point q = Q[static_cast<std::size_t>(j)];
          double fx = std::max(q.x - lo.x, hi.x - q.x), fy = std::max(q.y - lo.y, hi.y - q.y);
          if (fx * fx + fy * fy <= r2 * (1 - 4e-9)) {
            rep.counts[static_cast<std::size_t>(j)] += C.size();
            ++st.ops;
          } else {
            rep.counts[static_cast<std::size_t>(j)] += static_cast<std::int64_t>(kernels::count_within(
                xs.data() + C.pt_begin, ys.data() + C.pt_begin, static_cast<std::size_t>(C.size()), q.x, q.y, r2));
            st.ops += static_cast<std::uint64_t>(C.size());
          }
        }
        continue;
      }
      ++st.cell_pairs;
      CellPairFrame f = make_frame(g.cell_square(static_cast<std::int32_t>(c)), g.cell_square(cp));
      std::vector<Point> pc, po;
      for (std::int32_t i = Cp.pt_begin; i < Cp.pt_end; ++i) {
        pc.push_back(f.to_local(g.pts[static_cast<std::size_t>(i)]));
        po.push_back(g.orig[static_cast<std::size_t>(i)]);
      }
      for (std::size_t t = 0; t < qs.size(); ++t) {
        Point q = Q[static_cast<std::size_t>(qs[t])];
        qo[t] = q;
        qc[t] = f.to_local({q.x * g.scale, q.y * g.scale});
      }
      std::vector<std::int64_t> local(qs.size(), 0);
      PairSolver ps(f, pc, po, qc, qo, r2, prm, st, local.data());
      Ids pi(pc.size()), qi(qs.size());
      std::iota(pi.begin(), pi.end(), 0);
      std::iota(qi.begin(), qi.end(), 0);
      if (algo == BatchAlgo::chi)
        ps.solve_chi(pi, qi);
      else
        ps.solve(pi, qi, 0, false);
      for (std::size_t t = 0; t < qs.size(); ++t) rep.counts[static_cast<std::size_t>(qs[t])] += local[t];
    }
  }
  return rep;
}

}  // namespace

CountReport batched_count_sq(const std::vector<Point>& P, const std::vector<Point>& Q, double r2, BatchAlgo algo,
                             const BatchParams& params) {
  if (!(r2 > 0) || !std::isfinite(r2)) throw GeomError("squared radius must be positive");
  return run(P, Q, std::sqrt(r2), r2, algo, params);
}

CountReport batched_count(const std::vector<Point>& P, const std::vector<Point>& Q, double radius, BatchAlgo algo,
                          const BatchParams& params) {
  if (!(radius > 0) || !std::isfinite(radius)) throw GeomError("radius must be positive");
  return run(P, Q, radius, radius * radius, algo, params);
}

CountReport batched_count_chi(const std::vector<Point>& P, const std::vector<Point>& Q, double radius,
                              const BatchParams& params) {
  return batched_count(P, Q, radius, BatchAlgo::chi, params);
}

std::int64_t count_pairs_within_sq(const std::vector<Point>& P, double t, const BatchParams& params,
                                   BatchStats* stats) {
  if (!(t >= 0)) throw GeomError("threshold must be nonnegative");
  const auto n = static_cast<std::int64_t>(P.size());
  if (n < 2) return 0;
  if (t == 0 || !std::isfinite(t)) {
    if (!std::isfinite(t)) return n * (n - 1) / 2;
    std::vector<Point> s(P);
    std::sort(s.begin(), s.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      auto k = static_cast<std::int64_t>(j - i);
      pairs += k * (k - 1) / 2;
      i = j;
    }
    return pairs;
  }
  CountReport rep = batched_count_sq(P, P, t, BatchAlgo::primal_dual, params);
  if (stats) *stats = rep.stats;
  std::int64_t sum = std::accumulate(rep.counts.begin(), rep.counts.end(), std::int64_t{0});
  return (sum - n) / 2;
}

std::int64_t count_circle_intersections(const std::vector<Point>& centers, double rc, const BatchParams& params) {
  if (!(rc > 0) || !std::isfinite(rc)) throw GeomError("radius must be positive");
  double d = 2 * rc;
  return count_pairs_within_sq(centers, d * d, params);
}

UnitDistanceReport unit_distance_detect(const std::vector<Point>& P, double tol, const BatchParams& params) {
  UnitDistanceReport u;
  double hi = 1 + tol, lo = 1 - tol;
  u.within_hi = count_pairs_within_sq(P, hi * hi, params);
  u.within_lo = count_pairs_within_sq(P, lo * lo, params);
  u.exists = u.within_hi > u.within_lo;
  return u;
}

}  // namespace udrs
