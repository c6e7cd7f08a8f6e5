#include "udrs/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace udrs {

namespace {

struct Clipped {
  Point c;
  double a;
  double b;
};

struct Event {
  double x;
  double y;
};

bool same_center_as(const Boundary& b, Point c) {
  return b.type == Boundary::Type::arc && b.center == c;
}

}  // namespace

std::vector<PseudoTrapezoid> vertical_decomposition(const PseudoTrapezoid& sg,
                                                    std::span<const Point> arcs,
                                                    std::uint64_t* ops) {
  std::vector<Point> uniq(arcs.begin(), arcs.end());
  std::sort(uniq.begin(), uniq.end(), [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  std::vector<Clipped> act;
  for (Point c : uniq) {
    if (same_center_as(sg.top, c) || same_center_as(sg.bottom, c)) continue;
    if (auto cl = clip_to(c, sg)) act.push_back({c, cl->x_lo, cl->x_hi});
  }
  if (ops) *ops += uniq.size();
  if (act.empty()) return {sg};

  const double X0 = sg.x_lo, X1 = sg.x_hi;
  std::vector<Event> ev;
  for (const Clipped& h : act) {
    if (h.a > X0 + kTolX) ev.push_back({h.a, circle_y(h.c, ArcKind::upper, h.a)});
    if (h.b < X1 - kTolX) ev.push_back({h.b, circle_y(h.c, ArcKind::upper, h.b)});
  }
  for (std::size_t i = 0; i < act.size(); ++i)
    for (std::size_t j = i + 1; j < act.size(); ++j) {
      double lo = std::max(act[i].a, act[j].a);
      double hi = std::min(act[i].b, act[j].b);
      if (hi - lo <= 2 * kTolX) continue;
      double r[2];
      int k = circle_circle_roots(act[i].c, act[j].c, r);
      for (int t = 0; t < k; ++t) {
        if (r[t] <= lo + kTolX || r[t] >= hi - kTolX) continue;
        double yi = circle_y(act[i].c, ArcKind::upper, r[t]);
        double yj = circle_y(act[j].c, ArcKind::upper, r[t]);
        if (std::fabs(yi - yj) <= 1e-9) ev.push_back({r[t], yi});
      }
    }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });

  // walls[s] for s >= 1 carries the events in group s - 1
  std::vector<double> walls{X0};
  std::vector<std::size_t> gstart;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (gstart.empty() || ev[i].x - ev[gstart.back()].x > kTolX) {
      gstart.push_back(i);
      walls.push_back(ev[i].x);
    }
  }
  gstart.push_back(ev.size());
  walls.push_back(X1);

  auto bnd = [&](int id) -> Boundary {
    if (id == -1) return sg.bottom;
    if (id == -2) return sg.top;
    return Boundary::arc(act[id].c, ArcKind::upper);
  };
  auto val = [&](int id, double x) {
    if (id == -1) return sg.bottom.eval(x);
    if (id == -2) return sg.top.eval(x);
    return circle_y(act[id].c, ArcKind::upper, x);
  };

  struct Open {
    int lo, hi;
    std::size_t out;
  };
  std::vector<PseudoTrapezoid> out;
  std::vector<Open> prev, cur;
  std::vector<std::pair<double, int>> order;
  for (std::size_t s = 0; s + 1 < walls.size(); ++s) {
    double xl = walls[s], xr = walls[s + 1];
    double xm = (xl + xr) / 2;
    order.clear();
    for (std::size_t i = 0; i < act.size(); ++i)
      if (act[i].a < xm && xm < act[i].b)
        order.push_back({circle_y(act[i].c, ArcKind::upper, xm), static_cast<int>(i)});
    std::sort(order.begin(), order.end());
    if (ops) *ops += order.size() + 1;
    cur.clear();
    int below = -1;
    for (std::size_t t = 0; t <= order.size(); ++t) {
      int above = t < order.size() ? order[t].second : -2;
      bool extended = false;
      if (s > 0) {
        for (const Open& o : prev) {
          if (o.lo != below || o.hi != above) continue;
          bool blocked = false;
          double yl = val(below, xl), yh = val(above, xl);
          for (std::size_t e = gstart[s - 1]; e < gstart[s]; ++e)
            if (ev[e].y >= yl - 1e-12 && ev[e].y <= yh + 1e-12) {
              blocked = true;
              break;
            }
          if (!blocked) {
            out[o.out].x_hi = xr;
            cur.push_back({below, above, o.out});
            extended = true;
          }
          break;
        }
      }
      if (!extended) {
        PseudoTrapezoid t2;
        t2.x_lo = xl;
        t2.x_hi = xr;
        t2.bottom = bnd(below);
        t2.top = bnd(above);
        cur.push_back({below, above, out.size()});
        out.push_back(t2);
      }
      below = above;
    }
    std::swap(prev, cur);
  }
  return out;
}

std::int64_t intersections_inside(const PseudoTrapezoid& sg, std::span<const Point> arcs) {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      double r[2];
      int k = circle_circle_roots(arcs[i], arcs[j], r);
      for (int t = 0; t < k; ++t) {
        double x = r[t];
        if (x <= sg.x_lo || x >= sg.x_hi) continue;
        double yi = circle_y(arcs[i], ArcKind::upper, x);
        double yj = circle_y(arcs[j], ArcKind::upper, x);
        if (std::fabs(yi - yj) > 1e-9) continue;
        if (sg.bottom.eval(x) < yi && yi < sg.top.eval(x)) ++n;
      }
    }
  return n;
}

namespace {

// Weighted sample without replacement (exponential keys); uniform when
// weights are absent.
std::vector<std::size_t> weighted_pick(const ArcSet& S, std::size_t m, Rng& rng) {
  const std::size_t n = S.size();
  if (m >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<std::pair<double, std::size_t>> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = S.weight(i);
    double u = rng.uniform();
    key[i] = {w > 0 ? std::log1p(-u) / w : -INFINITY, i};
  }
  std::nth_element(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(m), key.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = key[i].second;
  std::sort(pick.begin(), pick.end());
  return pick;
}

ArcSet subset(const ArcSet& S, const std::vector<std::size_t>& idx) {
  ArcSet R;
  R.region = S.region;
  for (std::size_t i : idx) {
    R.centers.push_back(S.centers[i]);
    if (S.weighted()) R.weights.push_back(S.weights[i]);
  }
  return R;
}

// Largest total weight carried by a single distinct center.
double heaviest_center(const ArcSet& S) {
  std::vector<std::pair<Point, double>> cw(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) cw[i] = {S.centers[i], S.weight(i)};
  std::sort(cw.begin(), cw.end(), [](const auto& a, const auto& b) {
    return a.first.x < b.first.x || (a.first.x == b.first.x && a.first.y < b.first.y);
  });
  double best = 0;
  for (std::size_t i = 0; i < cw.size();) {
    double w = 0;
    std::size_t j = i;
    for (; j < cw.size() && cw[j].first == cw[i].first; ++j) w += cw[j].second;
    best = std::max(best, w);
    i = j;
  }
  return best;
}

double total_weight(const ArcSet& S) {
  if (!S.weighted()) return static_cast<double>(S.size());
  return std::accumulate(S.weights.begin(), S.weights.end(), 0.0);
}

}  // namespace

ArcSet sample_epsilon_net_sparse(const ArcSet& S, const PseudoTrapezoid& sigma, double eps, Rng& rng,
                                 double c_net) {
  ArcSet R;
  R.region = sigma;
  if (S.size() == 0) return R;
  if (eps >= 1) {
    R = S;
    R.region = sigma;
    return R;
  }
  double want = std::ceil(c_net / eps * std::log(static_cast<double>(S.size())));
  auto m = static_cast<std::size_t>(std::max(1.0, want));
  R = subset(S, weighted_pick(S, m, rng));
  R.region = sigma;
  return R;
}

bool validate_epsilon_net(const ArcSet& S, const ArcSet& R, const PseudoTrapezoid& sigma, double eps,
                          bool check_sparse) {
  double W = 0;
  for (std::size_t i = 0; i < S.size(); ++i)
    if (crosses_interior(S.centers[i], sigma)) W += S.weight(i);
  for (const PseudoTrapezoid& t : vertical_decomposition(sigma, R.centers)) {
    double w = 0;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (crosses_interior(S.centers[i], t)) w += S.weight(i);
    if (w > eps * W * (1 + 1e-12)) return false;
  }
  if (!check_sparse) return true;
  double nS = static_cast<double>(intersections_inside(sigma, S.centers));
  if (nS == 0) return true;
  double nR = static_cast<double>(intersections_inside(sigma, R.centers));
  double ratio = static_cast<double>(R.size()) / static_cast<double>(S.size());
  return nR / nS <= 4 * ratio * ratio;
}

ArcSet sample_epsilon_approximation(const ArcSet& S, double eps, Rng& rng, double c_a, double c_b) {
  double inv = 1 / eps;
  double want = c_a * inv * inv * std::log(std::max(inv, 1.0)) + c_b * inv * inv;
  if (want >= static_cast<double>(S.size())) {
    ArcSet A = S;
    if (!A.weighted()) A.weights.assign(A.size(), 1.0);
    return A;
  }
  auto m = static_cast<std::size_t>(std::ceil(want));
  ArcSet A;
  A.region = S.region;
  double W = total_weight(S);
  if (!S.weighted()) {
    A = subset(S, weighted_pick(S, m, rng));
    A.weights.assign(A.size(), W / static_cast<double>(m));
    return A;
  }
  // proportional sampling with replacement, duplicates merged
  std::vector<double> cum(S.size());
  std::partial_sum(S.weights.begin(), S.weights.end(), cum.begin());
  std::vector<std::size_t> hits(S.size(), 0);
  for (std::size_t t = 0; t < m; ++t) {
    double u = rng.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    ++hits[static_cast<std::size_t>(it - cum.begin())];
  }
  for (std::size_t i = 0; i < S.size(); ++i)
    if (hits[i]) {
      A.centers.push_back(S.centers[i]);
      A.weights.push_back(W * static_cast<double>(hits[i]) / static_cast<double>(m));
    }
  return A;
}

double HierarchicalCutting::bound(int level) const {
  if (finished && level == depth()) return 0;
  return total / std::pow(static_cast<double>(rho), level);
}

std::int32_t HierarchicalCutting::child_containing(std::int32_t c, Point p) const {
  const CutCell& cc = cells[c];
  if (cc.nchildren() == 1) return cc.child_begin;
  std::int32_t best = cc.child_begin;
  double bv = INFINITY;
  for (std::int32_t k = cc.child_begin; k < cc.child_end; ++k) {
    double v = cells[k].trap.violation(p);
    if (v < bv) {
      bv = v;
      best = k;
      if (v <= 0) break;
    }
  }
  return best;
}

std::int32_t HierarchicalCutting::locate(Point p, int level) const {
  if (level < 0 || level > depth()) level = depth();
  std::int32_t c = 0;
  for (int i = 0; i < level; ++i) c = child_containing(c, p);
  return c;
}

namespace {

class Builder {
 public:
  Builder(const ArcSet& S, double r, const CuttingParams& P) : P_(P), rng_(P.seed) {
    hc_.arcs = S;
    hc_.rho = P.rho;
    hc_.r = r;
  }

  HierarchicalCutting run() {
    const ArcSet& S = hc_.arcs;
    CutCell root;
    root.trap = S.region;
    root.h_begin = 0;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (crosses_interior(S.centers[i], S.region)) {
        hc_.hlist.push_back(static_cast<std::int32_t>(i));
        root.weight += S.weight(i);
      }
    charge(S.size());
    root.h_end = static_cast<std::int32_t>(hc_.hlist.size());
    hc_.total = root.weight;
    hc_.cells.push_back(root);
    hc_.levels.push_back({0});
    const double n = static_cast<double>(root.h_end);
    if (hc_.total <= 0) return std::move(hc_);

    const double lr = std::log(static_cast<double>(P_.rho));
    auto levels_for = [&](double r) { return r <= 1 ? 0 : static_cast<int>(std::ceil(std::log(r) / lr - 1e-9)); };
    bool finish = hc_.r > n / 8;
    int k = levels_for(finish ? n / 8 : hc_.r);

    for (int i = 1; i <= k; ++i) {
      double bound = hc_.total / std::pow(static_cast<double>(P_.rho), i);
      std::size_t mark_cells = hc_.cells.size(), mark_h = hc_.hlist.size();
      std::vector<std::int32_t> level;
      for (std::int32_t c : std::vector<std::int32_t>(hc_.levels.back())) {
        if (hc_.cells[c].weight <= bound * (1 + 1e-12))
          copy_child(c, level);
        else
          refine(c, i, bound, level);
      }
      if (P_.max_cells && level.size() > P_.max_cells) {
        rollback(mark_cells, mark_h);
        return std::move(hc_);
      }
      hc_.levels.push_back(std::move(level));
    }
    if (finish) {
      std::size_t mark_cells = hc_.cells.size(), mark_h = hc_.hlist.size();
      std::vector<std::int32_t> level;
      for (std::int32_t c : std::vector<std::int32_t>(hc_.levels.back())) {
        if (hc_.cells[c].h_end == hc_.cells[c].h_begin)
          copy_child(c, level);
        else
          decompose_fully(c, level);
      }
      if (P_.max_cells && level.size() > P_.max_cells) {
        rollback(mark_cells, mark_h);
        return std::move(hc_);
      }
      hc_.levels.push_back(std::move(level));
      hc_.finished = true;
    }
    return std::move(hc_);
  }

 private:
  void charge(std::uint64_t n) {
    hc_.ops += n;
    if (P_.op_budget && hc_.ops > P_.op_budget) throw BudgetExceeded("cutting budget exceeded");
  }

  void rollback(std::size_t mark_cells, std::size_t mark_h) {
    for (std::int32_t c : hc_.levels.back()) hc_.cells[c].child_begin = hc_.cells[c].child_end = 0;
    hc_.cells.resize(mark_cells);
    hc_.hlist.resize(mark_h);
  }

  void copy_child(std::int32_t c, std::vector<std::int32_t>& level) {
    CutCell ch = hc_.cells[c];
    ch.level = hc_.cells[c].level + 1;
    ch.parent = c;
    ch.child_begin = ch.child_end = 0;
    auto id = static_cast<std::int32_t>(hc_.cells.size());
    hc_.cells[c].child_begin = id;
    hc_.cells[c].child_end = id + 1;
    hc_.cells.push_back(ch);
    level.push_back(id);
    hc_.c_max = std::max(hc_.c_max, 1);
  }

  // Crossing lists of the candidate children; false when some child exceeds
  // the bound.
  bool split(const std::vector<std::int32_t>& S, const std::vector<PseudoTrapezoid>& kids, double bound,
             std::vector<std::vector<std::int32_t>>& H, std::vector<double>& w) {
    H.assign(kids.size(), {});
    w.assign(kids.size(), 0.0);
    for (std::size_t t = 0; t < kids.size(); ++t) {
      for (std::int32_t h : S)
        if (crosses_interior(hc_.arcs.centers[h], kids[t])) {
          H[t].push_back(h);
          w[t] += hc_.arcs.weight(h);
        }
      charge(S.size());
      if (w[t] > bound * (1 + 1e-12) + 1e-12) return false;
    }
    return true;
  }

  void commit(std::int32_t c, const std::vector<PseudoTrapezoid>& kids,
              const std::vector<std::vector<std::int32_t>>& H, const std::vector<double>& w,
              std::vector<std::int32_t>& level) {
    auto first = static_cast<std::int32_t>(hc_.cells.size());
    int lvl = hc_.cells[c].level + 1;
    for (std::size_t t = 0; t < kids.size(); ++t) {
      CutCell ch;
      ch.trap = kids[t];
      ch.level = lvl;
      ch.parent = c;
      ch.h_begin = static_cast<std::int32_t>(hc_.hlist.size());
      hc_.hlist.insert(hc_.hlist.end(), H[t].begin(), H[t].end());
      ch.h_end = static_cast<std::int32_t>(hc_.hlist.size());
      ch.weight = w[t];
      level.push_back(static_cast<std::int32_t>(hc_.cells.size()));
      hc_.cells.push_back(ch);
    }
    hc_.cells[c].child_begin = first;
    hc_.cells[c].child_end = static_cast<std::int32_t>(hc_.cells.size());
    hc_.c_max = std::max(hc_.c_max, static_cast<int>(kids.size()));
  }

  void refine(std::int32_t c, int i, double bound, std::vector<std::int32_t>& level) {
    std::vector<std::int32_t> S(hc_.H(c).begin(), hc_.H(c).end());
    const PseudoTrapezoid sigma = hc_.cells[c].trap;
    ArcSet Ss;
    Ss.region = sigma;
    for (std::int32_t h : S) {
      Ss.centers.push_back(hc_.arcs.centers[h]);
      Ss.weights.push_back(hc_.arcs.weight(h));
    }
    const double Ws = hc_.cells[c].weight;
    const double rho0 = std::pow(static_cast<double>(P_.rho), i) * Ws / hc_.total;
    const double eps = 1 / (P_.c_eps * rho0);
    ArcSet A = sample_epsilon_approximation(Ss, eps, rng_, P_.c_a, P_.c_b);
    double base = std::ceil(P_.c_net / eps * std::log(1 / eps));
    auto m0 = static_cast<std::size_t>(std::max<double>(P_.min_net, base));

    if (P_.fallback_full && heaviest_center(Ss) > bound) {
      decompose_fully(c, level);
      return;
    }
    std::vector<std::vector<std::int32_t>> H;
    std::vector<double> w;
    for (int attempt = 0; attempt < P_.max_retries; ++attempt) {
      std::size_t m = std::min(A.size(), m0 + static_cast<std::size_t>(attempt / 8));
      std::vector<std::size_t> pick = weighted_pick(A, m, rng_);
      std::vector<Point> R;
      R.reserve(pick.size());
      for (std::size_t t : pick) R.push_back(A.centers[t]);
      std::vector<PseudoTrapezoid> kids = vertical_decomposition(sigma, R, &hc_.ops);
      charge(0);
      if (static_cast<int>(kids.size()) <= P_.max_children && split(S, kids, bound, H, w)) {
        commit(c, kids, H, w, level);
        return;
      }
      ++hc_.retries;
    }
    if (P_.fallback_full) {
      decompose_fully(c, level);
      return;
    }
    throw CuttingError("cutting refinement exceeded its retry budget");
  }

  void decompose_fully(std::int32_t c, std::vector<std::int32_t>& level) {
    std::vector<std::int32_t> S(hc_.H(c).begin(), hc_.H(c).end());
    std::vector<Point> R;
    for (std::int32_t h : S) R.push_back(hc_.arcs.centers[h]);
    std::vector<PseudoTrapezoid> kids = vertical_decomposition(hc_.cells[c].trap, R, &hc_.ops);
    std::vector<std::vector<std::int32_t>> H;
    std::vector<double> w;
    split(S, kids, INFINITY, H, w);
    commit(c, kids, H, w, level);
  }

  CuttingParams P_;
  Rng rng_;
  HierarchicalCutting hc_;
};

}  // namespace

HierarchicalCutting hierarchical_cutting(const ArcSet& S, double r, const CuttingParams& params) {
  if (!(r >= 1) || !std::isfinite(r)) throw CuttingError("r must be at least 1");
  ArcSet U = S;
  U.weights.clear();
  return Builder(U, r, params).run();
}

HierarchicalCutting weighted_hierarchical_cutting(const ArcSet& S, double r, const CuttingParams& params) {
  for (double w : S.weights)
    if (!(w >= 0) || !std::isfinite(w)) throw CuttingError("weights must be finite and nonnegative");
  if (!(r >= 1) || !std::isfinite(r)) throw CuttingError("r must be at least 1");
  if (S.weighted() && !(std::accumulate(S.weights.begin(), S.weights.end(), 0.0) > 0))
    throw CuttingError("total weight must be positive");
  return Builder(S, r, params).run();
}

}  // namespace udrs
