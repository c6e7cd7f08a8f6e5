#include "udrs/distsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace udrs {

namespace {

std::int64_t all_pairs(const std::vector<Point>& P) {
  auto n = static_cast<std::int64_t>(P.size());
  return n * (n - 1) / 2;
}

void check_k(const std::vector<Point>& P, std::int64_t k) {
  if (P.size() < 2) throw std::invalid_argument("selection needs at least two points");
  if (k < 1 || k > all_pairs(P)) throw std::out_of_range("k out of range");
}

struct KdNode {
  double x0, y0, x1, y1;
  std::int32_t begin, end;
  std::int32_t left = -1, right = -1;
};

class KdTree {
 public:
  explicit KdTree(const std::vector<Point>& P) : pts_(P) {
    if (!pts_.empty()) build(0, static_cast<std::int32_t>(pts_.size()), 0);
  }

  void annulus(double lo2, double hi2, std::vector<double>& out) const {
    if (nodes_.empty()) return;
    lo_ = lo2;
    hi_ = hi2;
    out_ = &out;
    self(0);
  }

 private:
  static constexpr std::int32_t kLeaf = 16;

  std::int32_t build(std::int32_t b, std::int32_t e, int depth) {
    KdNode nd{INFINITY, INFINITY, -INFINITY, -INFINITY, b, e};
    for (std::int32_t i = b; i < e; ++i) {
      Point p = pts_[static_cast<std::size_t>(i)];
      nd.x0 = std::min(nd.x0, p.x);
      nd.y0 = std::min(nd.y0, p.y);
      nd.x1 = std::max(nd.x1, p.x);
      nd.y1 = std::max(nd.y1, p.y);
    }
    auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(nd);
    if (e - b > kLeaf) {
      bool byx = nd.x1 - nd.x0 >= nd.y1 - nd.y0;
      (void)depth;
      std::int32_t mid = b + (e - b) / 2;
      std::nth_element(pts_.begin() + b, pts_.begin() + mid, pts_.begin() + e,
                       [byx](Point a, Point c) { return byx ? a.x < c.x : a.y < c.y; });
      std::int32_t l = build(b, mid, depth + 1);
      std::int32_t r = build(mid, e, depth + 1);
      nodes_[static_cast<std::size_t>(id)].left = l;
      nodes_[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  }

  static double gap(double a0, double a1, double b0, double b1) { return std::max({0.0, b0 - a1, a0 - b1}); }
  static double span(double a0, double a1, double b0, double b1) { return std::max(a1 - b0, b1 - a0); }

  void emit(std::int32_t i, std::int32_t j) const {
    double d = dist2(pts_[static_cast<std::size_t>(i)], pts_[static_cast<std::size_t>(j)]);
    if (d > lo_ && d <= hi_) out_->push_back(d);
  }

  void self(std::int32_t a) const {
    const KdNode& A = nodes_[static_cast<std::size_t>(a)];
    double sx = A.x1 - A.x0, sy = A.y1 - A.y0;
    if (sx * sx + sy * sy <= lo_ * (1 - 1e-12)) return;
    if (A.left < 0) {
      for (std::int32_t i = A.begin; i < A.end; ++i)
        for (std::int32_t j = i + 1; j < A.end; ++j) emit(i, j);
      return;
    }
    self(A.left);
    self(A.right);
    cross(A.left, A.right);
  }

  void cross(std::int32_t a, std::int32_t b) const {
    const KdNode& A = nodes_[static_cast<std::size_t>(a)];
    const KdNode& B = nodes_[static_cast<std::size_t>(b)];
    double gx = gap(A.x0, A.x1, B.x0, B.x1), gy = gap(A.y0, A.y1, B.y0, B.y1);
    if (gx * gx + gy * gy > hi_ * (1 + 1e-12)) return;
    double fx = span(A.x0, A.x1, B.x0, B.x1), fy = span(A.y0, A.y1, B.y0, B.y1);
    if (fx * fx + fy * fy <= lo_ * (1 - 1e-12)) return;
    if (A.left < 0 && B.left < 0) {
      for (std::int32_t i = A.begin; i < A.end; ++i)
        for (std::int32_t j = B.begin; j < B.end; ++j) emit(i, j);
      return;
    }
    if (B.left < 0 || (A.left >= 0 && A.end - A.begin >= B.end - B.begin)) {
      cross(A.left, b);
      cross(A.right, b);
    } else {
      cross(a, B.left);
      cross(a, B.right);
    }
  }

  std::vector<Point> pts_;
  std::vector<KdNode> nodes_;
  mutable double lo_ = 0, hi_ = 0;
  mutable std::vector<double>* out_ = nullptr;
};

}  // namespace

std::vector<double> pairs_in_annulus(const std::vector<Point>& P, double lo2, double hi2) {
  std::vector<double> out;
  KdTree(P).annulus(lo2, hi2, out);
  return out;
}

std::int64_t count_pairs_within(const std::vector<Point>& P, double lambda, const BatchParams& params) {
  if (!(lambda >= 0)) throw std::invalid_argument("lambda must be nonnegative");
  return count_pairs_within_sq(P, lambda * lambda, params);
}

bool decide(const std::vector<Point>& P, double lambda, std::int64_t k, const BatchParams& params) {
  check_k(P, k);
  return count_pairs_within(P, lambda, params) >= k;
}

double select_distance(const std::vector<Point>& P, std::int64_t k, Rng& rng, const SelectParams& prm,
                       SelectStats* stats) {
  check_k(P, k);
  for (Point p : P) require_finite(p);
  SelectStats st;
  const std::int64_t N = all_pairs(P);
  const auto n = static_cast<double>(P.size());
  auto count = [&](double t) {
    ++st.decisions;
    return count_pairs_within_sq(P, t, prm.batch);
  };

  // invariant: count(lo) < k <= count(hi), on squared distances
  double lo = 0, hi = INFINITY;
  std::int64_t c_lo = count(0), c_hi = N;
  if (k <= c_lo) {
    if (stats) *stats = st;
    return 0;
  }
  auto budget = static_cast<std::size_t>(
      std::ceil(prm.c_s * std::cbrt(n * n) * std::cbrt(static_cast<double>(k))));
  std::vector<double> kept;
  while (st.rounds < prm.max_rounds && static_cast<double>(c_hi - c_lo) > prm.enumerate_at * n) {
    ++st.rounds;
    kept.clear();
    for (std::size_t s = 0; s < budget; ++s) {
      auto i = rng.below(P.size());
      auto j = rng.below(P.size() - 1);
      if (j >= i) ++j;
      double d = dist2(P[i], P[j]);
      if (d > lo && d <= hi) kept.push_back(d);
    }
    if (kept.size() < 2) {
      if (static_cast<double>(budget) > 4 * static_cast<double>(N)) break;
      budget *= 2;
      continue;
    }
    std::sort(kept.begin(), kept.end());
    const double K = static_cast<double>(kept.size());
    const double pos = K * static_cast<double>(k - c_lo) / static_cast<double>(c_hi - c_lo);
    const double spread = 2 * std::sqrt(K) + 1;
    double a = kept[static_cast<std::size_t>(std::clamp(std::floor(pos - spread), 0.0, K - 1))];
    double b = kept[static_cast<std::size_t>(std::clamp(std::ceil(pos + spread), 0.0, K - 1))];
    for (double t : {b, a}) {
      if (!(t > lo && t < hi)) continue;
      std::int64_t c = count(t);
      if (c >= k) {
        hi = t;
        c_hi = c;
      } else {
        lo = t;
        c_lo = c;
      }
    }
  }

  std::vector<double> cand = pairs_in_annulus(P, lo, hi);
  st.enumerated = static_cast<std::int64_t>(cand.size());
  auto idx = static_cast<std::size_t>(k - c_lo - 1);
  if (idx >= cand.size()) throw std::logic_error("selection interval lost the target rank");
  std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(idx), cand.end());
  if (stats) *stats = st;
  return std::sqrt(cand[idx]);
}

}  // namespace udrs
