#include "udrs/grid.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace udrs {

namespace {

constexpr double kPad = 1.0 + 1e-9;

struct Key {
  std::int32_t strip, rect, row, col;
  auto tie() const { return std::tie(strip, rect, row, col); }
  bool operator<(const Key& o) const { return tie() < o.tie(); }
  bool operator==(const Key& o) const { return tie() == o.tie(); }
};

std::int32_t lines(double width) {
  return std::max<std::int32_t>(1, static_cast<std::int32_t>(std::ceil(width / kSide - 1e-12)));
}

std::int32_t index_in(double v, double lo, std::int32_t n) {
  auto i = static_cast<std::int32_t>(std::floor((v - lo) / kSide));
  return std::clamp<std::int32_t>(i, 0, n - 1);
}

}  // namespace

Point GridIndex::cell_lo(const GridCell& c) const {
  return {std::fma(c.col, kSide, strips[c.strip].left), std::fma(c.row, kSide, rects[c.rect].bottom)};
}

GridIndex build_grid(const std::vector<Point>& P, double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw GeomError("radius must be positive");
  for (const Point& p : P) require_finite(p);
  GridIndex g;
  g.radius = radius;
  g.scale = 1.0 / radius;
  const std::size_t n = P.size();
  std::vector<Point> S(n);
  for (std::size_t i = 0; i < n; ++i) S[i] = {P[i].x * g.scale, P[i].y * g.scale};

  std::vector<std::int32_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](std::int32_t a, std::int32_t b) {
    return std::tie(S[a].x, S[a].y, a) < std::tie(S[b].x, S[b].y, b);
  });

  std::vector<Key> key(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && S[ord[j]].x - S[ord[j - 1]].x <= kStripGap) ++j;
    GridStrip st;
    st.left = S[ord[i]].x - kPad;
    st.cols = lines(S[ord[j - 1]].x + kPad - st.left);
    st.right = std::fma(st.cols, kSide, st.left);
    const auto sid = static_cast<std::int32_t>(g.strips.size());
    st.rect_begin = static_cast<std::int32_t>(g.rects.size());
    std::vector<std::int32_t> by_y(ord.begin() + i, ord.begin() + j);
    std::sort(by_y.begin(), by_y.end(), [&](std::int32_t a, std::int32_t b) {
      return std::tie(S[a].y, S[a].x, a) < std::tie(S[b].y, S[b].x, b);
    });
    std::size_t a = 0;
    while (a < by_y.size()) {
      std::size_t b = a + 1;
      while (b < by_y.size() && S[by_y[b]].y - S[by_y[b - 1]].y <= kStripGap) ++b;
      GridRect rc;
      rc.bottom = S[by_y[a]].y - kPad;
      rc.rows = lines(S[by_y[b - 1]].y + kPad - rc.bottom);
      rc.top = std::fma(rc.rows, kSide, rc.bottom);
      const auto rid = static_cast<std::int32_t>(g.rects.size());
      for (std::size_t t = a; t < b; ++t) {
        std::int32_t p = by_y[t];
        key[p] = {sid, rid, index_in(S[p].y, rc.bottom, rc.rows), index_in(S[p].x, st.left, st.cols)};
      }
      g.rects.push_back(rc);
      a = b;
    }
    st.rect_end = static_cast<std::int32_t>(g.rects.size());
    g.strips.push_back(st);
    i = j;
  }

  // non-empty cells, then their 5x5 neighbourhoods clipped to the rectangle
  std::vector<Key> nonempty(key.begin(), key.end());
  std::sort(nonempty.begin(), nonempty.end());
  nonempty.erase(std::unique(nonempty.begin(), nonempty.end()), nonempty.end());
  std::vector<Key> all;
  all.reserve(nonempty.size() * 25);
  for (const Key& k : nonempty) {
    const GridRect& rc = g.rects[k.rect];
    const GridStrip& st = g.strips[k.strip];
    for (int dr = -2; dr <= 2; ++dr)
      for (int dc = -2; dc <= 2; ++dc) {
        int r = k.row + dr, c = k.col + dc;
        if (r < 0 || r >= rc.rows || c < 0 || c >= st.cols) continue;
        all.push_back({k.strip, k.rect, r, c});
      }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  auto find = [&](const Key& k) {
    auto it = std::lower_bound(all.begin(), all.end(), k);
    return static_cast<std::int32_t>(it - all.begin());
  };

  g.cells.resize(all.size());
  for (std::size_t c = 0; c < all.size(); ++c) {
    GridCell& gc = g.cells[c];
    gc.strip = all[c].strip;
    gc.rect = all[c].rect;
    gc.row = all[c].row;
    gc.col = all[c].col;
  }
  for (GridRect& rc : g.rects) rc.cell_begin = rc.cell_end = 0;
  for (std::size_t c = all.size(); c-- > 0;) g.rects[all[c].rect].cell_begin = static_cast<std::int32_t>(c);
  for (std::size_t c = 0; c < all.size(); ++c) g.rects[all[c].rect].cell_end = static_cast<std::int32_t>(c + 1);

  // points grouped by cell, ordered by coordinates inside a cell
  std::vector<std::int32_t> cell_of(n);
  for (std::size_t p = 0; p < n; ++p) cell_of[p] = find(key[p]);
  std::vector<std::int32_t> grouped(ord);
  std::stable_sort(grouped.begin(), grouped.end(),
                   [&](std::int32_t a, std::int32_t b) { return cell_of[a] < cell_of[b]; });
  g.pts.resize(n);
  g.orig.resize(n);
  g.ids.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::int32_t p = grouped[t];
    g.pts[t] = S[p];
    g.orig[t] = P[p];
    g.ids[t] = p;
  }
  {
    std::size_t t = 0;
    for (std::size_t c = 0; c < all.size(); ++c) {
      g.cells[c].pt_begin = static_cast<std::int32_t>(t);
      while (t < n && cell_of[grouped[t]] == static_cast<std::int32_t>(c)) ++t;
      g.cells[c].pt_end = static_cast<std::int32_t>(t);
    }
  }

  // N(C): non-empty C' with C in N'(C')
  std::vector<std::vector<std::int32_t>> nb(all.size());
  for (const Key& k : nonempty) {
    std::int32_t cp = find(k);
    const GridRect& rc = g.rects[k.rect];
    const GridStrip& st = g.strips[k.strip];
    for (int dr = -2; dr <= 2; ++dr)
      for (int dc = -2; dc <= 2; ++dc) {
        int r = k.row + dr, c = k.col + dc;
        if (r < 0 || r >= rc.rows || c < 0 || c >= st.cols) continue;
        nb[find({k.strip, k.rect, r, c})].push_back(cp);
      }
  }
  for (std::size_t c = 0; c < all.size(); ++c) {
    std::sort(nb[c].begin(), nb[c].end());
    g.cells[c].nb_begin = static_cast<std::int32_t>(g.nbrs.size());
    g.nbrs.insert(g.nbrs.end(), nb[c].begin(), nb[c].end());
    g.cells[c].nb_end = static_cast<std::int32_t>(g.nbrs.size());
  }
  return g;
}

std::optional<std::int32_t> GridIndex::locate(Point q) const {
  if (!finite(q)) return std::nullopt;
  auto sit = std::upper_bound(strips.begin(), strips.end(), q.x,
                              [](double x, const GridStrip& s) { return x < s.left; });
  if (sit == strips.begin()) return std::nullopt;
  const GridStrip& st = *(sit - 1);
  if (q.x > st.right) return std::nullopt;
  auto rb = rects.begin() + st.rect_begin;
  auto re = rects.begin() + st.rect_end;
  auto rit = std::upper_bound(rb, re, q.y, [](double y, const GridRect& r) { return y < r.bottom; });
  if (rit == rb) return std::nullopt;
  const GridRect& rc = *(rit - 1);
  if (q.y > rc.top) return std::nullopt;
  std::int32_t row = index_in(q.y, rc.bottom, rc.rows);
  std::int32_t col = index_in(q.x, st.left, st.cols);
  auto cb = cells.begin() + rc.cell_begin;
  auto ce = cells.begin() + rc.cell_end;
  auto it = std::lower_bound(cb, ce, std::make_pair(row, col), [](const GridCell& c, std::pair<int, int> k) {
    return std::make_pair(c.row, c.col) < k;
  });
  if (it == ce || it->row != row || it->col != col) return std::nullopt;
  return static_cast<std::int32_t>(it - cells.begin());
}

}  // namespace udrs
