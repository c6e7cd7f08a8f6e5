#include "udrs/geom.hpp"

#include <algorithm>

namespace udrs {

void require_finite(Point p) {
  if (!finite(p)) throw GeomError("non-finite coordinate");
}

bool point_in_disk(Point p, Point c) {
  require_finite(p);
  require_finite(c);
  return dist2(p, c) <= 1.0;
}

double PseudoTrapezoid::violation(Point p) const {
  double x = std::clamp(p.x, x_lo, x_hi);
  double vx = std::fabs(p.x - x);
  double b = bottom.eval(x);
  double t = top.eval(x);
  double vy = std::max({b - p.y, p.y - t, 0.0});
  return std::max(vx, vy);
}

void PseudoTrapezoid::corners(Point out[4]) const {
  out[0] = {x_lo, bottom.eval(x_lo)};
  out[1] = {x_hi, bottom.eval(x_hi)};
  out[2] = {x_hi, top.eval(x_hi)};
  out[3] = {x_lo, top.eval(x_lo)};
}

double PseudoTrapezoid::area() const {
  const int n = 256;
  double h = (x_hi - x_lo) / n;
  if (h <= 0) return 0;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    double x = x_lo + i * h;
    double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * (top.eval(x) - bottom.eval(x));
  }
  return s * h / 3;
}

PseudoTrapezoid standard_enlarged() {
  PseudoTrapezoid t;
  t.x_lo = 0;
  t.x_hi = kSide;
  t.bottom = Boundary::horiz(0);
  t.top = Boundary::arc({kSide / 2, kSide - kArcDrop}, ArcKind::upper);
  return t;
}

int circle_circle_roots(Point a, Point b, double out[2]) {
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  double d2 = dx * dx + dy * dy;
  if (d2 == 0 || d2 > 4) return 0;
  double d = std::sqrt(d2);
  double h = std::sqrt(std::fmax(0.0, 1.0 - d2 / 4));
  double mx = (a.x + b.x) / 2;
  double px = -dy / d;
  out[0] = mx - h * px;
  out[1] = mx + h * px;
  return 2;
}

int circle_boundary_roots(Point c, const Boundary& b, double out[2]) {
  if (b.type == Boundary::Type::arc) return circle_circle_roots(c, b.center, out);
  double dy = b.y - c.y;
  if (std::fabs(dy) > 1) return 0;
  double h = std::sqrt(1 - dy * dy);
  out[0] = c.x - h;
  out[1] = c.x + h;
  return 2;
}

namespace {

// Breakpoints of the upper circle about c against t's boundaries, clipped to
// t's x-range and the circle's domain.
int breakpoints(Point c, const PseudoTrapezoid& t, double out[6]) {
  double lo = std::max(t.x_lo, c.x - 1);
  double hi = std::min(t.x_hi, c.x + 1);
  if (hi - lo <= kTolX) return 0;
  int n = 0;
  out[n++] = lo;
  double r[2];
  for (const Boundary* b : {&t.top, &t.bottom}) {
    if (b->type == Boundary::Type::arc && b->center == c) continue;
    int k = circle_boundary_roots(c, *b, r);
    for (int i = 0; i < k; ++i)
      if (r[i] > lo && r[i] < hi) out[n++] = r[i];
  }
  out[n++] = hi;
  std::sort(out, out + n);
  return n;
}

}  // namespace

bool crosses_interior(Point c, const PseudoTrapezoid& t) {
  double bp[6];
  int n = breakpoints(c, t, bp);
  for (int i = 0; i + 1 < n; ++i) {
    if (bp[i + 1] - bp[i] <= kTolX) continue;
    double xm = (bp[i] + bp[i + 1]) / 2;
    double y = circle_y(c, ArcKind::upper, xm);
    if (t.bottom.eval(xm) < y && y < t.top.eval(xm)) return true;
  }
  return false;
}

std::optional<Arc> clip_to(Point c, const PseudoTrapezoid& t) {
  double bp[6];
  int n = breakpoints(c, t, bp);
  double lo = 0, hi = -1;
  for (int i = 0; i + 1 < n; ++i) {
    if (bp[i + 1] - bp[i] <= kTolX) continue;
    double xm = (bp[i] + bp[i + 1]) / 2;
    double y = circle_y(c, ArcKind::upper, xm);
    if (t.bottom.eval(xm) < y && y < t.top.eval(xm)) {
      if (hi < lo) lo = bp[i];
      hi = bp[i + 1];
    }
  }
  if (hi < lo) return std::nullopt;
  return Arc{c, ArcKind::upper, lo, hi};
}

namespace {

double dist2_piece(Point p, const Boundary& b, double x0, double x1) {
  if (b.type == Boundary::Type::horiz) {
    double x = std::clamp(p.x, x0, x1);
    return dist2(p, {x, b.y});
  }
  double ux = p.x - b.center.x;
  double uy = p.y - b.center.y;
  double L = std::sqrt(ux * ux + uy * uy);
  if (L == 0) return 1.0;
  bool half = b.kind == ArcKind::upper ? uy >= 0 : uy <= 0;
  double xn = b.center.x + ux / L;
  if (half && xn >= x0 && xn <= x1) return (L - 1) * (L - 1);
  return std::min(dist2(p, {x0, b.eval(x0)}), dist2(p, {x1, b.eval(x1)}));
}

double dist2_wall(Point p, double x, double ylo, double yhi) {
  double y = std::clamp(p.y, ylo, yhi);
  return dist2(p, {x, y});
}

}  // namespace

double dist2_to_region(Point p, const PseudoTrapezoid& t) {
  if (t.violation(p) <= 0) return 0;
  double b0 = t.bottom.eval(t.x_lo), b1 = t.bottom.eval(t.x_hi);
  double t0 = t.top.eval(t.x_lo), t1 = t.top.eval(t.x_hi);
  double d = dist2_wall(p, t.x_lo, b0, std::max(b0, t0));
  d = std::min(d, dist2_wall(p, t.x_hi, b1, std::max(b1, t1)));
  d = std::min(d, dist2_piece(p, t.top, t.x_lo, t.x_hi));
  d = std::min(d, dist2_piece(p, t.bottom, t.x_lo, t.x_hi));
  return d;
}

Rel relate_safe(Point c, const PseudoTrapezoid& t, double mu) {
  double b0 = t.bottom.eval(t.x_lo), b1 = t.bottom.eval(t.x_hi);
  double t0 = t.top.eval(t.x_lo), t1 = t.top.eval(t.x_hi);
  double in = (1 - mu) * (1 - mu);
  if (dist2(c, {t.x_lo, b0}) <= in && dist2(c, {t.x_hi, b1}) <= in &&
      dist2(c, {t.x_lo, t0}) <= in && dist2(c, {t.x_hi, t1}) <= in)
    return Rel::contains;
  double out = (1 + mu) * (1 + mu);
  // bounding box rejection
  double ylo = std::min(b0, b1);
  double yhi = std::max(t0, t1);
  if (t.top.type == Boundary::Type::arc && t.top.kind == ArcKind::upper &&
      t.top.center.x > t.x_lo && t.top.center.x < t.x_hi)
    yhi = t.top.center.y + 1;
  if (t.bottom.type == Boundary::Type::arc && t.bottom.kind == ArcKind::lower &&
      t.bottom.center.x > t.x_lo && t.bottom.center.x < t.x_hi)
    ylo = t.bottom.center.y - 1;
  double ex = std::max({t.x_lo - c.x, c.x - t.x_hi, 0.0});
  double ey = std::max({ylo - c.y, c.y - yhi, 0.0});
  if (ex * ex + ey * ey >= out) return Rel::disjoint;
  if (dist2_to_region(c, t) >= out) return Rel::disjoint;
  return Rel::crosses;
}

namespace {

Point rotate(Orient o, Point p) {
  switch (o) {
    case Orient::up: return p;
    case Orient::down: return {-p.x, -p.y};
    case Orient::right: return {-p.y, p.x};
    case Orient::left: return {p.y, -p.x};
  }
  return p;
}

Point unrotate(Orient o, Point p) {
  switch (o) {
    case Orient::up: return p;
    case Orient::down: return {-p.x, -p.y};
    case Orient::right: return {p.y, -p.x};
    case Orient::left: return {-p.y, p.x};
  }
  return p;
}

Point min_corner(Orient o, const Square& s) {
  Point a = rotate(o, s.lo);
  Point b = rotate(o, {s.lo.x + s.side, s.lo.y + s.side});
  return {std::min(a.x, b.x), std::min(a.y, b.y)};
}

}  // namespace

Point CellPairFrame::to_local(Point w) const {
  Point r = rotate(orientation, w);
  return {r.x - shift.x, r.y - shift.y};
}

Point CellPairFrame::from_local(Point l) const {
  return unrotate(orientation, {l.x + shift.x, l.y + shift.y});
}

CellPairFrame make_frame_offset(Point c_lo, int drow, int dcol) {
  if (drow == 0 && dcol == 0) throw GeomError("cell pair with identical cells");
  CellPairFrame f;
  f.cell_C = Square{c_lo, kSide};
  f.cell_Cp = Square{{c_lo.x + dcol * kSide, c_lo.y + drow * kSide}, kSide};
  if (drow >= 1)
    f.orientation = Orient::up;
  else if (drow <= -1)
    f.orientation = Orient::down;
  else if (dcol >= 1)
    f.orientation = Orient::right;
  else
    f.orientation = Orient::left;
  f.shift = min_corner(f.orientation, f.cell_Cp);
  Point cl = min_corner(f.orientation, f.cell_C);
  f.dc = static_cast<int>(std::lround((cl.x - f.shift.x) / kSide));
  f.dr = static_cast<int>(std::lround(-(cl.y - f.shift.y) / kSide));
  if (f.dr < 1) throw GeomError("cells not separated by an axis-parallel line");
  f.enlarged_Cp = standard_enlarged();
  PseudoTrapezoid& e = f.enlarged_C;
  e.x_lo = f.dc * kSide;
  e.x_hi = e.x_lo + kSide;
  e.top = Boundary::horiz(-(f.dr - 1) * kSide);
  e.bottom = Boundary::arc({e.x_lo + kSide / 2, -f.dr * kSide + kArcDrop}, ArcKind::lower);
  return f;
}

CellPairFrame make_frame(const Square& C, const Square& Cp) {
  int drow = static_cast<int>(std::lround((Cp.lo.y - C.lo.y) / kSide));
  int dcol = static_cast<int>(std::lround((Cp.lo.x - C.lo.x) / kSide));
  return make_frame_offset(C.lo, drow, dcol);
}

std::optional<Arc> clip_disk_boundary(Point c, const CellPairFrame& f) {
  require_finite(c);
  Square Cl{{f.dc * kSide, -f.dr * kSide}, kSide};
  if (!Cl.contains(c, 1e-9)) throw GeomError("center outside the query cell");
  return clip_to(c, f.enlarged_Cp);
}

std::optional<Arc> clip_disk_boundary_lower(Point p, const CellPairFrame& f) {
  require_finite(p);
  Square Cp{{0, 0}, kSide};
  if (!Cp.contains(p, 1e-9)) throw GeomError("center outside the point cell");
  auto a = clip_to(f.to_dual(p), standard_enlarged());
  if (!a) return std::nullopt;
  double sx = f.dc * kSide;
  return Arc{p, ArcKind::lower, a->x_lo + sx, a->x_hi + sx};
}

std::optional<Point> arcs_intersect(const Arc& a, const Arc& b) {
  if (a.kind != b.kind) throw GeomError("arcs of different kinds");
  double lo = std::max(a.x_lo, b.x_lo);
  double hi = std::min(a.x_hi, b.x_hi);
  if (a.center == b.center) {
    if (lo <= hi) throw GeomError("degenerate overlap of identical arcs");
    return std::nullopt;
  }
  if (lo > hi) return std::nullopt;
  double r[2];
  int k = circle_circle_roots(a.center, b.center, r);
  for (int i = 0; i < k; ++i) {
    if (r[i] < lo - kTolX || r[i] > hi + kTolX) continue;
    double x = std::clamp(r[i], lo, hi);
    double ya = a.y_at(x);
    double yb = b.y_at(x);
    if (std::fabs(ya - yb) <= 1e-9) return Point{x, ya};
  }
  return std::nullopt;
}

Side point_vs_arc(Point p, const Arc& a) {
  require_finite(p);
  if (p.x < a.x_lo || p.x > a.x_hi) return Side::outside_span;
  double y = a.y_at(p.x);
  if (std::fabs(p.y - y) <= 1e-12) return Side::on;
  return p.y < y ? Side::below : Side::above;
}

namespace {

Boundary reflect(const Boundary& b) {
  if (b.type == Boundary::Type::horiz) return Boundary::horiz(-b.y);
  return Boundary::arc({b.center.x, -b.center.y},
                       b.kind == ArcKind::upper ? ArcKind::lower : ArcKind::upper);
}

}  // namespace

ArcCell classify_arc_vs_trapezoid(const Arc& a, const PseudoTrapezoid& t) {
  Point c = a.center;
  PseudoTrapezoid u = t;
  if (a.kind == ArcKind::lower) {
    c = {c.x, -c.y};
    u.top = reflect(t.bottom);
    u.bottom = reflect(t.top);
  }
  double xm = (u.x_lo + u.x_hi) / 2;
  Point m{xm, (u.bottom.eval(xm) + u.top.eval(xm)) / 2};
  bool inside = dist2(m, c) <= 1.0;
  if (!crosses_interior(c, u)) return inside ? ArcCell::disk_contains_cell : ArcCell::disk_disjoint_from_cell;
  // the circle crosses the cell; the arc does only where its span reaches
  if (t.x_hi <= a.x_lo + kTolX || t.x_lo >= a.x_hi - kTolX)
    return inside ? ArcCell::cell_outside_span_below : ArcCell::cell_outside_span_above;
  return ArcCell::crosses;
}

}  // namespace udrs
