#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace udrs {

// Side of a grid cell in rescaled units.
inline constexpr double kSide = 0.70710678118654752440;
// Height of the arc h(a,b) center below the edge ab: sqrt(1 - side^2/4).
inline constexpr double kArcDrop = 0.93541434669348534640;

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

class GeomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }
void require_finite(Point p);

inline double dist2(Point a, Point b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Closed unit disk membership.
bool point_in_disk(Point p, Point c);

enum class ArcKind : std::uint8_t { upper, lower };

// y of the upper (lower) half of the unit circle about c at abscissa x.
inline double circle_y(Point c, ArcKind k, double x) {
  double dx = x - c.x;
  double h = std::sqrt(std::fmax(0.0, 1.0 - dx * dx));
  return k == ArcKind::upper ? c.y + h : c.y - h;
}

struct Arc {
  Point center;
  ArcKind kind = ArcKind::upper;
  double x_lo = 0;
  double x_hi = 0;
  double y_at(double x) const { return circle_y(center, kind, x); }
};

struct Boundary {
  enum class Type : std::uint8_t { horiz, arc };
  Type type = Type::horiz;
  ArcKind kind = ArcKind::upper;
  double y = 0;
  Point center;

  static Boundary horiz(double y) {
    Boundary b;
    b.type = Type::horiz;
    b.y = y;
    return b;
  }
  static Boundary arc(Point c, ArcKind k = ArcKind::upper) {
    Boundary b;
    b.type = Type::arc;
    b.kind = k;
    b.center = c;
    return b;
  }
  double eval(double x) const { return type == Type::horiz ? y : circle_y(center, kind, x); }
  bool same(const Boundary& o) const {
    if (type != o.type) return false;
    return type == Type::horiz ? y == o.y : (center == o.center && kind == o.kind);
  }
};

struct PseudoTrapezoid {
  double x_lo = 0;
  double x_hi = 0;
  Boundary top;
  Boundary bottom;

  // Amount by which p lies outside (0 when inside).
  double violation(Point p) const;
  bool contains(Point p, double tol = 1e-12) const { return violation(p) <= tol; }
  void corners(Point out[4]) const;
  double area() const;
};

// The enlarged cell in canonical coordinates: [0,s] x [0, arc].
PseudoTrapezoid standard_enlarged();

enum class Rel : std::uint8_t { crosses, contains, disjoint };

enum class Mode : std::uint8_t { inside, outside };

inline constexpr double kTolX = 1e-12;
inline constexpr double kSafeMargin = 1e-9;

// True iff the upper unit circle about c meets the interior of t.
bool crosses_interior(Point c, const PseudoTrapezoid& t);

// Conservative disk-versus-cell test. contains / disjoint are only reported
// when they hold with margin mu; anything close is reported as crosses.
Rel relate_safe(Point c, const PseudoTrapezoid& t, double mu = kSafeMargin);

// Squared distance from p to the closed region t.
double dist2_to_region(Point p, const PseudoTrapezoid& t);

// Abscissae where the unit circle about c meets boundary b.
int circle_boundary_roots(Point c, const Boundary& b, double out[2]);

// Abscissae where two unit circles meet.
int circle_circle_roots(Point a, Point b, double out[2]);

struct Square {
  Point lo;
  double side = kSide;
  Point center() const { return {lo.x + side / 2, lo.y + side / 2}; }
  bool contains(Point p, double tol = 1e-12) const {
    return p.x >= lo.x - tol && p.x <= lo.x + side + tol && p.y >= lo.y - tol &&
           p.y <= lo.y + side + tol;
  }
};

// Position of C' relative to C before canonicalisation.
enum class Orient : std::uint8_t { up, down, right, left };

struct CellPairFrame {
  Square cell_C;
  Square cell_Cp;
  PseudoTrapezoid enlarged_Cp;  // canonical coordinates
  PseudoTrapezoid enlarged_C;   // canonical coordinates, lower-arc bottom
  Orient orientation = Orient::up;
  int dr = 1;
  int dc = 0;
  Point shift;

  Point to_local(Point w) const;
  // C in canonical coordinates.
  Square query_cell() const { return Square{{dc * kSide, -dr * kSide}, kSide}; }
  Point from_local(Point l) const;
  // Canonical coordinates <-> dual coordinates, where C maps to the standard
  // enlarged cell and lower arcs become upper arcs.
  Point to_dual(Point l) const { return {l.x - dc * kSide, -l.y - (dr - 1) * kSide}; }
  Point from_dual(Point d) const { return {d.x + dc * kSide, -(d.y + (dr - 1) * kSide)}; }
};

// Frame for a query cell C and point cell Cp (both of side kSide, distinct,
// on a common grid).
CellPairFrame make_frame(const Square& C, const Square& Cp);
// Frame from integer grid offsets of Cp relative to C.
CellPairFrame make_frame_offset(Point c_lo, int drow, int dcol);

// Upper arc of the disk about c (canonical coordinates) inside C-bar'.
std::optional<Arc> clip_disk_boundary(Point c, const CellPairFrame& f);
// Lower arc of the disk about p (canonical coordinates) inside C-bar.
std::optional<Arc> clip_disk_boundary_lower(Point p, const CellPairFrame& f);
// x-interval of the upper arc about c inside t (empty when it misses t).
std::optional<Arc> clip_to(Point c, const PseudoTrapezoid& t);

std::optional<Point> arcs_intersect(const Arc& a, const Arc& b);

enum class Side : std::uint8_t { below, on, above, outside_span };
Side point_vs_arc(Point p, const Arc& a);

// The _below variants mean the cell lies on the disk's side of the arc.
enum class ArcCell : std::uint8_t {
  crosses,
  disk_contains_cell,
  disk_disjoint_from_cell,
  cell_outside_span_above,
  cell_outside_span_below
};
ArcCell classify_arc_vs_trapezoid(const Arc& a, const PseudoTrapezoid& t);

struct PointsSoA {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t size() const { return x.size(); }
  void push(Point p) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
  Point at(std::size_t i) const { return {x[i], y[i]}; }
};

// Deterministic random source; std engines with explicit conversions so
// streams do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  double normal() {
    double u = uniform();
    double v = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u)) * std::cos(6.283185307179586 * v);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace udrs
