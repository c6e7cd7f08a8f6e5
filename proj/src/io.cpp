#include "udrs/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <type_traits>

namespace udrs {

std::vector<Point> parse_points(std::istream& in) {
  std::vector<Point> P;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    auto skip = [&] {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    };
    skip();
    if (i == line.size() || line[i] == '#') continue;
    double v[2];
    for (int k = 0; k < 2; ++k) {
      if (k == 1) {
        skip();
        if (i < line.size() && line[i] == ',') ++i;
        skip();
      }
      const int col = static_cast<int>(i) + 1;
      if (i == line.size()) throw ParseError("expected a coordinate", ln, col);
      const char* b = line.c_str() + i;
      char* e = nullptr;
      v[k] = std::strtod(b, &e);
      if (e == b) throw ParseError("malformed number", ln, col);
      if (!std::isfinite(v[k])) throw ParseError("non-finite coordinate", ln, col);
      i += static_cast<std::size_t>(e - b);
      if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',')
        throw ParseError("malformed number", ln, col);
    }
    skip();
    if (i != line.size()) throw ParseError("trailing characters", ln, static_cast<int>(i) + 1);
    P.push_back({v[0], v[1]});
  }
  return P;
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_points(in);
}

void write_points(std::ostream& out, const std::vector<Point>& P) {
  out << std::setprecision(17);
  for (Point p : P) out << p.x << ' ' << p.y << '\n';
}

void write_points(const std::string& path, const std::vector<Point>& P) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_points(out, P);
}

std::vector<Point> generate(std::size_t n, Dist dist, Box box, std::uint64_t seed) {
  Rng rng(seed);
  const double w = box.x1 - box.x0, h = box.y1 - box.y0;
  std::vector<Point> P;
  P.reserve(n);
  switch (dist) {
    case Dist::uniform:
      for (std::size_t i = 0; i < n; ++i) P.push_back({box.x0 + w * rng.uniform(), box.y0 + h * rng.uniform()});
      break;
    case Dist::clustered: {
      std::size_t k = std::max<std::size_t>(1, n / 512);
      std::vector<Point> ctr;
      for (std::size_t i = 0; i < k; ++i) ctr.push_back({box.x0 + w * rng.uniform(), box.y0 + h * rng.uniform()});
      const double sd = 0.05 * std::min(w, h);
      for (std::size_t i = 0; i < n; ++i) {
        Point c = ctr[rng.below(k)];
        double x = std::clamp(c.x + sd * rng.normal(), box.x0, box.x1);
        double y = std::clamp(c.y + sd * rng.normal(), box.y0, box.y1);
        P.push_back({x, y});
      }
      break;
    }
    case Dist::grid: {
      auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      double dx = side > 1 ? w / static_cast<double>(side - 1) : 0;
      double dy = side > 1 ? h / static_cast<double>(side - 1) : 0;
      for (std::size_t i = 0; i < n; ++i)
        P.push_back({box.x0 + dx * static_cast<double>(i % side), box.y0 + dy * static_cast<double>(i / side)});
      break;
    }
  }
  return P;
}

namespace {

class Writer {
 public:
  template <class T>
  void pod(T v) {
    static_assert(std::is_arithmetic_v<T> || std::is_enum_v<T>);
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf.append(b, sizeof(T));
  }
  void pt(Point p) {
    pod(p.x);
    pod(p.y);
  }
  void bnd(const Boundary& b) {
    pod(b.type);
    pod(b.kind);
    pod(b.y);
    pt(b.center);
  }
  void trap(const PseudoTrapezoid& t) {
    pod(t.x_lo);
    pod(t.x_hi);
    bnd(t.top);
    bnd(t.bottom);
  }
  void frame(const CellPairFrame& f) {
    pt(f.cell_C.lo);
    pod(f.cell_C.side);
    pt(f.cell_Cp.lo);
    pod(f.cell_Cp.side);
    trap(f.enlarged_Cp);
    trap(f.enlarged_C);
    pod(f.orientation);
    pod(f.dr);
    pod(f.dc);
    pt(f.shift);
  }
  template <class T, class F>
  void vec(const std::vector<T>& v, F f) {
    pod(static_cast<std::uint64_t>(v.size()));
    for (const T& x : v) f(x);
  }
  template <class T>
  void vec(const std::vector<T>& v) {
    vec(v, [this](const T& x) { pod(x); });
  }
  std::string buf;
};

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  template <class T>
  T pod() {
    if (b_.size() - i_ < sizeof(T)) throw FormatError("index payload truncated");
    T v;
    std::memcpy(&v, b_.data() + i_, sizeof(T));
    i_ += sizeof(T);
    return v;
  }
  Point pt() {
    double x = pod<double>();
    return {x, pod<double>()};
  }
  Boundary bnd() {
    Boundary b;
    b.type = pod<Boundary::Type>();
    b.kind = pod<ArcKind>();
    b.y = pod<double>();
    b.center = pt();
    return b;
  }
  PseudoTrapezoid trap() {
    PseudoTrapezoid t;
    t.x_lo = pod<double>();
    t.x_hi = pod<double>();
    t.top = bnd();
    t.bottom = bnd();
    return t;
  }
  CellPairFrame frame() {
    CellPairFrame f;
    f.cell_C.lo = pt();
    f.cell_C.side = pod<double>();
    f.cell_Cp.lo = pt();
    f.cell_Cp.side = pod<double>();
    f.enlarged_Cp = trap();
    f.enlarged_C = trap();
    f.orientation = pod<Orient>();
    f.dr = pod<int>();
    f.dc = pod<int>();
    f.shift = pt();
    return f;
  }
  template <class T, class F>
  std::vector<T> vec(F f) {
    auto n = pod<std::uint64_t>();
    if (n > b_.size() - i_) throw FormatError("index payload truncated");
    std::vector<T> v;
    v.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t k = 0; k < n; ++k) v.push_back(f());
    return v;
  }
  template <class T>
  std::vector<T> vec() {
    return vec<T>([this] { return pod<T>(); });
  }
  bool done() const { return i_ == b_.size(); }

 private:
  std::string_view b_;
  std::size_t i_ = 0;
};

void put_tree(Writer& w, const PartitionTree& t) {
  w.frame(t.frame);
  w.pod(t.radius);
  w.pod(t.scale);
  w.vec(t.nodes, [&](const PartitionNode& n) {
    w.trap(n.trap);
    w.pod(n.count);
    w.pod(n.child_begin);
    w.pod(n.child_end);
    w.pod(n.pt_begin);
    w.pod(n.pt_end);
  });
  w.vec(t.xs);
  w.vec(t.ys);
  w.vec(t.ids);
}

PartitionTree get_tree(Reader& r) {
  PartitionTree t;
  t.frame = r.frame();
  t.radius = r.pod<double>();
  t.scale = r.pod<double>();
  t.nodes = r.vec<PartitionNode>([&] {
    PartitionNode n;
    n.trap = r.trap();
    n.count = r.pod<std::int32_t>();
    n.child_begin = r.pod<std::int32_t>();
    n.child_end = r.pod<std::int32_t>();
    n.pt_begin = r.pod<std::int32_t>();
    n.pt_end = r.pod<std::int32_t>();
    return n;
  });
  t.xs = r.vec<double>();
  t.ys = r.vec<double>();
  t.ids = r.vec<std::int32_t>();
  if (t.xs.size() != t.ys.size()) throw FormatError("inconsistent tree");
  for (const PartitionNode& n : t.nodes)
    if (n.pt_begin < 0 || n.pt_end < n.pt_begin || n.pt_end > t.size() || n.child_begin < 0 ||
        n.child_end < n.child_begin || static_cast<std::size_t>(n.child_end) > t.nodes.size())
      throw FormatError("inconsistent tree");
  return t;
}

void put_cutting(Writer& w, const HierarchicalCutting& hc) {
  w.vec(hc.cells, [&](const CutCell& c) {
    w.trap(c.trap);
    w.pod(c.level);
    w.pod(c.parent);
    w.pod(c.child_begin);
    w.pod(c.child_end);
    w.pod(c.h_begin);
    w.pod(c.h_end);
    w.pod(c.weight);
  });
  w.vec(hc.levels, [&](const std::vector<std::int32_t>& l) { w.vec(l); });
  w.vec(hc.hlist);
  w.vec(hc.arcs.centers, [&](Point p) { w.pt(p); });
  w.vec(hc.arcs.weights);
  w.trap(hc.arcs.region);
  w.pod(hc.rho);
  w.pod(hc.r);
  w.pod(hc.total);
  w.pod(static_cast<std::uint8_t>(hc.finished));
  w.pod(hc.c_max);
  w.pod(hc.ops);
  w.pod(hc.retries);
}

HierarchicalCutting get_cutting(Reader& r) {
  HierarchicalCutting hc;
  hc.cells = r.vec<CutCell>([&] {
    CutCell c;
    c.trap = r.trap();
    c.level = r.pod<std::int32_t>();
    c.parent = r.pod<std::int32_t>();
    c.child_begin = r.pod<std::int32_t>();
    c.child_end = r.pod<std::int32_t>();
    c.h_begin = r.pod<std::int32_t>();
    c.h_end = r.pod<std::int32_t>();
    c.weight = r.pod<double>();
    return c;
  });
  hc.levels = r.vec<std::vector<std::int32_t>>([&] { return r.vec<std::int32_t>(); });
  hc.hlist = r.vec<std::int32_t>();
  hc.arcs.centers = r.vec<Point>([&] { return r.pt(); });
  hc.arcs.weights = r.vec<double>();
  hc.arcs.region = r.trap();
  hc.rho = r.pod<int>();
  hc.r = r.pod<double>();
  hc.total = r.pod<double>();
  hc.finished = r.pod<std::uint8_t>() != 0;
  hc.c_max = r.pod<int>();
  hc.ops = r.pod<std::uint64_t>();
  hc.retries = r.pod<std::uint64_t>();
  if (hc.cells.empty() || hc.levels.empty()) throw FormatError("inconsistent cutting");
  const auto nc = static_cast<std::int32_t>(hc.cells.size());
  for (const CutCell& c : hc.cells)
    if (c.child_begin < 0 || c.child_end < c.child_begin || c.child_end > nc) throw FormatError("inconsistent cutting");
  return hc;
}

void put_tradeoff(Writer& w, const TradeoffIndex& t) {
  w.frame(t.frame);
  w.pod(t.radius);
  w.pod(t.scale);
  w.pod(t.r);
  put_cutting(w, t.cut);
  w.vec(t.cells, [&](const TradeoffCell& c) {
    w.pod(c.h1);
    w.pod(c.h2);
    w.pod(c.tree);
    w.pod(c.l_begin);
    w.pod(c.l_end);
  });
  w.vec(t.trees, [&](const PartitionTree& x) { put_tree(w, x); });
  w.vec(t.lists);
  w.vec(t.xs);
  w.vec(t.ys);
}

TradeoffIndex get_tradeoff(Reader& r) {
  TradeoffIndex t;
  t.frame = r.frame();
  t.radius = r.pod<double>();
  t.scale = r.pod<double>();
  t.r = r.pod<double>();
  t.cut = get_cutting(r);
  t.cells = r.vec<TradeoffCell>([&] {
    TradeoffCell c;
    c.h1 = r.pod<std::int32_t>();
    c.h2 = r.pod<std::int32_t>();
    c.tree = r.pod<std::int32_t>();
    c.l_begin = r.pod<std::int32_t>();
    c.l_end = r.pod<std::int32_t>();
    return c;
  });
  t.trees = r.vec<PartitionTree>([&] { return get_tree(r); });
  t.lists = r.vec<std::int32_t>();
  t.xs = r.vec<double>();
  t.ys = r.vec<double>();
  if (t.cells.size() != t.cut.cells.size() || t.xs.size() != t.ys.size()) throw FormatError("inconsistent trade-off");
  for (const TradeoffCell& c : t.cells)
    if (c.tree >= static_cast<std::int32_t>(t.trees.size())) throw FormatError("inconsistent trade-off");
  return t;
}

void put_grid(Writer& w, const GridIndex& g) {
  w.pod(g.radius);
  w.pod(g.scale);
  w.vec(g.strips, [&](const GridStrip& s) {
    w.pod(s.left);
    w.pod(s.right);
    w.pod(s.cols);
    w.pod(s.rect_begin);
    w.pod(s.rect_end);
  });
  w.vec(g.rects, [&](const GridRect& s) {
    w.pod(s.bottom);
    w.pod(s.top);
    w.pod(s.rows);
    w.pod(s.cell_begin);
    w.pod(s.cell_end);
  });
  w.vec(g.cells, [&](const GridCell& c) {
    for (std::int32_t v : {c.strip, c.rect, c.row, c.col, c.pt_begin, c.pt_end, c.nb_begin, c.nb_end}) w.pod(v);
  });
  w.vec(g.nbrs);
  w.vec(g.pts, [&](Point p) { w.pt(p); });
  w.vec(g.orig, [&](Point p) { w.pt(p); });
  w.vec(g.ids);
}

GridIndex get_grid(Reader& r) {
  GridIndex g;
  g.radius = r.pod<double>();
  g.scale = r.pod<double>();
  g.strips = r.vec<GridStrip>([&] {
    GridStrip s;
    s.left = r.pod<double>();
    s.right = r.pod<double>();
    s.cols = r.pod<std::int32_t>();
    s.rect_begin = r.pod<std::int32_t>();
    s.rect_end = r.pod<std::int32_t>();
    return s;
  });
  g.rects = r.vec<GridRect>([&] {
    GridRect s;
    s.bottom = r.pod<double>();
    s.top = r.pod<double>();
    s.rows = r.pod<std::int32_t>();
    s.cell_begin = r.pod<std::int32_t>();
    s.cell_end = r.pod<std::int32_t>();
    return s;
  });
  g.cells = r.vec<GridCell>([&] {
    GridCell c;
    for (std::int32_t* v : {&c.strip, &c.rect, &c.row, &c.col, &c.pt_begin, &c.pt_end, &c.nb_begin, &c.nb_end})
      *v = r.pod<std::int32_t>();
    return c;
  });
  g.nbrs = r.vec<std::int32_t>();
  g.pts = r.vec<Point>([&] { return r.pt(); });
  g.orig = r.vec<Point>([&] { return r.pt(); });
  g.ids = r.vec<std::int32_t>();
  const auto np = static_cast<std::int32_t>(g.pts.size());
  const auto nn = static_cast<std::int32_t>(g.nbrs.size());
  const auto nc = static_cast<std::int32_t>(g.cells.size());
  if (g.orig.size() != g.pts.size()) throw FormatError("inconsistent grid");
  for (const GridCell& c : g.cells)
    if (c.pt_begin < 0 || c.pt_end < c.pt_begin || c.pt_end > np || c.nb_begin < 0 || c.nb_end < c.nb_begin ||
        c.nb_end > nn || c.strip < 0 || c.strip >= static_cast<std::int32_t>(g.strips.size()) || c.rect < 0 ||
        c.rect >= static_cast<std::int32_t>(g.rects.size()))
      throw FormatError("inconsistent grid");
  for (std::int32_t v : g.nbrs)
    if (v < 0 || v >= nc) throw FormatError("inconsistent grid");
  for (const GridRect& rc : g.rects)
    if (rc.cell_begin < 0 || rc.cell_end < rc.cell_begin || rc.cell_end > nc) throw FormatError("inconsistent grid");
  for (const GridStrip& s : g.strips)
    if (s.rect_begin < 0 || s.rect_end < s.rect_begin || s.rect_end > static_cast<std::int32_t>(g.rects.size()))
      throw FormatError("inconsistent grid");
  return g;
}

std::uint32_t crc(std::string_view b) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(b.data()), static_cast<uInt>(b.size())));
}

}  // namespace

std::string serialize_index(const GlobalIndex& g) {
  Writer p;
  p.pod(g.params.r);
  p.pod(g.params.seed);
  p.pod(g.params.tree.n0);
  p.pod(g.params.tree.part.c);
  p.pod(g.params.tree.part.cell_factor);
  p.pod(g.params.tree.part.seed);
  put_grid(p, g.grid);
  p.vec(g.pair);
  p.vec(g.trees, [&](const PartitionTree& t) { put_tree(p, t); });
  p.vec(g.tradeoffs, [&](const TradeoffIndex& t) { put_tradeoff(p, t); });
  p.vec(g.xs);
  p.vec(g.ys);
  p.vec(g.box_lo, [&](Point q) { p.pt(q); });
  p.vec(g.box_hi, [&](Point q) { p.pt(q); });

  Writer h;
  h.buf = "UDRS";
  h.pod(kIndexVersion);
  h.pod(g.params.kind);
  h.pod(g.grid.radius);
  h.pod(static_cast<std::uint64_t>(p.buf.size()));
  h.buf += p.buf;
  h.pod(crc(p.buf));
  return std::move(h.buf);
}

GlobalIndex deserialize_index(const std::string& bytes) {
  std::string_view b(bytes);
  if (b.size() < 4 || b.substr(0, 4) != "UDRS") throw FormatError("not an index file");
  Reader h(b.substr(4));
  auto version = h.pod<std::uint32_t>();
  if (version != kIndexVersion) throw FormatError("unsupported index version " + std::to_string(version));
  auto kind = h.pod<std::uint8_t>();
  if (kind > 1) throw FormatError("unknown structure kind");
  auto radius = h.pod<double>();
  auto len = h.pod<std::uint64_t>();
  const std::size_t head = 4 + 4 + 1 + 8 + 8;
  if (b.size() != head + len + 4) throw FormatError("index file has the wrong length");
  std::string_view payload = b.substr(head, static_cast<std::size_t>(len));
  Reader t(b.substr(head + static_cast<std::size_t>(len)));
  if (t.pod<std::uint32_t>() != crc(payload)) throw FormatError("index checksum mismatch");

  Reader r(payload);
  GlobalIndex g;
  g.params.kind = static_cast<StructureKind>(kind);
  g.params.r = r.pod<double>();
  g.params.seed = r.pod<std::uint64_t>();
  g.params.tree.n0 = r.pod<std::int32_t>();
  g.params.tree.part.c = r.pod<double>();
  g.params.tree.part.cell_factor = r.pod<double>();
  g.params.tree.part.seed = r.pod<std::uint64_t>();
  g.grid = get_grid(r);
  g.pair = r.vec<std::int32_t>();
  g.trees = r.vec<PartitionTree>([&] { return get_tree(r); });
  g.tradeoffs = r.vec<TradeoffIndex>([&] { return get_tradeoff(r); });
  g.xs = r.vec<double>();
  g.ys = r.vec<double>();
  g.box_lo = r.vec<Point>([&] { return r.pt(); });
  g.box_hi = r.vec<Point>([&] { return r.pt(); });
  if (!r.done()) throw FormatError("trailing bytes in index payload");
  if (g.grid.radius != radius) throw FormatError("radius mismatch");
  if (g.pair.size() != g.grid.nbrs.size() || g.xs.size() != g.grid.pts.size() ||
      g.ys.size() != g.xs.size() || g.box_lo.size() != g.grid.cells.size() || g.box_hi.size() != g.box_lo.size())
    throw FormatError("inconsistent index");
  const auto ns = static_cast<std::int32_t>(g.params.kind == StructureKind::partition_tree ? g.trees.size()
                                                                                           : g.tradeoffs.size());
  for (std::int32_t s : g.pair)
    if (s >= ns) throw FormatError("inconsistent index");
  return g;
}

void save_index(const GlobalIndex& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::string b = serialize_index(g);
  out.write(b.data(), static_cast<std::streamsize>(b.size()));
  if (!out) throw std::runtime_error("cannot write " + path);
}

GlobalIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_index(ss.str());
}

}  // namespace udrs
