#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "udrs/batched.hpp"
#include "udrs/distsel.hpp"
#include "udrs/global.hpp"
#include "udrs/io.hpp"
#include "udrs/verify.hpp"

using namespace udrs;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kParse = 3, kFormat = 4, kVerify = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& s, std::size_t want, const char* what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used == 0 || used != tok.size() || !std::isfinite(x)) throw UsageError(std::string("bad ") + what + ": " + s);
    v.push_back(x);
  }
  if (v.size() != want) throw UsageError(std::string("bad ") + what + ": " + s);
  return v;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// least-squares slope of log y against log x, skipping nonpositive entries
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++k;
  }
  if (k < 2) return NAN;
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-disk range counting"};
  app.require_subcommand(1);

  std::string points, centers, out, index, center, mode = "inside", dist = "uniform", structure = "partition-tree";
  std::string algo = "primal-dual", suite = "all", bbox = "0,0,1,1", sizes = "1024,2048,4096,8192,16384";
  std::size_t n = 1000;
  std::int64_t k = 1;
  std::uint64_t seed = 0;
  double radius = 1, r = 1;
  bool json = false, timestamps = false;

  auto* gen = app.add_subcommand("gen", "generate a point file");
  gen->add_option("--n", n, "number of points")->required();
  gen->add_option("--dist", dist)->check(CLI::IsMember({"uniform", "clustered", "grid"}));
  gen->add_option("--bbox", bbox, "X0,Y0,X1,Y1");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out)->required();

  auto* build = app.add_subcommand("build", "build and save an index");
  build->add_option("--points", points)->required();
  build->add_option("--structure", structure)->check(CLI::IsMember({"partition-tree", "tradeoff"}));
  build->add_option("--r", r, "trade-off parameter");
  build->add_option("--radius", radius);
  build->add_option("--seed", seed);
  build->add_option("--out", out)->required();

  auto* query = app.add_subcommand("query", "count points in one disk");
  query->add_option("--index", index)->required();
  query->add_option("--center", center, "x,y")->required();
  query->add_option("--mode", mode)->check(CLI::IsMember({"inside", "outside"}));
  query->add_flag("--json", json);

  auto* batch = app.add_subcommand("batch", "count points in many disks");
  batch->add_option("--points", points)->required();
  batch->add_option("--centers", centers)->required();
  batch->add_option("--radius", radius);
  batch->add_option("--algo", algo)->check(CLI::IsMember({"primal-dual", "chi", "brute"}));
  batch->add_option("--seed", seed);
  batch->add_option("--out", out)->required();

  auto* circles = app.add_subcommand("circles", "count intersecting circle pairs");
  circles->add_option("--centers", centers)->required();
  circles->add_option("--radius", radius);

  auto* select = app.add_subcommand("select", "k-th smallest pairwise distance");
  select->add_option("--points", points)->required();
  select->add_option("--k", k)->required();
  select->add_option("--seed", seed);

  auto* unit = app.add_subcommand("unit-distance", "detect a pair at distance one");
  unit->add_option("--points", points)->required();

  auto* verify = app.add_subcommand("verify", "run invariant checks");
  std::vector<std::string> suite_names = verify_suites();
  suite_names.push_back("all");
  verify->add_option("--suite", suite)->check(CLI::IsMember(suite_names));
  verify->add_option("--n", n);
  verify->add_option("--seed", seed);

  auto* bench = app.add_subcommand("bench", "scaling benchmark");
  std::string bench_suite = "batched";
  bench->add_option("--suite", bench_suite)->check(CLI::IsMember({"batched"}));
  bench->add_option("--sizes", sizes);
  bench->add_option("--seed", seed);
  bench->add_option("--out", out)->required();
  bench->add_flag("--timestamps", timestamps, "add a wall-clock column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      auto b = split_numbers(bbox, 4, "bbox");
      if (!(b[0] < b[2] && b[1] < b[3])) throw UsageError("empty bbox");
      Dist d = dist == "uniform" ? Dist::uniform : dist == "clustered" ? Dist::clustered : Dist::grid;
      write_points(out, generate(n, d, {b[0], b[1], b[2], b[3]}, seed));
    } else if (*build) {
      if (!(radius > 0) || !std::isfinite(radius)) throw UsageError("radius must be positive");
      if (!(r >= 1)) throw UsageError("r must be at least 1");
      GlobalParams gp;
      gp.kind = structure == "tradeoff" ? StructureKind::tradeoff : StructureKind::partition_tree;
      gp.r = r;
      gp.seed = seed;
      save_index(compose_global(read_points(points), radius, gp), out);
    } else if (*query) {
      auto c = split_numbers(center, 2, "center");
      GlobalIndex g = load_index(index);
      Mode m = mode == "outside" ? Mode::outside : Mode::inside;
      std::int64_t count = query_global(g, {c[0], c[1]}, m);
      if (json) {
        nlohmann::json j{{"count", count}, {"mode", mode}, {"center", {c[0], c[1]}}, {"radius", g.grid.radius}};
        std::cout << j.dump() << '\n';
      } else {
        std::cout << count << '\n';
      }
    } else if (*batch) {
      if (!(radius > 0) || !std::isfinite(radius)) throw UsageError("radius must be positive");
      auto P = read_points(points);
      auto Q = read_points(centers);
      BatchParams bp;
      bp.seed = seed;
      CountReport rep = algo == "chi" ? batched_count_chi(P, Q, radius, bp)
                                      : batched_count(P, Q, radius, algo == "brute" ? BatchAlgo::brute : BatchAlgo::primal_dual, bp);
      std::ofstream o = open_out(out);
      o << "center_x,center_y,count\n";
      for (std::size_t j = 0; j < Q.size(); ++j) o << num(Q[j].x) << ',' << num(Q[j].y) << ',' << rep.counts[j] << '\n';
    } else if (*circles) {
      if (!(radius > 0) || !std::isfinite(radius)) throw UsageError("radius must be positive");
      std::cout << count_circle_intersections(read_points(centers), radius) << '\n';
    } else if (*select) {
      auto P = read_points(points);
      Rng rng(seed);
      std::cout << num(select_distance(P, k, rng)) << '\n';
    } else if (*unit) {
      std::cout << (unit_distance_detect(read_points(points)).exists ? "true" : "false") << '\n';
    } else if (*verify) {
      auto checks = run_verify(suite, n, seed);
      std::size_t w = 0;
      for (const Check& c : checks) w = std::max(w, c.suite.size() + c.name.size() + 2);
      bool ok = true;
      for (const Check& c : checks) {
        std::string label = c.suite + ": " + c.name;
        std::cout << (c.pass ? "PASS  " : "FAIL  ");
        if (c.detail.empty())
          std::cout << label;
        else
          std::cout << std::left << std::setw(static_cast<int>(w)) << label << "  " << c.detail;
        std::cout << '\n';
        ok = ok && c.pass;
      }
      std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
      if (!ok) return kVerify;
    } else if (*bench) {
      std::vector<std::size_t> ns;
      {
        std::stringstream in(sizes);
        std::string tok;
        while (std::getline(in, tok, ',')) {
          std::size_t used = 0;
          unsigned long v = 0;
          try {
            v = std::stoul(tok, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used == 0 || used != tok.size() || v == 0) throw UsageError("bad sizes: " + sizes);
          ns.push_back(v);
        }
      }
      std::ofstream o = open_out(out);
      o << "n,m,wall_ms,cells,depth,ops" << (timestamps ? ",timestamp" : "") << '\n';
      std::vector<double> xs, wall, cells, ops;
      for (std::size_t s : ns) {
        auto P = generate(s, Dist::uniform, {0, 0, 1, 1}, seed);
        auto Q = generate(s, Dist::uniform, {0, 0, 1, 1}, seed + 1);
        BatchParams bp;
        bp.seed = seed;
        auto t0 = std::chrono::steady_clock::now();
        CountReport rep = batched_count(P, Q, 1.0, BatchAlgo::primal_dual, bp);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        o << s << ',' << s << ',' << std::fixed << std::setprecision(3) << ms << std::defaultfloat << ','
          << rep.stats.cells << ',' << rep.stats.depth << ',' << rep.stats.ops;
        if (timestamps) {
          std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
          o << ',' << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
        }
        o << '\n';
        xs.push_back(static_cast<double>(s));
        wall.push_back(ms);
        cells.push_back(static_cast<double>(rep.stats.cells));
        ops.push_back(static_cast<double>(rep.stats.ops));
      }
      o << std::setprecision(4) << "slope,slope," << loglog_slope(xs, wall) << ',' << loglog_slope(xs, cells) << ",,"
        << loglog_slope(xs, ops) << (timestamps ? "," : "") << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const FormatError& e) {
    std::cerr << "index format error: " << e.what() << '\n';
    return kFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
