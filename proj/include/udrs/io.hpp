#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "udrs/geom.hpp"
#include "udrs/global.hpp"

namespace udrs {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One point per line, "x y" or "x,y"; '#' starts a comment line.
std::vector<Point> parse_points(std::istream& in);
std::vector<Point> read_points(const std::string& path);
void write_points(std::ostream& out, const std::vector<Point>& P);
void write_points(const std::string& path, const std::vector<Point>& P);

enum class Dist : std::uint8_t { uniform, clustered, grid };

struct Box {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};

std::vector<Point> generate(std::size_t n, Dist dist, Box box, std::uint64_t seed);

inline constexpr std::uint32_t kIndexVersion = 1;

void save_index(const GlobalIndex& g, const std::string& path);
GlobalIndex load_index(const std::string& path);
std::string serialize_index(const GlobalIndex& g);
GlobalIndex deserialize_index(const std::string& bytes);

}  // namespace udrs
