#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "udrs/geom.hpp"

namespace udrs {

struct GridStrip {
  double left = 0;
  double right = 0;
  std::int32_t cols = 0;
  std::int32_t rect_begin = 0;
  std::int32_t rect_end = 0;
};

struct GridRect {
  double bottom = 0;
  double top = 0;
  std::int32_t rows = 0;
  std::int32_t cell_begin = 0;  // cells of this rectangle, sorted by (row, col)
  std::int32_t cell_end = 0;
};

struct GridCell {
  std::int32_t strip = 0;
  std::int32_t rect = 0;
  std::int32_t row = 0;
  std::int32_t col = 0;
  std::int32_t pt_begin = 0;  // P(C) in GridIndex::pts
  std::int32_t pt_end = 0;
  std::int32_t nb_begin = 0;  // N(C) in GridIndex::nbrs
  std::int32_t nb_end = 0;
  std::int32_t size() const { return pt_end - pt_begin; }
};

struct GridIndex {
  double radius = 1;
  double scale = 1;  // 1 / radius
  std::vector<GridStrip> strips;
  std::vector<GridRect> rects;
  std::vector<GridCell> cells;    // the set of relevant cells
  std::vector<std::int32_t> nbrs;  // concatenated N(C) lists (cell indices)
  std::vector<Point> pts;          // rescaled points grouped by cell
  std::vector<Point> orig;         // same points, input units
  std::vector<std::int32_t> ids;   // input index of each grouped point

  std::size_t num_points() const { return pts.size(); }
  Point cell_lo(const GridCell& c) const;
  Square cell_square(std::int32_t c) const { return {cell_lo(cells[c]), kSide}; }
  // Cell containing the rescaled point q, if it is one of the stored cells.
  std::optional<std::int32_t> locate(Point q) const;
  std::optional<std::int32_t> locate_world(Point q) const {
    return locate({q.x * scale, q.y * scale});
  }
};

inline constexpr double kStripGap = 3.0;

// Points are in input units; the index rescales by 1 / radius.
GridIndex build_grid(const std::vector<Point>& P, double radius = 1.0);

}  // namespace udrs
