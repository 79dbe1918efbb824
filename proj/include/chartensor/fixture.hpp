#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chartensor/chart_extract.hpp"
#include "chartensor/cluster.hpp"
#include "chartensor/image.hpp"

namespace chartensor {

enum class MarkShape { kCircle, kSquare, kCross };
MarkShape parse_mark_shape(const std::string& name);
const char* to_string(MarkShape shape);

/// Synthetic chart description. Bars are laid out left to right starting
/// `gap` pixels right of the y axis; bar lengths scale so the largest value
/// spans the plot height. Scatter points are data coordinates in [0,1]^2
/// unless `points_in_pixels` is set, in which case they are mark centres in
/// pixel-index coordinates.
struct FixtureSpec {
  std::string name = "fixture";
  ChartKind kind = ChartKind::kBar;
  std::vector<double> values;
  std::vector<PointXY> points;
  bool points_in_pixels = false;
  int width = 400;
  int height = 300;
  int bar_width = 30;
  int gap = 20;
  MarkShape mark = MarkShape::kCircle;
  double mark_radius = 4.0;
  int border_width = 1;
  bool gridlines = true;
  bool axes = true;
  bool outline_only = false;
  bool antialias = true;
  /// Render bars horizontally (the vertical layout rotated clockwise).
  bool horizontal = false;
  std::uint64_t seed = 1;
  std::uint8_t fill[3] = {70, 130, 180};
  // Plot-area margins.
  int margin_left = 40;
  int margin_right = 20;
  int margin_top = 20;
  int margin_bottom = 30;
};

/// Pixel bounding box of one bar, inclusive, with its source value.
struct BarTruth {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double value = 0.0;
};

struct GroundTruth {
  ChartKind kind = ChartKind::kBar;
  int width = 0;
  int height = 0;
  /// Row of the x axis; bars end on the row above it.
  int baseline_row = 0;
  std::vector<BarTruth> bars;
  std::vector<PointXY> corners;
  std::vector<PointXY> mark_centers;
  /// Pixels touched by dark ink (objects, axes, ticks).
  long ink_pixels = 0;
  /// Expected table in pixel space (bar centre and length, or mark centre).
  DataTable pixel_table;
  /// Source values (bars) or source points (scatter) as a table.
  DataTable data_table;
};

struct Fixture {
  RgbImage image;
  GroundTruth truth;
};

/// Deterministic rasteriser. Throws Error(kInvalidSpec) when the geometry
/// does not fit the canvas or a field is out of range.
Fixture render_fixture(const FixtureSpec& spec);

std::string ground_truth_json(const GroundTruth& truth, const FixtureSpec& spec);

/// Named fixture catalogue used by the tests and the `fixtures` command.
std::vector<FixtureSpec> standard_fixtures();
FixtureSpec standard_fixture(const std::string& name);

}  // namespace chartensor
