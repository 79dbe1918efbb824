#include "chartensor/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace chartensor {

MarkShape parse_mark_shape(const std::string& name) {
  if (name == "circle") return MarkShape::kCircle;
  if (name == "square") return MarkShape::kSquare;
  if (name == "cross") return MarkShape::kCross;
  fail(ErrorKind::kInvalidSpec, "unknown mark shape '" + name + "'");
}

const char* to_string(MarkShape shape) {
  switch (shape) {
    case MarkShape::kCircle: return "circle";
    case MarkShape::kSquare: return "square";
    case MarkShape::kCross: return "cross";
  }
  return "circle";
}

namespace {

struct Rgb {
  double r, g, b;
};

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGrid{220, 220, 220};

// Continuous-coordinate scene: pixel (i, j) covers [i, i+1) x [j, j+1).
struct Rect {
  double x0, y0, x1, y1;  // half-open
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

struct Mark {
  double cx, cy;
};

class Scene {
 public:
  Scene(const FixtureSpec& spec) : spec_(spec), fill_{double(spec.fill[0]), double(spec.fill[1]), double(spec.fill[2])} {}

  std::vector<Rect> lines;   // gridlines (light)
  std::vector<Rect> strokes;  // axes and ticks (black)
  std::vector<Rect> bars;
  std::vector<Mark> marks;

  // Returns the colour at a sample and whether it is dark ink.
  Rgb sample(double x, double y, bool& ink) const {
    ink = false;
    Rgb c = kWhite;
    for (const auto& l : lines)
      if (l.contains(x, y)) c = kGrid;
    for (const auto& s : strokes)
      if (s.contains(x, y)) {
        c = kBlack;
        ink = true;
      }
    const double bw = spec_.border_width;
    for (const auto& b : bars) {
      if (!b.contains(x, y)) continue;
      const bool border = x < b.x0 + bw || x >= b.x1 - bw || y < b.y0 + bw || y >= b.y1 - bw;
      if (border) {
        c = kBlack;
        ink = true;
      } else if (!spec_.outline_only) {
        c = fill_;
        ink = true;
      }
    }
    for (const auto& m : marks) {
      const double dx = x - m.cx, dy = y - m.cy;
      const double r = spec_.mark_radius;
      bool inside = false, border = false;
      switch (spec_.mark) {
        case MarkShape::kCircle: {
          const double d = std::hypot(dx, dy);
          inside = d <= r;
          border = d > r - bw;
          break;
        }
        case MarkShape::kSquare: {
          const double d = std::max(std::abs(dx), std::abs(dy));
          inside = d <= r;
          border = d > r - bw;
          break;
        }
        case MarkShape::kCross: {
          const double half = std::max(1.5, r / 3.0);
          inside = (std::abs(dx) <= half && std::abs(dy) <= r) ||
                   (std::abs(dy) <= half && std::abs(dx) <= r);
          border = false;
          break;
        }
      }
      if (!inside) continue;
      if (border) {
        c = kBlack;
        ink = true;
      } else if (!spec_.outline_only || spec_.mark == MarkShape::kCross) {
        c = fill_;
        ink = true;
      }
    }
    return c;
  }

 private:
  const FixtureSpec& spec_;
  Rgb fill_;
};

void check_spec(const FixtureSpec& s) {
  auto bad = [](const std::string& m) { fail(ErrorKind::kInvalidSpec, m); };
  if (s.width <= 0 || s.height <= 0) bad("canvas size must be positive");
  if (s.border_width < 0) bad("border width must be >= 0");
  if (s.margin_left < 1 || s.margin_right < 0 || s.margin_top < 0 || s.margin_bottom < 2)
    bad("margins out of range");
  if (s.kind == ChartKind::kScatter) {
    if (s.points.empty()) bad("scatter fixture needs points");
    if (!(s.mark_radius >= 1.0)) bad("mark radius must be >= 1");
  } else {
    if (s.values.empty()) bad("bar fixture needs values");
    if (s.bar_width <= 0 || s.gap < 0) bad("bar width must be positive and gap >= 0");
    for (double v : s.values)
      if (!(v >= 0.0) || !std::isfinite(v)) bad("bar values must be finite and >= 0");
  }
}

// Rotates a rendered vertical chart clockwise: (x, y) -> (H-1-y, x).
RgbImage rotate_cw(const RgbImage& in) {
  RgbImage out(in.height, in.width);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      const auto* p = in.at(x, y);
      out.set(in.height - 1 - y, x, p[0], p[1], p[2]);
    }
  return out;
}

}  // namespace

Fixture render_fixture(const FixtureSpec& spec_in) {
  check_spec(spec_in);
  FixtureSpec spec = spec_in;
  if (spec.horizontal) std::swap(spec.width, spec.height);

  const int W = spec.width, H = spec.height;
  const int plot_x0 = spec.margin_left, plot_x1 = W - spec.margin_right;
  const int plot_top = spec.margin_top, base = H - spec.margin_bottom;
  if (plot_x1 - plot_x0 < 4 || base - plot_top < 4) {
    fail(ErrorKind::kInvalidSpec, "margins leave no plot area");
  }

  Scene scene(spec);
  Fixture fx;
  GroundTruth& gt = fx.truth;
  gt.kind = spec.kind;
  gt.width = W;
  gt.height = H;
  gt.baseline_row = base;
  gt.pixel_table.kind = spec.kind;
  gt.data_table.kind = spec.kind;

  const int plot_h = base - plot_top;
  if (spec.gridlines) {
    for (int k = 1; k <= 5; ++k) {
      const int y = base - (k * plot_h) / 5;
      scene.lines.push_back({double(plot_x0), double(y), double(plot_x1), double(y + 1)});
    }
  }
  if (spec.axes) {
    scene.strokes.push_back({double(plot_x0 - 1), double(base), double(plot_x1), double(base + 1)});
    scene.strokes.push_back({double(plot_x0 - 1), double(plot_top), double(plot_x0), double(base + 1)});
    for (int k = 1; k <= 5; ++k) {
      const int y = base - (k * plot_h) / 5;
      scene.strokes.push_back({double(plot_x0 - 5), double(y), double(plot_x0 - 1), double(y + 1)});
    }
  }

  if (spec.kind == ChartKind::kScatter) {
    const double pad = spec.mark_radius + 4.0;
    for (const auto& p : spec.points) {
      double cx, cy;
      if (spec.points_in_pixels) {
        cx = p.x + 0.5;
        cy = p.y + 0.5;
      } else {
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0)
          fail(ErrorKind::kInvalidSpec, "scatter data points must lie in [0,1]^2");
        cx = plot_x0 + pad + p.x * (plot_x1 - plot_x0 - 2.0 * pad);
        cy = base - pad - p.y * (plot_h - 2.0 * pad);
      }
      if (cx - spec.mark_radius < 0 || cy - spec.mark_radius < 0 || cx + spec.mark_radius > W ||
          cy + spec.mark_radius > H)
        fail(ErrorKind::kInvalidSpec, "scatter mark outside the canvas");
      scene.marks.push_back({cx, cy});
      gt.mark_centers.push_back({cx - 0.5, cy - 0.5});
      gt.pixel_table.rows.push_back({cx - 0.5, cy - 0.5});
      gt.data_table.rows.push_back({p.x, p.y});
    }
    std::sort(gt.pixel_table.rows.begin(), gt.pixel_table.rows.end(),
              [](const TableRow& a, const TableRow& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  } else {
    const double vmax = *std::max_element(spec.values.begin(), spec.values.end());
    const int n = static_cast<int>(spec.values.size());
    const int step = spec.kind == ChartKind::kHistogram ? spec.bar_width : spec.bar_width + spec.gap;
    const int right = plot_x0 + spec.gap + (n - 1) * step + spec.bar_width;
    if (right > plot_x1) {
      fail(ErrorKind::kInvalidSpec, "bars need " + std::to_string(right - plot_x0) +
                                        " px but the plot is " + std::to_string(plot_x1 - plot_x0) +
                                        " px wide");
    }
    for (int i = 0; i < n; ++i) {
      const int x0 = plot_x0 + spec.gap + i * step;
      const int x1 = x0 + spec.bar_width;
      const int len = vmax > 0.0 ? static_cast<int>(std::lround(spec.values[i] / vmax * plot_h)) : 0;
      gt.pixel_table.rows.push_back({0.5 * (x0 + x1 - 1), double(len)});
      gt.data_table.rows.push_back({double(i), spec.values[i]});
      if (len == 0) continue;
      const int top = base - len;
      scene.bars.push_back({double(x0), double(top), double(x1), double(base)});
      gt.bars.push_back({x0, top, x1 - 1, base - 1, spec.values[i]});
      gt.corners.push_back({double(x0), double(top)});
      gt.corners.push_back({double(x1 - 1), double(top)});
      gt.corners.push_back({double(x0), double(base - 1)});
      gt.corners.push_back({double(x1 - 1), double(base - 1)});
    }
  }

  RgbImage img(W, H);
  const int ss = spec.antialias ? 4 : 1;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double r = 0, g = 0, b = 0;
      bool any_ink = false;
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          bool ink = false;
          const Rgb c = scene.sample(x + (sx + 0.5) / ss, y + (sy + 0.5) / ss, ink);
          r += c.r;
          g += c.g;
          b += c.b;
          any_ink = any_ink || ink;
        }
      const double n = ss * ss;
      img.set(x, y, static_cast<std::uint8_t>(std::lround(r / n)),
              static_cast<std::uint8_t>(std::lround(g / n)),
              static_cast<std::uint8_t>(std::lround(b / n)));
      if (any_ink) ++gt.ink_pixels;
    }
  }

  if (spec.horizontal) {
    img = rotate_cw(img);
    auto rot = [H](PointXY p) { return PointXY{H - 1 - p.y, p.x}; };
    for (auto& c : gt.corners) c = rot(c);
    for (auto& b : gt.bars) {
      const BarTruth o = b;
      b = {H - 1 - o.y1, o.x0, H - 1 - o.y0, o.x1, o.value};
    }
    gt.baseline_row = H - 1 - base;
    std::swap(gt.width, gt.height);
  }
  fx.image = std::move(img);
  return fx;
}

std::string ground_truth_json(const GroundTruth& gt, const FixtureSpec& spec) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = spec.name;
  j["kind"] = to_string(gt.kind);
  j["width"] = gt.width;
  j["height"] = gt.height;
  j["orientation"] = spec.horizontal ? "horizontal" : "vertical";
  j["baseline_row"] = gt.baseline_row;
  j["antialias"] = spec.antialias;
  j["outline_only"] = spec.outline_only;
  j["ink_pixels"] = gt.ink_pixels;
  auto& bars = j["bars"] = ordered_json::array();
  for (const auto& b : gt.bars)
    bars.push_back({{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}, {"value", b.value}});
  auto& corners = j["corners"] = ordered_json::array();
  for (const auto& c : gt.corners) corners.push_back({c.x, c.y});
  auto& marks = j["mark_centers"] = ordered_json::array();
  for (const auto& m : gt.mark_centers) marks.push_back({m.x, m.y});
  auto& table = j["pixel_table"] = ordered_json::array();
  for (const auto& r : gt.pixel_table.rows) table.push_back({r.x, r.y});
  auto& data = j["data_table"] = ordered_json::array();
  for (const auto& r : gt.data_table.rows) data.push_back({r.x, r.y});
  return j.dump(2) + "\n";
}

namespace {

FixtureSpec bar_spec(std::string name, std::vector<double> values) {
  FixtureSpec s;
  s.name = std::move(name);
  s.values = std::move(values);
  return s;
}

// Points in [0,1]^2 along a trend, with rejection sampling so marks stay at
// least `min_px` apart once mapped into the plot.
std::vector<PointXY> trend_points(std::uint64_t seed, int n, double slope, double noise,
                                  const FixtureSpec& spec, double min_px) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> e(0.0, noise);
  const double pad = spec.mark_radius + 4.0;
  const double sx = spec.width - spec.margin_left - spec.margin_right - 2 * pad;
  const double sy = spec.height - spec.margin_top - spec.margin_bottom - 2 * pad;
  std::vector<PointXY> pts;
  for (int attempt = 0; attempt < 100000 && static_cast<int>(pts.size()) < n; ++attempt) {
    const double x = u(rng);
    const double y = std::clamp(0.5 + slope * (x - 0.5) + e(rng), 0.0, 1.0);
    bool ok = true;
    for (const auto& p : pts)
      if (std::hypot((p.x - x) * sx, (p.y - y) * sy) < min_px) ok = false;
    if (ok) pts.push_back({x, y});
  }
  return pts;
}

FixtureSpec scatter_spec(std::string name, std::uint64_t seed, double slope, double noise) {
  FixtureSpec s;
  s.name = std::move(name);
  s.kind = ChartKind::kScatter;
  s.seed = seed;
  s.points = trend_points(seed, 12, slope, noise, s, 4.0 * s.mark_radius);
  return s;
}

}  // namespace

std::vector<FixtureSpec> standard_fixtures() {
  std::vector<FixtureSpec> out;

  // 100x100 solid black square, 40 px wide, for corner tests.
  FixtureSpec rect = bar_spec("rect", {1.0});
  rect.width = rect.height = 100;
  rect.margin_left = 20;
  rect.margin_right = 10;
  rect.margin_top = 30;
  rect.margin_bottom = 30;
  rect.gap = 10;
  rect.bar_width = 40;
  rect.gridlines = rect.axes = false;
  rect.border_width = 0;
  rect.antialias = false;
  rect.fill[0] = rect.fill[1] = rect.fill[2] = 0;
  out.push_back(rect);

  out.push_back(bar_spec("bars_basic", {5, 3, 8}));

  FixtureSpec thin = bar_spec("bars_thin", {6, 9, 4, 7, 10, 5, 8, 3, 6, 9});
  thin.width = 500;
  thin.bar_width = 14;
  thin.gap = 24;
  out.push_back(thin);

  FixtureSpec var = bar_spec("bars_high_variance", {4, 40, 7, 95, 15, 60});
  var.width = 520;
  var.height = 360;
  var.bar_width = 36;
  var.gap = 34;
  out.push_back(var);

  FixtureSpec many = bar_spec("bars_many", {12, 18, 25, 31, 22, 16, 28, 35});
  many.width = 600;
  many.height = 400;
  many.bar_width = 40;
  many.gap = 25;
  out.push_back(many);

  FixtureSpec horiz = bar_spec("bars_horizontal", {5, 3, 8, 6});
  horiz.width = 300;
  horiz.height = 400;
  horiz.horizontal = true;
  out.push_back(horiz);

  // Outline-only chart and its filled twin (neither has gridlines, which
  // hole filling would otherwise turn into solid cells).
  FixtureSpec outline = bar_spec("bars_outline", {5, 3, 8, 6});
  outline.gridlines = false;
  outline.outline_only = true;
  outline.border_width = 2;
  out.push_back(outline);
  FixtureSpec filled = outline;
  filled.name = "bars_filled_twin";
  filled.outline_only = false;
  out.push_back(filled);

  FixtureSpec hist = bar_spec("hist_basic", {2, 5, 9, 4});
  hist.kind = ChartKind::kHistogram;
  hist.bar_width = 50;
  out.push_back(hist);

  FixtureSpec zero = bar_spec("hist_zero_bin", {3, 7, 0, 6, 2});
  zero.kind = ChartKind::kHistogram;
  zero.bar_width = 40;
  out.push_back(zero);

  {
    FixtureSpec normal;
    normal.name = "hist_normal";
    normal.kind = ChartKind::kHistogram;
    normal.seed = 7;
    normal.width = 560;
    normal.height = 360;
    normal.bar_width = 36;
    std::mt19937_64 rng(normal.seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> counts(12, 0.0);
    for (int i = 0; i < 400; ++i) {
      const int bin = static_cast<int>(std::floor((d(rng) + 3.0) / 0.5));
      if (bin >= 0 && bin < 12) counts[bin] += 1.0;
    }
    normal.values = counts;
    out.push_back(normal);
  }

  out.push_back(scatter_spec("scatter_positive", 11, 0.8, 0.08));
  out.push_back(scatter_spec("scatter_negative", 12, -0.8, 0.08));
  out.push_back(scatter_spec("scatter_none", 13, 0.0, 0.25));
  {
    FixtureSpec ov = scatter_spec("scatter_overlap", 14, 0.5, 0.15);
    ov.points.resize(9);
    // Tenth mark overlaps the first one.
    ov.points.push_back({std::min(1.0, ov.points[0].x + 0.01), ov.points[0].y});
    out.push_back(ov);
  }
  return out;
}

FixtureSpec standard_fixture(const std::string& name) {
  for (auto& s : standard_fixtures())
    if (s.name == name) return s;
  fail(ErrorKind::kInvalidSpec, "unknown fixture '" + name + "'");
}

}  // namespace chartensor
