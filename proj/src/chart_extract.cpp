#include "chartensor/chart_extract.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace chartensor {

ChartKind parse_chart_kind(const std::string& name) {
  if (name == "bar") return ChartKind::kBar;
  if (name == "histogram" || name == "hist") return ChartKind::kHistogram;
  if (name == "scatter") return ChartKind::kScatter;
  fail(ErrorKind::kInvalidParameter, "unknown chart type '" + name + "'");
}

const char* to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::kBar: return "bar";
    case ChartKind::kHistogram: return "histogram";
    case ChartKind::kScatter: return "scatter";
  }
  return "bar";
}

Orientation parse_orientation(const std::string& name) {
  if (name == "vertical") return Orientation::kVertical;
  if (name == "horizontal") return Orientation::kHorizontal;
  fail(ErrorKind::kInvalidParameter, "unknown orientation '" + name + "'");
}

const char* to_string(Orientation o) {
  return o == Orientation::kVertical ? "vertical" : "horizontal";
}

std::vector<XGroup> group_by_x(const std::vector<CentroidPoint>& cents, double tolerance) {
  std::vector<CentroidPoint> sorted = cents;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::vector<XGroup> groups;
  double first_x = 0.0;
  double sum_x = 0.0;
  int count = 0;
  for (const auto& c : sorted) {
    if (groups.empty() || c.x - first_x > tolerance) {
      if (!groups.empty()) groups.back().x = sum_x / count;
      groups.emplace_back();
      first_x = c.x;
      sum_x = 0.0;
      count = 0;
    }
    groups.back().ys.push_back(c.y);
    sum_x += c.x;
    ++count;
  }
  if (!groups.empty()) groups.back().x = sum_x / count;
  for (auto& g : groups) std::sort(g.ys.begin(), g.ys.end());
  return groups;
}

namespace {

double lowest_ink_row(const CanvasImage& canvas) {
  for (int y = canvas.height() - 1; y >= 0; --y)
    for (int x = 0; x < canvas.width(); ++x)
      if (canvas.ink(x, y)) return y + 0.5;
  return canvas.height() > 0 ? canvas.height() - 0.5 : 0.0;
}

}  // namespace

double detect_baseline(const CanvasImage& canvas, const std::vector<CentroidPoint>& cents,
                       double tolerance) {
  if (cents.empty()) return lowest_ink_row(canvas);
  double max_y = cents.front().y;
  for (const auto& c : cents) max_y = std::max(max_y, c.y);
  std::map<long, std::vector<double>> rows;  // ordered: ties resolve to smaller y
  for (const auto& c : cents) {
    if (max_y - c.y <= tolerance) rows[std::lround(c.y)].push_back(c.y);
  }
  const std::vector<double>* best = nullptr;
  for (const auto& [row, ys] : rows) {
    if (!best || ys.size() > best->size()) best = &ys;
  }
  double sum = 0.0;
  for (double y : *best) sum += y;
  return sum / static_cast<double>(best->size());
}

namespace {

CanvasImage rotate_ccw(const CanvasImage& canvas) {
  // (x, y) -> (y, W-1-x): the left edge becomes the bottom edge.
  const int w = canvas.width(), h = canvas.height();
  CanvasImage out;
  out.source_path = canvas.source_path;
  out.steps = canvas.steps;
  out.intensity = GrayImage(h, w, 1.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.intensity(y, w - 1 - x) = canvas.intensity(x, y);
  return out;
}

std::vector<CentroidPoint> rotate_ccw(const std::vector<CentroidPoint>& cents, int width) {
  std::vector<CentroidPoint> out = cents;
  for (auto& c : out) {
    const double x = c.x;
    c.x = c.y;
    c.y = (width - 1) - x;
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

class BarScanner {
 public:
  BarScanner(const CanvasImage& canvas, const BarParams& params, bool histogram,
             Diagnostics* diag)
      : canvas_(canvas), params_(params), histogram_(histogram), diag_(diag) {}

  DataTable run(const std::vector<CentroidPoint>& cents) {
    DataTable table;
    table.kind = histogram_ ? ChartKind::kHistogram : ChartKind::kBar;
    if (cents.empty()) fail(ErrorKind::kEmptyTable, "no degenerate-point centroids");

    pattern_.baseline_y = detect_baseline(canvas_, cents, params_.y_tolerance);
    pattern_.x_groups = group_by_x(cents, params_.x_tolerance);
    scan_row_ = static_cast<int>(std::floor(pattern_.baseline_y)) - 2;

    std::vector<bool> used(pattern_.x_groups.size(), false);
    struct Gap {
      double x0, x1;
    };
    std::vector<Gap> gaps;
    std::vector<Gap> spans;

    auto& groups = pattern_.x_groups;
    std::size_t k = 0;
    int guard = 0;
    while (k + 1 < groups.size() && guard++ < 100000) {
      const double xa = groups[k].x, xb = groups[k + 1].x;
      const int left = static_cast<int>(std::ceil(xa + 0.5));
      const int right = static_cast<int>(std::floor(xb - 0.5));
      if (right < left) {
        ++k;
        continue;
      }
      int ink = 0;
      for (int x = left; x <= right; ++x) ink += canvas_.ink(x, scan_row_) ? 1 : 0;
      const int span = right - left + 1;
      if (ink == 0) {
        gaps.push_back({xa, xb});
        ++k;
        continue;
      }
      if (ink < span) {
        // The scanline crosses an edge with no corner centroids: insert the
        // missing edge at the first ink transition and re-examine.
        const bool starts_in_ink = canvas_.ink(left, scan_row_);
        int x = left;
        while (x <= right && canvas_.ink(x, scan_row_) == starts_in_ink) ++x;
        XGroup synth;
        synth.x = x - 0.5;
        synth.synthesized = true;
        groups.insert(groups.begin() + static_cast<long>(k) + 1, synth);
        used.insert(used.begin() + static_cast<long>(k) + 1, false);
        if (diag_) diag_->warn("synthesised missing bar edge at x=" + fmt(synth.x));
        continue;
      }
      table.rows.push_back({0.5 * (xa + xb), bar_length(groups[k], groups[k + 1])});
      spans.push_back({xa, xb});
      used[k] = used[k + 1] = true;
      ++k;
    }

    if (histogram_ && !spans.empty()) {
      const double bin = bin_width(spans);
      split_merged_bins(spans, bin, table);
      add_zero_bins(gaps, bin, table);
    }

    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (!used[i] && diag_) diag_->warn("unpaired corner group at x=" + fmt(groups[i].x));
    }
    if (table.rows.empty()) {
      fail(ErrorKind::kEmptyTable, "no bar spans found among " +
                                       std::to_string(groups.size()) + " corner groups");
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const TableRow& a, const TableRow& b) { return a.x < b.x; });
    return table;
  }

 private:
  double bar_length(const XGroup& a, const XGroup& b) {
    const double baseline = pattern_.baseline_y;
    const double mid = 0.5 * (a.x + b.x);
    const int col = static_cast<int>(std::lround(mid));
    int top_ink = scan_row_;
    while (top_ink - 1 >= 0 && canvas_.ink(col, top_ink - 1)) --top_ink;

    std::vector<double> candidates;
    for (const auto* g : {&a, &b})
      for (double y : g->ys)
        if (baseline - y > params_.y_tolerance) candidates.push_back(y);

    double top = 0.0;
    const double* nearest = nullptr;
    for (const double& y : candidates) {
      if (!nearest || std::abs(y - top_ink) < std::abs(*nearest - top_ink)) nearest = &y;
    }
    if (nearest && std::abs(*nearest - top_ink) <= 2.0 * params_.y_tolerance) {
      double sum = 0.0;
      int n = 0;
      for (double y : candidates) {
        if (std::abs(y - *nearest) <= params_.y_tolerance) {
          sum += y;
          ++n;
        }
      }
      top = sum / n;
    } else {
      top = top_ink - 0.5;
      if (diag_) diag_->warn("synthesised missing top corner at x=" + fmt(mid));
    }
    double length = baseline - top;
    if (length < params_.min_height) {
      if (diag_) diag_->warn("bar at x=" + fmt(mid) + " near baseline, reported as 0");
      length = 0.0;
    }
    return length;
  }

  // Bins are uniform. The lower median span width is the base estimate (a
  // lone narrow outlier cannot shrink it), refined by the lower median of
  // the per-bin widths it implies.
  template <typename Gap>
  static double bin_width(const std::vector<Gap>& spans) {
    auto lower_median = [](std::vector<double> v) {
      const auto mid = v.begin() + static_cast<long>((v.size() - 1) / 2);
      std::nth_element(v.begin(), mid, v.end());
      return *mid;
    };
    std::vector<double> widths;
    for (const auto& s : spans) widths.push_back(s.x1 - s.x0);
    const double base = lower_median(widths);
    std::vector<double> per_bin;
    for (double w : widths) per_bin.push_back(w / std::max(1.0, std::round(w / base)));
    return lower_median(per_bin);
  }

  // Adjacent bins of equal height leave no corner on their shared edge, so
  // one span covers several bins. Split it evenly.
  template <typename Gap>
  void split_merged_bins(const std::vector<Gap>& spans, double bin, DataTable& table) {
    std::vector<TableRow> rows;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const double w = spans[i].x1 - spans[i].x0;
      const int count = std::max(1, static_cast<int>(std::lround(w / bin)));
      if (count == 1 || std::abs(w - count * bin) > params_.x_tolerance * count) {
        rows.push_back(table.rows[i]);
        continue;
      }
      for (int j = 0; j < count; ++j) {
        const double x = spans[i].x0 + (j + 0.5) * w / count;
        rows.push_back({x, table.rows[i].y});
      }
      if (diag_) diag_->warn("split span at x=" + fmt(table.rows[i].x) + " into " + std::to_string(count) + " equal bins");
    }
    table.rows = std::move(rows);
  }

  template <typename Gap>
  void add_zero_bins(const std::vector<Gap>& gaps, double bin, DataTable& table) {
    for (const auto& g : gaps) {
      const double w = g.x1 - g.x0;
      if (w < 0.5 * bin) continue;
      const int count = std::max(1, static_cast<int>(std::lround(w / bin)));
      for (int i = 0; i < count; ++i) {
        const double x = g.x0 + (i + 0.5) * w / count;
        table.rows.push_back({x, 0.0});
        if (diag_) diag_->warn("zero-frequency bin at x=" + fmt(x));
      }
    }
  }

  const CanvasImage& canvas_;
  BarParams params_;
  bool histogram_;
  Diagnostics* diag_;
  BarPattern pattern_;
  int scan_row_ = 0;
};

DataTable extract_bar_like(const std::vector<CentroidPoint>& cents, const CanvasImage& canvas,
                           const BarParams& params, bool histogram, Diagnostics* diag) {
  if (params.orientation == Orientation::kVertical) {
    return BarScanner(canvas, params, histogram, diag).run(cents);
  }
  const CanvasImage rotated = rotate_ccw(canvas);
  return BarScanner(rotated, params, histogram, diag).run(rotate_ccw(cents, canvas.width()));
}

}  // namespace

DataTable extract_bars(const std::vector<CentroidPoint>& cents, const CanvasImage& canvas,
                       const BarParams& params, Diagnostics* diag) {
  return extract_bar_like(cents, canvas, params, false, diag);
}

DataTable extract_histogram(const std::vector<CentroidPoint>& cents, const CanvasImage& canvas,
                            const BarParams& params, Diagnostics* diag) {
  return extract_bar_like(cents, canvas, params, true, diag);
}

DataTable extract_scatter(const std::vector<CentroidPoint>& cents) {
  DataTable table;
  table.kind = ChartKind::kScatter;
  for (const auto& c : cents) table.rows.push_back({c.x, c.y});
  std::sort(table.rows.begin(), table.rows.end(), [](const TableRow& a, const TableRow& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return table;
}

std::vector<CentroidPoint> merge_by_component(const ClusterSet& cs,
                                              const std::vector<PointXY>& points,
                                              const CanvasImage& canvas, int search_radius) {
  BinaryImage ink(canvas.width(), canvas.height());
  for (int y = 0; y < canvas.height(); ++y)
    for (int x = 0; x < canvas.width(); ++x) ink(x, y) = canvas.ink(x, y) ? 1 : 0;
  const LabelMap labels = label_components(ink);

  // Nearest labelled pixel within the search window (Chebyshev rings).
  auto label_near = [&](const PointXY& p) {
    const int px = static_cast<int>(std::lround(p.x)), py = static_cast<int>(std::lround(p.y));
    for (int r = 0; r <= search_radius; ++r) {
      int best = 0;
      double best_d = 0.0;
      for (int y = py - r; y <= py + r; ++y)
        for (int x = px - r; x <= px + r; ++x) {
          if (std::max(std::abs(x - px), std::abs(y - py)) != r || !labels.contains(x, y)) continue;
          const int l = labels(x, y);
          if (l == 0) continue;
          const double d = std::hypot(x - p.x, y - p.y);
          if (best == 0 || d < best_d || (d == best_d && l < best)) {
            best = l;
            best_d = d;
          }
        }
      if (best) return best;
    }
    return 0;
  };

  struct Group {
    double sx = 0, sy = 0;
    int n = 0;
  };
  std::vector<Group> groups;
  std::map<int, std::size_t> by_label;
  for (const auto& members : cs.clusters) {
    std::map<int, int> votes;
    for (int i : members) {
      const int l = label_near(points[static_cast<std::size_t>(i)]);
      if (l) ++votes[l];
    }
    int label = 0, count = 0;
    for (const auto& [l, c] : votes)
      if (c > count) {
        label = l;
        count = c;
      }
    std::size_t g;
    if (label == 0) {
      g = groups.size();
      groups.emplace_back();
    } else if (auto it = by_label.find(label); it != by_label.end()) {
      g = it->second;
    } else {
      g = groups.size();
      by_label[label] = g;
      groups.emplace_back();
    }
    for (int i : members) {
      groups[g].sx += points[static_cast<std::size_t>(i)].x;
      groups[g].sy += points[static_cast<std::size_t>(i)].y;
      ++groups[g].n;
    }
  }
  // Noise points on a component that already has a cluster complete its
  // ring. On an unclaimed component they form a group of their own once
  // there are min_pts of them (a mark whose ring is sparser than eps).
  std::map<int, std::vector<int>> orphans;
  for (int i : cs.noise) {
    const auto& p = points[static_cast<std::size_t>(i)];
    const int l = label_near(p);
    if (!l) continue;
    if (auto it = by_label.find(l); it != by_label.end()) {
      groups[it->second].sx += p.x;
      groups[it->second].sy += p.y;
      ++groups[it->second].n;
    } else {
      orphans[l].push_back(i);
    }
  }
  for (const auto& [l, members] : orphans) {
    if (static_cast<int>(members.size()) < cs.params.min_pts) continue;
    Group g;
    for (int i : members) {
      g.sx += points[static_cast<std::size_t>(i)].x;
      g.sy += points[static_cast<std::size_t>(i)].y;
      ++g.n;
    }
    groups.push_back(g);
  }
  std::vector<CentroidPoint> out;
  for (const auto& g : groups) out.push_back({g.sx / g.n, g.sy / g.n, g.n});
  return out;
}

}  // namespace chartensor
