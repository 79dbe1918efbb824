#pragma once

#include <string>
#include <vector>

#include "chartensor/cluster.hpp"
#include "chartensor/preprocess.hpp"
#include "chartensor/tensor_core.hpp"

namespace chartensor {

enum class ChartKind { kBar, kHistogram, kScatter };
ChartKind parse_chart_kind(const std::string& name);
const char* to_string(ChartKind kind);

enum class Orientation { kVertical, kHorizontal };
Orientation parse_orientation(const std::string& name);
const char* to_string(Orientation o);

/// One table row in pixel space. For bars and histograms `x` is the bar
/// centre along the category axis and `y` the bar length; for scatter plots
/// (x, y) is the mark position.
struct TableRow {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct DataTable {
  ChartKind kind = ChartKind::kBar;
  std::vector<TableRow> rows;
};

/// Corner centroids sharing an x position (within tolerance).
struct XGroup {
  double x = 0.0;
  std::vector<double> ys;
  bool synthesized = false;
};

struct BarPattern {
  std::vector<XGroup> x_groups;
  double baseline_y = 0.0;
};

struct BarParams {
  double x_tolerance = 3.0;
  double y_tolerance = 3.0;
  /// Bars shorter than this are reported with length 0.
  double min_height = 3.0;
  Orientation orientation = Orientation::kVertical;
};

/// Groups centroids sorted by (x, y); a group closes once a centroid lies
/// more than `tolerance` to the right of the group's first member.
std::vector<XGroup> group_by_x(const std::vector<CentroidPoint>& cents, double tolerance);

/// Mode of the bottom-most centroid rows (values within `tolerance` of the
/// maximum y, rounded to whole pixels, ties to the smaller row); the result
/// is the mean of the centroids in the modal row. Without centroids, the
/// lowest ink row of the canvas.
double detect_baseline(const CanvasImage& canvas, const std::vector<CentroidPoint>& cents,
                       double tolerance = 3.0);

DataTable extract_bars(const std::vector<CentroidPoint>& cents, const CanvasImage& canvas,
                       const BarParams& params = {}, Diagnostics* diag = nullptr);

DataTable extract_histogram(const std::vector<CentroidPoint>& cents, const CanvasImage& canvas,
                            const BarParams& params = {}, Diagnostics* diag = nullptr);

DataTable extract_scatter(const std::vector<CentroidPoint>& cents);

/// Second consolidation level for scatter plots. Each DBSCAN cluster is
/// assigned to the canvas component (N8) its members touch most often,
/// searching up to `search_radius` px from each point; clusters sharing a
/// component are merged and their members averaged. Clusters that touch no
/// component are kept as they are. Noise points touching a component that
/// already holds a cluster join it; on a component without one they form a
/// new group when at least `cs.params.min_pts` of them are there.
std::vector<CentroidPoint> merge_by_component(const ClusterSet& cs,
                                              const std::vector<PointXY>& points,
                                              const CanvasImage& canvas, int search_radius = 3);

}  // namespace chartensor
