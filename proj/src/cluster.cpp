#include "chartensor/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace chartensor {

namespace {

// Uniform grid with cell size eps: neighbours of a point lie in the 3x3 block
// of cells around it.
class GridIndex {
 public:
  GridIndex(const std::vector<PointXY>& points, double eps) : points_(points), eps_(eps) {
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      cells_[key(cell(points[i].x), cell(points[i].y))].push_back(i);
    }
  }

  /// Indices within eps of point i (including i), ascending.
  std::vector<int> neighbours(int i) const {
    std::vector<int> out;
    const auto& p = points_[i];
    const long long cx = cell(p.x), cy = cell(p.y);
    const double eps2 = eps_ * eps_;
    for (long long dy = -1; dy <= 1; ++dy) {
      for (long long dx = -1; dx <= 1; ++dx) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (int j : it->second) {
          const double ex = points_[j].x - p.x, ey = points_[j].y - p.y;
          if (ex * ex + ey * ey <= eps2) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  long long cell(double v) const { return static_cast<long long>(std::floor(v / eps_)); }
  static long long key(long long cx, long long cy) { return (cx << 32) ^ (cy & 0xffffffffLL); }

  const std::vector<PointXY>& points_;
  double eps_;
  std::unordered_map<long long, std::vector<int>> cells_;
};

}  // namespace

ClusterSet dbscan(const std::vector<PointXY>& points, double eps, int min_pts) {
  if (!(eps > 0.0)) fail(ErrorKind::kInvalidParameter, "eps must be > 0");
  if (min_pts < 1) fail(ErrorKind::kInvalidParameter, "min_pts must be >= 1");
  ClusterSet cs;
  cs.params = {eps, min_pts};
  const int n = static_cast<int>(points.size());
  if (n == 0) return cs;

  // Visiting order: sorted by (y, x), then input index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (points[a].y != points[b].y) return points[a].y < points[b].y;
    return points[a].x < points[b].x;
  });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[order[r]] = r;

  const GridIndex index(points, eps);
  std::vector<std::vector<int>> nbrs(n);
  for (int i = 0; i < n; ++i) {
    nbrs[i] = index.neighbours(i);
    std::sort(nbrs[i].begin(), nbrs[i].end(), [&](int a, int b) { return rank[a] < rank[b]; });
  }

  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> label(n, kUnvisited);
  int next_cluster = 0;
  for (int p : order) {
    if (label[p] != kUnvisited) continue;
    if (static_cast<int>(nbrs[p].size()) < min_pts) {
      label[p] = kNoise;
      continue;
    }
    const int c = next_cluster++;
    label[p] = c;
    std::deque<int> frontier(nbrs[p].begin(), nbrs[p].end());
    while (!frontier.empty()) {
      const int q = frontier.front();
      frontier.pop_front();
      if (label[q] == kNoise) label[q] = c;  // border point
      if (label[q] != kUnvisited) continue;
      label[q] = c;
      if (static_cast<int>(nbrs[q].size()) >= min_pts) {
        frontier.insert(frontier.end(), nbrs[q].begin(), nbrs[q].end());
      }
    }
  }

  cs.clusters.resize(next_cluster);
  for (int p : order) {
    if (label[p] >= 0) {
      cs.clusters[label[p]].push_back(p);
    } else {
      cs.noise.push_back(p);
    }
  }
  return cs;
}

std::vector<CentroidPoint> centroids(const ClusterSet& cs, const std::vector<PointXY>& points) {
  std::vector<CentroidPoint> out;
  out.reserve(cs.clusters.size());
  for (const auto& members : cs.clusters) {
    if (members.empty()) continue;
    double sx = 0.0, sy = 0.0;
    for (int i : members) {
      sx += points.at(i).x;
      sy += points.at(i).y;
    }
    const double n = static_cast<double>(members.size());
    out.push_back({sx / n, sy / n, static_cast<int>(members.size())});
  }
  return out;
}

std::vector<PointXY> to_points(const std::vector<DegeneratePoint>& points) {
  std::vector<PointXY> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return out;
}

}  // namespace chartensor
