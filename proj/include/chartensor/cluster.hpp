#pragma once

#include <vector>

#include "chartensor/tensor_core.hpp"

namespace chartensor {

struct PointXY {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointXY&, const PointXY&) = default;
};

struct ClusterParams {
  double eps = 5.0;
  int min_pts = 3;
};

/// Partition of point indices into clusters and noise.
struct ClusterSet {
  std::vector<std::vector<int>> clusters;
  std::vector<int> noise;
  ClusterParams params;
};

struct CentroidPoint {
  double x = 0.0;
  double y = 0.0;
  int member_count = 0;
};

/// DBSCAN with Euclidean distance; the eps-neighbourhood is closed
/// (distance <= eps) and includes the point itself. Points are visited in
/// (y, x) order, ties by input index, so output is independent of the
/// storage order of exactly duplicated points.
ClusterSet dbscan(const std::vector<PointXY>& points, double eps, int min_pts);

/// Member means, noise excluded.
std::vector<CentroidPoint> centroids(const ClusterSet& cs, const std::vector<PointXY>& points);

std::vector<PointXY> to_points(const std::vector<DegeneratePoint>& points);

}  // namespace chartensor
