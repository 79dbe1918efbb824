#pragma once

#include <vector>

#include "chartensor/chart_extract.hpp"
#include "chartensor/cluster.hpp"

namespace chartensor {

/// Discrete 1D distribution: (value, mass) atoms sorted by value.
struct Distribution1D {
  std::vector<double> values;
  std::vector<double> masses;
};

/// Min-max normalised table. Bar and histogram tables become a 1D
/// distribution of bar lengths; scatter tables a 2D point set normalised per
/// axis. Every row carries equal mass.
struct NormalizedDistribution {
  int dims = 1;
  Distribution1D d1;
  std::vector<PointXY> d2;
};

NormalizedDistribution normalize_table(const DataTable& dt, Diagnostics* diag = nullptr);

/// Uniform-mass distribution over `values` (unsorted input is fine).
Distribution1D uniform_distribution(const std::vector<double>& values);

/// 1-Wasserstein distance via the CDF difference integral.
double emd_1d(const Distribution1D& a, const Distribution1D& b);

/// Exact transport cost between uniform point sets (mass 1/|A| and 1/|B|)
/// under Euclidean ground distance, solved as a min-cost flow.
double emd_2d(const std::vector<PointXY>& a, const std::vector<PointXY>& b);

/// EMD between two tables after normalisation (1D or 2D by kind).
double table_emd(const DataTable& extracted, const DataTable& truth, Diagnostics* diag = nullptr);

}  // namespace chartensor
