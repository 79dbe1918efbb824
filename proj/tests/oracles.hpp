#pragma once

// Independent brute-force references for the property and acceptance tests.
// Nothing here calls into the kernels under test.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "chartensor/cluster.hpp"
#include "chartensor/image.hpp"
#include "chartensor/tensor.hpp"

namespace oracle {

using chartensor::GrayImage;
using chartensor::PointXY;
using chartensor::SymTensor2;
using chartensor::TensorField;

struct Mat2 {
  double a, b, c, d;  // [[a, b], [c, d]]
};

inline Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}
inline Mat2 transpose(const Mat2& m) { return {m.a, m.c, m.b, m.d}; }
inline Mat2 outer(double x, double y) { return {x * x, x * y, y * x, y * y}; }
inline Mat2 lin(double s, const Mat2& p, double t, const Mat2& q) {
  return {s * p.a + t * q.a, s * p.b + t * q.b, s * p.c + t * q.c, s * p.d + t * q.d};
}
inline const Mat2 kI{1, 0, 0, 1};

/// Direct 3x3 Sobel (scaled 1/4) with replicate padding.
inline void sobel(const GrayImage& img, std::vector<double>& gx, std::vector<double>& gy) {
  const int w = img.width(), h = img.height();
  gx.assign(img.size(), 0.0);
  gy.assign(img.size(), 0.0);
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sx = 0, sy = 0;
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i) {
          const double v = img.clamped(x + i, y + j);
          sx += kx[j + 1][i + 1] * v;
          sy += ky[j + 1][i + 1] * v;
        }
      gx[img.index(x, y)] = sx / 4.0;
      gy[img.index(x, y)] = sy / 4.0;
    }
}

/// Direct 2D Gaussian convolution of one scalar plane (replicate padding).
inline std::vector<double> gaussian2d(const std::vector<double>& plane, int w, int h, double rho) {
  const int r = static_cast<int>(std::ceil(3 * rho));
  std::vector<double> k(2 * r + 1);
  double s = 0;
  for (int i = -r; i <= r; ++i) s += k[i + r] = std::exp(-(i * i) / (2 * rho * rho));
  for (auto& v : k) v /= s;
  std::vector<double> out(plane.size(), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) {
          const int xx = std::clamp(x + i, 0, w - 1), yy = std::clamp(y + j, 0, h - 1);
          acc += k[i + r] * k[j + r] * plane[static_cast<std::size_t>(yy) * w + xx];
        }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

/// Closed-form vote by explicit matrix products: c * M K M^T with
/// M = R (I - rr^T/2)^(1/2), R = I - 2 r r^T, the square root taken through
/// the eigenbasis of rr^T.
inline SymTensor2 vote(double dx, double dy, const SymTensor2& k, double sigma_d) {
  const double len = std::hypot(dx, dy);
  const double rx = dx / len, ry = dy / len;
  const double c = std::exp(-(dx * dx + dy * dy) / sigma_d);
  const Mat2 rr = outer(rx, ry);
  const Mat2 R = lin(1.0, kI, -2.0, rr);
  const Mat2 sqrtA = lin(1.0, kI, -(1.0 - 1.0 / std::sqrt(2.0)), rr);
  const Mat2 M = mul(R, sqrtA);
  const Mat2 K{k.xx, k.xy, k.xy, k.yy};
  const Mat2 S = mul(mul(M, K), transpose(M));
  return {c * S.a, c * 0.5 * (S.b + S.c), c * S.d};
}

/// Asymmetric reading c R K (I - rr^T/2) R, kept to show why the symmetric
/// form is used.
inline Mat2 vote_literal(double dx, double dy, const SymTensor2& k, double sigma_d) {
  const double len = std::hypot(dx, dy);
  const double rx = dx / len, ry = dy / len;
  const double c = std::exp(-(dx * dx + dy * dy) / sigma_d);
  const Mat2 rr = outer(rx, ry);
  const Mat2 R = lin(1.0, kI, -2.0, rr);
  const Mat2 Rp = mul(lin(1.0, kI, -0.5, rr), R);
  const Mat2 K{k.xx, k.xy, k.xy, k.yy};
  const Mat2 S = mul(mul(R, K), Rp);
  return {c * S.a, c * S.b, c * S.c, c * S.d};
}

/// Quadruple-loop N4 vote field over all (receiver, voter) pairs.
inline TensorField vote_field(const TensorField& tg, double sigma_d) {
  TensorField out(tg.width(), tg.height());
  for (int y = 0; y < tg.height(); ++y)
    for (int x = 0; x < tg.width(); ++x) {
      SymTensor2 acc;
      for (int vy = 0; vy < tg.height(); ++vy)
        for (int vx = 0; vx < tg.width(); ++vx) {
          if (std::abs(vx - x) + std::abs(vy - y) != 1) continue;
          acc += vote(vx - x, vy - y, tg.at(vx, vy), sigma_d);
        }
      out.set(x, y, acc);
    }
  return out;
}

/// Naive O(n^2) DBSCAN: core flags by exhaustive distance checks, clusters
/// as connected components of core points (union-find), borders assigned to
/// the earliest cluster among their core neighbours. Clusters are ordered by
/// their first core point in (y, x, index) order.
struct NaiveClusters {
  std::vector<int> label;  // -1 noise
  int count = 0;
};

inline NaiveClusters dbscan(const std::vector<PointXY>& pts, double eps, int min_pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return a < b;
  });
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  auto near = [&](int a, int b) { return std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y) <= eps; };
  std::vector<bool> core(n);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j) c += near(i, j);
    core[i] = c >= min_pts;
  }
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (core[i] && core[j] && near(i, j)) parent[find(i)] = find(j);

  NaiveClusters out;
  out.label.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (int idx : order) {
    if (!core[idx]) continue;
    const int r = find(idx);
    if (root_label[r] < 0) root_label[r] = out.count++;
    out.label[idx] = root_label[r];
  }
  for (int i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (int j = 0; j < n; ++j)
      if (core[j] && near(i, j) && (best < 0 || out.label[j] < best)) best = out.label[j];
    out.label[i] = best;
  }
  return out;
}

/// Minimum assignment cost over all permutations (equal-size sets).
inline double brute_assignment(const std::vector<PointXY>& a, const std::vector<PointXY>& b) {
  std::vector<int> p(a.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
  double best = 1e300;
  do {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::hypot(a[i].x - b[p[i]].x, a[i].y - b[p[i]].y);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best / static_cast<double>(a.size());
}

inline GrayImage random_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage img(w, h);
  for (auto& v : img.values()) v = u(rng);
  return img;
}

/// Solid black axis-aligned rectangle [x0, x1) x [y0, y1) on white.
inline GrayImage rectangle(int w, int h, int x0, int y0, int x1, int y1) {
  GrayImage img(w, h, 1.0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) img(x, y) = 0.0;
  return img;
}

}  // namespace oracle
