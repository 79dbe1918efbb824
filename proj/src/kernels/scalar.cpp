#include <cstddef>

#include "chartensor/kernels.hpp"
#include "kernels/scalar_impl.hpp"
#include "kernels/vote_apply.hpp"

namespace chartensor::kernels {

namespace detail {

void sobel_scalar(const double* img, int width, int height, double* gx, double* gy) {
  for (int y = 0; y < height; ++y) {
    const double* up = img + static_cast<std::size_t>(clamp_index(y - 1, height)) * width;
    const double* mid = img + static_cast<std::size_t>(y) * width;
    const double* dn = img + static_cast<std::size_t>(clamp_index(y + 1, height)) * width;
    double* ox = gx + static_cast<std::size_t>(y) * width;
    double* oy = gy + static_cast<std::size_t>(y) * width;
    sobel_row_scalar(up, mid, dn, width, 0, width, ox, oy);
  }
}

void sobel_row_scalar(const double* up, const double* mid, const double* dn, int width,
                      int x_begin, int x_end, double* ox, double* oy) {
  for (int x = x_begin; x < x_end; ++x) {
    const int l = clamp_index(x - 1, width);
    const int r = clamp_index(x + 1, width);
    ox[x] = ((up[r] - up[l]) + 2.0 * (mid[r] - mid[l]) + (dn[r] - dn[l])) * 0.25;
    oy[x] = ((dn[l] - up[l]) + 2.0 * (dn[x] - up[x]) + (dn[r] - up[r])) * 0.25;
  }
}

void outer_product_scalar(const double* gx, const double* gy, std::size_t n, double* xx,
                          double* xy, double* yy) {
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = gx[i] * gx[i];
    xy[i] = gx[i] * gy[i];
    yy[i] = gy[i] * gy[i];
  }
}

void convolve_row_scalar(const double* src, int width, const double* taps, int radius,
                         int x_begin, int x_end, double* dst) {
  for (int x = x_begin; x < x_end; ++x) {
    double acc = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      acc = acc + taps[k + radius] * src[clamp_index(x + k, width)];
    }
    dst[x] = acc;
  }
}

void convolve_rows_scalar(const double* src, int width, int height, const double* taps,
                          int radius, double* dst) {
  for (int y = 0; y < height; ++y) {
    const auto off = static_cast<std::size_t>(y) * width;
    convolve_row_scalar(src + off, width, taps, radius, 0, width, dst + off);
  }
}

void convolve_cols_scalar(const double* src, int width, int height, const double* taps,
                          int radius, double* dst) {
  for (int y = 0; y < height; ++y) {
    double* out = dst + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = clamp_index(y + k, height);
        acc = acc + taps[k + radius] * src[static_cast<std::size_t>(yy) * width + x];
      }
      out[x] = acc;
    }
  }
}

void vote_pixel_scalar(const double* xx, const double* xy, const double* yy, int width,
                       int height, const VoteWeights (&dir)[4], int x, int y, double* oxx,
                       double* oxy, double* oyy) {
  static constexpr int kDx[4] = {-1, 1, 0, 0};
  static constexpr int kDy[4] = {0, 0, -1, 1};
  double axx = 0.0, axy = 0.0, ayy = 0.0;
  for (int d = 0; d < 4; ++d) {
    const int nx = x + kDx[d];
    const int ny = y + kDy[d];
    if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
    const auto j = static_cast<std::size_t>(ny) * width + nx;
    double sxx, sxy, syy;
    apply_vote(dir[d], xx[j], xy[j], yy[j], sxx, sxy, syy);
    axx = axx + sxx;
    axy = axy + sxy;
    ayy = ayy + syy;
  }
  const auto i = static_cast<std::size_t>(y) * width + x;
  oxx[i] = axx;
  oxy[i] = axy;
  oyy[i] = ayy;
}

void vote_n4_scalar(const double* xx, const double* xy, const double* yy, int width,
                    int height, const VoteWeights (&dir)[4], double* oxx, double* oxy,
                    double* oyy) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      vote_pixel_scalar(xx, xy, yy, width, height, dir, x, y, oxx, oxy, oyy);
    }
  }
}

}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",
      detail::sobel_scalar,
      detail::outer_product_scalar,
      detail::convolve_rows_scalar,
      detail::convolve_cols_scalar,
      detail::vote_n4_scalar,
  };
  return table;
}

}  // namespace chartensor::kernels
