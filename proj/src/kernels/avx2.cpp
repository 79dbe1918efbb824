// Compiled with -mavx2 (no FMA) when CHARTENSOR_ENABLE_AVX2 is on.
#include <immintrin.h>

#include <cstddef>

#include "chartensor/kernels.hpp"
#include "kernels/scalar_impl.hpp"
#include "kernels/vote_apply.hpp"

namespace chartensor::kernels {

namespace {

using detail::clamp_index;

void sobel_avx2(const double* img, int width, int height, double* gx, double* gy) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  for (int y = 0; y < height; ++y) {
    const double* up = img + static_cast<std::size_t>(clamp_index(y - 1, height)) * width;
    const double* mid = img + static_cast<std::size_t>(y) * width;
    const double* dn = img + static_cast<std::size_t>(clamp_index(y + 1, height)) * width;
    double* ox = gx + static_cast<std::size_t>(y) * width;
    double* oy = gy + static_cast<std::size_t>(y) * width;

    int x = 1;
    if (width > 2) {
      detail::sobel_row_scalar(up, mid, dn, width, 0, 1, ox, oy);
      for (; x + 4 <= width - 1; x += 4) {
        const __m256d ul = _mm256_loadu_pd(up + x - 1);
        const __m256d uc = _mm256_loadu_pd(up + x);
        const __m256d ur = _mm256_loadu_pd(up + x + 1);
        const __m256d ml = _mm256_loadu_pd(mid + x - 1);
        const __m256d mr = _mm256_loadu_pd(mid + x + 1);
        const __m256d dl = _mm256_loadu_pd(dn + x - 1);
        const __m256d dc = _mm256_loadu_pd(dn + x);
        const __m256d dr = _mm256_loadu_pd(dn + x + 1);
        __m256d sx = _mm256_add_pd(_mm256_sub_pd(ur, ul),
                                   _mm256_mul_pd(two, _mm256_sub_pd(mr, ml)));
        sx = _mm256_mul_pd(_mm256_add_pd(sx, _mm256_sub_pd(dr, dl)), quarter);
        __m256d sy = _mm256_add_pd(_mm256_sub_pd(dl, ul),
                                   _mm256_mul_pd(two, _mm256_sub_pd(dc, uc)));
        sy = _mm256_mul_pd(_mm256_add_pd(sy, _mm256_sub_pd(dr, ur)), quarter);
        _mm256_storeu_pd(ox + x, sx);
        _mm256_storeu_pd(oy + x, sy);
      }
    } else {
      x = 0;
    }
    detail::sobel_row_scalar(up, mid, dn, width, x, width, ox, oy);
  }
}

void outer_product_avx2(const double* gx, const double* gy, std::size_t n, double* xx,
                        double* xy, double* yy) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(gx + i);
    const __m256d b = _mm256_loadu_pd(gy + i);
    _mm256_storeu_pd(xx + i, _mm256_mul_pd(a, a));
    _mm256_storeu_pd(xy + i, _mm256_mul_pd(a, b));
    _mm256_storeu_pd(yy + i, _mm256_mul_pd(b, b));
  }
  detail::outer_product_scalar(gx + i, gy + i, n - i, xx + i, xy + i, yy + i);
}

void convolve_rows_avx2(const double* src, int width, int height, const double* taps,
                        int radius, double* dst) {
  for (int y = 0; y < height; ++y) {
    const double* in = src + static_cast<std::size_t>(y) * width;
    double* out = dst + static_cast<std::size_t>(y) * width;
    const int lo = radius < width ? radius : width;
    detail::convolve_row_scalar(in, width, taps, radius, 0, lo, out);
    int x = lo;
    for (; x + 4 + radius <= width; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int k = -radius; k <= radius; ++k) {
        const __m256d t = _mm256_set1_pd(taps[k + radius]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(t, _mm256_loadu_pd(in + x + k)));
      }
      _mm256_storeu_pd(out + x, acc);
    }
    detail::convolve_row_scalar(in, width, taps, radius, x, width, out);
  }
}

void convolve_cols_avx2(const double* src, int width, int height, const double* taps,
                        int radius, double* dst) {
  for (int y = 0; y < height; ++y) {
    double* out = dst + static_cast<std::size_t>(y) * width;
    int x = 0;
    for (; x + 4 <= width; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int k = -radius; k <= radius; ++k) {
        const int yy = clamp_index(y + k, height);
        const __m256d t = _mm256_set1_pd(taps[k + radius]);
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(t, _mm256_loadu_pd(src + static_cast<std::size_t>(yy) * width + x)));
      }
      _mm256_storeu_pd(out + x, acc);
    }
    for (; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = clamp_index(y + k, height);
        acc = acc + taps[k + radius] * src[static_cast<std::size_t>(yy) * width + x];
      }
      out[x] = acc;
    }
  }
}

struct VecWeights {
  __m256d w[3][3];
  explicit VecWeights(const VoteWeights& v) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) w[r][c] = _mm256_set1_pd(v.w[r][c]);
  }
};

inline void accumulate(const VecWeights& v, const double* xx, const double* xy,
                       const double* yy, std::size_t j, __m256d& axx, __m256d& axy,
                       __m256d& ayy) {
  const __m256d a = _mm256_loadu_pd(xx + j);
  const __m256d b = _mm256_loadu_pd(xy + j);
  const __m256d e = _mm256_loadu_pd(yy + j);
  const __m256d sxx = _mm256_add_pd(
      _mm256_add_pd(_mm256_mul_pd(v.w[0][0], a), _mm256_mul_pd(v.w[0][1], b)),
      _mm256_mul_pd(v.w[0][2], e));
  const __m256d sxy = _mm256_add_pd(
      _mm256_add_pd(_mm256_mul_pd(v.w[1][0], a), _mm256_mul_pd(v.w[1][1], b)),
      _mm256_mul_pd(v.w[1][2], e));
  const __m256d syy = _mm256_add_pd(
      _mm256_add_pd(_mm256_mul_pd(v.w[2][0], a), _mm256_mul_pd(v.w[2][1], b)),
      _mm256_mul_pd(v.w[2][2], e));
  axx = _mm256_add_pd(axx, sxx);
  axy = _mm256_add_pd(axy, sxy);
  ayy = _mm256_add_pd(ayy, syy);
}

void vote_n4_avx2(const double* xx, const double* xy, const double* yy, int width,
                  int height, const VoteWeights (&dir)[4], double* oxx, double* oxy,
                  double* oyy) {
  const VecWeights left(dir[0]), right(dir[1]), up(dir[2]), down(dir[3]);
  for (int y = 0; y < height; ++y) {
    const auto row = static_cast<std::size_t>(y) * width;
    int x = 0;
    if (width > 2) {
      detail::vote_pixel_scalar(xx, xy, yy, width, height, dir, 0, y, oxx, oxy, oyy);
      x = 1;
      for (; x + 4 <= width - 1; x += 4) {
        const std::size_t i = row + x;
        __m256d axx = _mm256_setzero_pd();
        __m256d axy = _mm256_setzero_pd();
        __m256d ayy = _mm256_setzero_pd();
        accumulate(left, xx, xy, yy, i - 1, axx, axy, ayy);
        accumulate(right, xx, xy, yy, i + 1, axx, axy, ayy);
        if (y > 0) accumulate(up, xx, xy, yy, i - width, axx, axy, ayy);
        if (y + 1 < height) accumulate(down, xx, xy, yy, i + width, axx, axy, ayy);
        _mm256_storeu_pd(oxx + i, axx);
        _mm256_storeu_pd(oxy + i, axy);
        _mm256_storeu_pd(oyy + i, ayy);
      }
    }
    for (; x < width; ++x) {
      detail::vote_pixel_scalar(xx, xy, yy, width, height, dir, x, y, oxx, oxy, oyy);
    }
  }
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2", sobel_avx2, outer_product_avx2, convolve_rows_avx2, convolve_cols_avx2,
      vote_n4_avx2,
  };
  return table;
}
}  // namespace detail

}  // namespace chartensor::kernels
