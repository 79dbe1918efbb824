#pragma once

#include <cstddef>

#include "chartensor/kernels.hpp"

// Scalar building blocks, reused by the SIMD variants for border pixels and
// loop tails so both paths share one definition of the edge handling.
namespace chartensor::kernels::detail {

void sobel_scalar(const double* img, int width, int height, double* gx, double* gy);
void sobel_row_scalar(const double* up, const double* mid, const double* dn, int width,
                      int x_begin, int x_end, double* ox, double* oy);
void outer_product_scalar(const double* gx, const double* gy, std::size_t n, double* xx,
                          double* xy, double* yy);
void convolve_row_scalar(const double* src, int width, const double* taps, int radius,
                         int x_begin, int x_end, double* dst);
void convolve_rows_scalar(const double* src, int width, int height, const double* taps,
                          int radius, double* dst);
void convolve_cols_scalar(const double* src, int width, int height, const double* taps,
                          int radius, double* dst);
void vote_pixel_scalar(const double* xx, const double* xy, const double* yy, int width,
                       int height, const VoteWeights (&dir)[4], int x, int y, double* oxx,
                       double* oxy, double* oyy);
void vote_n4_scalar(const double* xx, const double* xy, const double* yy, int width,
                    int height, const VoteWeights (&dir)[4], double* oxx, double* oxy,
                    double* oyy);

}  // namespace chartensor::kernels::detail
