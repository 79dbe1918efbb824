#pragma once

// Per-pixel inner loops shared by the tensor pipeline. Every kernel has a
// scalar reference version and, where the build target allows it, an AVX2
// version. The AVX2 versions evaluate the same expressions in the same order
// (no FMA contraction) and are required to be bit-identical to the scalar
// reference; tests/kernels_equivalence_test.cpp enforces this.

#include <cstddef>
#include <string>

namespace chartensor::kernels {

/// Linear map K -> S applied by one closed-form vote. Row-major 3x3 over the
/// component vector (xx, xy, yy).
struct VoteWeights {
  double w[3][3] = {};
};

struct KernelTable {
  const char* name;

  /// 3x3 Sobel with replicate padding, scaled by 1/4 so a unit intensity step
  /// yields a unit gradient.
  void (*sobel)(const double* img, int width, int height, double* gx, double* gy);

  /// xx = gx*gx, xy = gx*gy, yy = gy*gy.
  void (*outer_product)(const double* gx, const double* gy, std::size_t n, double* xx,
                        double* xy, double* yy);

  /// 1D correlation along rows (horizontal) with clamp-to-edge padding.
  /// taps has 2*radius+1 entries; accumulation runs from -radius to +radius.
  void (*convolve_rows)(const double* src, int width, int height, const double* taps,
                        int radius, double* dst);

  /// Same along columns.
  void (*convolve_cols)(const double* src, int width, int height, const double* taps,
                        int radius, double* dst);

  /// N4 vote aggregation. dir[0..3] = weights for the left, right, up and
  /// down neighbour; votes are summed in that order and only for in-bounds
  /// neighbours.
  void (*vote_n4)(const double* xx, const double* xy, const double* yy, int width,
                  int height, const VoteWeights (&dir)[4], double* oxx, double* oxy,
                  double* oyy);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Kernel set chosen at runtime. CHARTENSOR_KERNELS=scalar|avx2|auto
/// overrides the CPU probe (avx2 silently falls back when unsupported).
const KernelTable& active_kernels();

/// Forces a kernel set for the rest of the process ("scalar", "avx2", "auto").
/// Returns false if the name is unknown or the set is unavailable.
bool select_kernels(const std::string& name);

}  // namespace chartensor::kernels
