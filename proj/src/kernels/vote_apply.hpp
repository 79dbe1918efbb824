#pragma once

#include "chartensor/kernels.hpp"

namespace chartensor::kernels::detail {

// Shared by cast_vote and the scalar field kernel so both produce the same bits.
inline void apply_vote(const VoteWeights& v, double a, double b, double e, double& sxx,
                       double& sxy, double& syy) noexcept {
  sxx = v.w[0][0] * a + v.w[0][1] * b + v.w[0][2] * e;
  sxy = v.w[1][0] * a + v.w[1][1] * b + v.w[1][2] * e;
  syy = v.w[2][0] * a + v.w[2][1] * b + v.w[2][2] * e;
}

inline int clamp_index(int i, int n) noexcept { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

}  // namespace chartensor::kernels::detail
