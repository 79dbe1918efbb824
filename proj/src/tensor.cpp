#include "chartensor/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace chartensor {

EigenDecomp2 eigen_decompose(const SymTensor2& t) noexcept {
  const double mean = 0.5 * (t.xx + t.yy);
  const double half_diff = 0.5 * (t.xx - t.yy);
  const double radius = std::hypot(half_diff, t.xy);
  EigenDecomp2 d;
  d.l0 = mean + radius;
  d.l1 = mean - radius;
  // Orientation of the major axis; atan2(0, 0) = 0 keeps isotropic tensors
  // axis-aligned.
  const double theta = 0.5 * std::atan2(2.0 * t.xy, t.xx - t.yy);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  d.v0 = {c, s};
  d.v1 = {-s, c};
  return d;
}

SymTensor2 compose(const EigenDecomp2& d) noexcept {
  return {d.l0 * d.v0.x * d.v0.x + d.l1 * d.v1.x * d.v1.x,
          d.l0 * d.v0.x * d.v0.y + d.l1 * d.v1.x * d.v1.y,
          d.l0 * d.v0.y * d.v0.y + d.l1 * d.v1.y * d.v1.y};
}

double min_eigenvalue(const SymTensor2& t) noexcept {
  const double mean = 0.5 * (t.xx + t.yy);
  return mean - std::hypot(0.5 * (t.xx - t.yy), t.xy);
}

TensorField::TensorField(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) fail(ErrorKind::kInvalidInput, "negative field size");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  xx_.assign(n, 0.0);
  xy_.assign(n, 0.0);
  yy_.assign(n, 0.0);
}

}  // namespace chartensor
