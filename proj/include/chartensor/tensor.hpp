#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "chartensor/error.hpp"

namespace chartensor {

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct SymTensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const noexcept { return xx + yy; }
  double det() const noexcept { return xx * yy - xy * xy; }

  SymTensor2& operator+=(const SymTensor2& o) noexcept {
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
    return *this;
  }
  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) noexcept { return a += b; }
  friend SymTensor2 operator*(double s, const SymTensor2& t) noexcept {
    return {s * t.xx, s * t.xy, s * t.yy};
  }
  friend bool operator==(const SymTensor2&, const SymTensor2&) = default;

  static SymTensor2 identity() noexcept { return {1.0, 0.0, 1.0}; }
};

struct GradientVector {
  double gx = 0.0;
  double gy = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Eigen-decomposition of a SymTensor2 with l0 >= l1.
struct EigenDecomp2 {
  double l0 = 0.0;
  double l1 = 0.0;
  Vec2 v0{1.0, 0.0};
  Vec2 v1{0.0, 1.0};
};

EigenDecomp2 eigen_decompose(const SymTensor2& t) noexcept;

/// l0 * v0 v0^T + l1 * v1 v1^T
SymTensor2 compose(const EigenDecomp2& d) noexcept;

/// Smallest eigenvalue; used by the PSD checks.
double min_eigenvalue(const SymTensor2& t) noexcept;

/// Width x height field of symmetric tensors. Storage is structure-of-arrays
/// (one plane per component) so the per-pixel kernels vectorise.
class TensorField {
 public:
  TensorField() = default;
  TensorField(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return xx_.size(); }
  bool empty() const noexcept { return xx_.empty(); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  SymTensor2 at(int x, int y) const noexcept { return at(index(x, y)); }
  SymTensor2 at(std::size_t i) const noexcept { return {xx_[i], xy_[i], yy_[i]}; }
  void set(int x, int y, const SymTensor2& t) noexcept { set(index(x, y), t); }
  void set(std::size_t i, const SymTensor2& t) noexcept {
    xx_[i] = t.xx;
    xy_[i] = t.xy;
    yy_[i] = t.yy;
  }

  double* xx() noexcept { return xx_.data(); }
  double* xy() noexcept { return xy_.data(); }
  double* yy() noexcept { return yy_.data(); }
  const double* xx() const noexcept { return xx_.data(); }
  const double* xy() const noexcept { return xy_.data(); }
  const double* yy() const noexcept { return yy_.data(); }

  friend bool operator==(const TensorField&, const TensorField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> xx_, xy_, yy_;
};

}  // namespace chartensor
