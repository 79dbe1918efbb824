#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chartensor/error.hpp"

namespace chartensor {

/// Row-major 2D grid. Used for intensity images, label maps and masks.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width < 0 || height < 0) fail(ErrorKind::kInvalidInput, "negative grid size");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Replicate (clamp-to-edge) access.
  const T& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> row(int y) noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Single-channel intensity image, values in [0,1] (0 = black ink).
using GrayImage = Grid<double>;
using BinaryImage = Grid<std::uint8_t>;  // 1 = foreground (ink)
using LabelMap = Grid<int>;              // 0 = background

/// Interleaved 8-bit RGB raster, used for rendered outputs and colour input.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // r,g,b per pixel, row-major

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto* p = at(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Colour image held as three float planes in [0,1].
struct ColorImage {
  GrayImage r, g, b;

  int width() const noexcept { return r.width(); }
  int height() const noexcept { return r.height(); }
};

enum class Channel { kLuminance, kRed, kGreen, kBlue };

Channel parse_channel(const std::string& name);
const char* to_string(Channel channel);

/// Rec. 601 luma.
GrayImage luminance(const ColorImage& image);
GrayImage select_channel(const ColorImage& image, Channel channel);
ColorImage to_color(const GrayImage& gray);

RgbImage to_rgb8(const GrayImage& gray);
RgbImage to_rgb8(const ColorImage& color);
ColorImage from_rgb8(const RgbImage& rgb);

}  // namespace chartensor
