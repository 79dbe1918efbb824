#include "chartensor/image.hpp"

#include <algorithm>
#include <cmath>

namespace chartensor {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kEmptyCanvas: return "empty-canvas";
    case ErrorKind::kEmptyTable: return "empty-table";
    case ErrorKind::kInvalidSpec: return "invalid-spec";
  }
  return "unknown";
}

Channel parse_channel(const std::string& name) {
  if (name == "luminance" || name == "luma") return Channel::kLuminance;
  if (name == "r" || name == "red") return Channel::kRed;
  if (name == "g" || name == "green") return Channel::kGreen;
  if (name == "b" || name == "blue") return Channel::kBlue;
  fail(ErrorKind::kInvalidParameter, "unknown channel '" + name + "'");
}

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::kLuminance: return "luminance";
    case Channel::kRed: return "r";
    case Channel::kGreen: return "g";
    case Channel::kBlue: return "b";
  }
  return "luminance";
}

GrayImage luminance(const ColorImage& image) {
  GrayImage out(image.width(), image.height());
  auto r = image.r.values();
  auto g = image.g.values();
  auto b = image.b.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = std::clamp(0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i], 0.0, 1.0);
  }
  return out;
}

GrayImage select_channel(const ColorImage& image, Channel channel) {
  switch (channel) {
    case Channel::kRed: return image.r;
    case Channel::kGreen: return image.g;
    case Channel::kBlue: return image.b;
    case Channel::kLuminance: break;
  }
  return luminance(image);
}

ColorImage to_color(const GrayImage& gray) { return {gray, gray, gray}; }

namespace {
std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}
}  // namespace

RgbImage to_rgb8(const GrayImage& gray) {
  RgbImage out(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y)
    for (int x = 0; x < gray.width(); ++x) {
      const auto v = quantize(gray(x, y));
      out.set(x, y, v, v, v);
    }
  return out;
}

RgbImage to_rgb8(const ColorImage& color) {
  RgbImage out(color.width(), color.height());
  for (int y = 0; y < color.height(); ++y)
    for (int x = 0; x < color.width(); ++x)
      out.set(x, y, quantize(color.r(x, y)), quantize(color.g(x, y)), quantize(color.b(x, y)));
  return out;
}

ColorImage from_rgb8(const RgbImage& rgb) {
  ColorImage out{GrayImage(rgb.width, rgb.height), GrayImage(rgb.width, rgb.height),
                 GrayImage(rgb.width, rgb.height)};
  for (int y = 0; y < rgb.height; ++y)
    for (int x = 0; x < rgb.width; ++x) {
      const auto* p = rgb.at(x, y);
      out.r(x, y) = p[0] / 255.0;
      out.g(x, y) = p[1] / 255.0;
      out.b(x, y) = p[2] / 255.0;
    }
  return out;
}

}  // namespace chartensor
