#pragma once

#include <string>
#include <vector>

#include "chartensor/image.hpp"

namespace chartensor {

/// Chart canvas: white background (1.0) with every chart-object-cluster
/// drawn as solid ink (0.0) carrying a uniform 2-px border.
struct CanvasImage {
  GrayImage intensity;
  std::string source_path;
  std::vector<std::string> steps;

  int width() const noexcept { return intensity.width(); }
  int height() const noexcept { return intensity.height(); }
  bool ink(int x, int y) const { return intensity.contains(x, y) && intensity(x, y) < 0.5; }
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
  int label = 0;
  int area = 0;
  BoundingBox box;
};

struct PrepParams {
  Channel channel = Channel::kLuminance;
  /// Ink fraction surviving a 3x3 opening below which outlines are filled.
  double fill_threshold = 0.2;
  int opening_iterations = 1;
  int dilation_iterations = 2;
  int min_component_area = 30;
  int min_component_thickness = 3;
  double canny_low = 0.1;
  double canny_high = 0.3;
  int border_width = 2;
  /// When non-empty, each stage writes a PNG into this directory.
  std::string debug_dir;
};

/// Otsu threshold over a 256-bin histogram; returns the threshold t so that
/// pixels with value <= t are the darker class. Returns -1 for a constant
/// image.
double otsu_threshold(const GrayImage& gray);

/// Foreground = darker side of the Otsu split. Constant images have no
/// foreground.
BinaryImage binarize(const GrayImage& gray);
BinaryImage binarize(const ColorImage& image, Channel channel = Channel::kLuminance);

int count_foreground(const BinaryImage& b);

/// Fraction of ink pixels that survive a 3x3 opening; 1.0 for empty images.
double solid_ink_fraction(const BinaryImage& binary);

/// Fills closed outlines when the chart is drawn outline-only (solid ink
/// fraction below the threshold). Filled charts and blank images pass
/// through unchanged.
GrayImage ensure_filled(const GrayImage& image, const BinaryImage& binary,
                        double threshold = 0.2, bool* filled = nullptr);

/// Background pixels not reachable from the image border become foreground.
BinaryImage fill_holes(const BinaryImage& binary);

BinaryImage erode(const BinaryImage& b, int iterations = 1);
BinaryImage dilate(const BinaryImage& b, int iterations = 1);
BinaryImage open(const BinaryImage& b, int iterations = 1);

/// N8 connected components; labels are contiguous 1..k in raster order of
/// first appearance, 0 is background.
LabelMap label_components(const BinaryImage& b, std::vector<Component>* components = nullptr);

/// Marker-based watershed (priority flood) on `relief`. Markers > 0 seed the
/// flood; pixels with marker < 0 are excluded. Every other pixel takes the
/// label of the basin that reaches it first.
LabelMap watershed(const GrayImage& relief, const LabelMap& markers);

GrayImage gradient_magnitude(const GrayImage& gray);

/// Canny edges with thresholds given as fractions of the maximum gradient
/// magnitude.
BinaryImage canny(const GrayImage& gray, double low = 0.1, double high = 0.3);

/// Object pixels within `width` (Chebyshev) of an edge pixel, on the object side.
BinaryImage border_ring(const BinaryImage& objects, const BinaryImage& edges, int width);

CanvasImage extract_canvas(const ColorImage& image, const PrepParams& params = {},
                           const std::string& source_path = {});
CanvasImage extract_canvas(const GrayImage& image, const PrepParams& params = {},
                           const std::string& source_path = {});

}  // namespace chartensor
