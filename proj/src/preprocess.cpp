#include "chartensor/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <queue>
#include <tuple>

#include "chartensor/png_io.hpp"
#include "chartensor/tensor_core.hpp"

namespace chartensor {

namespace {

constexpr int kN8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

int quantize(double v) {
  return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

GrayImage binary_to_gray(const BinaryImage& b) {
  GrayImage g(b.width(), b.height(), 1.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.values()[i]) g.values()[i] = 0.0;
  }
  return g;
}

GrayImage labels_to_gray(const LabelMap& labels) {
  GrayImage g(labels.width(), labels.height(), 1.0);
  int max_label = 0;
  for (int l : labels.values()) max_label = std::max(max_label, l);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels.values()[i];
    if (l > 0) g.values()[i] = 0.8 * (1.0 - static_cast<double>(l) / (max_label + 1));
  }
  return g;
}

void debug_write(const PrepParams& p, int& stage, const std::string& name, const GrayImage& img) {
  if (p.debug_dir.empty() || img.empty()) return;
  std::filesystem::create_directories(p.debug_dir);
  char prefix[8];
  std::snprintf(prefix, sizeof prefix, "%02d_", stage++);
  write_png((std::filesystem::path(p.debug_dir) / (prefix + name + ".png")).string(), img);
}

}  // namespace

double otsu_threshold(const GrayImage& gray) {
  if (gray.empty()) return -1.0;
  std::array<double, 256> hist{};
  for (double v : gray.values()) hist[quantize(v)] += 1.0;
  const double total = static_cast<double>(gray.size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_t = -1;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t < 0 ? -1.0 : best_t / 255.0;
}

BinaryImage binarize(const GrayImage& gray) {
  BinaryImage b(gray.width(), gray.height(), 0);
  const double t = otsu_threshold(gray);
  if (t < 0.0) return b;
  const int ti = quantize(t);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    b.values()[i] = quantize(gray.values()[i]) <= ti ? 1 : 0;
  }
  return b;
}

BinaryImage binarize(const ColorImage& image, Channel channel) {
  return binarize(select_channel(image, channel));
}

int count_foreground(const BinaryImage& b) {
  int n = 0;
  for (auto v : b.values()) n += v ? 1 : 0;
  return n;
}

BinaryImage erode(const BinaryImage& b, int iterations) {
  BinaryImage cur = b;
  for (int it = 0; it < iterations; ++it) {
    BinaryImage next(cur.width(), cur.height(), 0);
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        if (!cur(x, y)) continue;
        bool keep = true;
        for (const auto& d : kN8) {
          const int nx = x + d[0], ny = y + d[1];
          // Outside the image counts as foreground so erosion does not eat
          // objects touching the frame.
          if (cur.contains(nx, ny) && !cur(nx, ny)) {
            keep = false;
            break;
          }
        }
        next(x, y) = keep ? 1 : 0;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

BinaryImage dilate(const BinaryImage& b, int iterations) {
  BinaryImage cur = b;
  for (int it = 0; it < iterations; ++it) {
    BinaryImage next = cur;
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        if (!cur(x, y)) continue;
        for (const auto& d : kN8) {
          const int nx = x + d[0], ny = y + d[1];
          if (cur.contains(nx, ny)) next(nx, ny) = 1;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

BinaryImage open(const BinaryImage& b, int iterations) {
  return dilate(erode(b, iterations), iterations);
}

double solid_ink_fraction(const BinaryImage& binary) {
  const int ink = count_foreground(binary);
  if (ink == 0) return 1.0;
  return static_cast<double>(count_foreground(open(binary, 1))) / ink;
}

BinaryImage fill_holes(const BinaryImage& binary) {
  const int w = binary.width(), h = binary.height();
  BinaryImage outside(w, h, 0);
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int x, int y) {
    if (!binary(x, y) && !outside(x, y)) {
      outside(x, y) = 1;
      queue.emplace_back(x, y);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  // Background is N4-connected (dual of N8 foreground).
  constexpr int kN4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& d : kN4) {
      const int nx = x + d[0], ny = y + d[1];
      if (binary.contains(nx, ny)) seed(nx, ny);
    }
  }
  BinaryImage out(w, h, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = outside.values()[i] ? 0 : 1;
  return out;
}

GrayImage ensure_filled(const GrayImage& image, const BinaryImage& binary, double threshold,
                        bool* filled) {
  if (filled) *filled = false;
  if (count_foreground(binary) == 0) return image;
  if (solid_ink_fraction(binary) >= threshold) return image;
  const BinaryImage holes = fill_holes(binary);
  GrayImage out = image;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (holes.values()[i] && !binary.values()[i]) out.values()[i] = 0.0;
  }
  if (filled) *filled = true;
  return out;
}

LabelMap label_components(const BinaryImage& b, std::vector<Component>* components) {
  LabelMap labels(b.width(), b.height(), 0);
  if (components) components->clear();
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < b.height(); ++y) {
    for (int x = 0; x < b.width(); ++x) {
      if (!b(x, y) || labels(x, y)) continue;
      Component comp;
      comp.label = ++next;
      comp.box = {x, y, x, y};
      labels(x, y) = comp.label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++comp.area;
        comp.box.x0 = std::min(comp.box.x0, cx);
        comp.box.y0 = std::min(comp.box.y0, cy);
        comp.box.x1 = std::max(comp.box.x1, cx);
        comp.box.y1 = std::max(comp.box.y1, cy);
        for (const auto& d : kN8) {
          const int nx = cx + d[0], ny = cy + d[1];
          if (b.contains(nx, ny) && b(nx, ny) && !labels(nx, ny)) {
            labels(nx, ny) = comp.label;
            stack.emplace_back(nx, ny);
          }
        }
      }
      if (components) components->push_back(comp);
    }
  }
  return labels;
}

LabelMap watershed(const GrayImage& relief, const LabelMap& markers) {
  if (relief.width() != markers.width() || relief.height() != markers.height()) {
    fail(ErrorKind::kInvalidInput, "watershed: relief and markers differ in size");
  }
  LabelMap labels = markers;
  // (priority, insertion order, x, y); insertion order makes ties FIFO.
  using Entry = std::tuple<double, std::uint64_t, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  std::uint64_t order = 0;
  BinaryImage queued(relief.width(), relief.height(), 0);

  auto push_neighbours = [&](int x, int y) {
    for (const auto& d : kN8) {
      const int nx = x + d[0], ny = y + d[1];
      if (!labels.contains(nx, ny) || labels(nx, ny) != 0 || queued(nx, ny)) continue;
      queued(nx, ny) = 1;
      pq.emplace(relief(nx, ny), order++, nx, ny);
    }
  };
  for (int y = 0; y < labels.height(); ++y)
    for (int x = 0; x < labels.width(); ++x)
      if (labels(x, y) > 0) push_neighbours(x, y);

  while (!pq.empty()) {
    const auto [prio, ord, x, y] = pq.top();
    pq.pop();
    // Take the label of the lowest labelled neighbour (first in N8 order on ties).
    int best = 0;
    double best_relief = 0.0;
    for (const auto& d : kN8) {
      const int nx = x + d[0], ny = y + d[1];
      if (!labels.contains(nx, ny) || labels(nx, ny) <= 0) continue;
      if (best == 0 || relief(nx, ny) < best_relief) {
        best = labels(nx, ny);
        best_relief = relief(nx, ny);
      }
    }
    labels(x, y) = best;
    push_neighbours(x, y);
  }
  for (auto& l : labels.values()) l = std::max(l, 0);
  return labels;
}

GrayImage gradient_magnitude(const GrayImage& gray) {
  const GradientField g = compute_gradient(gray);
  GrayImage mag(gray.width(), gray.height());
  for (std::size_t i = 0; i < mag.size(); ++i) mag.values()[i] = std::hypot(g.gx[i], g.gy[i]);
  return mag;
}

BinaryImage canny(const GrayImage& gray, double low, double high) {
  const int w = gray.width(), h = gray.height();
  BinaryImage edges(w, h, 0);
  if (gray.empty()) return edges;

  // 5-tap binomial pre-smoothing.
  constexpr double kTaps[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  GrayImage tmp(w, h), smooth(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * gray.clamped(x + k, y);
      tmp(x, y) = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * tmp.clamped(x, y + k);
      smooth(x, y) = acc;
    }

  const GradientField g = compute_gradient(smooth);
  GrayImage mag(w, h);
  double max_mag = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag.values()[i] = std::hypot(g.gx[i], g.gy[i]);
    max_mag = std::max(max_mag, mag.values()[i]);
  }
  if (!(max_mag > 0.0)) return edges;

  // Non-maximum suppression along the quantised gradient direction.
  GrayImage thin(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag(x, y);
      if (m <= 0.0) continue;
      const double gx = g.gx[mag.index(x, y)], gy = g.gy[mag.index(x, y)];
      double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
      if (angle < 0) angle += 180.0;
      int dx, dy;
      if (angle < 22.5 || angle >= 157.5) {
        dx = 1; dy = 0;
      } else if (angle < 67.5) {
        dx = 1; dy = 1;
      } else if (angle < 112.5) {
        dx = 0; dy = 1;
      } else {
        dx = -1; dy = 1;
      }
      const double a = mag.clamped(x + dx, y + dy);
      const double b = mag.clamped(x - dx, y - dy);
      // Ties go to the first pixel of a plateau pair.
      if (m > a && m >= b) thin(x, y) = m;
    }
  }

  const double lo = low * max_mag, hi = high * max_mag;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (thin(x, y) >= hi && !edges(x, y)) {
        edges(x, y) = 1;
        stack.emplace_back(x, y);
        while (!stack.empty()) {
          const auto [cx, cy] = stack.back();
          stack.pop_back();
          for (const auto& d : kN8) {
            const int nx = cx + d[0], ny = cy + d[1];
            if (thin.contains(nx, ny) && !edges(nx, ny) && thin(nx, ny) >= lo) {
              edges(nx, ny) = 1;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
  return edges;
}

BinaryImage border_ring(const BinaryImage& objects, const BinaryImage& edges, int width) {
  const BinaryImage reach = dilate(edges, width);
  BinaryImage ring(objects.width(), objects.height(), 0);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    ring.values()[i] = objects.values()[i] && reach.values()[i] ? 1 : 0;
  }
  return ring;
}

CanvasImage extract_canvas(const ColorImage& image, const PrepParams& params,
                           const std::string& source_path) {
  return extract_canvas(select_channel(image, params.channel), params, source_path);
}

CanvasImage extract_canvas(const GrayImage& input, const PrepParams& params,
                           const std::string& source_path) {
  if (input.empty()) fail(ErrorKind::kInvalidInput, "empty image");
  CanvasImage canvas;
  canvas.source_path = source_path;
  int stage = 0;

  BinaryImage binary = binarize(input);
  canvas.steps.push_back("binarize");
  debug_write(params, stage, "binarize", binary_to_gray(binary));

  bool filled = false;
  const GrayImage image = ensure_filled(input, binary, params.fill_threshold, &filled);
  if (filled) {
    binary = binarize(image);
    canvas.steps.push_back("object-fill");
    debug_write(params, stage, "object_fill", binary_to_gray(binary));
  }

  // Foreground: opening removes gridlines, axes, ticks and thin strokes; the
  // surviving components are then filtered by area and thickness.
  const BinaryImage opened = open(binary, params.opening_iterations);
  canvas.steps.push_back("morphology-opening");
  debug_write(params, stage, "opening", binary_to_gray(opened));

  std::vector<Component> comps;
  const LabelMap raw_labels = label_components(opened, &comps);
  std::vector<int> remap(comps.size() + 1, 0);
  int kept = 0;
  for (const auto& c : comps) {
    const bool thin = std::min(c.box.width(), c.box.height()) < params.min_component_thickness;
    if (thin || c.area < params.min_component_area) continue;
    remap[c.label] = ++kept;
  }
  canvas.steps.push_back("find-connected-components");
  if (kept == 0) {
    fail(ErrorKind::kEmptyCanvas,
         "no chart objects found (ink pixels: " + std::to_string(count_foreground(binary)) +
             ", opened components: " + std::to_string(comps.size()) + ")");
  }

  BinaryImage foreground(input.width(), input.height(), 0);
  LabelMap markers(input.width(), input.height(), 0);
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const int l = remap[raw_labels.values()[i]];
    markers.values()[i] = l;
    foreground.values()[i] = l > 0 ? 1 : 0;
  }
  const BinaryImage near_objects = dilate(foreground, params.dilation_iterations);
  const int background_label = kept + 1;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (!near_objects.values()[i]) markers.values()[i] = background_label;
  }
  canvas.steps.push_back("morphology-dilation");
  debug_write(params, stage, "markers", labels_to_gray(markers));

  const LabelMap basins = watershed(gradient_magnitude(image), markers);
  BinaryImage objects(input.width(), input.height(), 0);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const int l = basins.values()[i];
    objects.values()[i] = (l > 0 && l < background_label && binary.values()[i]) ? 1 : 0;
  }
  objects = open(objects, 1);
  canvas.steps.push_back("morphology-watershed");

  const GrayImage segmented = binary_to_gray(objects);
  debug_write(params, stage, "watershed", segmented);

  const BinaryImage edges = canny(segmented, params.canny_low, params.canny_high);
  canvas.steps.push_back("canny-edge-detection");
  debug_write(params, stage, "canny", binary_to_gray(edges));

  const BinaryImage ring = border_ring(objects, edges, params.border_width);
  canvas.steps.push_back("contour-border-" + std::to_string(params.border_width) + "px");

  canvas.intensity = GrayImage(input.width(), input.height(), 1.0);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects.values()[i] || ring.values()[i]) canvas.intensity.values()[i] = 0.0;
  }
  debug_write(params, stage, "canvas", canvas.intensity);
  return canvas;
}

}  // namespace chartensor
