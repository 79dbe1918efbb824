#pragma once

#include <string>
#include <vector>

#include "chartensor/cluster.hpp"
#include "chartensor/image.hpp"
#include "chartensor/preprocess.hpp"
#include "chartensor/tensor_core.hpp"

namespace chartensor {

/// Neutral gray used for homogeneous pixels.
inline constexpr std::uint8_t kHomogeneousGray = 128;

/// Coolwarm colour for cl in [0,1]: 0 -> first (blue) LUT entry, 1 -> last
/// (red) entry.
void coolwarm(double cl, std::uint8_t rgb[3]);

/// One pixel per canvas pixel, coloured by cl.
RgbImage render_saliency(const SaliencyMap& saliency);

/// Ellipse glyphs at every stride-th pixel. Semi-axes are proportional to
/// (l0, l1), scaled so the largest l0 in the field fills half a stride cell;
/// the major axis follows v0. Zero and homogeneous tensors draw nothing.
RgbImage render_glyphs(const TensorField& field, const SaliencyMap& saliency, int stride);

/// Canvas with each degenerate pixel painted red.
RgbImage overlay_degenerates(const CanvasImage& canvas, const std::vector<DegeneratePoint>& points);

struct TunerBundle {
  int schema = 1;
  std::vector<std::uint8_t> png;  // canvas image
  std::vector<DegeneratePoint> points;
  ClusterParams defaults;
  double tau_cp = kDefaultTauCp;
  double tau_wd = 0.005;
};

TunerBundle make_tuner_bundle(const CanvasImage& canvas, const std::vector<DegeneratePoint>& points,
                              const ClusterParams& defaults, double tau_cp, double tau_wd);
std::string tuner_bundle_json(const TunerBundle& bundle);
/// Throws Error(kParse) on malformed input or an unsupported schema.
TunerBundle parse_tuner_bundle(const std::string& json);
void export_tuner_bundle(const std::string& path, const TunerBundle& bundle);

/// Field dump: {"width", "height", "tensors": [xx, xy, yy, ...]} row-major.
std::string tensor_field_json(const TensorField& field);
TensorField parse_tensor_field_json(const std::string& json);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace chartensor
