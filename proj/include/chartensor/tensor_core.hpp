#pragma once

#include <string>
#include <vector>

#include "chartensor/image.hpp"
#include "chartensor/kernels.hpp"
#include "chartensor/tensor.hpp"

namespace chartensor {

/// Free-form warnings collected while a pipeline runs.
struct Diagnostics {
  std::vector<std::string> messages;
  void warn(std::string message) { messages.push_back(std::move(message)); }
};

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx, gy;

  GradientVector at(int x, int y) const {
    const auto i = static_cast<std::size_t>(y) * width + x;
    return {gx[i], gy[i]};
  }
};

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Post-analysis saliency of one pixel. Homogeneous pixels (zero source
/// tensor) carry cl = cp = 0.
struct SaliencyPixel {
  double cl = 0.0;
  double cp = 0.0;
  bool homogeneous = true;
};
using SaliencyMap = Grid<SaliencyPixel>;

struct DegeneratePoint {
  int x = 0;
  int y = 0;
  double cp = 0.0;
  double norm_trace = 0.0;
};

/// Absolute threshold on l0 + l1 below which a source tensor is treated as
/// homogeneous (no boundary information).
inline constexpr double kTraceEpsilon = 1e-12;

inline constexpr double kDefaultSigmaD = 4.0;
inline constexpr double kDefaultDelta = 0.16;
inline constexpr double kDefaultRho = 1.0;
inline constexpr double kDefaultTauCp = 0.6;

GradientField compute_gradient(const GrayImage& image);
TensorField gradient_tensor(const GradientField& g);

/// Gaussian-smoothed gradient tensor. Kernel radius ceil(3 rho), taps
/// normalised to sum 1, replicate padding.
TensorField structure_tensor(const TensorField& tg, double rho);
std::vector<double> gaussian_taps(double rho);

/// Linear weights of the closed-form vote cast along offset d = voter - receiver.
kernels::VoteWeights vote_weights(double dx, double dy, double sigma_d);

/// Closed-form second-order vote received at `receiver` from `voter`.
SymTensor2 cast_vote(Pixel receiver, Pixel voter, const SymTensor2& k, double sigma_d);

/// Sum of votes from the in-bounds N4 neighbours (left, right, up, down).
TensorField tensor_vote_field(const TensorField& tg, double sigma_d = kDefaultSigmaD);

/// Sum of vote fields over several gradient-tensor fields (one per colour
/// channel), aggregated channel by channel.
TensorField tensor_vote_field(const std::vector<TensorField>& per_channel,
                              double sigma_d = kDefaultSigmaD);

/// Eigenvalue remap l -> exp(-l / delta), eigenvectors kept.
TensorField anisotropic_diffuse(const TensorField& tv, double delta = kDefaultDelta);
SymTensor2 anisotropic_diffuse(const SymTensor2& t, double delta);

SaliencyPixel saliency(const EigenDecomp2& decomp);

/// Saliency of `analyzed`; homogeneity is judged on `source` (the field the
/// analysed one was derived from, e.g. T_v for T_v-ad).
SaliencyMap saliency_map(const TensorField& analyzed, const TensorField& source);

/// Unity-normalised trace of every tensor: min -> 0, max -> 1. Returns an
/// empty vector when all traces are equal.
std::vector<double> normalized_trace(const TensorField& field);

std::vector<DegeneratePoint> detect_degenerate_points(const TensorField& analyzed,
                                                      const SaliencyMap& saliency,
                                                      double tau_cp, double tau_wd,
                                                      Diagnostics* diag = nullptr);

std::vector<DegeneratePoint> detect_degenerate_points(const TensorField& analyzed,
                                                      const TensorField& source,
                                                      double tau_cp, double tau_wd,
                                                      Diagnostics* diag = nullptr);

enum class Descriptor { kTensorVoting, kStructureTensor };
Descriptor parse_descriptor(const std::string& name);
const char* to_string(Descriptor d);

struct TensorParams {
  Descriptor descriptor = Descriptor::kTensorVoting;
  double sigma_d = kDefaultSigmaD;
  double delta = kDefaultDelta;
  double rho = kDefaultRho;
};

/// Analysed field plus the field that homogeneity is judged on.
struct DescriptorFields {
  TensorField analyzed;
  TensorField source;
};

DescriptorFields compute_descriptor(const GrayImage& image, const TensorParams& params);
DescriptorFields compute_descriptor(const std::vector<GrayImage>& channels,
                                    const TensorParams& params);

}  // namespace chartensor
