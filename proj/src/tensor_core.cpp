#include "chartensor/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kernels/vote_apply.hpp"

namespace chartensor {

namespace {

void require_nonempty(const GrayImage& image) {
  if (image.empty()) fail(ErrorKind::kInvalidInput, "empty image");
}

}  // namespace

GradientField compute_gradient(const GrayImage& image) {
  require_nonempty(image);
  GradientField g;
  g.width = image.width();
  g.height = image.height();
  g.gx.resize(image.size());
  g.gy.resize(image.size());
  kernels::active_kernels().sobel(image.data(), g.width, g.height, g.gx.data(), g.gy.data());
  return g;
}

TensorField gradient_tensor(const GradientField& g) {
  TensorField tg(g.width, g.height);
  kernels::active_kernels().outer_product(g.gx.data(), g.gy.data(), tg.size(), tg.xx(),
                                          tg.xy(), tg.yy());
  return tg;
}

std::vector<double> gaussian_taps(double rho) {
  if (!(rho > 0.0)) fail(ErrorKind::kInvalidParameter, "rho must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * rho));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(k * k) / (2.0 * rho * rho));
    taps[k + radius] = w;
    sum += w;
  }
  for (auto& w : taps) w /= sum;
  return taps;
}

TensorField structure_tensor(const TensorField& tg, double rho) {
  const auto taps = gaussian_taps(rho);
  const int radius = static_cast<int>(taps.size() / 2);
  const auto& k = kernels::active_kernels();
  TensorField ts(tg.width(), tg.height());
  std::vector<double> tmp(tg.size());
  const double* in[3] = {tg.xx(), tg.xy(), tg.yy()};
  double* out[3] = {ts.xx(), ts.xy(), ts.yy()};
  for (int c = 0; c < 3; ++c) {
    k.convolve_rows(in[c], tg.width(), tg.height(), taps.data(), radius, tmp.data());
    k.convolve_cols(tmp.data(), tg.width(), tg.height(), taps.data(), radius, out[c]);
  }
  return ts;
}

kernels::VoteWeights vote_weights(double dx, double dy, double sigma_d) {
  if (!(sigma_d > 0.0)) fail(ErrorKind::kInvalidParameter, "sigma_d must be > 0");
  const double dist2 = dx * dx + dy * dy;
  if (!(dist2 > 0.0)) fail(ErrorKind::kInvalidInput, "receiver and voter coincide");
  const double len = std::sqrt(dist2);
  const double rx = dx / len;
  const double ry = dy / len;
  const double c = std::exp(-(dist2 / sigma_d));

  // M = R (I - 1/2 r r^T)^(1/2) = I - (1 + 1/sqrt2) r r^T, vote = c M K M^T.
  // Coincides with c R K (I - 1/2 r r^T) R whenever K commutes with r r^T and
  // stays symmetric positive semidefinite otherwise.
  const double alpha = 1.0 + std::numbers::sqrt2 / 2.0;
  const double p = 1.0 - alpha * rx * rx;
  const double q = -alpha * rx * ry;
  const double s = 1.0 - alpha * ry * ry;

  kernels::VoteWeights v;
  v.w[0][0] = c * (p * p);
  v.w[0][1] = c * (2.0 * p * q);
  v.w[0][2] = c * (q * q);
  v.w[1][0] = c * (p * q);
  v.w[1][1] = c * (p * s + q * q);
  v.w[1][2] = c * (q * s);
  v.w[2][0] = c * (q * q);
  v.w[2][1] = c * (2.0 * q * s);
  v.w[2][2] = c * (s * s);
  return v;
}

SymTensor2 cast_vote(Pixel receiver, Pixel voter, const SymTensor2& k, double sigma_d) {
  if (receiver == voter) fail(ErrorKind::kInvalidInput, "receiver and voter coincide");
  const auto w = vote_weights(voter.x - receiver.x, voter.y - receiver.y, sigma_d);
  SymTensor2 s;
  kernels::detail::apply_vote(w, k.xx, k.xy, k.yy, s.xx, s.xy, s.yy);
  return s;
}

namespace {

void n4_weights(double sigma_d, kernels::VoteWeights (&dir)[4]) {
  // d = voter - receiver for the left, right, up, down neighbour.
  dir[0] = vote_weights(-1.0, 0.0, sigma_d);
  dir[1] = vote_weights(1.0, 0.0, sigma_d);
  dir[2] = vote_weights(0.0, -1.0, sigma_d);
  dir[3] = vote_weights(0.0, 1.0, sigma_d);
}

}  // namespace

TensorField tensor_vote_field(const TensorField& tg, double sigma_d) {
  kernels::VoteWeights dir[4];
  n4_weights(sigma_d, dir);
  TensorField tv(tg.width(), tg.height());
  kernels::active_kernels().vote_n4(tg.xx(), tg.xy(), tg.yy(), tg.width(), tg.height(), dir,
                                    tv.xx(), tv.xy(), tv.yy());
  return tv;
}

TensorField tensor_vote_field(const std::vector<TensorField>& per_channel, double sigma_d) {
  if (per_channel.empty()) fail(ErrorKind::kInvalidInput, "no channels to vote on");
  TensorField total = tensor_vote_field(per_channel.front(), sigma_d);
  for (std::size_t c = 1; c < per_channel.size(); ++c) {
    const auto& ch = per_channel[c];
    if (ch.width() != total.width() || ch.height() != total.height()) {
      fail(ErrorKind::kInvalidInput, "channel fields differ in size");
    }
    const TensorField tv = tensor_vote_field(ch, sigma_d);
    for (std::size_t i = 0; i < total.size(); ++i) {
      total.xx()[i] += tv.xx()[i];
      total.xy()[i] += tv.xy()[i];
      total.yy()[i] += tv.yy()[i];
    }
  }
  return total;
}

SymTensor2 anisotropic_diffuse(const SymTensor2& t, double delta) {
  EigenDecomp2 d = eigen_decompose(t);
  d.l0 = std::exp(-d.l0 / delta);
  d.l1 = std::exp(-d.l1 / delta);
  return compose(d);
}

TensorField anisotropic_diffuse(const TensorField& tv, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::kInvalidParameter, "delta must be > 0");
  TensorField out(tv.width(), tv.height());
  for (std::size_t i = 0; i < tv.size(); ++i) out.set(i, anisotropic_diffuse(tv.at(i), delta));
  return out;
}

SaliencyPixel saliency(const EigenDecomp2& d) {
  SaliencyPixel s;
  const double sum = d.l0 + d.l1;
  if (!(sum >= kTraceEpsilon)) return s;
  s.homogeneous = false;
  s.cl = std::clamp((d.l0 - d.l1) / sum, 0.0, 1.0);
  s.cp = 1.0 - s.cl;
  return s;
}

SaliencyMap saliency_map(const TensorField& analyzed, const TensorField& source) {
  if (analyzed.width() != source.width() || analyzed.height() != source.height()) {
    fail(ErrorKind::kInvalidInput, "analysed and source fields differ in size");
  }
  SaliencyMap map(analyzed.width(), analyzed.height());
  auto out = map.values();
  for (std::size_t i = 0; i < analyzed.size(); ++i) {
    const EigenDecomp2 src = eigen_decompose(source.at(i));
    if (src.l0 + src.l1 < kTraceEpsilon) {
      out[i] = SaliencyPixel{};
      continue;
    }
    // eigen_decompose already orders l0 >= l1 for the analysed tensor itself.
    out[i] = saliency(eigen_decompose(analyzed.at(i)));
  }
  return map;
}

std::vector<double> normalized_trace(const TensorField& field) {
  if (field.empty()) return {};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> tr(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    tr[i] = field.xx()[i] + field.yy()[i];
    lo = std::min(lo, tr[i]);
    hi = std::max(hi, tr[i]);
  }
  const double range = hi - lo;
  if (!(range > 0.0)) return {};
  for (auto& t : tr) t = (t - lo) / range;
  return tr;
}

std::vector<DegeneratePoint> detect_degenerate_points(const TensorField& analyzed,
                                                      const SaliencyMap& sal, double tau_cp,
                                                      double tau_wd, Diagnostics* diag) {
  if (!(tau_cp > 0.0 && tau_cp < 1.0)) fail(ErrorKind::kInvalidParameter, "tau_cp must be in (0,1)");
  if (!(tau_wd >= 0.0 && tau_wd < 1.0)) fail(ErrorKind::kInvalidParameter, "tau_wd must be in [0,1)");
  if (sal.width() != analyzed.width() || sal.height() != analyzed.height()) {
    fail(ErrorKind::kInvalidInput, "saliency map does not match field");
  }
  const auto nt = normalized_trace(analyzed);
  if (nt.empty()) {
    if (diag) diag->warn("degenerate detection: all traces equal, normalisation undefined");
    return {};
  }
  std::vector<DegeneratePoint> points;
  const auto s = sal.values();
  for (int y = 0; y < analyzed.height(); ++y) {
    for (int x = 0; x < analyzed.width(); ++x) {
      const auto i = analyzed.index(x, y);
      if (s[i].homogeneous || !(s[i].cp > tau_cp) || !(nt[i] >= tau_wd)) continue;
      points.push_back({x, y, s[i].cp, nt[i]});
    }
  }
  return points;
}

std::vector<DegeneratePoint> detect_degenerate_points(const TensorField& analyzed,
                                                      const TensorField& source,
                                                      double tau_cp, double tau_wd,
                                                      Diagnostics* diag) {
  return detect_degenerate_points(analyzed, saliency_map(analyzed, source), tau_cp, tau_wd,
                                  diag);
}

Descriptor parse_descriptor(const std::string& name) {
  if (name == "tensor-voting" || name == "tv") return Descriptor::kTensorVoting;
  if (name == "structure-tensor" || name == "st") return Descriptor::kStructureTensor;
  fail(ErrorKind::kInvalidParameter, "unknown descriptor '" + name + "'");
}

const char* to_string(Descriptor d) {
  return d == Descriptor::kTensorVoting ? "tensor-voting" : "structure-tensor";
}

DescriptorFields compute_descriptor(const GrayImage& image, const TensorParams& params) {
  return compute_descriptor(std::vector<GrayImage>{image}, params);
}

DescriptorFields compute_descriptor(const std::vector<GrayImage>& channels,
                                    const TensorParams& params) {
  if (channels.empty()) fail(ErrorKind::kInvalidInput, "no image channels");
  std::vector<TensorField> tg;
  tg.reserve(channels.size());
  for (const auto& ch : channels) tg.push_back(gradient_tensor(compute_gradient(ch)));

  DescriptorFields out;
  if (params.descriptor == Descriptor::kStructureTensor) {
    TensorField sum = std::move(tg.front());
    for (std::size_t c = 1; c < tg.size(); ++c) {
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum.xx()[i] += tg[c].xx()[i];
        sum.xy()[i] += tg[c].xy()[i];
        sum.yy()[i] += tg[c].yy()[i];
      }
    }
    out.analyzed = structure_tensor(sum, params.rho);
    out.source = out.analyzed;
    return out;
  }
  out.source = tensor_vote_field(tg, params.sigma_d);
  out.analyzed = anisotropic_diffuse(out.source, params.delta);
  return out;
}

}  // namespace chartensor
