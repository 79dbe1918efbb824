#include "chartensor/viz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "chartensor/coolwarm_lut.hpp"
#include "chartensor/png_io.hpp"

namespace chartensor {

void coolwarm(double cl, std::uint8_t rgb[3]) {
  const int last = static_cast<int>(viz::kCoolwarm.size()) - 1;
  const double t = std::clamp(std::isfinite(cl) ? cl : 0.0, 0.0, 1.0);
  const auto& c = viz::kCoolwarm[static_cast<std::size_t>(std::lround(t * last))];
  rgb[0] = c.r;
  rgb[1] = c.g;
  rgb[2] = c.b;
}

RgbImage render_saliency(const SaliencyMap& sal) {
  RgbImage out(sal.width(), sal.height());
  for (int y = 0; y < sal.height(); ++y)
    for (int x = 0; x < sal.width(); ++x) {
      const auto& s = sal(x, y);
      std::uint8_t* p = out.at(x, y);
      if (s.homogeneous) {
        p[0] = p[1] = p[2] = kHomogeneousGray;
      } else {
        coolwarm(s.cl, p);
      }
    }
  return out;
}

RgbImage render_glyphs(const TensorField& field, const SaliencyMap& sal, int stride) {
  if (stride < 1) fail(ErrorKind::kInvalidParameter, "glyph stride must be >= 1");
  if (sal.width() != field.width() || sal.height() != field.height())
    fail(ErrorKind::kInvalidInput, "saliency map does not match field");
  RgbImage out(field.width(), field.height());
  const int off = stride / 2;

  double max_l0 = 0.0;
  for (int y = off; y < field.height(); y += stride)
    for (int x = off; x < field.width(); x += stride)
      if (!sal(x, y).homogeneous) max_l0 = std::max(max_l0, eigen_decompose(field.at(x, y)).l0);
  if (!(max_l0 > 0.0)) return out;

  const double cell = 0.5 * stride;
  for (int gy = off; gy < field.height(); gy += stride) {
    for (int gx = off; gx < field.width(); gx += stride) {
      if (sal(gx, gy).homogeneous) continue;
      const EigenDecomp2 d = eigen_decompose(field.at(gx, gy));
      if (!(d.l0 > 0.0)) continue;
      const double a = std::max(0.5, cell * d.l0 / max_l0);
      const double b = std::max(0.5, cell * std::max(d.l1, 0.0) / max_l0);
      std::uint8_t color[3];
      coolwarm(sal(gx, gy).cl, color);
      const int r = static_cast<int>(std::ceil(a));
      for (int y = gy - r; y <= gy + r; ++y)
        for (int x = gx - r; x <= gx + r; ++x) {
          if (x < 0 || y < 0 || x >= field.width() || y >= field.height()) continue;
          const double dx = x - gx, dy = y - gy;
          const double u = (dx * d.v0.x + dy * d.v0.y) / a;
          const double v = (dx * d.v1.x + dy * d.v1.y) / b;
          if (u * u + v * v <= 1.0) out.set(x, y, color[0], color[1], color[2]);
        }
    }
  }
  return out;
}

RgbImage overlay_degenerates(const CanvasImage& canvas, const std::vector<DegeneratePoint>& points) {
  RgbImage out = to_rgb8(canvas.intensity);
  for (const auto& p : points)
    if (p.x >= 0 && p.y >= 0 && p.x < out.width && p.y < out.height) out.set(p.x, p.y, 255, 0, 0);
  return out;
}

TunerBundle make_tuner_bundle(const CanvasImage& canvas, const std::vector<DegeneratePoint>& points,
                              const ClusterParams& defaults, double tau_cp, double tau_wd) {
  TunerBundle b;
  b.png = encode_png(canvas.intensity);
  b.points = points;
  b.defaults = defaults;
  b.tau_cp = tau_cp;
  b.tau_wd = tau_wd;
  return b;
}

std::string tuner_bundle_json(const TunerBundle& b) {
  nlohmann::ordered_json j;
  j["schema"] = b.schema;
  j["image"] = base64_encode(b.png);
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : b.points)
    pts.push_back({{"x", p.x}, {"y", p.y}, {"cp", p.cp}, {"norm_trace", p.norm_trace}});
  j["defaults"] = {{"eps", b.defaults.eps}, {"min_pts", b.defaults.min_pts}};
  j["thresholds"] = {{"tau_cp", b.tau_cp}, {"tau_wd", b.tau_wd}};
  return j.dump(2) + "\n";
}

TunerBundle parse_tuner_bundle(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TunerBundle b;
    b.schema = j.at("schema").get<int>();
    if (b.schema != 1) fail(ErrorKind::kParse, "unsupported tuner bundle schema " + std::to_string(b.schema));
    b.png = base64_decode(j.at("image").get<std::string>());
    for (const auto& p : j.at("points"))
      b.points.push_back({p.at("x").get<int>(), p.at("y").get<int>(), p.at("cp").get<double>(),
                          p.at("norm_trace").get<double>()});
    b.defaults.eps = j.at("defaults").at("eps").get<double>();
    b.defaults.min_pts = j.at("defaults").at("min_pts").get<int>();
    b.tau_cp = j.at("thresholds").at("tau_cp").get<double>();
    b.tau_wd = j.at("thresholds").at("tau_wd").get<double>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("tuner bundle: ") + e.what());
  }
}

void export_tuner_bundle(const std::string& path, const TunerBundle& bundle) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot write " + path);
  f << tuner_bundle_json(bundle);
  if (!f) fail(ErrorKind::kIo, "write failed: " + path);
}

std::string tensor_field_json(const TensorField& field) {
  nlohmann::ordered_json j;
  j["width"] = field.width();
  j["height"] = field.height();
  std::vector<double> flat;
  flat.reserve(field.size() * 3);
  for (std::size_t i = 0; i < field.size(); ++i) {
    flat.push_back(field.xx()[i]);
    flat.push_back(field.xy()[i]);
    flat.push_back(field.yy()[i]);
  }
  j["tensors"] = flat;
  return j.dump();
}

TensorField parse_tensor_field_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TensorField f(j.at("width").get<int>(), j.at("height").get<int>());
    const auto flat = j.at("tensors").get<std::vector<double>>();
    if (flat.size() != f.size() * 3) fail(ErrorKind::kParse, "tensor count does not match size");
    for (std::size_t i = 0; i < f.size(); ++i) f.set(i, {flat[3 * i], flat[3 * i + 1], flat[3 * i + 2]});
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("tensor field: ") + e.what());
  }
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += kB64[v & 63];
  }
  if (i < bytes.size()) {
    unsigned v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::vector<std::uint8_t> out;
  unsigned acc = 0;
  int bits = 0;
  for (char ch : text) {
    if (ch == '=' || ch == '\n' || ch == '\r') continue;
    const char* p = std::char_traits<char>::find(kB64, 64, ch);
    if (!p) fail(ErrorKind::kParse, "invalid base64 character");
    acc = (acc << 6) | static_cast<unsigned>(p - kB64);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace chartensor
