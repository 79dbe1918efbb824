#include "chartensor/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "chartensor/kernels.hpp"
#include "chartensor/png_io.hpp"
#include "chartensor/table_io.hpp"
#include "chartensor/viz.hpp"

namespace chartensor {

namespace fs = std::filesystem;

namespace {

template <typename F>
auto stage(const char* name, ExtractResult& r, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto record = [&] {
    const auto t1 = std::chrono::steady_clock::now();
    r.timings_ms.emplace_back(name, std::chrono::duration<double, std::milli>(t1 - t0).count());
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto out = f();
      record();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

ExtractResult run_pipeline(const ColorImage& image, const PipelineParams& params,
                           const std::string& source_path, bool stop_after_points) {
  ExtractResult r;
  r.canvas = stage("canvas", r, [&] { return extract_canvas(image, params.prep, source_path); });

  r.fields = stage("descriptor", r, [&] {
    if (params.multichannel) {
      // Votes summed over the RGB channels, restricted to canvas objects.
      std::vector<GrayImage> channels;
      for (const GrayImage* ch : {&image.r, &image.g, &image.b}) {
        GrayImage masked = *ch;
        for (std::size_t i = 0; i < masked.size(); ++i)
          masked.data()[i] = r.canvas.intensity.data()[i] < 0.5 ? masked.data()[i] : 1.0;
        channels.push_back(std::move(masked));
      }
      return compute_descriptor(channels, params.tensor);
    }
    return compute_descriptor(r.canvas.intensity, params.tensor);
  });

  stage("degenerate-points", r, [&] {
    r.saliency = saliency_map(r.fields.analyzed, r.fields.source);
    r.points = detect_degenerate_points(r.fields.analyzed, r.saliency, params.tau_cp, params.tau_wd,
                                        &r.diagnostics);
  });
  if (stop_after_points) return r;

  stage("cluster", r, [&] {
    const auto pts = to_points(r.points);
    r.clusters = dbscan(pts, params.cluster.eps, params.cluster.min_pts);
    r.centroids = params.kind == ChartKind::kScatter && params.merge_by_component
                      ? merge_by_component(r.clusters, pts, r.canvas)
                      : centroids(r.clusters, pts);
  });

  r.table = stage("extract", r, [&] {
    DataTable t;
    switch (params.kind) {
      case ChartKind::kBar: t = extract_bars(r.centroids, r.canvas, params.bar, &r.diagnostics); break;
      case ChartKind::kHistogram:
        t = extract_histogram(r.centroids, r.canvas, params.bar, &r.diagnostics);
        break;
      case ChartKind::kScatter: t = extract_scatter(r.centroids); break;
    }
    if (t.rows.empty()) fail(ErrorKind::kEmptyTable, "no chart objects recovered");
    return t;
  });
  return r;
}

std::string manifest_json(const ExtractRequest& req, const ExtractResult& r,
                          const std::vector<std::string>& outputs) {
  nlohmann::ordered_json j;
  j["tool"] = "chartensor";
  j["version"] = kVersion;
  j["input"] = {{"path", req.image_path}};
  try {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(read_text_file(req.image_path))));
    j["input"]["fnv1a64"] = hex;
  } catch (const Error&) {
  }
  j["kernels"] = kernels::active_kernels().name;
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& key : param_keys()) {
    params[key] = {{"value", req.params.values.at(key)}, {"source", req.params.sources.at(key)}};
  }
  j["canvas_steps"] = r.canvas.steps;
  j["counts"] = {{"degenerate_points", r.points.size()},
                 {"clusters", r.clusters.clusters.size()},
                 {"noise", r.clusters.noise.size()},
                 {"rows", r.table.rows.size()}};
  j["diagnostics"] = r.diagnostics.messages;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

ExtractOutputs run_extract(const ExtractRequest& req) {
  ExtractOutputs out;
  const ColorImage image = [&] {
    try {
      return read_png(req.image_path);
    } catch (const Error& e) {
      throw StageError("read", e);
    }
  }();

  PipelineParams params = req.params.params;
  if (params.prep.debug_dir.empty()) {
    if (const char* env = std::getenv("CHARTENSOR_DEBUG_DIR"); env && *env) params.prep.debug_dir = env;
  }
  out.result = run_pipeline(image, params, req.image_path);
  const ExtractResult& r = out.result;

  const std::string stem = req.stem.empty() ? fs::path(req.image_path).stem().string() : req.stem;
  try {
    fs::create_directories(req.out_dir);
  } catch (const fs::filesystem_error& e) {
    throw StageError("write", Error(ErrorKind::kIo, e.what()));
  }
  auto path = [&](const std::string& suffix) { return (fs::path(req.out_dir) / (stem + suffix)).string(); };

  Provenance prov = {{"image", req.image_path},
                     {"descriptor", to_string(params.tensor.descriptor)},
                     {"tau_cp", req.params.values.at("tau_cp")},
                     {"tau_wd", req.params.values.at("tau_wd")},
                     {"eps", req.params.values.at("eps")},
                     {"min_pts", req.params.values.at("min_pts")}};
  std::vector<std::string> names;
  try {
    write_text_file(path(".csv"), table_csv(r.table, prov));
    names.push_back(stem + ".csv");
    write_text_file(path(".json"), table_json(r.table, prov));
    names.push_back(stem + ".json");
    if (req.write_saliency) {
      write_png(path(".saliency.png"), render_saliency(r.saliency));
      names.push_back(stem + ".saliency.png");
    }
    if (req.write_overlay) {
      write_png(path(".overlay.png"), overlay_degenerates(r.canvas, r.points));
      names.push_back(stem + ".overlay.png");
    }
    write_text_file(path(".manifest.json"), manifest_json(req, r, names));
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, ms] : r.timings_ms) t[k] = ms;
    write_text_file(path(".timings.json"), t.dump(2) + "\n");
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("write", e);
  }
  for (const auto& n : names) out.files.push_back((fs::path(req.out_dir) / n).string());
  out.files.push_back(path(".manifest.json"));
  out.files.push_back(path(".timings.json"));
  return out;
}

}  // namespace chartensor
