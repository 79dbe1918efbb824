#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chartensor/chart_extract.hpp"
#include "chartensor/cluster.hpp"
#include "chartensor/image.hpp"
#include "chartensor/params.hpp"
#include "chartensor/preprocess.hpp"
#include "chartensor/tensor_core.hpp"

namespace chartensor {

inline constexpr const char* kVersion = "0.3.0";

/// Everything produced by one extraction, kept for renderers and tests.
struct ExtractResult {
  CanvasImage canvas;
  DescriptorFields fields;
  SaliencyMap saliency;
  std::vector<DegeneratePoint> points;
  ClusterSet clusters;
  std::vector<CentroidPoint> centroids;
  DataTable table;
  Diagnostics diagnostics;
  std::vector<std::pair<std::string, double>> timings_ms;
};

/// Canvas extraction, descriptor, degenerate points, DBSCAN, centroids and
/// the chart-type rule, in that order. Errors carry the failing stage's tag.
/// `stop_after_points` skips clustering and table extraction.
ExtractResult run_pipeline(const ColorImage& image, const PipelineParams& params,
                           const std::string& source_path = {}, bool stop_after_points = false);

struct ExtractRequest {
  std::string image_path;
  ResolvedParams params;
  std::string out_dir = ".";
  /// Output file stem; defaults to the input file's stem.
  std::string stem;
  bool write_saliency = false;
  bool write_overlay = false;
};

struct ExtractOutputs {
  ExtractResult result;
  std::vector<std::string> files;
};

/// Runs the pipeline on a PNG file and writes <stem>.csv, <stem>.json,
/// <stem>.manifest.json (resolved parameters, counts, diagnostics; no
/// timings so repeated runs are byte-identical), <stem>.timings.json and the
/// optional PNGs.
ExtractOutputs run_extract(const ExtractRequest& request);

std::string manifest_json(const ExtractRequest& request, const ExtractResult& result,
                          const std::vector<std::string>& outputs);

}  // namespace chartensor
