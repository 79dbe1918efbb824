#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chartensor/chart_extract.hpp"
#include "chartensor/cluster.hpp"
#include "chartensor/preprocess.hpp"
#include "chartensor/tensor_core.hpp"

namespace chartensor {

/// Default weak-point threshold per chart type.
double default_tau_wd(ChartKind kind);

/// Everything the extraction pipeline needs, fully resolved.
struct PipelineParams {
  ChartKind kind = ChartKind::kBar;
  TensorParams tensor;
  double tau_cp = kDefaultTauCp;
  double tau_wd = 0.005;
  bool multichannel = false;
  /// Scatter only: merge DBSCAN clusters that share a canvas component.
  bool merge_by_component = true;
  ClusterParams cluster;
  PrepParams prep;
  BarParams bar;
};

/// Layered key/value parameters. `sources` records where each key's value
/// came from: default, config, tuner or cli.
struct ResolvedParams {
  PipelineParams params;
  std::map<std::string, std::string> values;
  std::map<std::string, std::string> sources;
};

/// Keys accepted in config files and as CLI overrides.
const std::vector<std::string>& param_keys();

/// Parses a flat `key = value` file body ('#' comments, blank lines ok).
/// Throws Error(kParse) naming the offending line or key.
std::map<std::string, std::string> parse_config(const std::string& text);

/// Tuner parameter file written by the tuner UI.
struct TunerResult {
  double eps = 5.0;
  int min_pts = 3;
  int cluster_count = 0;
  std::string timestamp;
};
TunerResult parse_tuner_result(const std::string& json);
std::string tuner_result_json(const TunerResult& r);

/// Precedence: CLI > tuner file > config file > defaults. Empty paths are
/// skipped. Throws Error(kParse) for malformed files, Error(kInvalidParameter)
/// for values out of range, Error(kIo) for unreadable files.
ResolvedParams load_params(const std::string& config_path,
                           const std::map<std::string, std::string>& cli_overrides,
                           const std::string& tuner_path = {});

/// Same resolution from in-memory layers (used by tests).
ResolvedParams resolve_params(const std::map<std::string, std::string>& config,
                              const std::optional<TunerResult>& tuner,
                              const std::map<std::string, std::string>& cli_overrides);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace chartensor
