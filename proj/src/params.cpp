#include "chartensor/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chartensor {

double default_tau_wd(ChartKind kind) {
  switch (kind) {
    case ChartKind::kBar: return 0.005;
    case ChartKind::kHistogram: return 0.003;
    case ChartKind::kScatter: return 0.01;
  }
  return 0.005;
}

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = {
      "chart_type", "descriptor",  "sigma_d",      "delta",        "rho",
      "tau_cp",     "tau_wd",      "eps",          "min_pts",      "channel",
      "multichannel", "orientation", "fill_threshold", "min_area", "min_thickness",
      "canny_low",  "canny_high",  "x_tolerance",  "y_tolerance",  "min_height",
      "merge_by_component"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool known_key(const std::string& key) {
  for (const auto& k : param_keys())
    if (k == key) return true;
  return false;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    fail(ErrorKind::kParse, "parameter '" + key + "': expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    fail(ErrorKind::kParse, "parameter '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::kParse, "parameter '" + key + "': expected a boolean, got '" + v + "'");
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail(ErrorKind::kInvalidParameter, "parameter '" + key + "' " + what);
}

void apply(PipelineParams& p, const std::string& key, const std::string& v) {
  if (key == "chart_type") {
    p.kind = parse_chart_kind(v);
  } else if (key == "descriptor") {
    p.tensor.descriptor = parse_descriptor(v);
  } else if (key == "sigma_d") {
    p.tensor.sigma_d = to_double(key, v);
    require(p.tensor.sigma_d > 0, key, "must be > 0");
  } else if (key == "delta") {
    p.tensor.delta = to_double(key, v);
    require(p.tensor.delta > 0, key, "must be > 0");
  } else if (key == "rho") {
    p.tensor.rho = to_double(key, v);
    require(p.tensor.rho > 0, key, "must be > 0");
  } else if (key == "tau_cp") {
    p.tau_cp = to_double(key, v);
    require(p.tau_cp > 0 && p.tau_cp < 1, key, "must be in (0,1)");
  } else if (key == "tau_wd") {
    p.tau_wd = to_double(key, v);
    require(p.tau_wd >= 0 && p.tau_wd < 1, key, "must be in [0,1)");
  } else if (key == "eps") {
    p.cluster.eps = to_double(key, v);
    require(p.cluster.eps > 0, key, "must be > 0");
  } else if (key == "min_pts") {
    p.cluster.min_pts = to_int(key, v);
    require(p.cluster.min_pts >= 1, key, "must be >= 1");
  } else if (key == "channel") {
    p.prep.channel = parse_channel(v);
  } else if (key == "multichannel") {
    p.multichannel = to_bool(key, v);
  } else if (key == "merge_by_component") {
    p.merge_by_component = to_bool(key, v);
  } else if (key == "orientation") {
    p.bar.orientation = parse_orientation(v);
  } else if (key == "fill_threshold") {
    p.prep.fill_threshold = to_double(key, v);
    require(p.prep.fill_threshold >= 0 && p.prep.fill_threshold <= 1, key, "must be in [0,1]");
  } else if (key == "min_area") {
    p.prep.min_component_area = to_int(key, v);
    require(p.prep.min_component_area >= 0, key, "must be >= 0");
  } else if (key == "min_thickness") {
    p.prep.min_component_thickness = to_int(key, v);
    require(p.prep.min_component_thickness >= 0, key, "must be >= 0");
  } else if (key == "canny_low") {
    p.prep.canny_low = to_double(key, v);
    require(p.prep.canny_low >= 0 && p.prep.canny_low <= 1, key, "must be in [0,1]");
  } else if (key == "canny_high") {
    p.prep.canny_high = to_double(key, v);
    require(p.prep.canny_high >= 0 && p.prep.canny_high <= 1, key, "must be in [0,1]");
  } else if (key == "x_tolerance") {
    p.bar.x_tolerance = to_double(key, v);
    require(p.bar.x_tolerance >= 0, key, "must be >= 0");
  } else if (key == "y_tolerance") {
    p.bar.y_tolerance = to_double(key, v);
    require(p.bar.y_tolerance >= 0, key, "must be >= 0");
  } else if (key == "min_height") {
    p.bar.min_height = to_double(key, v);
    require(p.bar.min_height >= 0, key, "must be >= 0");
  } else {
    fail(ErrorKind::kParse, "unknown parameter '" + key + "'");
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void fill_values(ResolvedParams& r) {
  const auto& p = r.params;
  auto& v = r.values;
  v["chart_type"] = to_string(p.kind);
  v["descriptor"] = to_string(p.tensor.descriptor);
  v["sigma_d"] = fmt_double(p.tensor.sigma_d);
  v["delta"] = fmt_double(p.tensor.delta);
  v["rho"] = fmt_double(p.tensor.rho);
  v["tau_cp"] = fmt_double(p.tau_cp);
  v["tau_wd"] = fmt_double(p.tau_wd);
  v["eps"] = fmt_double(p.cluster.eps);
  v["min_pts"] = std::to_string(p.cluster.min_pts);
  v["channel"] = to_string(p.prep.channel);
  v["multichannel"] = p.multichannel ? "true" : "false";
  v["merge_by_component"] = p.merge_by_component ? "true" : "false";
  v["orientation"] = to_string(p.bar.orientation);
  v["fill_threshold"] = fmt_double(p.prep.fill_threshold);
  v["min_area"] = std::to_string(p.prep.min_component_area);
  v["min_thickness"] = std::to_string(p.prep.min_component_thickness);
  v["canny_low"] = fmt_double(p.prep.canny_low);
  v["canny_high"] = fmt_double(p.prep.canny_high);
  v["x_tolerance"] = fmt_double(p.bar.x_tolerance);
  v["y_tolerance"] = fmt_double(p.bar.y_tolerance);
  v["min_height"] = fmt_double(p.bar.min_height);
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::kParse, "config line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) fail(ErrorKind::kParse, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) fail(ErrorKind::kParse, "config key '" + key + "' has no value");
    out[key] = value;
  }
  return out;
}

TunerResult parse_tuner_result(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("tuner file: ") + e.what());
  }
  TunerResult r;
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::kParse, std::string("tuner file: missing key '") + key + "'");
    return j[key];
  };
  try {
    r.eps = field("eps").get<double>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::kParse, "tuner file: key 'eps' must be a number");
  }
  try {
    r.min_pts = field("min_pts").get<int>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::kParse, "tuner file: key 'min_pts' must be an integer");
  }
  if (j.contains("cluster_count")) {
    if (!j["cluster_count"].is_number_integer()) fail(ErrorKind::kParse, "tuner file: key 'cluster_count' must be an integer");
    r.cluster_count = j["cluster_count"].get<int>();
  }
  if (j.contains("timestamp")) {
    if (!j["timestamp"].is_string()) fail(ErrorKind::kParse, "tuner file: key 'timestamp' must be a string");
    r.timestamp = j["timestamp"].get<std::string>();
  }
  if (!(r.eps > 0)) fail(ErrorKind::kInvalidParameter, "tuner file: 'eps' must be > 0");
  if (r.min_pts < 1) fail(ErrorKind::kInvalidParameter, "tuner file: 'min_pts' must be >= 1");
  return r;
}

std::string tuner_result_json(const TunerResult& r) {
  nlohmann::ordered_json j;
  j["eps"] = r.eps;
  j["min_pts"] = r.min_pts;
  j["cluster_count"] = r.cluster_count;
  j["timestamp"] = r.timestamp;
  return j.dump(2) + "\n";
}

ResolvedParams resolve_params(const std::map<std::string, std::string>& config,
                              const std::optional<TunerResult>& tuner,
                              const std::map<std::string, std::string>& cli) {
  ResolvedParams r;
  for (const auto& k : param_keys()) r.sources[k] = "default";

  std::map<std::string, std::string> merged;
  for (const auto& [k, v] : config) {
    merged[k] = v;
    r.sources[k] = "config";
  }
  if (tuner) {
    merged["eps"] = fmt_double(tuner->eps);
    merged["min_pts"] = std::to_string(tuner->min_pts);
    r.sources["eps"] = r.sources["min_pts"] = "tuner";
  }
  for (const auto& [k, v] : cli) {
    if (!known_key(k)) fail(ErrorKind::kParse, "unknown parameter '" + k + "'");
    merged[k] = v;
    r.sources[k] = "cli";
  }
  // chart_type first: tau_wd's default depends on it.
  if (auto it = merged.find("chart_type"); it != merged.end()) apply(r.params, it->first, it->second);
  r.params.tau_wd = default_tau_wd(r.params.kind);
  for (const auto& k : param_keys()) {
    if (k == "chart_type") continue;
    if (auto it = merged.find(k); it != merged.end()) apply(r.params, k, it->second);
  }
  if (r.params.prep.canny_low > r.params.prep.canny_high)
    fail(ErrorKind::kInvalidParameter, "parameter 'canny_low' exceeds 'canny_high'");
  fill_values(r);
  return r;
}

ResolvedParams load_params(const std::string& config_path,
                           const std::map<std::string, std::string>& cli,
                           const std::string& tuner_path) {
  std::map<std::string, std::string> config;
  if (!config_path.empty()) config = parse_config(read_text_file(config_path));
  std::optional<TunerResult> tuner;
  if (!tuner_path.empty()) tuner = parse_tuner_result(read_text_file(tuner_path));
  return resolve_params(config, tuner, cli);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot write " + path);
  f << text;
  if (!f) fail(ErrorKind::kIo, "write failed: " + path);
}

}  // namespace chartensor
