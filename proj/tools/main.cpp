// chartensor command-line front end.
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chartensor/emd.hpp"
#include "chartensor/fixture.hpp"
#include "chartensor/kernels.hpp"
#include "chartensor/params.hpp"
#include "chartensor/pipeline.hpp"
#include "chartensor/png_io.hpp"
#include "chartensor/table_io.hpp"
#include "chartensor/viz.hpp"

namespace fs = std::filesystem;
using namespace chartensor;

namespace {

enum Exit { kOk = 0, kEmpty = 1, kIoExit = 2, kParamExit = 3 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyTable:
    case ErrorKind::kEmptyCanvas: return kEmpty;
    case ErrorKind::kIo:
    case ErrorKind::kInvalidInput: return kIoExit;
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kParse:
    case ErrorKind::kInvalidSpec: return kParamExit;
  }
  return kParamExit;
}

// Pipeline parameters shared by the image subcommands.
struct ParamOptions {
  std::string config, tuner;
  std::map<std::string, std::string> flags;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat key = value parameter file");
    app->add_option("--tuner", tuner, "tuner parameter file (JSON)");
    app->add_option("--set", sets, "override any parameter as key=value");
    for (const auto& key : param_keys()) {
      if (key == "multichannel") continue;
      std::string flag = "--" + key;
      for (auto& c : flag)
        if (c == '_') c = '-';
      app->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { flags[key] = v; }, "parameter " + key);
    }
    app->add_flag_callback("--multichannel", [this] { flags["multichannel"] = "true"; },
                           "sum votes over the RGB channels");
  }

  ResolvedParams resolve() const {
    std::map<std::string, std::string> cli = flags;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(ErrorKind::kParse, "--set expects key=value, got '" + s + "'");
      cli[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return load_params(config, cli, tuner);
  }
};

PipelineParams params_with_debug(const ResolvedParams& r) {
  PipelineParams p = r.params;
  if (const char* env = std::getenv("CHARTENSOR_DEBUG_DIR"); env && *env) p.prep.debug_dir = env;
  return p;
}

ExtractResult points_only(const std::string& image_path, const ResolvedParams& rp) {
  const ColorImage image = read_png(image_path);
  return run_pipeline(image, params_with_debug(rp), image_path, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract data tables from bar chart, histogram and scatter plot images"};
  app.require_subcommand(1);
  std::string kernel_set = "auto";
  app.add_option("--kernels", kernel_set, "kernel set: auto, scalar or avx2")->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "extract the data table from a chart image");
  ExtractRequest req;
  ParamOptions extract_opts;
  extract->add_option("image", req.image_path, "input PNG")->required();
  extract->add_option("-o,--out", req.out_dir, "output directory")->capture_default_str();
  extract->add_option("--stem", req.stem, "output file stem (default: input stem)");
  extract->add_flag("--saliency", req.write_saliency, "also write the saliency dot plot");
  extract->add_flag("--overlay", req.write_overlay, "also write the degenerate-point overlay");
  extract_opts.attach(extract);

  // saliency / glyphs / tune-export share an image and a parameter set.
  auto* saliency = app.add_subcommand("saliency", "render the C_l saliency map");
  std::string sal_image, sal_out;
  ParamOptions sal_opts;
  saliency->add_option("image", sal_image, "input PNG")->required();
  saliency->add_option("-o,--out", sal_out, "output PNG")->required();
  sal_opts.attach(saliency);

  auto* glyphs = app.add_subcommand("glyphs", "render ellipse glyphs of the tensor field");
  std::string gly_image, gly_out;
  int stride = 4;
  ParamOptions gly_opts;
  glyphs->add_option("image", gly_image, "input PNG")->required();
  glyphs->add_option("-o,--out", gly_out, "output PNG")->required();
  glyphs->add_option("--stride", stride, "glyph spacing in pixels")->capture_default_str();
  gly_opts.attach(glyphs);

  auto* tune = app.add_subcommand("tune-export", "write a tuner bundle with the degenerate points");
  std::string tune_image, tune_out;
  ParamOptions tune_opts;
  tune->add_option("image", tune_image, "input PNG")->required();
  tune->add_option("-o,--out", tune_out, "output bundle JSON")->required();
  tune_opts.attach(tune);

  auto* eval = app.add_subcommand("eval", "EMD between an extracted table and ground truth");
  std::string eval_a, eval_b, eval_out;
  eval->add_option("extracted", eval_a, "extracted table CSV")->required();
  eval->add_option("truth", eval_b, "ground-truth table CSV")->required();
  eval->add_option("-o,--out", eval_out, "write the JSON report here as well");

  auto* fixtures = app.add_subcommand("fixtures", "render the synthetic fixture catalogue");
  std::string fix_out = "fixtures";
  std::vector<std::string> fix_names;
  bool fix_list = false;
  fixtures->add_option("-o,--out", fix_out, "output directory")->capture_default_str();
  fixtures->add_option("--name", fix_names, "render only these fixtures");
  fixtures->add_flag("--list", fix_list, "list fixture names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParamExit;
  }

  try {
    if (!kernels::select_kernels(kernel_set)) {
      fail(ErrorKind::kInvalidParameter, "kernel set '" + kernel_set + "' is unknown or unavailable");
    }

    if (extract->parsed()) {
      req.params = extract_opts.resolve();
      const auto out = run_extract(req);
      for (const auto& m : out.result.diagnostics.messages) std::cerr << "warning: " << m << "\n";
      for (const auto& f : out.files) std::cout << f << "\n";
    } else if (saliency->parsed()) {
      const auto r = points_only(sal_image, sal_opts.resolve());
      write_png(sal_out, render_saliency(r.saliency));
    } else if (glyphs->parsed()) {
      const auto r = points_only(gly_image, gly_opts.resolve());
      write_png(gly_out, render_glyphs(r.fields.analyzed, r.saliency, stride));
    } else if (tune->parsed()) {
      const auto rp = tune_opts.resolve();
      const auto r = points_only(tune_image, rp);
      export_tuner_bundle(tune_out, make_tuner_bundle(r.canvas, r.points, rp.params.cluster,
                                                      rp.params.tau_cp, rp.params.tau_wd));
      std::cout << r.points.size() << " degenerate points\n";
    } else if (eval->parsed()) {
      const DataTable a = parse_table_csv(read_text_file(eval_a));
      const DataTable b = parse_table_csv(read_text_file(eval_b));
      Diagnostics diag;
      const double value = table_emd(a, b, &diag);
      nlohmann::ordered_json j;
      j["metric"] = a.kind == ChartKind::kScatter ? "emd_2d" : "emd_1d";
      j["value"] = value;
      j["cardinalities"] = {{"extracted", a.rows.size()}, {"truth", b.rows.size()}};
      j["normalization"] = "min-max per axis";
      j["diagnostics"] = diag.messages;
      const std::string text = j.dump(2) + "\n";
      std::cout << text;
      if (!eval_out.empty()) write_text_file(eval_out, text);
    } else if (fixtures->parsed()) {
      auto specs = standard_fixtures();
      if (fix_list) {
        for (const auto& s : specs) std::cout << s.name << "\n";
        return kOk;
      }
      fs::create_directories(fix_out);
      for (const auto& s : specs) {
        if (!fix_names.empty() && std::find(fix_names.begin(), fix_names.end(), s.name) == fix_names.end())
          continue;
        const Fixture fx = render_fixture(s);
        const fs::path base = fs::path(fix_out) / s.name;
        write_png(base.string() + ".png", fx.image);
        write_text_file(base.string() + ".truth.json", ground_truth_json(fx.truth, s));
        write_text_file(base.string() + ".truth.csv", table_csv(fx.truth.pixel_table));
        std::cout << base.string() << ".png\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoExit;
  }
  return kOk;
}
