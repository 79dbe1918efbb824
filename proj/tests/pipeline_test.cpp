#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>

#include "chartensor/fixture.hpp"
#include "chartensor/pipeline.hpp"
#include "chartensor/png_io.hpp"
#include "chartensor/table_io.hpp"
#include "chartensor/viz.hpp"

using namespace chartensor;
namespace fs = std::filesystem;

namespace {

class PipelineFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("chartensor_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_fixture(const std::string& name) {
    const auto path = (dir_ / (name + ".png")).string();
    write_png(path, render_fixture(standard_fixture(name)).image);
    return path;
  }

  int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + CHARTENSOR_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(PipelineFiles, ExtractWritesOutputs) {
  ExtractRequest req;
  req.image_path = write_fixture("bars_basic");
  req.params = resolve_params({}, std::nullopt, {{"descriptor", "tensor-voting"}, {"rho", "1.5"}});
  req.out_dir = (dir_ / "out").string();
  req.write_saliency = true;
  const auto out = run_extract(req);
  EXPECT_EQ(out.result.table.rows.size(), 3u);
  for (const char* f : {"bars_basic.csv", "bars_basic.json", "bars_basic.manifest.json",
                        "bars_basic.timings.json", "bars_basic.saliency.png"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  const auto manifest = nlohmann::json::parse(read_text_file((dir_ / "out" / "bars_basic.manifest.json").string()));
  EXPECT_EQ(manifest["parameters"]["descriptor"]["value"], "tensor-voting");
  EXPECT_EQ(manifest["parameters"]["rho"]["value"], "1.5");
  EXPECT_EQ(manifest["parameters"]["sigma_d"]["source"], "default");
  EXPECT_EQ(manifest["parameters"]["descriptor"]["source"], "cli");
  const auto csv = parse_table_csv(read_text_file((dir_ / "out" / "bars_basic.csv").string()));
  ASSERT_EQ(csv.rows.size(), out.result.table.rows.size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    EXPECT_NEAR(csv.rows[i].x, out.result.table.rows[i].x, 1e-4);
    EXPECT_NEAR(csv.rows[i].y, out.result.table.rows[i].y, 1e-4);
  }
}

TEST_F(PipelineFiles, RepeatRunsByteIdentical) {
  ExtractRequest req;
  req.image_path = write_fixture("scatter_positive");
  req.params = resolve_params({{"chart_type", "scatter"}}, std::nullopt, {});
  req.out_dir = (dir_ / "a").string();
  run_extract(req);
  req.out_dir = (dir_ / "b").string();
  run_extract(req);
  for (const char* f : {"scatter_positive.csv", "scatter_positive.manifest.json"})
    EXPECT_EQ(read_text_file((dir_ / "a" / f).string()), read_text_file((dir_ / "b" / f).string())) << f;
}

TEST_F(PipelineFiles, UnreadableInputTaggedWithStage) {
  ExtractRequest req;
  req.image_path = (dir_ / "missing.png").string();
  req.params = resolve_params({}, std::nullopt, {});
  try {
    run_extract(req);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "read");
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST_F(PipelineFiles, BlankImageIsEmptyCanvas) {
  try {
    run_pipeline(to_color(GrayImage(40, 40, 1.0)), {});
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "canvas");
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCanvas);
  }
}

TEST_F(PipelineFiles, CliExitCodes) {
  const auto img = write_fixture("bars_basic");
  const auto out = (dir_ / "cli").string();
  EXPECT_EQ(cli("extract \"" + img + "\" -o \"" + out + "\""), 0);
  EXPECT_TRUE(fs::exists(dir_ / "cli" / "bars_basic.csv"));
  EXPECT_EQ(cli("extract \"" + (dir_ / "nope.png").string() + "\" -o \"" + out + "\""), 2);
  EXPECT_EQ(cli("extract \"" + img + "\" -o \"" + out + "\" --tau-cp 3"), 3);
  EXPECT_EQ(cli("extract \"" + img + "\" --bogus-flag"), 3);

  write_png((dir_ / "blank.png").string(), GrayImage(30, 30, 1.0));
  EXPECT_EQ(cli("extract \"" + (dir_ / "blank.png").string() + "\" -o \"" + out + "\""), 1);

  EXPECT_EQ(cli("fixtures -o \"" + (dir_ / "fx").string() + "\" --name hist_basic"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "fx" / "hist_basic.truth.csv"));
  EXPECT_EQ(cli("extract \"" + (dir_ / "fx" / "hist_basic.png").string() + "\" -o \"" + out +
                "\" --chart-type histogram"),
            0);
  EXPECT_EQ(cli("eval \"" + out + "/hist_basic.csv\" \"" + (dir_ / "fx" / "hist_basic.truth.csv").string() +
                "\" -o \"" + out + "/eval.json\""),
            0);
  const auto ev = nlohmann::json::parse(read_text_file(out + "/eval.json"));
  EXPECT_LE(ev["value"].get<double>(), 4e-2);

  EXPECT_EQ(cli("tune-export \"" + img + "\" -o \"" + out + "/bundle.json\""), 0);
  EXPECT_NO_THROW(parse_tuner_bundle(read_text_file(out + "/bundle.json")));
  EXPECT_EQ(cli("glyphs \"" + img + "\" -o \"" + out + "/g.png\""), 0);
  EXPECT_EQ(cli("saliency \"" + img + "\" -o \"" + out + "/s.png\""), 0);
}
