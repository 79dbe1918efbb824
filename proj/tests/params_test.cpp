#include <gtest/gtest.h>

#include "chartensor/params.hpp"
#include "chartensor/table_io.hpp"

using namespace chartensor;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Params, Defaults) {
  const auto r = resolve_params({}, std::nullopt, {});
  EXPECT_EQ(r.params.kind, ChartKind::kBar);
  EXPECT_EQ(r.params.tensor.descriptor, Descriptor::kTensorVoting);
  EXPECT_DOUBLE_EQ(r.params.tensor.sigma_d, 4.0);
  EXPECT_DOUBLE_EQ(r.params.tensor.delta, 0.16);
  EXPECT_DOUBLE_EQ(r.params.tau_cp, 0.6);
  EXPECT_DOUBLE_EQ(r.params.tau_wd, 0.005);
  for (const auto& k : param_keys()) EXPECT_EQ(r.sources.at(k), "default") << k;
}

TEST(Params, TauWdFollowsChartType) {
  EXPECT_DOUBLE_EQ(resolve_params({{"chart_type", "scatter"}}, std::nullopt, {}).params.tau_wd, 0.01);
  EXPECT_DOUBLE_EQ(resolve_params({}, std::nullopt, {{"chart_type", "histogram"}}).params.tau_wd, 0.003);
  EXPECT_DOUBLE_EQ(
      resolve_params({{"tau_wd", "0.02"}}, std::nullopt, {{"chart_type", "scatter"}}).params.tau_wd, 0.02);
}

TEST(Params, Precedence) {
  TunerResult t;
  t.eps = 7;
  t.min_pts = 2;
  const std::map<std::string, std::string> config = {{"eps", "5"}, {"sigma_d", "3"}, {"delta", "0.2"}};
  {
    const auto r = resolve_params(config, t, {});
    EXPECT_DOUBLE_EQ(r.params.cluster.eps, 7.0);
    EXPECT_EQ(r.sources.at("eps"), "tuner");
    EXPECT_DOUBLE_EQ(r.params.tensor.sigma_d, 3.0);
    EXPECT_EQ(r.sources.at("sigma_d"), "config");
  }
  {
    const auto r = resolve_params(config, t, {{"eps", "9"}, {"delta", "0.3"}});
    EXPECT_DOUBLE_EQ(r.params.cluster.eps, 9.0);
    EXPECT_EQ(r.sources.at("eps"), "cli");
    EXPECT_DOUBLE_EQ(r.params.tensor.delta, 0.3);
    EXPECT_EQ(r.params.cluster.min_pts, 2);
    EXPECT_EQ(r.values.at("eps"), "9");
  }
}

TEST(Params, ConfigParsing) {
  const auto c = parse_config("# comment\n\neps = 6\n descriptor=structure-tensor  \n");
  EXPECT_EQ(c.at("eps"), "6");
  EXPECT_EQ(c.at("descriptor"), "structure-tensor");
  EXPECT_NE(message_of([] { parse_config("eps 6\n"); }).find("line 1"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config("bogus = 1\n"); }).find("bogus"), std::string::npos);
  EXPECT_NE(message_of([] { parse_config("eps =\n"); }).find("eps"), std::string::npos);
}

TEST(Params, ValidationNamesKey) {
  try {
    resolve_params({}, std::nullopt, {{"tau_cp", "1.5"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidParameter);
    EXPECT_NE(std::string(e.what()).find("tau_cp"), std::string::npos);
  }
  EXPECT_NE(message_of([] { resolve_params({}, std::nullopt, {{"min_pts", "x"}}); }).find("min_pts"),
            std::string::npos);
  EXPECT_THROW(resolve_params({}, std::nullopt, {{"nope", "1"}}), Error);
}

TEST(TunerFile, ParseAndErrors) {
  const auto r = parse_tuner_result(R"({"eps": 7, "min_pts": 4, "cluster_count": 12, "timestamp": "2026-01-01T00:00:00Z"})");
  EXPECT_DOUBLE_EQ(r.eps, 7.0);
  EXPECT_EQ(r.min_pts, 4);
  EXPECT_EQ(r.cluster_count, 12);
  EXPECT_EQ(parse_tuner_result(tuner_result_json(r)).timestamp, r.timestamp);
  EXPECT_NE(message_of([] { parse_tuner_result(R"({"min_pts": 4})"); }).find("eps"), std::string::npos);
  EXPECT_NE(message_of([] { parse_tuner_result(R"({"eps": "x", "min_pts": 4})"); }).find("eps"),
            std::string::npos);
  try {
    parse_tuner_result(R"({"eps": -1, "min_pts": 4})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidParameter);
  }
}

TEST(TableIo, CsvRoundTrip) {
  DataTable t;
  t.kind = ChartKind::kScatter;
  t.rows = {{1.5, 2.25}, {3, 4}};
  const auto csv = table_csv(t, {{"source", "a.png"}});
  EXPECT_NE(csv.find("# chart_type: scatter"), std::string::npos);
  EXPECT_NE(csv.find("x,y"), std::string::npos);
  const auto back = parse_table_csv(csv);
  EXPECT_EQ(back.kind, ChartKind::kScatter);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(parse_table_csv("x,height\n1,2\n").kind, ChartKind::kBar);
  EXPECT_THROW(parse_table_csv("x,height\n1\n"), Error);
}
