#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "misslink/error.hpp"
#include "misslink/harness.hpp"
#include "test_support.hpp"

namespace misslink {
namespace {

ExperimentPlan karate_plan() {
  ExperimentPlan plan;
  plan.source.kind = SourceSpec::Kind::kEdgeList;
  plan.source.path = testing::karate_path();
  plan.fractions = {0.9, 0.7};
  plan.methods = {"cn", "ra", "pa"};
  plan.replicas = 3;
  plan.master_seed = 17;
  return plan;
}

ExperimentPlan small_lfr_community_plan() {
  ExperimentPlan plan;
  plan.pipeline = Pipeline::kCommunity;
  plan.source.kind = SourceSpec::Kind::kLfr;
  plan.source.lfr.n = 100;
  plan.source.lfr.mean_degree = 8;
  plan.source.lfr.max_degree = 20;
  plan.source.lfr.mixing = 0.2;
  plan.source.lfr.min_community = 10;
  plan.source.lfr.max_community = 25;
  plan.fractions = {1.0, 0.8};
  plan.replicas = 2;
  plan.master_seed = 5;
  return plan;
}

std::string as_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

ResultRow row(std::string model, std::optional<double> value) {
  return {std::move(model), 0.8, "cn", 0, 0, "auc", value, value ? 1u : 0u};
}

TEST(SummarizeTest, SingleRowHasZeroStderr) {
  auto s = summarize({row("crawled", 0.7)});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].mean, 0.7);
  EXPECT_DOUBLE_EQ(s[0].stderr_mean, 0.0);
  EXPECT_EQ(s[0].replicas, 1u);
}

TEST(SummarizeTest, ConstantRows) {
  std::vector<ResultRow> rows(10, row("crawled", 0.25));
  auto s = summarize(rows);
  EXPECT_DOUBLE_EQ(s[0].mean, 0.25);
  EXPECT_DOUBLE_EQ(s[0].stderr_mean, 0.0);
  EXPECT_EQ(s[0].n_effective, 10u);
}

TEST(SummarizeTest, NormalSampleMean) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> value(0.7, 0.01);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 100; ++i) rows.push_back(row("random", value(rng)));
  auto s = summarize(rows);
  EXPECT_NEAR(s[0].mean, 0.7, 0.005);
  EXPECT_NEAR(s[0].stderr_mean, 0.001, 0.0005);
}

TEST(SummarizeTest, SkippedRowsExcludedAndGroupsOrdered) {
  auto s = summarize({row("random", 1.0), row("crawled", std::nullopt), row("random", 0.0),
                      row("crawled", std::nullopt)});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].model, "random");
  EXPECT_DOUBLE_EQ(s[0].mean, 0.5);
  EXPECT_EQ(s[1].replicas, 2u);
  EXPECT_EQ(s[1].n_effective, 0u);
  EXPECT_TRUE(std::isnan(s[1].mean));
}

TEST(ResultsCsvTest, RoundTrip) {
  auto rows = run_prediction_pipeline(karate_plan());
  std::string text = as_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  std::istringstream in(text);
  EXPECT_EQ(read_results_csv(in), rows);
  std::istringstream bad("model,x\n");
  EXPECT_THROW(read_results_csv(bad), Error);
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  double x = 2.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(SeedTest, CellSeedsAreIndependent) {
  std::set<std::uint64_t> seen;
  for (auto model : {"crawled", "random", "limited"}) {
    for (double f : {0.9, 0.8}) {
      for (std::size_t r = 0; r < 10; ++r) seen.insert(cell_seed(1, model, f, r));
    }
  }
  EXPECT_EQ(seen.size(), 60u);
  EXPECT_NE(source_seed(1, 0), source_seed(1, 1));
  EXPECT_NE(source_seed(1, 0), source_seed(2, 0));
}

TEST(PredictionPipelineTest, EveryCellOncePerReplica) {
  auto plan = karate_plan();
  auto rows = run_prediction_pipeline(plan);
  EXPECT_EQ(rows.size(), 3u * 2u * 3u * 3u);
  std::set<std::tuple<std::string, double, std::string, std::size_t>> keys;
  for (const auto& r : rows) {
    EXPECT_TRUE(keys.emplace(r.model, r.fraction, r.method, r.replica).second);
    ASSERT_TRUE(r.value);
    EXPECT_GE(*r.value, 0.0);
    EXPECT_LE(*r.value, 1.0);
    EXPECT_EQ(r.seed, cell_seed(plan.master_seed, r.model, r.fraction, r.replica));
  }
}

TEST(PredictionPipelineTest, DeterministicAcrossThreads) {
  auto plan = karate_plan();
  std::string one = as_csv(run_prediction_pipeline(plan));
  EXPECT_EQ(one, as_csv(run_prediction_pipeline(plan)));
  plan.threads = 3;
  EXPECT_EQ(one, as_csv(run_prediction_pipeline(plan)));
}

TEST(PredictionPipelineTest, MoreReplicasKeepEarlierRows) {
  auto plan = karate_plan();
  auto three = run_prediction_pipeline(plan);
  plan.replicas = 5;
  auto five = run_prediction_pipeline(plan);
  for (const auto& r : three) EXPECT_NE(std::find(five.begin(), five.end(), r), five.end());
}

TEST(PredictionPipelineTest, FullFractionIsSkipped) {
  auto plan = karate_plan();
  plan.fractions = {1.0};
  for (const auto& r : run_prediction_pipeline(plan)) {
    EXPECT_FALSE(r.value);
    EXPECT_EQ(r.n_effective, 0u);
  }
}

TEST(PredictionPipelineTest, GeneratedSourceVariesByReplica) {
  ExperimentPlan plan;
  plan.source.kind = SourceSpec::Kind::kEr;
  plan.source.er.n = 60;
  plan.source.er.mean_degree = 6;
  plan.fractions = {0.8};
  plan.models = {DegradationKind::kRandomDeletion};
  plan.methods = {"pa"};
  plan.replicas = 2;
  auto rows = run_prediction_pipeline(plan);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[0].value, rows[1].value);
}

TEST(CommunityPipelineTest, RowsAndFullFraction) {
  auto plan = small_lfr_community_plan();
  auto rows = run_community_pipeline(plan);
  std::set<std::string> models;
  for (const auto& r : rows) {
    models.insert(r.model);
    ASSERT_TRUE(r.value) << r.model << " " << r.metric;
    EXPECT_EQ(r.n_effective, 1u);
    if (r.metric == "nmi") {
      EXPECT_GE(*r.value, 0.0);
      EXPECT_LE(*r.value, 1.0);
    }
    if (r.fraction == 1.0 && r.metric.starts_with("removed")) EXPECT_EQ(*r.value, 0.0);
  }
  EXPECT_EQ(models, (std::set<std::string>{"original", "induced", "crawled", "random", "limited"}));
  EXPECT_EQ(as_csv(rows), as_csv(run_community_pipeline(plan)));
}

TEST(CommunityPipelineTest, EdgeListUsesReferenceTruth) {
  ExperimentPlan plan;
  plan.pipeline = Pipeline::kCommunity;
  plan.source.path = testing::karate_path();
  plan.fractions = {0.8};
  plan.methods = {"louvain"};
  auto rows = run_community_pipeline(plan);
  for (const auto& r : rows) EXPECT_NE(r.method, "truth");
  EXPECT_EQ(rows.size(), 5u * 2u);
}

TEST(PlanTest, ParseAndRoundTrip) {
  auto plan = parse_plan(R"({
    "source": {"type": "lfr", "n": 100, "k_avg": 5, "k_max": 15, "tau1": 2, "tau2": 1,
               "mu": 0.3, "c_min": 10, "c_max": 20},
    "pipeline": "prediction",
    "fractions": [0.9, 0.8],
    "models": ["crawled", "limited"],
    "methods": ["cn", "aa"],
    "replicas": 4,
    "master_seed": 99,
    "auc_mode": "sampled",
    "auc_samples": 500
  })");
  EXPECT_EQ(plan.source.kind, SourceSpec::Kind::kLfr);
  EXPECT_EQ(plan.source.lfr.max_community, 20u);
  EXPECT_EQ(plan.models.size(), 2u);
  EXPECT_EQ(plan.replicas, 4u);
  EXPECT_EQ(plan.auc_mode, AucMode::kSampled);
  auto again = parse_plan(plan_to_json(plan));
  EXPECT_EQ(plan_to_json(again), plan_to_json(plan));

  auto path_only = parse_plan(R"({"source": "graph.txt"})");
  EXPECT_EQ(path_only.source.path, "graph.txt");
  EXPECT_EQ(path_only.fractions.size(), 10u);
}

TEST(PlanTest, Rejections) {
  auto kind = [](std::string_view text) {
    try {
      validate(parse_plan(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  EXPECT_EQ(kind("[1, 2]"), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind("{not json"), ErrorKind::kParse);
  EXPECT_EQ(kind(R"({"fractions": [0.5, 0.9]})"), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind(R"({"fractions": [1.5]})"), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind(R"({"replicas": 0})"), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind(R"({"methods": ["katz"]})"), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind(R"({"models": ["induced"]})"), ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace misslink
