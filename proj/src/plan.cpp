#include <fstream>
#include <sstream>

#include <json.hpp>

#include "misslink/error.hpp"
#include "misslink/harness.hpp"

namespace misslink {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, "plan: " + what);
}

std::string_view pipeline_name(Pipeline p) {
  return p == Pipeline::kPrediction ? "prediction" : "community";
}

SourceSpec parse_source(const json& j) {
  SourceSpec s;
  if (j.is_string()) {
    s.kind = SourceSpec::Kind::kEdgeList;
    s.path = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) bad("source must be a path or an object");
  auto type = j.value("type", std::string("edgelist"));
  if (type == "edgelist") {
    s.kind = SourceSpec::Kind::kEdgeList;
    if (!j.contains("path")) bad("edgelist source needs a path");
    s.path = j.at("path").get<std::string>();
  } else if (type == "er") {
    s.kind = SourceSpec::Kind::kEr;
    s.er.n = j.at("n").get<std::size_t>();
    s.er.mean_degree = j.at("k_avg").get<double>();
  } else if (type == "lfr") {
    s.kind = SourceSpec::Kind::kLfr;
    s.lfr.n = j.at("n").get<std::size_t>();
    s.lfr.mean_degree = j.at("k_avg").get<double>();
    s.lfr.max_degree = j.at("k_max").get<std::size_t>();
    s.lfr.degree_exponent = j.value("tau1", 2.0);
    s.lfr.community_exponent = j.value("tau2", 1.0);
    s.lfr.mixing = j.at("mu").get<double>();
    s.lfr.min_community = j.at("c_min").get<std::size_t>();
    s.lfr.max_community = j.at("c_max").get<std::size_t>();
  } else {
    bad("unknown source type '" + type + "'");
  }
  return s;
}

json source_to_json(const SourceSpec& s) {
  switch (s.kind) {
    case SourceSpec::Kind::kEdgeList:
      return {{"type", "edgelist"}, {"path", s.path.string()}};
    case SourceSpec::Kind::kEr:
      return {{"type", "er"}, {"n", s.er.n}, {"k_avg", s.er.mean_degree}};
    case SourceSpec::Kind::kLfr:
      return {{"type", "lfr"},
              {"n", s.lfr.n},
              {"k_avg", s.lfr.mean_degree},
              {"k_max", s.lfr.max_degree},
              {"tau1", s.lfr.degree_exponent},
              {"tau2", s.lfr.community_exponent},
              {"mu", s.lfr.mixing},
              {"c_min", s.lfr.min_community},
              {"c_max", s.lfr.max_community}};
  }
  return {};
}

}  // namespace

void validate(const ExperimentPlan& plan) {
  if (plan.fractions.empty()) bad("fractions must not be empty");
  for (std::size_t i = 0; i < plan.fractions.size(); ++i) {
    double f = plan.fractions[i];
    if (!(f > 0.0 && f <= 1.0)) bad("fraction " + format_double(f) + " outside (0, 1]");
    if (i > 0 && !(f < plan.fractions[i - 1])) bad("fractions must be strictly decreasing");
  }
  if (plan.replicas < 1) bad("replicas must be >= 1");
  if (plan.threads < 1) bad("threads must be >= 1");
  if (plan.pipeline == Pipeline::kPrediction) {
    if (plan.models.empty()) bad("models must not be empty");
    for (auto m : plan.models) {
      if (m == DegradationKind::kInduced) bad("induced is not a prediction model");
    }
    for (const auto& m : plan.methods) {
      if (!parse_scorer(m)) bad("unknown scorer '" + m + "'");
    }
    if (plan.auc_mode == AucMode::kSampled && plan.auc_samples == 0) bad("auc_samples must be > 0");
  } else {
    for (const auto& m : plan.methods) {
      if (!parse_detector(m)) bad("unknown detector '" + m + "'");
    }
  }
}

ExperimentPlan parse_plan(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("plan: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  ExperimentPlan plan;
  try {
    if (j.contains("source")) plan.source = parse_source(j.at("source"));
    if (j.contains("pipeline")) {
      auto p = j.at("pipeline").get<std::string>();
      if (p == "prediction") {
        plan.pipeline = Pipeline::kPrediction;
      } else if (p == "community") {
        plan.pipeline = Pipeline::kCommunity;
      } else {
        bad("unknown pipeline '" + p + "'");
      }
    }
    if (j.contains("fractions")) plan.fractions = j.at("fractions").get<std::vector<double>>();
    if (j.contains("models")) {
      plan.models.clear();
      for (const auto& name : j.at("models").get<std::vector<std::string>>()) {
        auto kind = parse_degradation_kind(name);
        if (!kind) bad("unknown model '" + name + "'");
        plan.models.push_back(*kind);
      }
    }
    if (j.contains("methods")) plan.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("replicas")) plan.replicas = j.at("replicas").get<std::size_t>();
    if (j.contains("master_seed")) plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) plan.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("auc_mode")) {
      auto mode = parse_auc_mode(j.at("auc_mode").get<std::string>());
      if (!mode) bad("auc_mode must be exact or sampled");
      plan.auc_mode = *mode;
    }
    if (j.contains("auc_samples")) plan.auc_samples = j.at("auc_samples").get<std::size_t>();
    if (j.contains("threads")) plan.threads = j.at("threads").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("plan: ") + e.what());
  }
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_plan(buffer.str());
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["source"] = source_to_json(plan.source);
  j["pipeline"] = pipeline_name(plan.pipeline);
  j["fractions"] = plan.fractions;
  std::vector<std::string> models;
  for (auto m : plan.models) models.emplace_back(to_string(m));
  j["models"] = models;
  j["methods"] = plan.methods;
  j["replicas"] = plan.replicas;
  j["master_seed"] = plan.master_seed;
  j["output_dir"] = plan.output_dir.string();
  j["auc_mode"] = to_string(plan.auc_mode);
  j["auc_samples"] = plan.auc_samples;
  j["threads"] = plan.threads;
  return j.dump(2);
}

}  // namespace misslink
