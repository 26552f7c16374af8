#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "misslink/community.hpp"
#include "misslink/degrade.hpp"
#include "misslink/netgen.hpp"

namespace misslink {

/// Environment variable naming the default experiment output directory.
inline constexpr const char* kOutputDirEnv = "MISSLINK_OUTPUT_DIR";

enum class Pipeline { kPrediction, kCommunity };

struct SourceSpec {
  enum class Kind { kEdgeList, kEr, kLfr };
  Kind kind = Kind::kEdgeList;
  std::filesystem::path path;
  ErParams er;    // seed ignored: replicas get derived seeds
  LfrParams lfr;  // seed ignored: replicas get derived seeds
};

struct ExperimentPlan {
  SourceSpec source;
  Pipeline pipeline = Pipeline::kPrediction;
  std::vector<double> fractions = {0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55, 0.5};
  std::vector<DegradationKind> models = {DegradationKind::kCrawled,
                                         DegradationKind::kRandomDeletion,
                                         DegradationKind::kLimitedDegree};
  /// Scorer ids for the prediction pipeline, detector names for the
  /// community pipeline. Empty means all built-ins / louvain+labelprop.
  std::vector<std::string> methods;
  std::size_t replicas = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  AucMode auc_mode = AucMode::kExact;
  std::size_t auc_samples = 100000;
  std::size_t threads = 1;
};

/// Throws Error{kInvalidArgument} naming the first violated constraint.
void validate(const ExperimentPlan& plan);

/// JSON plan with the field names of ExperimentPlan. Missing fields keep
/// their defaults.
ExperimentPlan parse_plan(std::string_view json_text);
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json(const ExperimentPlan& plan);

/// One measurement. `value` is empty for a skipped replica, in which case
/// n_effective is 0.
struct ResultRow {
  std::string model;
  double fraction = 1.0;
  std::string method;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  std::string metric;
  std::optional<double> value;
  std::size_t n_effective = 1;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Seed of one (model, fraction, replica) cell:
/// derive_seed(master, hash_tag(model), bits(fraction), replica).
std::uint64_t cell_seed(std::uint64_t master, std::string_view model, double fraction,
                        std::size_t replica);

/// Seed used to generate replica `replica`'s source graph.
std::uint64_t source_seed(std::uint64_t master, std::size_t replica);

/// Rows in (model, fraction, method, replica) order.
std::vector<ResultRow> run_prediction_pipeline(const ExperimentPlan& plan);
std::vector<ResultRow> run_community_pipeline(const ExperimentPlan& plan);
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

struct SummaryRow {
  std::string model;
  double fraction = 1.0;
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t replicas = 0;
  std::size_t n_effective = 0;
};

/// Groups by (model, fraction, method, metric) in first-appearance order.
/// Skipped rows count toward `replicas` but not the mean.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

inline constexpr std::string_view kResultsHeader =
    "model,fraction,method,replica,seed,metric,value,n_effective";
inline constexpr std::string_view kSummaryHeader =
    "model,fraction,method,metric,mean,stderr,replicas,n_effective";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace misslink
