#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "misslink/graph.hpp"
#include "misslink/linkpred.hpp"
#include "misslink/partition.hpp"

namespace misslink {

// --- AUC ----------------------------------------------------------------------

enum class AucMode { kExact, kSampled };

std::string_view to_string(AucMode mode);
std::optional<AucMode> parse_auc_mode(std::string_view name);

/// auc = (wins + 0.5 * ties) / comparisons.
struct AucResult {
  double auc = 0.0;
  std::uint64_t n_comparisons = 0;
  std::uint64_t n_wins = 0;
  std::uint64_t n_ties = 0;
  std::string method;
  AucMode mode = AucMode::kExact;
};

/// Compares positive scores against negative scores. Exact mode counts every
/// (positive, negative) comparison via a sort of the negatives; sampled mode
/// draws `sample_n` independent pairs with replacement.
AucResult auc_from_scores(std::span<const double> positives, std::span<const double> negatives,
                          AucMode mode, std::size_t sample_n = 0, std::uint64_t seed = 0);

/// Splits `scored` into positives (the given pairs) and negatives (every
/// other scored pair) and runs auc_from_scores on one method's column.
/// Throws Error{kNoPositives} when `positives` is empty, and kInvalidArgument
/// when a positive is not among the scored pairs or no negatives remain.
AucResult auc(const ScoredPairs& scored, std::span<const Edge> positives, std::string_view method,
              AucMode mode, std::size_t sample_n = 0, std::uint64_t seed = 0);

// --- partition quality -----------------------------------------------------------

/// Newman modularity Q = sum_c [ e_c / m - (d_c / 2m)^2 ].
double modularity(const Graph& g, const Partition& p);

/// Normalized mutual information 2 I / (H1 + H2), natural log. Two trivial
/// partitions score 1.
double nmi(const Partition& a, const Partition& b);

// --- detectors -------------------------------------------------------------------

struct LouvainResult {
  Partition partition;
  /// Modularity of the flattened partition after each aggregation level.
  std::vector<double> level_modularity;
};

/// Multi-level Louvain. Vertices are visited in a fresh random order each
/// local-moving sweep; a vertex moves only on a strictly positive gain, and
/// among equal best gains the lowest community id wins.
LouvainResult louvain_levels(const Graph& g, std::uint64_t seed);
Partition louvain(const Graph& g, std::uint64_t seed);

/// Asynchronous label propagation. Each sweep visits vertices in random order
/// and sets the label to a most frequent neighbour label, keeping the current
/// one when it is among the most frequent and breaking other ties uniformly.
/// Stops after a sweep with no change or after `max_sweeps` sweeps.
Partition label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_sweeps = 100);

/// Runs Louvain and label propagation and keeps the higher-modularity
/// partition (Louvain on ties).
Partition reference_partition(const Graph& g, std::uint64_t seed);

enum class Detector { kLouvain, kLabelPropagation, kReference };

std::string_view to_string(Detector d);
/// Accepts "louvain", "labelprop", "reference".
std::optional<Detector> parse_detector(std::string_view name);

Partition detect(Detector d, const Graph& g, std::uint64_t seed);

}  // namespace misslink
