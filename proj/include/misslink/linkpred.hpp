#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "misslink/graph.hpp"

namespace misslink {

enum class ScorerId {
  kCommonNeighbors,
  kJaccard,
  kMeetMin,
  kGeometric,
  kAdamicAdar,
  kResourceAllocation,
  kPreferentialAttachment,
};

inline constexpr ScorerId kAllScorers[] = {
    ScorerId::kCommonNeighbors, ScorerId::kJaccard,    ScorerId::kMeetMin,
    ScorerId::kGeometric,       ScorerId::kAdamicAdar, ScorerId::kResourceAllocation,
    ScorerId::kPreferentialAttachment,
};

/// Lowercase ids: cn, jaccard, meetmin, geometric, aa, ra, pa.
std::string_view to_string(ScorerId id);
std::optional<ScorerId> parse_scorer(std::string_view name);

/// Neighbourhood statistics shared by all built-in scorers.
struct PairStats {
  std::size_t common = 0;
  std::size_t degree_u = 0;
  std::size_t degree_v = 0;
  double adamic_adar = 0.0;         // sum over common s of 1 / ln|N(s)|
  double resource_allocation = 0.0; // sum over common s of 1 / |N(s)|
};

PairStats pair_stats(const Graph& g, Vertex u, Vertex v);

/// Built-in formula on precomputed stats. Ratio scorers return 0 when their
/// denominator is 0 (an isolated endpoint).
double evaluate(ScorerId id, const PairStats& s);

/// Throws on u == v or an out-of-range vertex.
double score(const Graph& g, Vertex u, Vertex v, ScorerId id);

/// Any pure function of (graph, u, v) returning a finite score >= 0.
using ScoreFunction = std::function<double(const Graph&, Vertex, Vertex)>;

/// A named scorer: either a built-in or a plugin function.
class Scorer {
 public:
  explicit Scorer(ScorerId id);
  Scorer(std::string name, ScoreFunction fn);

  const std::string& name() const { return name_; }
  const std::optional<ScorerId>& builtin() const { return builtin_; }
  double operator()(const Graph& g, Vertex u, Vertex v) const;

 private:
  std::string name_;
  std::optional<ScorerId> builtin_;
  ScoreFunction fn_;
};

std::vector<Scorer> builtin_scorers();

/// Parses a comma-separated method list ("cn,aa,pa").
std::vector<Scorer> parse_scorer_list(std::string_view list);

/// All unordered non-adjacent pairs u < v, in lexicographic order.
std::vector<Edge> candidate_pairs(const Graph& g);

/// Score matrix, one column per method, rows in input pair order.
struct ScoredPairs {
  std::vector<Edge> pairs;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> columns;

  std::size_t size() const { return pairs.size(); }
  /// Throws if the method is not present.
  std::span<const double> column(std::string_view method) const;
};

/// Scores every pair with every method. Rows can be split across `threads`
/// workers; the result does not depend on the thread count. Throws if a pair
/// is an edge of g or a loop.
ScoredPairs score_all(const Graph& g, std::span<const Edge> pairs, std::span<const Scorer> methods,
                      std::size_t threads = 1);

/// CSV with header "u_label,v_label,<method>..." .
void write_scores_csv(std::ostream& out, const Graph& g, const ScoredPairs& scored);

/// Parsed score CSV. Pair endpoints index into `labels`, assigned in
/// first-seen order.
struct LabeledScores {
  std::vector<std::string> labels;
  ScoredPairs scores;
};
LabeledScores read_scores_csv(std::istream& in);

}  // namespace misslink
