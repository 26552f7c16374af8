#pragma once

#include <cstddef>
#include <cstdint>

#include "misslink/graph.hpp"
#include "misslink/partition.hpp"

namespace misslink {

struct ErParams {
  std::size_t n = 0;
  double mean_degree = 0.0;
  std::uint64_t seed = 0;
};

/// G(n, M) random graph with M = round(n * mean_degree / 2) distinct edges
/// drawn uniformly without replacement.
Graph generate_er(const ErParams& p);

struct LfrParams {
  std::size_t n = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  double degree_exponent = 2.0;     // tau1
  double community_exponent = 1.0;  // tau2
  double mixing = 0.0;              // mu
  std::size_t min_community = 0;
  std::size_t max_community = 0;
  std::uint64_t seed = 0;
  std::size_t max_retries = 100;
};

struct PlantedGraph {
  Graph graph;
  Partition communities;
};

/// LFR-style benchmark graph with planted communities.
///
/// Degrees follow a discrete power law on [k_min, k_max] where the lowest
/// atom is fractionally weighted so the expected mean is exactly
/// `mean_degree`. Each vertex gets round((1 - mu) * degree) internal stubs
/// (largest-remainder rounding over the whole graph), communities are wired
/// by stub matching and inter-community stubs by a global stub matching.
/// Self-loops and multi-edges are repaired with degree-preserving swaps.
///
/// Throws Error{kInfeasible} when parameters cannot be met within
/// `max_retries` attempts.
PlantedGraph generate_lfr(const LfrParams& p);

/// Fraction of edges whose endpoints lie in different communities.
double intercommunity_fraction(const Graph& g, const Partition& communities);
inline double intercommunity_fraction(const PlantedGraph& pg) {
  return intercommunity_fraction(pg.graph, pg.communities);
}

namespace detail {

/// Probability weights over degrees 1..k_max (index 0 is degree 1) for the
/// truncated power law whose mean equals `mean`. Exposed for testing.
std::vector<double> degree_weights(double mean, std::size_t k_max, double exponent);

}  // namespace detail

}  // namespace misslink
