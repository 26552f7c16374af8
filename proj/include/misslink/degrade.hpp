#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "misslink/graph.hpp"
#include "misslink/partition.hpp"

namespace misslink {

enum class DegradationKind {
  kCrawled,
  kRandomDeletion,
  kLimitedDegree,
  /// Subgraph induced by a crawl's vertex set; only produced by the
  /// community suite as the reference the other three are cut from.
  kInduced,
};

std::string_view to_string(DegradationKind kind);
/// Accepts "crawled", "random", "limited", "induced".
std::optional<DegradationKind> parse_degradation_kind(std::string_view name);

struct DegradationModel {
  DegradationKind kind = DegradationKind::kRandomDeletion;
  bool connected_variant = false;
  std::size_t target_edges = 0;
};

/// An observed network together with how it was produced.
///
/// `removed_edges` and `vertex_map` are in ids of the original graph. For
/// random and limited-degree deletions the edges appear in deletion order;
/// for crawls they are the induced-subgraph edges the crawl did not collect,
/// sorted. observed + removed always reconstructs the degradation universe.
struct DegradedNetwork {
  Graph observed;
  std::vector<Vertex> vertex_map;
  std::vector<Edge> removed_edges;
  DegradationModel model;
  std::uint64_t seed = 0;
};

/// round(fraction * |E|), clamped to [1, |E|]. Throws unless fraction in (0, 1].
std::size_t target_edge_count(const Graph& g, double fraction);

/// Breadth-first crawl from a random minimum-eccentricity vertex.
///
/// Distance rings are collected whole while they fit; the ring that does not
/// fit is sampled in random order, restricted at each step to edges touching
/// an already collected vertex so the result stays connected. An edge belongs
/// to ring max(d(u), d(v)).
DegradedNetwork crawl(const Graph& g, std::size_t target_edges, std::uint64_t seed);

/// Deletes uniformly random edges until `target_edges` remain. With
/// `keep_connected`, each deletion is uniform over current non-bridges.
DegradedNetwork random_delete(const Graph& g, std::size_t target_edges, std::uint64_t seed,
                              bool keep_connected);

/// Repeatedly deletes an edge of a uniformly chosen maximum-degree vertex.
/// With `keep_connected`, bridges are never deleted and degree classes are
/// descended until some vertex has a deletable edge.
DegradedNetwork limited_degree_delete(const Graph& g, std::size_t target_edges,
                                      std::uint64_t seed, bool keep_connected);

/// Four connected networks on one vertex set with equal edge counts.
struct CommunitySuite {
  DegradedNetwork crawled;
  DegradedNetwork induced;
  DegradedNetwork random_deletion;
  DegradedNetwork limited_degree;
};

CommunitySuite make_community_suite(const Graph& g, std::size_t target_edges, std::uint64_t seed);

struct RemovedCounts {
  std::size_t removed_intra = 0;
  std::size_t removed_inter = 0;
  std::size_t remaining_inter = 0;
};

/// Splits removed edges by whether their endpoints share a community in
/// `truth` (indexed by original ids) and counts observed inter edges.
RemovedCounts classify_removed(const DegradedNetwork& dn, const Partition& truth);

}  // namespace misslink
