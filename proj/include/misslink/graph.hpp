#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace misslink {

using Vertex = std::uint32_t;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Unordered vertex pair stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes endpoint order. Does not reject u == v.
constexpr Edge make_edge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

constexpr std::uint64_t edge_key(Edge e) {
  return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

/// Immutable simple undirected graph with dense ids 0..n-1.
///
/// Every vertex carries a label (the id it had in its source file, or the
/// decimal id for generated graphs). Adjacency lists are sorted, so neighbour
/// set intersections are linear merges.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list. Self-loops and repeated edges are
  /// dropped. Endpoints must be < n. If `labels` is empty, labels default to
  /// the decimal vertex ids.
  Graph(std::size_t n, std::span<const Edge> edges,
        std::vector<std::string> labels = {});

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool empty() const { return adjacency_.empty(); }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const;
  bool has_edge(Vertex a, Vertex b) const;

  /// Sorted, u < v in every entry.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::string& label(Vertex v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Vertex> find_label(const std::string& label) const;

  /// Edge sets and labels equal.
  friend bool operator==(const Graph& a, const Graph& b) {
    return a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> label_index_;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;
};

/// Reads "a b" pairs, one per line; '#' lines and blank lines are skipped and
/// tokens after the second are ignored. Ids are assigned in first-seen order.
Graph read_edge_list(std::istream& in, LoadStats* stats = nullptr);
Graph load_edge_list(const std::filesystem::path& path, LoadStats* stats = nullptr);

/// Writes one "label_u label_v" line per edge in internal (u, v) order.
void write_edge_list(std::ostream& out, const Graph& g);
void save_edge_list(const std::filesystem::path& path, const Graph& g);

/// Same edge set and vertex count, labels ignored.
bool same_structure(const Graph& a, const Graph& b);

// --- structural primitives --------------------------------------------------

std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source);

/// Component id per vertex; ids are dense and numbered in order of the
/// smallest vertex in each component.
std::vector<std::size_t> connected_components(const Graph& g);
std::size_t count_components(const Graph& g);
bool is_connected(const Graph& g);

/// Vertices of minimum eccentricity. On disconnected graphs the largest
/// component is used (ties go to the smaller component id).
std::vector<Vertex> min_eccentricity_vertices(const Graph& g);

/// All bridges, sorted.
std::vector<Edge> find_bridges(const Graph& g);

/// True iff `e` is a bridge. Throws if `e` is not an edge of g.
bool would_disconnect(const Graph& g, Edge e);

std::uint64_t count_triangles(const Graph& g);

/// Global transitivity 3*triangles / connected triples; 0 with no triples.
double transitivity(const Graph& g);

/// Result of restricting a graph to a vertex subset. `to_parent[i]` is the
/// parent id of subgraph vertex i; subgraph ids follow ascending parent id.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;
};

Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

}  // namespace misslink
