#include "misslink/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "misslink/error.hpp"
#include "misslink/random.hpp"

namespace misslink {

std::string_view to_string(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kCrawled:
      return "crawled";
    case DegradationKind::kRandomDeletion:
      return "random";
    case DegradationKind::kLimitedDegree:
      return "limited";
    case DegradationKind::kInduced:
      return "induced";
  }
  return "unknown";
}

std::optional<DegradationKind> parse_degradation_kind(std::string_view name) {
  if (name == "crawled") return DegradationKind::kCrawled;
  if (name == "random") return DegradationKind::kRandomDeletion;
  if (name == "limited") return DegradationKind::kLimitedDegree;
  if (name == "induced") return DegradationKind::kInduced;
  return std::nullopt;
}

std::size_t target_edge_count(const Graph& g, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "observed fraction must be in (0, 1]");
  }
  auto m = static_cast<double>(g.num_edges());
  auto t = static_cast<std::size_t>(std::llround(fraction * m));
  return std::clamp<std::size_t>(t, std::min<std::size_t>(1, g.num_edges()), g.num_edges());
}

namespace {

void check_target(const Graph& g, std::size_t target_edges) {
  if (target_edges == 0) {
    throw Error(ErrorKind::kInvalidArgument, "target edge count must be positive");
  }
  if (target_edges > g.num_edges()) {
    throw Error(ErrorKind::kInvalidArgument,
                "target edge count " + std::to_string(target_edges) + " exceeds " +
                    std::to_string(g.num_edges()) + " edges");
  }
}

std::vector<Vertex> identity_map(std::size_t n) {
  std::vector<Vertex> ids(n);
  std::iota(ids.begin(), ids.end(), Vertex{0});
  return ids;
}

std::vector<std::string> labels_of(const Graph& g, const std::vector<Vertex>& vertices) {
  std::vector<std::string> labels;
  labels.reserve(vertices.size());
  for (Vertex v : vertices) labels.push_back(g.label(v));
  return labels;
}

/// Edge-deletable working copy of a graph. Adjacency lists are unordered
/// (swap-remove) but every mutation is driven by the seeded RNG, so the
/// state is a deterministic function of the seed.
class WorkingGraph {
 public:
  explicit WorkingGraph(const Graph& g) : adj_(g.num_vertices()), edges_(g.edges()) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      auto nbrs = g.neighbors(v);
      adj_[v].assign(nbrs.begin(), nbrs.end());
    }
    index_.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < edges_.size(); ++i) index_[edge_key(edges_[i])] = i;
    mark_a_.assign(adj_.size(), 0);
    mark_b_.assign(adj_.size(), 0);
  }

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }

  void remove(Edge e) {
    e = make_edge(e.u, e.v);
    auto it = index_.find(edge_key(e));
    std::size_t i = it->second;
    index_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      index_[edge_key(edges_[i])] = i;
    }
    edges_.pop_back();
    erase_neighbor(e.u, e.v);
    erase_neighbor(e.v, e.u);
  }

  /// True iff u and v stay connected after removing the edge u-v. Alternates
  /// BFS steps from both ends, so the cost tracks the smaller side.
  bool connected_without(Vertex u, Vertex v) {
    ++stamp_;
    queue_a_.assign(1, u);
    queue_b_.assign(1, v);
    mark_a_[u] = stamp_;
    mark_b_[v] = stamp_;
    std::size_t head_a = 0, head_b = 0;
    while (head_a < queue_a_.size() && head_b < queue_b_.size()) {
      if (expand(queue_a_, head_a, mark_a_, mark_b_, u, v)) return true;
      if (expand(queue_b_, head_b, mark_b_, mark_a_, u, v)) return true;
    }
    return false;
  }

 private:
  bool expand(std::vector<Vertex>& queue, std::size_t& head, std::vector<std::uint64_t>& own,
              const std::vector<std::uint64_t>& other, Vertex u, Vertex v) {
    Vertex x = queue[head++];
    for (Vertex y : adj_[x]) {
      if ((x == u && y == v) || (x == v && y == u)) continue;
      if (other[y] == stamp_) return true;
      if (own[y] != stamp_) {
        own[y] = stamp_;
        queue.push_back(y);
      }
    }
    return false;
  }

  void erase_neighbor(Vertex v, Vertex w) {
    auto& list = adj_[v];
    auto it = std::find(list.begin(), list.end(), w);
    *it = list.back();
    list.pop_back();
  }

  std::vector<std::vector<Vertex>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::uint64_t> mark_a_, mark_b_;
  std::vector<Vertex> queue_a_, queue_b_;
  std::uint64_t stamp_ = 0;
};

void check_connected_request(const Graph& g, std::size_t target_edges) {
  if (!is_connected(g)) {
    throw Error(ErrorKind::kInvalidArgument, "connected deletion needs a connected input graph");
  }
  if (g.num_vertices() > 0 && target_edges < g.num_vertices() - 1) {
    throw Error(ErrorKind::kInfeasible,
                "cannot keep " + std::to_string(g.num_vertices()) + " vertices connected with " +
                    std::to_string(target_edges) + " edges");
  }
}

std::vector<Edge> delete_random(const Graph& g, std::size_t target_edges, Rng& rng,
                                bool keep_connected) {
  std::vector<Edge> removed;
  const std::size_t to_remove = g.num_edges() - target_edges;
  removed.reserve(to_remove);
  if (!keep_connected) {
    std::vector<Edge> pool = g.edges();
    for (std::size_t i = 0; i < to_remove; ++i) {
      std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      removed.push_back(pool[i]);
    }
    return removed;
  }

  // Rejection sampling over a shrinking pool: a bridge stays a bridge under
  // further deletions, so rejected edges are dropped from the pool for good.
  WorkingGraph work(g);
  std::vector<Edge> pool = g.edges();
  while (removed.size() < to_remove) {
    if (pool.empty()) {
      throw Error(ErrorKind::kInfeasible,
                  "every remaining edge is a bridge after " + std::to_string(removed.size()) +
                      " deletions");
    }
    std::size_t i = uniform_index(rng, pool.size());
    Edge e = pool[i];
    pool[i] = pool.back();
    pool.pop_back();
    if (work.connected_without(e.u, e.v)) {
      work.remove(e);
      removed.push_back(e);
    }
  }
  return removed;
}

std::vector<Edge> delete_limited(const Graph& g, std::size_t target_edges, Rng& rng,
                                 bool keep_connected) {
  WorkingGraph work(g);
  std::vector<Edge> removed;
  const std::size_t to_remove = g.num_edges() - target_edges;
  removed.reserve(to_remove);
  std::vector<Vertex> candidates;
  std::vector<std::size_t> classes;
  std::vector<Vertex> nbrs;

  while (removed.size() < to_remove) {
    if (!keep_connected) {
      std::size_t top = 0;
      for (Vertex v = 0; v < work.num_vertices(); ++v) top = std::max(top, work.degree(v));
      candidates.clear();
      for (Vertex v = 0; v < work.num_vertices(); ++v) {
        if (work.degree(v) == top) candidates.push_back(v);
      }
      Vertex v = pick(rng, candidates);
      Vertex u = pick(rng, work.neighbors(v));
      Edge e = make_edge(u, v);
      work.remove(e);
      removed.push_back(e);
      continue;
    }

    classes.clear();
    for (Vertex v = 0; v < work.num_vertices(); ++v) {
      if (work.degree(v) > 0) classes.push_back(work.degree(v));
    }
    std::sort(classes.begin(), classes.end(), std::greater<>());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    bool deleted = false;
    for (std::size_t d : classes) {
      candidates.clear();
      for (Vertex v = 0; v < work.num_vertices(); ++v) {
        if (work.degree(v) == d) candidates.push_back(v);
      }
      shuffle(rng, candidates);
      for (Vertex v : candidates) {
        nbrs = work.neighbors(v);
        shuffle(rng, nbrs);
        for (Vertex u : nbrs) {
          if (work.connected_without(u, v)) {
            Edge e = make_edge(u, v);
            work.remove(e);
            removed.push_back(e);
            deleted = true;
            break;
          }
        }
        if (deleted) break;
      }
      if (deleted) break;
    }
    if (!deleted) {
      throw Error(ErrorKind::kInfeasible,
                  "no deletable edge left after " + std::to_string(removed.size()) + " deletions");
    }
  }
  return removed;
}

/// Builds a DegradedNetwork over `universe` (whose vertex i is original
/// vertex `to_original[i]`) after deleting `removed` (universe ids).
DegradedNetwork assemble_deletion(const Graph& universe, const std::vector<Vertex>& to_original,
                                  const std::vector<Edge>& removed, DegradationModel model,
                                  std::uint64_t seed) {
  std::vector<std::uint64_t> gone;
  gone.reserve(removed.size());
  for (Edge e : removed) gone.push_back(edge_key(e));
  std::sort(gone.begin(), gone.end());
  std::vector<Edge> kept;
  kept.reserve(universe.num_edges() - removed.size());
  for (Edge e : universe.edges()) {
    if (!std::binary_search(gone.begin(), gone.end(), edge_key(e))) kept.push_back(e);
  }

  DegradedNetwork dn;
  dn.observed = Graph(universe.num_vertices(), kept, universe.labels());
  dn.vertex_map = to_original;
  dn.removed_edges.reserve(removed.size());
  for (Edge e : removed) {
    dn.removed_edges.push_back(make_edge(to_original[e.u], to_original[e.v]));
  }
  dn.model = model;
  dn.seed = seed;
  return dn;
}

DegradedNetwork random_delete_on(const Graph& universe, const std::vector<Vertex>& to_original,
                                 std::size_t target_edges, std::uint64_t seed,
                                 bool keep_connected) {
  check_target(universe, target_edges);
  if (keep_connected) check_connected_request(universe, target_edges);
  Rng rng(seed);
  auto removed = delete_random(universe, target_edges, rng, keep_connected);
  return assemble_deletion(universe, to_original, removed,
                           {DegradationKind::kRandomDeletion, keep_connected, target_edges}, seed);
}

DegradedNetwork limited_delete_on(const Graph& universe, const std::vector<Vertex>& to_original,
                                  std::size_t target_edges, std::uint64_t seed,
                                  bool keep_connected) {
  check_target(universe, target_edges);
  if (keep_connected) check_connected_request(universe, target_edges);
  Rng rng(seed);
  auto removed = delete_limited(universe, target_edges, rng, keep_connected);
  return assemble_deletion(universe, to_original, removed,
                           {DegradationKind::kLimitedDegree, keep_connected, target_edges}, seed);
}

}  // namespace

DegradedNetwork crawl(const Graph& g, std::size_t target_edges, std::uint64_t seed) {
  check_target(g, target_edges);
  if (!is_connected(g)) throw Error(ErrorKind::kInvalidArgument, "crawl needs a connected graph");

  Rng rng(seed);
  auto centers = min_eccentricity_vertices(g);
  Vertex start = pick(rng, centers);
  auto dist = bfs_distances(g, start);

  std::size_t depth = 0;
  for (auto d : dist) depth = std::max(depth, d);
  std::vector<std::vector<Edge>> rings(depth + 1);
  for (Edge e : g.edges()) rings[std::max(dist[e.u], dist[e.v])].push_back(e);

  std::vector<Edge> collected;
  collected.reserve(target_edges);
  std::vector<bool> seen(g.num_vertices(), false);
  seen[start] = true;
  std::size_t ring = 1;
  for (; ring <= depth && collected.size() + rings[ring].size() <= target_edges; ++ring) {
    for (Edge e : rings[ring]) {
      collected.push_back(e);
      seen[e.u] = seen[e.v] = true;
    }
  }

  if (collected.size() < target_edges) {
    // Partial ring. Every edge from ring-1 to ring is always eligible since
    // all closer vertices are already seen, so each pass makes progress.
    std::vector<Edge> pending = rings[ring];
    shuffle(rng, pending);
    while (collected.size() < target_edges) {
      std::vector<Edge> deferred;
      for (Edge e : pending) {
        if (collected.size() == target_edges) break;
        if (seen[e.u] || seen[e.v]) {
          collected.push_back(e);
          seen[e.u] = seen[e.v] = true;
        } else {
          deferred.push_back(e);
        }
      }
      pending.swap(deferred);
    }
  }

  std::vector<Vertex> vertices;
  for (Edge e : collected) {
    vertices.push_back(e.u);
    vertices.push_back(e.v);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::unordered_map<Vertex, Vertex> local;
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);

  std::vector<Edge> observed_edges;
  observed_edges.reserve(collected.size());
  for (Edge e : collected) observed_edges.push_back(make_edge(local[e.u], local[e.v]));
  std::sort(collected.begin(), collected.end());

  DegradedNetwork dn;
  dn.observed = Graph(vertices.size(), observed_edges, labels_of(g, vertices));
  auto induced = induced_subgraph(g, vertices);
  for (Edge e : induced.graph.edges()) {
    Edge original = make_edge(induced.to_parent[e.u], induced.to_parent[e.v]);
    if (!std::binary_search(collected.begin(), collected.end(), original)) {
      dn.removed_edges.push_back(original);
    }
  }
  dn.vertex_map = std::move(vertices);
  dn.model = {DegradationKind::kCrawled, true, target_edges};
  dn.seed = seed;
  return dn;
}

DegradedNetwork random_delete(const Graph& g, std::size_t target_edges, std::uint64_t seed,
                              bool keep_connected) {
  return random_delete_on(g, identity_map(g.num_vertices()), target_edges, seed, keep_connected);
}

DegradedNetwork limited_degree_delete(const Graph& g, std::size_t target_edges,
                                      std::uint64_t seed, bool keep_connected) {
  return limited_delete_on(g, identity_map(g.num_vertices()), target_edges, seed, keep_connected);
}

CommunitySuite make_community_suite(const Graph& g, std::size_t target_edges, std::uint64_t seed) {
  if (!is_connected(g)) {
    throw Error(ErrorKind::kInvalidArgument, "community suite needs a connected graph");
  }
  CommunitySuite suite;
  suite.crawled = crawl(g, target_edges, derive_seed(seed, hash_tag("crawled")));

  auto induced = induced_subgraph(g, suite.crawled.vertex_map);
  const std::size_t actual = suite.crawled.observed.num_edges();
  suite.induced.observed = induced.graph;
  suite.induced.vertex_map = induced.to_parent;
  suite.induced.model = {DegradationKind::kInduced, true, induced.graph.num_edges()};
  suite.induced.seed = seed;

  try {
    suite.random_deletion = random_delete_on(induced.graph, induced.to_parent, actual,
                                             derive_seed(seed, hash_tag("random")), true);
    suite.limited_degree = limited_delete_on(induced.graph, induced.to_parent, actual,
                                             derive_seed(seed, hash_tag("limited")), true);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInfeasible,
                "induced subnetwork (" + std::to_string(induced.graph.num_vertices()) +
                    " vertices, " + std::to_string(induced.graph.num_edges()) +
                    " edges) cannot stay connected at " + std::to_string(actual) +
                    " edges: " + e.what());
  }
  return suite;
}

RemovedCounts classify_removed(const DegradedNetwork& dn, const Partition& truth) {
  auto community = [&](Vertex original) {
    if (original >= truth.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "vertex " + std::to_string(original) + " missing from partition");
    }
    return truth[original];
  };
  RemovedCounts counts;
  for (Edge e : dn.removed_edges) {
    if (community(e.u) == community(e.v)) {
      ++counts.removed_intra;
    } else {
      ++counts.removed_inter;
    }
  }
  for (Edge e : dn.observed.edges()) {
    if (community(dn.vertex_map[e.u]) != community(dn.vertex_map[e.v])) ++counts.remaining_inter;
  }
  return counts;
}

}  // namespace misslink
