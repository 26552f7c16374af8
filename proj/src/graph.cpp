#include "misslink/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "misslink/error.hpp"

namespace misslink {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kInfeasible:
      return "infeasible";
    case ErrorKind::kNoPositives:
      return "no_positives";
  }
  return "unknown";
}

Graph::Graph(std::size_t n, std::span<const Edge> edges,
             std::vector<std::string> labels)
    : adjacency_(n), labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "label count does not match vertex count");
  }

  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorKind::kInvalidArgument, "edge endpoint out of range");
    }
    if (e.u == e.v) continue;
    edges_.push_back(make_edge(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::size_t> deg(n, 0);
  for (Edge e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (std::size_t v = 0; v < n; ++v) adjacency_[v].reserve(deg[v]);
  for (Edge e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  label_index_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!label_index_.emplace(labels_[v], static_cast<Vertex>(v)).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate vertex label '" + labels_[v] + "'");
    }
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
  const auto& list = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  Vertex other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
  return std::binary_search(list.begin(), list.end(), other);
}

std::optional<Vertex> Graph::find_label(const std::string& label) const {
  auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

Graph read_edge_list(std::istream& in, LoadStats* stats) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> ids;
  std::vector<Edge> raw;
  LoadStats local;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.emplace(token, static_cast<Vertex>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::string a, b;
    if (!(tokens >> a >> b)) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": expected two vertex labels");
    }
    ++local.lines;
    Vertex u = intern(a);
    Vertex v = intern(b);
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    raw.push_back(make_edge(u, v));
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure");

  std::vector<Edge> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  local.duplicate_edges =
      sorted.size() - static_cast<std::size_t>(
                          std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  if (stats) *stats = local;
  std::size_t n = labels.size();
  return Graph(n, raw, std::move(labels));
}

Graph load_edge_list(const std::filesystem::path& path, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return read_edge_list(in, stats);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (Edge e : g.edges()) out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
}

void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  write_edge_list(out, g);
  if (!out) throw Error(ErrorKind::kIo, "write failure on '" + path.string() + "'");
}

bool same_structure(const Graph& a, const Graph& b) {
  return a.num_vertices() == b.num_vertices() && a.edges() == b.edges();
}

std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source) {
  if (source >= g.num_vertices()) {
    throw Error(ErrorKind::kInvalidArgument, "BFS source out of range");
  }
  std::vector<std::size_t> dist(g.num_vertices(), kUnreachable);
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::size_t> connected_components(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> comp(n, kUnreachable);
  std::vector<Vertex> stack;
  std::size_t next = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != kUnreachable) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (comp[w] == kUnreachable) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t count_components(const Graph& g) {
  auto comp = connected_components(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

bool is_connected(const Graph& g) { return count_components(g) <= 1; }

std::vector<Vertex> min_eccentricity_vertices(const Graph& g) {
  if (g.empty()) throw Error(ErrorKind::kInvalidArgument, "empty graph has no center");

  auto comp = connected_components(g);
  std::size_t k = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (auto c : comp) ++sizes[c];
  std::size_t largest =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  std::vector<Vertex> best;
  std::size_t best_ecc = kUnreachable;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (comp[s] != largest) continue;
    auto dist = bfs_distances(g, s);
    std::size_t ecc = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (comp[v] == largest) ecc = std::max(ecc, dist[v]);
    }
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best.clear();
    }
    if (ecc == best_ecc) best.push_back(s);
  }
  return best;
}

std::vector<Edge> find_bridges(const Graph& g) {
  // Iterative Tarjan low-link. The graph is simple, so skipping the parent
  // vertex once is equivalent to skipping the tree edge.
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> order(n, kUnreachable), low(n, 0);
  std::vector<Edge> bridges;
  struct Frame {
    Vertex v;
    Vertex parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::size_t counter = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (order[root] != kUnreachable) continue;
    order[root] = low[root] = counter++;
    stack.push_back({root, root, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto nbrs = g.neighbors(f.v);
      if (f.next < nbrs.size()) {
        Vertex w = nbrs[f.next++];
        if (w == f.parent && f.v != root) continue;
        if (order[w] == kUnreachable) {
          order[w] = low[w] = counter++;
          stack.push_back({w, f.v, 0});
        } else {
          low[f.v] = std::min(low[f.v], order[w]);
        }
      } else {
        Vertex v = f.v;
        Vertex parent = f.parent;
        stack.pop_back();
        if (!stack.empty()) {
          low[parent] = std::min(low[parent], low[v]);
          if (low[v] > order[parent]) bridges.push_back(make_edge(parent, v));
        }
      }
    }
  }
  std::sort(bridges.begin(), bridges.end());
  return bridges;
}

bool would_disconnect(const Graph& g, Edge e) {
  e = make_edge(e.u, e.v);
  if (!g.has_edge(e.u, e.v)) {
    throw Error(ErrorKind::kInvalidArgument, "edge is not in the graph");
  }
  auto bridges = find_bridges(g);
  return std::binary_search(bridges.begin(), bridges.end(), e);
}

std::uint64_t count_triangles(const Graph& g) {
  // Forward algorithm on the id order: count w > v > u closing u-v-w.
  std::uint64_t count = 0;
  for (Edge e : g.edges()) {
    auto a = g.neighbors(e.u);
    auto b = g.neighbors(e.v);
    auto ia = std::upper_bound(a.begin(), a.end(), e.v);
    auto ib = std::upper_bound(b.begin(), b.end(), e.v);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++count;
        ++ia;
        ++ib;
      }
    }
  }
  return count;
}

double transitivity(const Graph& g) {
  std::uint64_t triples = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::uint64_t d = g.degree(v);
    triples += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  if (triples == 0) return 0.0;
  return 3.0 * static_cast<double>(count_triangles(g)) / static_cast<double>(triples);
}

Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> keep(vertices.begin(), vertices.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= g.num_vertices()) {
      throw Error(ErrorKind::kInvalidArgument, "vertex outside graph");
    }
    local[keep[i]] = static_cast<Vertex>(i);
  }

  std::vector<Edge> edges;
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (Vertex p : keep) {
    labels.push_back(g.label(p));
    for (Vertex q : g.neighbors(p)) {
      if (q > p && local[q] != kAbsent) edges.push_back({local[p], local[q]});
    }
  }
  return {Graph(keep.size(), edges, std::move(labels)), std::move(keep)};
}

}  // namespace misslink
