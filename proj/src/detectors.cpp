#include <algorithm>
#include <numeric>

#include "misslink/community.hpp"
#include "misslink/error.hpp"
#include "misslink/random.hpp"

namespace misslink {
namespace {

// Weighted graph used between Louvain levels. `loops[i]` is the weight of
// edges folded inside node i; `strength[i]` counts them twice.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> loops;
  std::vector<double> strength;
  double total = 0.0;  // 2m

  std::size_t size() const { return adj.size(); }
};

WeightedGraph from_graph(const Graph& g) {
  WeightedGraph w;
  const std::size_t n = g.num_vertices();
  w.adj.resize(n);
  w.loops.assign(n, 0.0);
  w.strength.assign(n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : g.neighbors(v)) w.adj[v].emplace_back(u, 1.0);
    w.strength[v] = static_cast<double>(g.degree(v));
  }
  w.total = 2.0 * static_cast<double>(g.num_edges());
  return w;
}

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const WeightedGraph& w, std::vector<std::size_t>& community, Rng& rng) {
  const std::size_t n = w.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += w.strength[i];

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  bool any_move = false;
  for (int sweep = 0; sweep < 1000; ++sweep) {
    shuffle(rng, order);
    bool moved = false;
    for (std::size_t i : order) {
      const std::size_t own = community[i];
      const double k = w.strength[i];
      touched.clear();
      for (auto [j, weight] : w.adj[i]) {
        std::size_t c = community[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += weight;
      }
      tot[own] -= k;

      // Gain of joining c, up to a positive constant: link_c - tot_c * k / 2m.
      auto gain = [&](std::size_t c) { return link[c] - tot[c] * k / w.total; };
      std::size_t best = own;
      double best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        double gc = gain(c);
        if (gc > best_gain + 1e-12) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += k;
      for (std::size_t c : touched) link[c] = 0.0;
      link[own] = 0.0;
      if (best != own) {
        community[i] = best;
        moved = true;
      }
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

WeightedGraph aggregate(const WeightedGraph& w, const std::vector<std::size_t>& community,
                        std::size_t k) {
  WeightedGraph next;
  next.adj.resize(k);
  next.loops.assign(k, 0.0);
  next.strength.assign(k, 0.0);
  next.total = w.total;
  std::vector<std::vector<double>> rows(k);
  std::vector<std::vector<std::size_t>> cols(k);
  std::vector<double> acc(k, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < w.size(); ++i) members[community[i]].push_back(i);

  for (std::size_t c = 0; c < k; ++c) {
    touched.clear();
    for (std::size_t i : members[c]) {
      next.loops[c] += w.loops[i];
      next.strength[c] += w.strength[i];
      for (auto [j, weight] : w.adj[i]) {
        std::size_t d = community[j];
        if (d == c) {
          next.loops[c] += 0.5 * weight;  // seen from both endpoints
          continue;
        }
        if (acc[d] == 0.0) touched.push_back(d);
        acc[d] += weight;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t d : touched) {
      next.adj[c].emplace_back(d, acc[d]);
      acc[d] = 0.0;
    }
  }
  return next;
}

std::size_t renumber(std::vector<std::size_t>& community) {
  std::vector<std::size_t> remap(community.size(), SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : community) {
    if (remap[c] == SIZE_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

}  // namespace

LouvainResult louvain_levels(const Graph& g, std::uint64_t seed) {
  LouvainResult result;
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> flat(n);
  std::iota(flat.begin(), flat.end(), std::size_t{0});
  if (g.num_edges() == 0) {
    result.partition = Partition::singletons(n);
    return result;
  }

  Rng rng(seed);
  WeightedGraph w = from_graph(g);
  while (true) {
    std::vector<std::size_t> community(w.size());
    std::iota(community.begin(), community.end(), std::size_t{0});
    if (!local_moving(w, community, rng)) break;
    std::size_t k = renumber(community);
    for (auto& c : flat) c = community[c];

    std::vector<CommunityId> ids(flat.begin(), flat.end());
    result.level_modularity.push_back(modularity(g, Partition(ids)));
    if (k == w.size()) break;
    w = aggregate(w, community, k);
  }
  std::vector<CommunityId> ids(flat.begin(), flat.end());
  result.partition = Partition(ids);
  return result;
}

Partition louvain(const Graph& g, std::uint64_t seed) { return louvain_levels(g, seed).partition; }

Partition label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_sweeps) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "label propagation on an empty graph");
  std::vector<CommunityId> label(n);
  std::iota(label.begin(), label.end(), CommunityId{0});
  std::vector<std::size_t> count(n, 0);
  std::vector<CommunityId> touched, best;
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});

  Rng rng(seed);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    shuffle(rng, order);
    bool changed = false;
    for (Vertex v : order) {
      if (g.degree(v) == 0) continue;
      touched.clear();
      std::size_t top = 0;
      for (Vertex u : g.neighbors(v)) {
        CommunityId l = label[u];
        if (count[l] == 0) touched.push_back(l);
        top = std::max(top, ++count[l]);
      }
      best.clear();
      for (CommunityId l : touched) {
        if (count[l] == top) best.push_back(l);
      }
      bool keep = count[label[v]] == top;
      for (CommunityId l : touched) count[l] = 0;
      if (keep) continue;
      std::sort(best.begin(), best.end());
      label[v] = pick(rng, best);
      changed = true;
    }
    if (!changed) break;
  }
  return Partition(label);
}

Partition reference_partition(const Graph& g, std::uint64_t seed) {
  Partition by_louvain = louvain(g, derive_seed(seed, hash_tag("louvain")));
  Partition by_labels = label_propagation(g, derive_seed(seed, hash_tag("labelprop")));
  if (g.num_edges() == 0) return by_louvain;
  return modularity(g, by_labels) > modularity(g, by_louvain) ? by_labels : by_louvain;
}

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::kLouvain:
      return "louvain";
    case Detector::kLabelPropagation:
      return "labelprop";
    case Detector::kReference:
      return "reference";
  }
  return "unknown";
}

std::optional<Detector> parse_detector(std::string_view name) {
  if (name == "louvain") return Detector::kLouvain;
  if (name == "labelprop") return Detector::kLabelPropagation;
  if (name == "reference") return Detector::kReference;
  return std::nullopt;
}

Partition detect(Detector d, const Graph& g, std::uint64_t seed) {
  switch (d) {
    case Detector::kLouvain:
      return louvain(g, seed);
    case Detector::kLabelPropagation:
      return label_propagation(g, seed);
    case Detector::kReference:
      return reference_partition(g, seed);
  }
  return louvain(g, seed);
}

}  // namespace misslink
