#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "misslink/community.hpp"
#include "misslink/error.hpp"
#include "misslink/random.hpp"

namespace misslink {

std::string_view to_string(AucMode mode) {
  return mode == AucMode::kExact ? "exact" : "sampled";
}

std::optional<AucMode> parse_auc_mode(std::string_view name) {
  if (name == "exact") return AucMode::kExact;
  if (name == "sampled") return AucMode::kSampled;
  return std::nullopt;
}

AucResult auc_from_scores(std::span<const double> positives, std::span<const double> negatives,
                          AucMode mode, std::size_t sample_n, std::uint64_t seed) {
  if (positives.empty()) {
    throw Error(ErrorKind::kNoPositives, "no missing edges to evaluate");
  }
  if (negatives.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no non-edges to compare against");
  }
  AucResult r;
  r.mode = mode;
  if (mode == AucMode::kExact) {
    std::vector<double> sorted(negatives.begin(), negatives.end());
    std::sort(sorted.begin(), sorted.end());
    for (double s : positives) {
      auto lo = std::lower_bound(sorted.begin(), sorted.end(), s);
      auto hi = std::upper_bound(lo, sorted.end(), s);
      r.n_wins += static_cast<std::uint64_t>(lo - sorted.begin());
      r.n_ties += static_cast<std::uint64_t>(hi - lo);
    }
    r.n_comparisons = static_cast<std::uint64_t>(positives.size()) * negatives.size();
  } else {
    if (sample_n == 0) throw Error(ErrorKind::kInvalidArgument, "sampled AUC needs samples > 0");
    Rng rng(seed);
    for (std::size_t i = 0; i < sample_n; ++i) {
      double p = positives[uniform_index(rng, positives.size())];
      double q = negatives[uniform_index(rng, negatives.size())];
      if (p > q) {
        ++r.n_wins;
      } else if (p == q) {
        ++r.n_ties;
      }
    }
    r.n_comparisons = sample_n;
  }
  r.auc = (static_cast<double>(r.n_wins) + 0.5 * static_cast<double>(r.n_ties)) /
          static_cast<double>(r.n_comparisons);
  return r;
}

AucResult auc(const ScoredPairs& scored, std::span<const Edge> positives, std::string_view method,
              AucMode mode, std::size_t sample_n, std::uint64_t seed) {
  if (positives.empty()) {
    throw Error(ErrorKind::kNoPositives, "no missing edges among observed vertices");
  }
  auto column = scored.column(method);
  std::unordered_set<std::uint64_t> wanted;
  for (Edge e : positives) wanted.insert(edge_key(make_edge(e.u, e.v)));

  std::vector<double> pos, neg;
  pos.reserve(wanted.size());
  neg.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (wanted.count(edge_key(scored.pairs[i]))) {
      pos.push_back(column[i]);
    } else {
      neg.push_back(column[i]);
    }
  }
  if (pos.size() != wanted.size()) {
    throw Error(ErrorKind::kInvalidArgument, "some positives are not among the scored pairs");
  }
  auto r = auc_from_scores(pos, neg, mode, sample_n, seed);
  r.method = std::string(method);
  return r;
}

double modularity(const Graph& g, const Partition& p) {
  if (g.num_edges() == 0) throw Error(ErrorKind::kInvalidArgument, "modularity of an empty graph");
  if (p.size() != g.num_vertices()) {
    throw Error(ErrorKind::kInvalidArgument, "partition does not cover the graph");
  }
  std::vector<double> internal(p.num_communities(), 0.0), degree(p.num_communities(), 0.0);
  for (Edge e : g.edges()) {
    if (p[e.u] == p[e.v]) internal[p[e.u]] += 1.0;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) degree[p[v]] += static_cast<double>(g.degree(v));
  const double m = static_cast<double>(g.num_edges());
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    double share = degree[c] / (2.0 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "partitions cover different vertex sets");
  }
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  std::map<std::pair<CommunityId, CommunityId>, std::size_t> joint;
  for (std::size_t v = 0; v < n; ++v) ++joint[{a[static_cast<Vertex>(v)], b[static_cast<Vertex>(v)]}];
  auto sa = a.community_sizes();
  auto sb = b.community_sizes();
  const double total = static_cast<double>(n);
  auto entropy = [&](const std::vector<std::size_t>& sizes) {
    double h = 0.0;
    for (auto s : sizes) {
      double q = static_cast<double>(s) / total;
      h -= q * std::log(q);
    }
    return h;
  };
  double ha = entropy(sa), hb = entropy(sb);
  if (ha + hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [cell, count] : joint) {
    double pxy = static_cast<double>(count) / total;
    double px = static_cast<double>(sa[cell.first]) / total;
    double py = static_cast<double>(sb[cell.second]) / total;
    mi += pxy * std::log(pxy / (px * py));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

}  // namespace misslink
