#include "misslink/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "misslink/error.hpp"
#include "misslink/random.hpp"

namespace misslink {

Graph generate_er(const ErParams& p) {
  if (p.n < 2 || !(p.mean_degree > 0.0) || p.mean_degree > static_cast<double>(p.n - 1)) {
    throw Error(ErrorKind::kInvalidArgument, "ER parameters need n >= 2 and 0 < k_avg <= n-1");
  }
  const std::uint64_t n = p.n;
  const std::uint64_t total = n * (n - 1) / 2;
  const auto m = static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * p.mean_degree / 2.0));
  if (m > total) throw Error(ErrorKind::kInvalidArgument, "ER edge count exceeds n(n-1)/2");

  Rng rng(p.seed);
  std::vector<Edge> edges;
  edges.reserve(m);
  if (2 * m <= total) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(2 * m);
    while (edges.size() < m) {
      auto a = static_cast<Vertex>(uniform_index(rng, n));
      auto b = static_cast<Vertex>(uniform_index(rng, n));
      if (a == b) continue;
      Edge e = make_edge(a, b);
      if (chosen.insert(edge_key(e)).second) edges.push_back(e);
    }
  } else {
    // Dense regime: partial Fisher-Yates over the full pair list.
    std::vector<Edge> all;
    all.reserve(total);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) all.push_back({u, v});
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + uniform_index(rng, all.size() - i);
      std::swap(all[i], all[j]);
    }
    edges.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  }
  return Graph(p.n, edges);
}

namespace detail {
namespace {

// Weights for the family parameterized by t in [1, k_max]: support
// floor(t)..k_max, with the lowest atom scaled by 1 - frac(t).
std::vector<double> weights_at(double t, std::size_t k_max, double exponent) {
  std::vector<double> w(k_max, 0.0);
  auto low = static_cast<std::size_t>(std::floor(t));
  double frac = t - static_cast<double>(low);
  for (std::size_t k = low; k <= k_max; ++k) {
    w[k - 1] = std::pow(static_cast<double>(k), -exponent);
  }
  w[low - 1] *= (1.0 - frac);
  if (low == k_max) w[low - 1] = 1.0;
  return w;
}

double mean_of(const std::vector<double>& w) {
  double mass = 0.0, first = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mass += w[i];
    first += w[i] * static_cast<double>(i + 1);
  }
  return first / mass;
}

}  // namespace

std::vector<double> degree_weights(double mean, std::size_t k_max, double exponent) {
  if (k_max < 1 || mean < 1.0 || mean > static_cast<double>(k_max)) {
    throw Error(ErrorKind::kInfeasible, "mean degree must lie in [1, k_max]");
  }
  double lo = 1.0, hi = static_cast<double>(k_max);
  if (mean_of(weights_at(lo, k_max, exponent)) > mean) {
    throw Error(ErrorKind::kInfeasible,
                "mean degree too small for k_max and degree exponent (k_min would be < 1)");
  }
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mean_of(weights_at(mid, k_max, exponent)) < mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return weights_at(0.5 * (lo + hi), k_max, exponent);
}

}  // namespace detail

namespace {

struct Attempt {
  std::vector<Edge> edges;
  std::vector<CommunityId> membership;
  std::size_t dropped_stubs = 0;
};

std::vector<std::size_t> sample_degrees(const LfrParams& p, Rng& rng) {
  auto w = detail::degree_weights(p.mean_degree, p.max_degree, p.degree_exponent);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::vector<std::size_t> deg(p.n);
  for (auto& d : deg) d = dist(rng) + 1;
  std::size_t sum = std::accumulate(deg.begin(), deg.end(), std::size_t{0});
  if (sum % 2 == 1) {
    // Bump a random vertex that still has room, else lower one.
    std::vector<std::size_t> room;
    for (std::size_t v = 0; v < p.n; ++v) {
      if (deg[v] < p.max_degree) room.push_back(v);
    }
    if (!room.empty()) {
      ++deg[pick(rng, room)];
    } else {
      --deg[uniform_index(rng, p.n)];
    }
  }
  return deg;
}

// Returns false when sizes cannot be trimmed to sum exactly to n.
bool sample_community_sizes(const LfrParams& p, Rng& rng, std::vector<std::size_t>& sizes) {
  std::vector<double> w(p.max_community - p.min_community + 1);
  for (std::size_t s = p.min_community; s <= p.max_community; ++s) {
    w[s - p.min_community] = std::pow(static_cast<double>(s), -p.community_exponent);
  }
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  sizes.clear();
  std::size_t sum = 0;
  while (sum < p.n) {
    sizes.push_back(dist(rng) + p.min_community);
    sum += sizes.back();
  }
  std::size_t excess = sum - p.n;
  std::size_t slack = 0;
  for (auto s : sizes) slack += s - p.min_community;
  if (slack < excess) return false;
  while (excess > 0) {
    std::size_t c = uniform_index(rng, sizes.size());
    if (sizes[c] > p.min_community) {
      --sizes[c];
      --excess;
    }
  }
  return true;
}

// Internal stub counts: floor((1-mu) d) plus largest-remainder extras so the
// total equals round((1-mu) * sum d).
std::vector<std::size_t> internal_degrees(const std::vector<std::size_t>& deg, double mu) {
  const double keep = 1.0 - mu;
  std::vector<std::size_t> k_in(deg.size());
  std::vector<double> remainder(deg.size());
  double exact_total = 0.0;
  std::size_t floor_total = 0;
  for (std::size_t v = 0; v < deg.size(); ++v) {
    double x = keep * static_cast<double>(deg[v]);
    exact_total += x;
    k_in[v] = static_cast<std::size_t>(std::floor(x + 1e-9));
    remainder[v] = x - static_cast<double>(k_in[v]);
    floor_total += k_in[v];
  }
  auto target = static_cast<std::size_t>(std::llround(exact_total));
  std::vector<std::size_t> order(deg.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; floor_total < target && i < order.size(); ++i) {
    if (k_in[order[i]] < deg[order[i]]) {
      ++k_in[order[i]];
      ++floor_total;
    }
  }
  return k_in;
}

bool assign_communities(const std::vector<std::size_t>& k_in, const std::vector<std::size_t>& sizes,
                        Rng& rng, std::vector<CommunityId>& membership) {
  const std::size_t n = k_in.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(rng, order);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return k_in[a] > k_in[b]; });

  std::vector<std::size_t> capacity = sizes;
  membership.assign(n, 0);
  std::vector<std::size_t> feasible;
  std::vector<double> weight;
  for (std::size_t v : order) {
    feasible.clear();
    weight.clear();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (capacity[c] > 0 && sizes[c] >= k_in[v] + 1) {
        feasible.push_back(c);
        weight.push_back(static_cast<double>(capacity[c]));
      }
    }
    if (feasible.empty()) return false;
    std::discrete_distribution<std::size_t> dist(weight.begin(), weight.end());
    std::size_t c = feasible[dist(rng)];
    membership[v] = static_cast<CommunityId>(c);
    --capacity[c];
  }
  return true;
}

// Stub matching followed by swap repair. `allowed` says whether a pair may be
// an edge in this layer; the repair only swaps within `edges` of this layer.
template <typename Allowed>
std::size_t wire_stubs(std::vector<Vertex> stubs, Allowed allowed, Rng& rng,
                       std::unordered_set<std::uint64_t>& present, std::vector<Edge>& out,
                       std::size_t retries) {
  shuffle(rng, stubs);
  std::vector<Edge> good;
  std::vector<std::pair<Vertex, Vertex>> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    Vertex a = stubs[i], b = stubs[i + 1];
    if (a != b && allowed(a, b) && present.insert(edge_key(make_edge(a, b))).second) {
      good.push_back(make_edge(a, b));
    } else {
      bad.emplace_back(a, b);
    }
  }
  std::size_t dropped = stubs.size() % 2;

  for (auto [x, y] : bad) {
    bool fixed = false;
    for (std::size_t attempt = 0; attempt < retries && !good.empty(); ++attempt) {
      std::size_t idx = uniform_index(rng, good.size());
      Vertex a = good[idx].u, b = good[idx].v;
      if (uniform_index(rng, 2) == 1) std::swap(a, b);
      // (x,y) + (a,b) -> (x,a) + (y,b)
      if (x == a || y == b || !allowed(x, a) || !allowed(y, b)) continue;
      Edge e1 = make_edge(x, a), e2 = make_edge(y, b);
      if (e1 == e2 || present.count(edge_key(e1)) || present.count(edge_key(e2))) continue;
      present.erase(edge_key(good[idx]));
      present.insert(edge_key(e1));
      present.insert(edge_key(e2));
      good[idx] = e1;
      good.push_back(e2);
      fixed = true;
      break;
    }
    if (!fixed) dropped += 2;
  }
  out.insert(out.end(), good.begin(), good.end());
  return dropped;
}

// Makes every community's internal stub total even. An external stub is
// turned internal when one exists; otherwise (mu = 0) a member's degree moves
// by one so no stray external stub appears.
bool fix_community_parity(std::vector<std::size_t>& k_in, std::vector<std::size_t>& deg,
                          const std::vector<CommunityId>& membership,
                          const std::vector<std::size_t>& sizes, std::size_t k_max, Rng& rng) {
  std::vector<std::vector<std::size_t>> members(sizes.size());
  for (std::size_t v = 0; v < membership.size(); ++v) members[membership[v]].push_back(v);
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    std::size_t sum = 0;
    for (auto v : members[c]) sum += k_in[v];
    if (sum % 2 == 0) continue;
    std::vector<std::size_t> promote;
    for (auto v : members[c]) {
      if (k_in[v] < deg[v] && k_in[v] + 1 < sizes[c]) promote.push_back(v);
    }
    if (!promote.empty()) {
      ++k_in[pick(rng, promote)];
      continue;
    }
    // (vertex, +1 or -1) applied to both degree and internal degree.
    std::vector<std::pair<std::size_t, int>> moves;
    for (auto v : members[c]) {
      if (deg[v] < k_max && k_in[v] + 1 < sizes[c] && k_in[v] == deg[v]) moves.emplace_back(v, +1);
      if (k_in[v] > 1 && k_in[v] == deg[v]) moves.emplace_back(v, -1);
    }
    if (moves.empty()) return false;
    auto [v, delta] = pick(rng, moves);
    k_in[v] = delta > 0 ? k_in[v] + 1 : k_in[v] - 1;
    deg[v] = delta > 0 ? deg[v] + 1 : deg[v] - 1;
  }
  return true;
}

void validate(const LfrParams& p) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (p.n < 2) fail("LFR needs n >= 2");
  if (p.max_degree < 1 || p.max_degree > p.n - 1) fail("LFR needs 1 <= k_max <= n-1");
  if (!(p.mixing >= 0.0 && p.mixing <= 1.0)) fail("LFR needs mu in [0, 1]");
  if (!(p.degree_exponent > 1.0)) fail("LFR needs tau1 > 1");
  if (!(p.community_exponent >= 1.0)) fail("LFR needs tau2 >= 1");
  if (p.min_community < 1 || p.min_community > p.max_community || p.max_community > p.n) {
    fail("LFR needs 1 <= c_min <= c_max <= n");
  }
  if (!(p.mean_degree > 0.0) || p.mean_degree > static_cast<double>(p.max_degree)) {
    fail("LFR needs 0 < k_avg <= k_max");
  }
}

}  // namespace

PlantedGraph generate_lfr(const LfrParams& p) {
  validate(p);
  if (static_cast<double>(p.max_community - 1) < (1.0 - p.mixing) * static_cast<double>(p.max_degree) - 1.0) {
    throw Error(ErrorKind::kInfeasible,
                "c_max too small: the largest internal degree cannot fit in any community");
  }

  std::string last_failure = "unknown";
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(p.max_retries, 1); ++attempt) {
    Rng rng(derive_seed(p.seed, attempt));
    auto deg = sample_degrees(p, rng);

    std::vector<std::size_t> sizes;
    if (!sample_community_sizes(p, rng, sizes)) {
      last_failure = "community sizes cannot sum to n within [c_min, c_max]";
      continue;
    }
    if (p.mixing > 0.0 && sizes.size() < 2) {
      last_failure = "mu > 0 needs at least two communities";
      continue;
    }

    auto k_in = internal_degrees(deg, p.mixing);
    std::vector<CommunityId> membership;
    if (!assign_communities(k_in, sizes, rng, membership)) {
      last_failure = "no community large enough for a vertex's internal degree";
      continue;
    }
    if (!fix_community_parity(k_in, deg, membership, sizes, p.max_degree, rng)) {
      last_failure = "cannot make internal stub count even in some community";
      continue;
    }

    std::unordered_set<std::uint64_t> present;
    std::vector<Edge> edges;
    std::size_t dropped = 0;
    std::vector<std::vector<Vertex>> internal_stubs(sizes.size());
    std::vector<Vertex> external_stubs;
    for (Vertex v = 0; v < p.n; ++v) {
      for (std::size_t i = 0; i < k_in[v]; ++i) internal_stubs[membership[v]].push_back(v);
      for (std::size_t i = k_in[v]; i < deg[v]; ++i) external_stubs.push_back(v);
    }
    for (auto& stubs : internal_stubs) {
      dropped += wire_stubs(
          std::move(stubs), [](Vertex, Vertex) { return true; }, rng, present, edges,
          p.max_retries * 10);
    }
    dropped += wire_stubs(
        std::move(external_stubs),
        [&](Vertex a, Vertex b) { return membership[a] != membership[b]; }, rng, present, edges,
        p.max_retries * 10);

    std::size_t total_stubs = std::accumulate(deg.begin(), deg.end(), std::size_t{0});
    if (static_cast<double>(dropped) > 0.01 * static_cast<double>(total_stubs)) {
      last_failure = "stub matching left more than 1% of stubs unplaced";
      continue;
    }
    return {Graph(p.n, edges), Partition(membership)};
  }
  throw Error(ErrorKind::kInfeasible, "LFR generation failed after retries: " + last_failure);
}

double intercommunity_fraction(const Graph& g, const Partition& communities) {
  if (communities.size() != g.num_vertices()) {
    throw Error(ErrorKind::kInvalidArgument, "partition does not cover the graph");
  }
  if (g.num_edges() == 0) return 0.0;
  std::size_t inter = 0;
  for (Edge e : g.edges()) {
    if (communities[e.u] != communities[e.v]) ++inter;
  }
  return static_cast<double>(inter) / static_cast<double>(g.num_edges());
}

}  // namespace misslink
