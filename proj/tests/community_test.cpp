#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "misslink/community.hpp"
#include "misslink/error.hpp"
#include "misslink/netgen.hpp"
#include "misslink/random.hpp"
#include "test_support.hpp"

namespace misslink {
namespace {

using testing::two_triangles;

// All-pairs comparison, the definition of AUC.
double brute_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double total = 0;
  for (double p : pos) {
    for (double n : neg) total += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return total / static_cast<double>(pos.size() * neg.size());
}

// Q = 1/2m sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
double direct_modularity(const Graph& g, const Partition& p) {
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  double q = 0;
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    for (Vertex j = 0; j < g.num_vertices(); ++j) {
      if (p[i] != p[j]) continue;
      double a = g.has_edge(i, j) ? 1.0 : 0.0;
      q += a - static_cast<double>(g.degree(i) * g.degree(j)) / two_m;
    }
  }
  return q / two_m;
}

Partition random_partition(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CommunityId> ids(n);
  for (auto& c : ids) c = static_cast<CommunityId>(rng() % k);
  return Partition(ids);
}

TEST(AucTest, Examples) {
  std::vector<double> pos{5, 6}, neg{1, 2, 3};
  EXPECT_DOUBLE_EQ(auc_from_scores(pos, neg, AucMode::kExact).auc, 1.0);
  std::vector<double> same(4, 2.0);
  EXPECT_DOUBLE_EQ(auc_from_scores(same, same, AucMode::kExact).auc, 0.5);
  std::vector<double> p{3, 1}, n{2, 0};
  auto r = auc_from_scores(p, n, AucMode::kExact);
  EXPECT_EQ(r.n_comparisons, 4u);
  EXPECT_EQ(r.n_wins, 3u);
  EXPECT_EQ(r.n_ties, 0u);
  EXPECT_DOUBLE_EQ(r.auc, 0.75);
}

TEST(AucTest, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t np = 1 + rng() % 100, nn = 1 + rng() % 100;
    std::uniform_int_distribution<int> value(0, trial % 2 ? 5 : 1000);
    std::vector<double> pos(np), neg(nn);
    for (auto& x : pos) x = value(rng);
    for (auto& x : neg) x = value(rng);
    auto r = auc_from_scores(pos, neg, AucMode::kExact);
    EXPECT_NEAR(r.auc, brute_auc(pos, neg), 1e-12);
    EXPECT_EQ(r.n_comparisons, np * nn);
    EXPECT_LE(r.n_wins + r.n_ties, r.n_comparisons);
  }
}

TEST(AucTest, MonotoneTransformInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> value(0, 10);
  std::vector<double> pos(50), neg(80);
  for (auto& x : pos) x = std::floor(value(rng));
  for (auto& x : neg) x = std::floor(value(rng));
  auto transformed = [](std::vector<double> v) {
    for (auto& x : v) x = std::exp(x) + 3 * x;
    return v;
  };
  EXPECT_DOUBLE_EQ(auc_from_scores(pos, neg, AucMode::kExact).auc,
                   auc_from_scores(transformed(pos), transformed(neg), AucMode::kExact).auc);
}

TEST(AucTest, SampledCloseToExact) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> value(0, 1);
  std::vector<double> pos(300), neg(2000);
  for (auto& x : pos) x = value(rng) + 0.7;
  for (auto& x : neg) x = value(rng);
  double exact = auc_from_scores(pos, neg, AucMode::kExact).auc;
  auto sampled = auc_from_scores(pos, neg, AucMode::kSampled, 100000, 9);
  EXPECT_EQ(sampled.n_comparisons, 100000u);
  EXPECT_NEAR(sampled.auc, exact, 0.01);
}

TEST(AucTest, ErrorsOnScoredPairs) {
  Graph g = testing::path_graph(5);
  auto pairs = candidate_pairs(g);
  auto methods = builtin_scorers();
  auto scored = score_all(g, pairs, methods);
  try {
    auc(scored, {}, "cn", AucMode::kExact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoPositives);
  }
  std::vector<Edge> not_scored{{0, 1}};
  EXPECT_THROW(auc(scored, not_scored, "cn", AucMode::kExact), Error);
  std::vector<Edge> positives{{0, 2}};
  auto r = auc(scored, positives, "cn", AucMode::kExact);
  EXPECT_EQ(r.method, "cn");
  EXPECT_EQ(r.n_comparisons, pairs.size() - 1);
}

TEST(ModularityTest, Examples) {
  Graph g = two_triangles();
  EXPECT_NEAR(modularity(g, Partition::single(6)), 0.0, 1e-15);
  Partition natural(std::vector<CommunityId>{0, 0, 0, 1, 1, 1});
  EXPECT_NEAR(modularity(g, natural), 0.5, 1e-15);
  EXPECT_THROW(modularity(Graph(3, std::vector<Edge>{}), Partition::single(3)), Error);
  EXPECT_THROW(modularity(g, Partition::single(5)), Error);
}

TEST(ModularityTest, KarateFixturePartition) {
  Graph g = load_edge_list(testing::karate_path());
  std::vector<CommunityId> ids(34);
  for (Vertex v = 0; v < 34; ++v) ids[v] = std::stoi(g.label(v)) <= 17 ? 0 : 1;
  Partition p(ids);
  EXPECT_NEAR(modularity(g, p), direct_modularity(g, p), 1e-12);
}

TEST(ModularityTest, MatchesDirectSummation) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = testing::random_connected_graph(10 + seed % 30, 20, seed);
    Partition p = random_partition(g.num_vertices(), 1 + seed % 6, seed);
    double q = modularity(g, p);
    EXPECT_NEAR(q, direct_modularity(g, p), 1e-12);
    EXPECT_GE(q, -0.5);
    EXPECT_LT(q, 1.0);
  }
}

TEST(NmiTest, Cases) {
  Partition p(std::vector<CommunityId>{0, 0, 1, 1, 2});
  EXPECT_NEAR(nmi(p, p), 1.0, 1e-12);
  EXPECT_NEAR(nmi(Partition::singletons(6), Partition::single(6)), 0.0, 1e-12);
  Partition ab_cd(std::vector<CommunityId>{0, 0, 1, 1}), ac_bd(std::vector<CommunityId>{0, 1, 0, 1});
  EXPECT_NEAR(nmi(ab_cd, ac_bd), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(nmi(Partition::single(4), Partition::single(4)), 1.0);
  EXPECT_THROW(nmi(ab_cd, Partition::single(5)), Error);
}

TEST(NmiTest, Properties) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Partition a = random_partition(40, 2 + seed % 5, seed);
    Partition b = random_partition(40, 2 + seed % 7, seed + 1000);
    double x = nmi(a, b);
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
    EXPECT_DOUBLE_EQ(x, nmi(b, a));
    // Renaming community ids changes nothing.
    std::vector<CommunityId> renamed(a.assignment());
    for (auto& c : renamed) c = 100 - c;
    EXPECT_DOUBLE_EQ(x, nmi(Partition(renamed), b));
    if (a.num_communities() >= 2) EXPECT_NEAR(nmi(a, a), 1.0, 1e-12);
  }
}

TEST(LouvainTest, TwoTriangles) {
  auto result = louvain_levels(two_triangles(), 1);
  EXPECT_EQ(result.partition, Partition(std::vector<CommunityId>{0, 0, 0, 1, 1, 1}));
  EXPECT_NEAR(modularity(two_triangles(), result.partition), 0.5, 1e-12);
}

TEST(LouvainTest, CompleteGraphIsOneCommunity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(louvain(testing::complete_graph(8), seed).num_communities(), 1u);
  }
}

TEST(LouvainTest, LevelsNonDecreasingAndDeterministic) {
  std::vector<Graph> graphs{load_edge_list(testing::karate_path()), two_triangles()};
  for (std::uint64_t seed = 0; seed < 20; ++seed) graphs.push_back(testing::random_connected_graph(60, 90, seed));
  for (const Graph& g : graphs) {
    auto result = louvain_levels(g, 7);
    ASSERT_FALSE(result.level_modularity.empty());
    for (std::size_t i = 1; i < result.level_modularity.size(); ++i) {
      EXPECT_GE(result.level_modularity[i], result.level_modularity[i - 1] - 1e-12);
    }
    EXPECT_NEAR(result.level_modularity.back(), modularity(g, result.partition), 1e-12);
    EXPECT_EQ(result.partition, louvain(g, 7));
  }
}

TEST(LouvainTest, KarateModularity) {
  Graph g = load_edge_list(testing::karate_path());
  for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_GT(modularity(g, louvain(g, seed)), 0.38);
}

TEST(LouvainTest, RecoversPlantedCommunities) {
  LfrParams p;
  p.n = 1000;
  p.mean_degree = 20;
  p.max_degree = 50;
  p.mixing = 0.1;
  p.min_community = 50;
  p.max_community = 100;
  p.seed = 3;
  PlantedGraph pg = generate_lfr(p);
  EXPECT_GE(nmi(louvain(pg.graph, 1), pg.communities), 0.9);
}

TEST(LabelPropagationTest, Shapes) {
  EXPECT_EQ(label_propagation(two_triangles(), 3).num_communities(), 2u);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(label_propagation(testing::star_graph(6), seed).num_communities(), 1u);
  }
  EXPECT_EQ(label_propagation(testing::complete_graph(5), 1).num_communities(), 1u);
}

TEST(LabelPropagationTest, Deterministic) {
  Graph g = load_edge_list(testing::karate_path());
  EXPECT_EQ(label_propagation(g, 5), label_propagation(g, 5));
}

TEST(ReferenceTest, PicksHigherModularity) {
  EXPECT_NEAR(modularity(two_triangles(), reference_partition(two_triangles(), 1)), 0.5, 1e-12);
  Graph g = load_edge_list(testing::karate_path());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    double q = modularity(g, reference_partition(g, seed));
    EXPECT_GE(q, modularity(g, label_propagation(g, derive_seed(seed, hash_tag("labelprop")))));
    EXPECT_GE(q, modularity(g, louvain(g, derive_seed(seed, hash_tag("louvain")))));
  }
}

TEST(DetectorTest, Names) {
  for (Detector d : {Detector::kLouvain, Detector::kLabelPropagation, Detector::kReference}) {
    EXPECT_EQ(parse_detector(to_string(d)), d);
  }
  EXPECT_FALSE(parse_detector("walktrap"));
}

}  // namespace
}  // namespace misslink
