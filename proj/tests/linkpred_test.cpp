#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "misslink/error.hpp"
#include "misslink/linkpred.hpp"
#include "test_support.hpp"

namespace misslink {
namespace {

// a..e = 0..4 with edges a-c, b-c, a-d, b-d, a-e.
Graph fixture() {
  std::istringstream in("a c\nb c\na d\nb d\na e\n");
  return read_edge_list(in);
}

TEST(ScorerTest, FixtureValues) {
  Graph g = fixture();
  Vertex a = *g.find_label("a"), b = *g.find_label("b");
  EXPECT_NEAR(score(g, a, b, ScorerId::kCommonNeighbors), 2.0, 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kJaccard), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kMeetMin), 1.0, 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kGeometric), 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kAdamicAdar), 2.0 / std::log(2.0), 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kResourceAllocation), 1.0, 1e-12);
  EXPECT_NEAR(score(g, a, b, ScorerId::kPreferentialAttachment), 6.0, 1e-12);
}

TEST(ScorerTest, IsolatedVerticesScoreZero) {
  std::vector<Edge> edges{{0, 1}};
  Graph g(4, edges);
  for (ScorerId id : kAllScorers) EXPECT_EQ(score(g, 2, 3, id), 0.0) << to_string(id);
  EXPECT_EQ(score(g, 0, 2, ScorerId::kJaccard), 0.0);
}

TEST(ScorerTest, RejectsBadPairs) {
  Graph g = fixture();
  EXPECT_THROW(score(g, 1, 1, ScorerId::kCommonNeighbors), Error);
  EXPECT_THROW(score(g, 1, 9, ScorerId::kCommonNeighbors), Error);
}

TEST(ScorerTest, NamesRoundTrip) {
  for (ScorerId id : kAllScorers) EXPECT_EQ(parse_scorer(to_string(id)), id);
  EXPECT_FALSE(parse_scorer("katz"));
  auto list = parse_scorer_list("cn,aa,pa");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[1].name(), "aa");
  EXPECT_THROW(parse_scorer_list("cn,bogus"), Error);
}

TEST(ScorerTest, PropertiesOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = testing::random_graph(40, 0.15, seed);
    for (Vertex u = 0; u < 40; ++u) {
      for (Vertex v = u + 1; v < 40; ++v) {
        double cn = score(g, u, v, ScorerId::kCommonNeighbors);
        double jac = score(g, u, v, ScorerId::kJaccard);
        double mm = score(g, u, v, ScorerId::kMeetMin);
        double geo = score(g, u, v, ScorerId::kGeometric);
        for (ScorerId id : kAllScorers) {
          double s = score(g, u, v, id);
          EXPECT_TRUE(std::isfinite(s));
          EXPECT_GE(s, 0.0);
          EXPECT_EQ(s, score(g, v, u, id));
          if (id != ScorerId::kPreferentialAttachment) EXPECT_EQ(s == 0.0, cn == 0.0);
        }
        EXPECT_LE(jac, mm + 1e-15);
        EXPECT_LE(geo, mm + 1e-15);
        EXPECT_LE(mm, 1.0);
      }
    }
  }
}

TEST(ScorerTest, RelabelingInvariance) {
  Graph g = testing::random_graph(30, 0.2, 11);
  std::vector<Vertex> perm(30);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  std::vector<Edge> moved;
  for (Edge e : g.edges()) moved.push_back(make_edge(perm[e.u], perm[e.v]));
  Graph h(30, moved);
  for (Vertex u = 0; u < 30; ++u) {
    for (Vertex v = u + 1; v < 30; ++v) {
      for (ScorerId id : kAllScorers) EXPECT_DOUBLE_EQ(score(g, u, v, id), score(h, perm[u], perm[v], id));
    }
  }
}

TEST(CandidateTest, Counts) {
  EXPECT_TRUE(candidate_pairs(testing::complete_graph(6)).empty());
  EXPECT_EQ(candidate_pairs(Graph(3, std::vector<Edge>{})).size(), 3u);
  auto karate = candidate_pairs(load_edge_list(testing::karate_path()));
  EXPECT_EQ(karate.size(), 483u);
  EXPECT_TRUE(std::is_sorted(karate.begin(), karate.end()));
}

TEST(ScoreAllTest, FixtureRow) {
  Graph g = fixture();
  Vertex a = *g.find_label("a"), b = *g.find_label("b");
  std::vector<Edge> pairs{make_edge(a, b)};
  auto methods = builtin_scorers();
  auto scored = score_all(g, pairs, methods);
  ASSERT_EQ(scored.methods.size(), 7u);
  std::vector<double> expected{2, 2.0 / 3, 1, 2.0 / 3, 2 / std::log(2.0), 1, 6};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(scored.columns[i][0], expected[i], 1e-12);
  EXPECT_THROW(scored.column("katz"), Error);
}

TEST(ScoreAllTest, EmptyAndInvalidPairs) {
  Graph g = fixture();
  auto methods = builtin_scorers();
  EXPECT_EQ(score_all(g, {}, methods).size(), 0u);
  std::vector<Edge> adjacent{make_edge(*g.find_label("a"), *g.find_label("c"))};
  EXPECT_THROW(score_all(g, adjacent, methods), Error);
  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(score_all(g, loop, methods), Error);
}

TEST(ScoreAllTest, MatchesSinglePairAndThreadCount) {
  Graph g = testing::random_graph(80, 0.08, 3);
  auto pairs = candidate_pairs(g);
  std::shuffle(pairs.begin(), pairs.end(), std::mt19937_64(1));
  pairs.resize(1000);
  auto methods = builtin_scorers();
  auto one = score_all(g, pairs, methods, 1);
  auto four = score_all(g, pairs, methods, 4);
  EXPECT_EQ(one.columns, four.columns);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      EXPECT_EQ(one.columns[m][i], score(g, pairs[i].u, pairs[i].v, kAllScorers[m]));
    }
  }
}

TEST(ScoreAllTest, PluginScorer) {
  Graph g = fixture();
  Scorer degree_sum("degsum", [](const Graph& h, Vertex u, Vertex v) {
    return static_cast<double>(h.degree(u) + h.degree(v));
  });
  std::vector<Scorer> methods{Scorer(ScorerId::kCommonNeighbors), degree_sum};
  auto pairs = candidate_pairs(g);
  auto scored = score_all(g, pairs, methods);
  EXPECT_EQ(scored.methods[1], "degsum");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(scored.column("degsum")[i], g.degree(pairs[i].u) + g.degree(pairs[i].v));
  }
}

TEST(ScoresCsvTest, RoundTrip) {
  Graph g = testing::random_graph(15, 0.3, 2);
  auto pairs = candidate_pairs(g);
  auto methods = builtin_scorers();
  auto scored = score_all(g, pairs, methods);
  std::stringstream buffer;
  write_scores_csv(buffer, g, scored);
  std::string header;
  std::getline(std::istringstream(buffer.str()), header);
  EXPECT_EQ(header, "u_label,v_label,cn,jaccard,meetmin,geometric,aa,ra,pa");
  auto back = read_scores_csv(buffer);
  ASSERT_EQ(back.scores.size(), pairs.size());
  EXPECT_EQ(back.scores.methods, scored.methods);
  EXPECT_EQ(back.scores.columns, scored.columns);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::set<std::string> read{back.labels[back.scores.pairs[i].u], back.labels[back.scores.pairs[i].v]};
    EXPECT_EQ(read, (std::set<std::string>{g.label(pairs[i].u), g.label(pairs[i].v)}));
  }
}

}  // namespace
}  // namespace misslink
