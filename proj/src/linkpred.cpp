#include "misslink/linkpred.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "misslink/error.hpp"

namespace misslink {

std::string_view to_string(ScorerId id) {
  switch (id) {
    case ScorerId::kCommonNeighbors:
      return "cn";
    case ScorerId::kJaccard:
      return "jaccard";
    case ScorerId::kMeetMin:
      return "meetmin";
    case ScorerId::kGeometric:
      return "geometric";
    case ScorerId::kAdamicAdar:
      return "aa";
    case ScorerId::kResourceAllocation:
      return "ra";
    case ScorerId::kPreferentialAttachment:
      return "pa";
  }
  return "unknown";
}

std::optional<ScorerId> parse_scorer(std::string_view name) {
  for (ScorerId id : kAllScorers) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

PairStats pair_stats(const Graph& g, Vertex u, Vertex v) {
  PairStats s;
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  s.degree_u = a.size();
  s.degree_v = b.size();
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      const auto d = g.degree(*ia);
      // A common neighbour of two distinct vertices has degree >= 2.
      assert(d >= 2);
      ++s.common;
      s.adamic_adar += 1.0 / std::log(static_cast<double>(d));
      s.resource_allocation += 1.0 / static_cast<double>(d);
      ++ia;
      ++ib;
    }
  }
  return s;
}

double evaluate(ScorerId id, const PairStats& s) {
  const auto common = static_cast<double>(s.common);
  const auto du = static_cast<double>(s.degree_u);
  const auto dv = static_cast<double>(s.degree_v);
  switch (id) {
    case ScorerId::kCommonNeighbors:
      return common;
    case ScorerId::kJaccard: {
      double uni = du + dv - common;
      return uni > 0.0 ? common / uni : 0.0;
    }
    case ScorerId::kMeetMin: {
      double lo = std::min(du, dv);
      return lo > 0.0 ? common / lo : 0.0;
    }
    case ScorerId::kGeometric: {
      double prod = du * dv;
      return prod > 0.0 ? common * common / prod : 0.0;
    }
    case ScorerId::kAdamicAdar:
      return s.adamic_adar;
    case ScorerId::kResourceAllocation:
      return s.resource_allocation;
    case ScorerId::kPreferentialAttachment:
      return du * dv;
  }
  return 0.0;
}

namespace {

void check_pair(const Graph& g, Vertex u, Vertex v) {
  if (u >= g.num_vertices() || v >= g.num_vertices()) {
    throw Error(ErrorKind::kInvalidArgument, "vertex out of range");
  }
  if (u == v) throw Error(ErrorKind::kInvalidArgument, "cannot score a vertex against itself");
}

}  // namespace

double score(const Graph& g, Vertex u, Vertex v, ScorerId id) {
  check_pair(g, u, v);
  return evaluate(id, pair_stats(g, u, v));
}

Scorer::Scorer(ScorerId id) : name_(to_string(id)), builtin_(id) {}

Scorer::Scorer(std::string name, ScoreFunction fn) : name_(std::move(name)), fn_(std::move(fn)) {}

double Scorer::operator()(const Graph& g, Vertex u, Vertex v) const {
  if (builtin_) return score(g, u, v, *builtin_);
  check_pair(g, u, v);
  return fn_(g, u, v);
}

std::vector<Scorer> builtin_scorers() {
  std::vector<Scorer> out;
  for (ScorerId id : kAllScorers) out.emplace_back(id);
  return out;
}

std::vector<Scorer> parse_scorer_list(std::string_view list) {
  std::vector<Scorer> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    auto name = list.substr(start, end - start);
    auto id = parse_scorer(name);
    if (!id) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + std::string(name) + "'");
    out.emplace_back(*id);
    start = end + 1;
  }
  return out;
}

std::vector<Edge> candidate_pairs(const Graph& g) {
  std::vector<Edge> pairs;
  const std::size_t n = g.num_vertices();
  if (n < 2) return pairs;
  pairs.reserve(n * (n - 1) / 2 - g.num_edges());
  for (Vertex u = 0; u < n; ++u) {
    auto nbrs = g.neighbors(u);
    auto it = std::upper_bound(nbrs.begin(), nbrs.end(), u);
    for (Vertex v = u + 1; v < n; ++v) {
      if (it != nbrs.end() && *it == v) {
        ++it;
        continue;
      }
      pairs.push_back({u, v});
    }
  }
  return pairs;
}

std::span<const double> ScoredPairs::column(std::string_view method) const {
  for (std::size_t m = 0; m < methods.size(); ++m) {
    if (methods[m] == method) return columns[m];
  }
  throw Error(ErrorKind::kInvalidArgument, "no scores for method '" + std::string(method) + "'");
}

ScoredPairs score_all(const Graph& g, std::span<const Edge> pairs, std::span<const Scorer> methods,
                      std::size_t threads) {
  for (Edge p : pairs) {
    check_pair(g, p.u, p.v);
    if (g.has_edge(p.u, p.v)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "pair (" + g.label(p.u) + ", " + g.label(p.v) + ") is already an edge");
    }
  }

  ScoredPairs out;
  out.pairs.assign(pairs.begin(), pairs.end());
  for (const auto& m : methods) out.methods.push_back(m.name());
  out.columns.assign(methods.size(), std::vector<double>(pairs.size(), 0.0));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Edge p = pairs[i];
      std::optional<PairStats> stats;
      for (std::size_t m = 0; m < methods.size(); ++m) {
        if (auto id = methods[m].builtin()) {
          if (!stats) stats = pair_stats(g, p.u, p.v);
          out.columns[m][i] = evaluate(*id, *stats);
        } else {
          out.columns[m][i] = methods[m](g, p.u, p.v);
        }
      }
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, pairs.size() / 1024));
  if (threads == 1) {
    work(0, pairs.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (pairs.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(pairs.size(), begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  return out;
}

void write_scores_csv(std::ostream& out, const Graph& g, const ScoredPairs& scored) {
  out << "u_label,v_label";
  for (const auto& m : scored.methods) out << ',' << m;
  out << '\n';
  auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    out << g.label(scored.pairs[i].u) << ',' << g.label(scored.pairs[i].v);
    for (const auto& col : scored.columns) out << ',' << col[i];
    out << '\n';
  }
  out.precision(old_precision);
}

LabeledScores read_scores_csv(std::istream& in) {
  LabeledScores result;
  std::unordered_map<std::string, Vertex> ids;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<Vertex>(result.labels.size()));
    if (inserted) result.labels.push_back(label);
    return it->second;
  };
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
  };

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "score CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line);
  if (header.size() < 2 || header[0] != "u_label" || header[1] != "v_label") {
    throw Error(ErrorKind::kParse, "score CSV header must start with u_label,v_label");
  }
  auto& scores = result.scores;
  scores.methods.assign(header.begin() + 2, header.end());
  scores.columns.assign(scores.methods.size(), {});

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " fields");
    }
    Vertex u = intern(fields[0]);
    Vertex v = intern(fields[1]);
    scores.pairs.push_back(make_edge(u, v));
    for (std::size_t m = 0; m < scores.methods.size(); ++m) {
      try {
        scores.columns[m].push_back(std::stod(fields[m + 2]));
      } catch (const std::exception&) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad score '" +
                                           fields[m + 2] + "'");
      }
    }
  }
  return result;
}

}  // namespace misslink
