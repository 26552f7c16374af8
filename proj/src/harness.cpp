#include "misslink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "misslink/error.hpp"
#include "misslink/linkpred.hpp"
#include "misslink/random.hpp"

namespace misslink {

std::uint64_t cell_seed(std::uint64_t master, std::string_view model, double fraction,
                        std::size_t replica) {
  return derive_seed(master, hash_tag(model), std::bit_cast<std::uint64_t>(fraction), replica);
}

std::uint64_t source_seed(std::uint64_t master, std::size_t replica) {
  return derive_seed(master, hash_tag("source"), replica);
}

namespace {

struct KeyedRow {
  std::size_t model = 0;
  std::size_t fraction = 0;
  std::size_t method = 0;
  std::size_t replica = 0;
  std::size_t seq = 0;
  ResultRow row;
};

struct ReplicaSource {
  Graph graph;
  std::optional<Partition> truth;
};

ReplicaSource make_source(const ExperimentPlan& plan, const Graph* loaded, std::size_t replica) {
  const std::uint64_t seed = source_seed(plan.master_seed, replica);
  switch (plan.source.kind) {
    case SourceSpec::Kind::kEdgeList:
      return {*loaded, std::nullopt};
    case SourceSpec::Kind::kEr: {
      ErParams p = plan.source.er;
      p.seed = seed;
      return {generate_er(p), std::nullopt};
    }
    case SourceSpec::Kind::kLfr: {
      LfrParams p = plan.source.lfr;
      p.seed = seed;
      auto pg = generate_lfr(p);
      return {std::move(pg.graph), std::move(pg.communities)};
    }
  }
  return {};
}

std::vector<Vertex> largest_component_vertices(const Graph& g) {
  auto comp = connected_components(g);
  std::vector<std::size_t> sizes;
  for (auto c : comp) {
    if (c >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  auto largest =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (comp[v] == largest) keep.push_back(v);
  }
  return keep;
}

/// Crawl that tolerates a disconnected source by crawling its largest
/// component; ids in the result refer to `g`.
DegradedNetwork crawl_largest_component(const Graph& g, std::size_t target, std::uint64_t seed) {
  if (is_connected(g)) return crawl(g, target, seed);
  auto sub = induced_subgraph(g, largest_component_vertices(g));
  auto dn = crawl(sub.graph, std::min(target, sub.graph.num_edges()), seed);
  for (auto& v : dn.vertex_map) v = sub.to_parent[v];
  for (auto& e : dn.removed_edges) e = make_edge(sub.to_parent[e.u], sub.to_parent[e.v]);
  return dn;
}

DegradedNetwork degrade_for_prediction(const Graph& g, DegradationKind kind, std::size_t target,
                                       std::uint64_t seed) {
  switch (kind) {
    case DegradationKind::kCrawled:
      return crawl_largest_component(g, target, seed);
    case DegradationKind::kRandomDeletion:
      return random_delete(g, target, seed, false);
    case DegradationKind::kLimitedDegree:
      return limited_degree_delete(g, target, seed, false);
    case DegradationKind::kInduced:
      break;
  }
  throw Error(ErrorKind::kInvalidArgument, "induced is not a prediction model");
}

template <typename Job>
std::vector<KeyedRow> run_replicas(std::size_t replicas, std::size_t threads, Job job) {
  std::vector<std::vector<KeyedRow>> per_replica(replicas);
  std::vector<std::exception_ptr> errors(replicas);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < replicas; r = next++) {
      try {
        per_replica[r] = job(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, replicas); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<KeyedRow> all;
  for (auto& rows : per_replica) {
    for (auto& row : rows) all.push_back(std::move(row));
  }
  return all;
}

std::vector<ResultRow> ordered(std::vector<KeyedRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const KeyedRow& a, const KeyedRow& b) {
    return std::tie(a.model, a.fraction, a.method, a.replica, a.seq) <
           std::tie(b.model, b.fraction, b.method, b.replica, b.seq);
  });
  std::vector<ResultRow> out;
  out.reserve(rows.size());
  for (auto& k : rows) out.push_back(std::move(k.row));
  return out;
}

std::optional<Graph> load_source(const ExperimentPlan& plan) {
  if (plan.source.kind != SourceSpec::Kind::kEdgeList) return std::nullopt;
  return load_edge_list(plan.source.path);
}

}  // namespace

std::vector<ResultRow> run_prediction_pipeline(const ExperimentPlan& plan) {
  if (plan.pipeline != Pipeline::kPrediction) {
    throw Error(ErrorKind::kInvalidArgument, "plan is not a prediction plan");
  }
  validate(plan);
  auto loaded = load_source(plan);

  std::vector<Scorer> scorers;
  if (plan.methods.empty()) {
    scorers = builtin_scorers();
  } else {
    for (const auto& m : plan.methods) scorers.emplace_back(*parse_scorer(m));
  }

  auto job = [&](std::size_t r) {
    std::vector<KeyedRow> rows;
    auto source = make_source(plan, loaded ? &*loaded : nullptr, r);
    const Graph& g = source.graph;
    for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
      const double fraction = plan.fractions[fi];
      const std::size_t target = target_edge_count(g, fraction);
      for (std::size_t mi = 0; mi < plan.models.size(); ++mi) {
        const auto model = to_string(plan.models[mi]);
        const std::uint64_t seed = cell_seed(plan.master_seed, model, fraction, r);
        auto dn = degrade_for_prediction(g, plan.models[mi], target, seed);

        std::vector<std::int64_t> local(g.num_vertices(), -1);
        for (std::size_t i = 0; i < dn.vertex_map.size(); ++i) {
          local[dn.vertex_map[i]] = static_cast<std::int64_t>(i);
        }
        std::vector<Edge> positives;
        for (Edge e : dn.removed_edges) {
          if (local[e.u] >= 0 && local[e.v] >= 0) {
            positives.push_back(make_edge(static_cast<Vertex>(local[e.u]),
                                          static_cast<Vertex>(local[e.v])));
          }
        }
        auto pairs = candidate_pairs(dn.observed);
        const bool degenerate = positives.empty() || positives.size() >= pairs.size();

        std::optional<ScoredPairs> scored;
        if (!degenerate) scored = score_all(dn.observed, pairs, scorers);
        for (std::size_t k = 0; k < scorers.size(); ++k) {
          ResultRow row{std::string(model), fraction, scorers[k].name(), r, seed, "auc",
                        std::nullopt, 0};
          if (scored) {
            auto res = auc(*scored, positives, scorers[k].name(), plan.auc_mode, plan.auc_samples,
                           derive_seed(seed, hash_tag(scorers[k].name())));
            row.value = res.auc;
            row.n_effective = 1;
          }
          rows.push_back({mi, fi, k, r, 0, std::move(row)});
        }
      }
    }
    return rows;
  };
  return ordered(run_replicas(plan.replicas, plan.threads, job));
}

std::vector<ResultRow> run_community_pipeline(const ExperimentPlan& plan) {
  if (plan.pipeline != Pipeline::kCommunity) {
    throw Error(ErrorKind::kInvalidArgument, "plan is not a community plan");
  }
  validate(plan);
  auto loaded = load_source(plan);

  std::vector<Detector> detectors;
  if (plan.methods.empty()) {
    detectors = {Detector::kLouvain, Detector::kLabelPropagation};
  } else {
    for (const auto& m : plan.methods) detectors.push_back(*parse_detector(m));
  }
  static constexpr std::string_view kModels[] = {"original", "induced", "crawled", "random",
                                                 "limited"};
  const std::size_t truth_method = detectors.size();

  auto job = [&](std::size_t r) {
    std::vector<KeyedRow> rows;
    auto source = make_source(plan, loaded ? &*loaded : nullptr, r);
    Graph g = std::move(source.graph);
    std::optional<Partition> planted = std::move(source.truth);
    if (!is_connected(g)) {
      auto keep = largest_component_vertices(g);
      if (planted) planted = planted->restrict_to(keep);
      g = induced_subgraph(g, keep).graph;
    }
    const Partition truth =
        planted ? *planted
                : reference_partition(g, derive_seed(plan.master_seed, hash_tag("reference"), r));

    std::size_t total_inter = 0;
    for (Edge e : g.edges()) total_inter += truth[e.u] != truth[e.v];
    const std::size_t total_intra = g.num_edges() - total_inter;

    std::size_t seq = 0;
    auto emit = [&](std::size_t model, std::size_t fi, std::size_t method, ResultRow row) {
      rows.push_back({model, fi, method, r, seq++, std::move(row)});
    };

    // Undegraded baseline, repeated under every fraction for plotting.
    const std::uint64_t original_seed = cell_seed(plan.master_seed, "original", 1.0, r);
    std::vector<std::pair<double, double>> baseline;
    for (Detector d : detectors) {
      auto seed = derive_seed(original_seed, hash_tag(to_string(d)));
      auto p = detect(d, g, seed);
      baseline.emplace_back(nmi(p, truth), modularity(g, p));
    }

    for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
      const double fraction = plan.fractions[fi];
      for (std::size_t k = 0; k < detectors.size(); ++k) {
        const std::string method(to_string(detectors[k]));
        auto seed = derive_seed(original_seed, hash_tag(method));
        emit(0, fi, k, {"original", fraction, method, r, seed, "nmi", baseline[k].first, 1});
        emit(0, fi, k, {"original", fraction, method, r, seed, "q", baseline[k].second, 1});
      }

      const std::uint64_t suite_seed = cell_seed(plan.master_seed, "suite", fraction, r);
      std::optional<CommunitySuite> suite;
      try {
        suite = make_community_suite(g, target_edge_count(g, fraction), suite_seed);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kInfeasible) throw;
      }

      const DegradedNetwork* networks[] = {
          suite ? &suite->induced : nullptr, suite ? &suite->crawled : nullptr,
          suite ? &suite->random_deletion : nullptr, suite ? &suite->limited_degree : nullptr};
      for (std::size_t mi = 1; mi < std::size(kModels); ++mi) {
        const std::string model(kModels[mi]);
        const DegradedNetwork* dn = networks[mi - 1];
        std::optional<Partition> sub_truth;
        if (dn) sub_truth = truth.restrict_to(dn->vertex_map);
        for (std::size_t k = 0; k < detectors.size(); ++k) {
          const std::string method(to_string(detectors[k]));
          auto seed = derive_seed(suite_seed, hash_tag(model), hash_tag(method));
          ResultRow nmi_row{model, fraction, method, r, seed, "nmi", std::nullopt, 0};
          ResultRow q_row{model, fraction, method, r, seed, "q", std::nullopt, 0};
          if (dn) {
            auto p = detect(detectors[k], dn->observed, seed);
            nmi_row.value = nmi(p, *sub_truth);
            q_row.value = modularity(dn->observed, p);
            nmi_row.n_effective = q_row.n_effective = 1;
          }
          emit(mi, fi, k, std::move(nmi_row));
          emit(mi, fi, k, std::move(q_row));
        }
        if (planted && mi >= 2) {
          // Counted against the whole source graph, so every model at one
          // fraction removes the same total.
          std::optional<RemovedCounts> counts;
          if (dn) {
            auto observed = classify_removed(*dn, truth);
            const std::size_t remaining_intra = dn->observed.num_edges() - observed.remaining_inter;
            counts = RemovedCounts{total_intra - remaining_intra, total_inter - observed.remaining_inter,
                                   observed.remaining_inter};
          }
          auto count_row = [&](const char* metric, std::size_t RemovedCounts::*field) {
            ResultRow row{model, fraction, "truth", r, suite_seed, metric, std::nullopt, 0};
            if (counts) {
              row.value = static_cast<double>((*counts).*field);
              row.n_effective = 1;
            }
            emit(mi, fi, truth_method, std::move(row));
          };
          count_row("removed_intra", &RemovedCounts::removed_intra);
          count_row("removed_inter", &RemovedCounts::removed_inter);
          count_row("remaining_inter", &RemovedCounts::remaining_inter);
        }
      }
    }
    return rows;
  };
  return ordered(run_replicas(plan.replicas, plan.threads, job));
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  return plan.pipeline == Pipeline::kPrediction ? run_prediction_pipeline(plan)
                                                : run_community_pipeline(plan);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Acc {
    SummaryRow row;
    std::vector<double> values;
  };
  std::vector<Acc> groups;
  std::map<std::tuple<std::string, std::uint64_t, std::string, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.model, std::bit_cast<std::uint64_t>(r.fraction), r.method, r.metric);
    auto [it, inserted] = index.emplace(key, groups.size());
    std::size_t idx = it->second;
    if (inserted) groups.push_back({{r.model, r.fraction, r.method, r.metric, 0.0, 0.0, 0, 0}, {}});
    ++groups[idx].row.replicas;
    if (r.value) groups[idx].values.push_back(*r.value);
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    const std::size_t n = g.values.size();
    g.row.n_effective = n;
    if (n > 0) {
      double mean = 0.0;
      for (double v : g.values) mean += v;
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (double v : g.values) ss += (v - mean) * (v - mean);
      g.row.mean = mean;
      g.row.stderr_mean =
          n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    } else {
      g.row.mean = std::nan("");
    }
    out.push_back(std::move(g.row));
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << format_double(r.fraction) << ',' << r.method << ',' << r.replica << ','
        << r.seed << ',' << r.metric << ',' << (r.value ? format_double(*r.value) : "NA") << ','
        << r.n_effective << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw Error(ErrorKind::kParse, "results CSV must start with '" + std::string(kResultsHeader) + "'");
  }
  auto number = [](const std::string& field, auto& out, std::size_t line_no) {
    auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
  };
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 8) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected 8 fields");
    }
    ResultRow r;
    r.model = f[0];
    number(f[1], r.fraction, line_no);
    r.method = f[2];
    number(f[3], r.replica, line_no);
    number(f[4], r.seed, line_no);
    r.metric = f[5];
    if (f[6] != "NA") {
      double v = 0.0;
      number(f[6], v, line_no);
      r.value = v;
    }
    number(f[7], r.n_effective, line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << format_double(r.fraction) << ',' << r.method << ',' << r.metric << ','
        << (r.n_effective ? format_double(r.mean) : "NA") << ','
        << (r.n_effective ? format_double(r.stderr_mean) : "NA") << ',' << r.replicas << ','
        << r.n_effective << '\n';
  }
}

}  // namespace misslink
