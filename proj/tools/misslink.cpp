// misslink: command-line driver for degradation, link prediction, community
// detection and experiment sweeps. Errors are reported as a single line
// "error:<kind>: <message>" on stderr with a nonzero exit code.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <CLI11.hpp>

#include "misslink/community.hpp"
#include "misslink/degrade.hpp"
#include "misslink/error.hpp"
#include "misslink/graph.hpp"
#include "misslink/harness.hpp"
#include "misslink/linkpred.hpp"
#include "misslink/netgen.hpp"

namespace fs = std::filesystem;
using namespace misslink;

namespace {

// Writes to a file, or to stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Graph load_graph(const std::string& path) {
  LoadStats stats;
  Graph g = load_edge_list(path, &stats);
  if (stats.self_loops > 0 || stats.duplicate_edges > 0) {
    std::cerr << "warning: dropped " << stats.self_loops << " self-loops and "
              << stats.duplicate_edges << " duplicate edges from " << path << '\n';
  }
  return g;
}

void write_provenance(std::ostream& out, const std::string& name, const Graph& original,
                      const DegradedNetwork& dn, double fraction) {
  out << "network " << name << '\n'
      << "model " << to_string(dn.model.kind) << '\n'
      << "connected " << (dn.model.connected_variant ? 1 : 0) << '\n'
      << "fraction " << format_double(fraction) << '\n'
      << "seed " << dn.seed << '\n'
      << "target_edges " << dn.model.target_edges << '\n'
      << "observed_vertices " << dn.observed.num_vertices() << '\n'
      << "observed_edges " << dn.observed.num_edges() << '\n'
      << "removed_edges " << dn.removed_edges.size() << '\n';
  for (Edge e : dn.removed_edges) {
    out << "removed " << original.label(e.u) << ' ' << original.label(e.v) << '\n';
  }
}

std::vector<double> parse_fraction_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "bad fraction '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Missing-edge models, link prediction and community robustness"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate an ER or LFR-style graph");
  std::string gen_type = "er", gen_output = "-", gen_communities;
  LfrParams lfr;
  std::uint64_t gen_seed = 0;
  double k_avg = 10.0;
  std::size_t n = 1000;
  gen->add_option("--type", gen_type, "er or lfr")->check(CLI::IsMember({"er", "lfr"}));
  gen->add_option("--n,--N", n, "vertex count");
  gen->add_option("--k_avg", k_avg, "mean degree");
  gen->add_option("--k_max", lfr.max_degree, "maximum degree (lfr)");
  gen->add_option("--tau1", lfr.degree_exponent, "degree exponent (lfr)");
  gen->add_option("--tau2", lfr.community_exponent, "community size exponent (lfr)");
  gen->add_option("--mu", lfr.mixing, "mixing parameter (lfr)");
  gen->add_option("--c_min", lfr.min_community, "minimum community size (lfr)");
  gen->add_option("--c_max", lfr.max_community, "maximum community size (lfr)");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--output,-o", gen_output, "edge list output ('-' for stdout)");
  gen->add_option("--communities", gen_communities, "ground-truth partition output (lfr)");

  // degrade
  auto* deg = app.add_subcommand("degrade", "Produce an incomplete network");
  std::string deg_graph, deg_model = "random", deg_output;
  double deg_fraction = 0.8;
  std::uint64_t deg_seed = 0;
  bool deg_connected = false, deg_suite = false;
  deg->add_option("--graph", deg_graph, "input edge list")->required();
  deg->add_option("--model", deg_model, "crawled, random or limited")
      ->check(CLI::IsMember({"crawled", "random", "limited"}));
  deg->add_option("--fraction", deg_fraction, "fraction of edges kept");
  deg->add_option("--seed", deg_seed, "RNG seed");
  deg->add_flag("--connected", deg_connected, "never disconnect the network");
  deg->add_flag("--suite", deg_suite, "emit the connected four-network community suite");
  deg->add_option("--output,-o", deg_output, "output edge list (prefix with --suite)")->required();

  // predict
  auto* pred = app.add_subcommand("predict", "Score all non-adjacent vertex pairs");
  std::string pred_methods = "cn,jaccard,meetmin,geometric,aa,ra,pa", pred_graph, pred_output = "-";
  pred->add_option("--method", pred_methods, "comma-separated scorer ids");
  pred->add_option("--graph", pred_graph, "input edge list")->required();
  pred->add_option("--output,-o", pred_output, "CSV output ('-' for stdout)");

  // communities
  auto* comm = app.add_subcommand("communities", "Detect communities");
  std::string comm_algo = "louvain", comm_graph, comm_output = "-";
  std::uint64_t comm_seed = 0;
  comm->add_option("--algo", comm_algo, "louvain, labelprop or reference")
      ->check(CLI::IsMember({"louvain", "labelprop", "reference"}));
  comm->add_option("--graph", comm_graph, "input edge list")->required();
  comm->add_option("--seed", comm_seed, "RNG seed");
  comm->add_option("--output,-o", comm_output, "partition output ('-' for stdout)");

  // auc
  auto* aucc = app.add_subcommand("auc", "AUC of scored pairs against known missing edges");
  std::string auc_scores, auc_positives, auc_mode = "exact", auc_method;
  std::size_t auc_samples = 100000;
  std::uint64_t auc_seed = 0;
  aucc->add_option("--scores", auc_scores, "score CSV from 'predict'")->required();
  aucc->add_option("--positives", auc_positives, "edge list of missing edges")->required();
  aucc->add_option("--mode", auc_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  aucc->add_option("--samples", auc_samples, "comparisons in sampled mode");
  aucc->add_option("--method", auc_method, "only this method column");
  aucc->add_option("--seed", auc_seed, "RNG seed for sampled mode");

  // nmi
  auto* nmic = app.add_subcommand("nmi", "NMI between two partition files");
  std::string nmi_a, nmi_b;
  nmic->add_option("P1", nmi_a, "first partition file")->required();
  nmic->add_option("P2", nmi_b, "second partition file")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a seeded experiment sweep");
  std::string exp_plan, exp_pipeline, exp_fractions, exp_models, exp_methods, exp_output_dir;
  std::optional<std::size_t> exp_replicas, exp_threads;
  std::optional<std::uint64_t> exp_seed;
  exp->add_option("--plan", exp_plan, "JSON plan file")->required();
  exp->add_option("--pipeline", exp_pipeline, "prediction or community")
      ->check(CLI::IsMember({"prediction", "community"}));
  exp->add_option("--fractions", exp_fractions, "comma-separated observed fractions");
  exp->add_option("--models", exp_models, "comma-separated degradation models");
  exp->add_option("--methods", exp_methods, "comma-separated scorers or detectors");
  exp->add_option("--replicas", exp_replicas, "replica count");
  exp->add_option("--seed,--master-seed", exp_seed, "master seed");
  exp->add_option("--threads", exp_threads, "worker threads");
  exp->add_option("--output-dir", exp_output_dir, "output directory");

  // summarize
  auto* sum = app.add_subcommand("summarize", "Mean and standard error per cell");
  std::string sum_input, sum_output = "-";
  sum->add_option("--input,-i", sum_input, "results CSV")->required();
  sum->add_option("--output,-o", sum_output, "summary CSV ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*gen) {
      if (gen_type == "er") {
        Graph g = generate_er({n, k_avg, gen_seed});
        Output out(gen_output);
        write_edge_list(out.stream(), g);
        std::cerr << "vertices " << g.num_vertices() << " edges " << g.num_edges() << '\n';
      } else {
        lfr.n = n;
        lfr.mean_degree = k_avg;
        lfr.seed = gen_seed;
        auto pg = generate_lfr(lfr);
        Output out(gen_output);
        write_edge_list(out.stream(), pg.graph);
        if (!gen_communities.empty()) save_partition(gen_communities, pg.graph, pg.communities);
        std::cerr << "vertices " << pg.graph.num_vertices() << " edges " << pg.graph.num_edges()
                  << " communities " << pg.communities.num_communities() << " mixing "
                  << intercommunity_fraction(pg) << '\n';
      }
    } else if (*deg) {
      Graph g = load_graph(deg_graph);
      std::size_t target = target_edge_count(g, deg_fraction);
      if (deg_suite) {
        auto suite = make_community_suite(g, target, deg_seed);
        std::ofstream prov(deg_output + ".prov");
        if (!prov) throw Error(ErrorKind::kIo, "cannot write '" + deg_output + ".prov'");
        const std::pair<const char*, const DegradedNetwork*> parts[] = {
            {"crawled", &suite.crawled},
            {"induced", &suite.induced},
            {"random", &suite.random_deletion},
            {"limited", &suite.limited_degree}};
        for (auto [name, dn] : parts) {
          save_edge_list(deg_output + "." + name + ".txt", dn->observed);
          write_provenance(prov, name, g, *dn, deg_fraction);
        }
      } else {
        DegradedNetwork dn;
        auto kind = *parse_degradation_kind(deg_model);
        if (kind == DegradationKind::kCrawled) {
          dn = crawl(g, target, deg_seed);
        } else if (kind == DegradationKind::kRandomDeletion) {
          dn = random_delete(g, target, deg_seed, deg_connected);
        } else {
          dn = limited_degree_delete(g, target, deg_seed, deg_connected);
        }
        save_edge_list(deg_output, dn.observed);
        std::ofstream prov(deg_output + ".prov");
        if (!prov) throw Error(ErrorKind::kIo, "cannot write '" + deg_output + ".prov'");
        write_provenance(prov, deg_model, g, dn, deg_fraction);
      }
    } else if (*pred) {
      Graph g = load_graph(pred_graph);
      auto scorers = parse_scorer_list(pred_methods);
      auto pairs = candidate_pairs(g);
      auto scored = score_all(g, pairs, scorers, std::max(1u, std::thread::hardware_concurrency()));
      Output out(pred_output);
      write_scores_csv(out.stream(), g, scored);
    } else if (*comm) {
      Graph g = load_graph(comm_graph);
      auto p = detect(*parse_detector(comm_algo), g, comm_seed);
      Output out(comm_output);
      write_partition(out.stream(), g, p);
      if (g.num_edges() > 0) std::cerr << "modularity " << format_double(modularity(g, p)) << '\n';
    } else if (*aucc) {
      std::ifstream in(auc_scores);
      if (!in) throw Error(ErrorKind::kIo, "cannot open '" + auc_scores + "'");
      auto labeled = read_scores_csv(in);
      std::unordered_map<std::string, Vertex> ids;
      for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
        ids.emplace(labeled.labels[i], static_cast<Vertex>(i));
      }
      Graph missing = load_edge_list(auc_positives);
      std::vector<Edge> positives;
      for (Edge e : missing.edges()) {
        auto a = ids.find(missing.label(e.u));
        auto b = ids.find(missing.label(e.v));
        if (a == ids.end() || b == ids.end()) {
          throw Error(ErrorKind::kInvalidArgument, "positive (" + missing.label(e.u) + ", " +
                                                       missing.label(e.v) + ") is not a scored pair");
        }
        positives.push_back(make_edge(a->second, b->second));
      }
      auto methods = auc_method.empty() ? labeled.scores.methods : std::vector<std::string>{auc_method};
      std::cout << "method,auc,n_comparisons,n_wins,n_ties,mode\n";
      for (const auto& m : methods) {
        auto r = auc(labeled.scores, positives, m, *parse_auc_mode(auc_mode), auc_samples, auc_seed);
        std::cout << m << ',' << format_double(r.auc) << ',' << r.n_comparisons << ',' << r.n_wins
                  << ',' << r.n_ties << ',' << to_string(r.mode) << '\n';
      }
    } else if (*nmic) {
      auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
        return read_labeled_partition(in);
      };
      auto a = read(nmi_a);
      auto b = read(nmi_b);
      std::unordered_map<std::string, std::string> b_of;
      for (std::size_t i = 0; i < b.labels.size(); ++i) b_of.emplace(b.labels[i], b.communities[i]);
      if (b_of.size() != a.labels.size() || b.labels.size() != a.labels.size()) {
        throw Error(ErrorKind::kInvalidArgument, "partitions cover different vertex sets");
      }
      std::unordered_map<std::string, std::uint64_t> ca, cb;
      std::vector<std::uint64_t> raw_a, raw_b;
      for (std::size_t i = 0; i < a.labels.size(); ++i) {
        auto it = b_of.find(a.labels[i]);
        if (it == b_of.end()) {
          throw Error(ErrorKind::kInvalidArgument, "vertex '" + a.labels[i] + "' missing from " + nmi_b);
        }
        raw_a.push_back(ca.emplace(a.communities[i], ca.size()).first->second);
        raw_b.push_back(cb.emplace(it->second, cb.size()).first->second);
      }
      std::cout << format_double(nmi(Partition(raw_a), Partition(raw_b))) << '\n';
    } else if (*exp) {
      ExperimentPlan plan = load_plan(exp_plan);
      if (!exp_pipeline.empty()) {
        plan.pipeline = exp_pipeline == "prediction" ? Pipeline::kPrediction : Pipeline::kCommunity;
      }
      if (!exp_fractions.empty()) plan.fractions = parse_fraction_list(exp_fractions);
      if (!exp_models.empty()) {
        plan.models.clear();
        for (const auto& m : split_list(exp_models)) {
          auto kind = parse_degradation_kind(m);
          if (!kind) throw Error(ErrorKind::kInvalidArgument, "unknown model '" + m + "'");
          plan.models.push_back(*kind);
        }
      }
      if (!exp_methods.empty()) plan.methods = split_list(exp_methods);
      if (exp_replicas) plan.replicas = *exp_replicas;
      if (exp_seed) plan.master_seed = *exp_seed;
      if (exp_threads) plan.threads = *exp_threads;
      if (!exp_output_dir.empty()) plan.output_dir = exp_output_dir;
      if (plan.output_dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        plan.output_dir = env && *env ? env : ".";
      }
      if (plan.source.kind == SourceSpec::Kind::kEdgeList && plan.source.path.is_relative()) {
        plan.source.path = fs::path(exp_plan).parent_path() / plan.source.path;
      }

      auto rows = run_experiment(plan);
      fs::create_directories(plan.output_dir);
      {
        Output out((plan.output_dir / "results.csv").string());
        write_results_csv(out.stream(), rows);
      }
      {
        Output out((plan.output_dir / "summary.csv").string());
        write_summary_csv(out.stream(), summarize(rows));
      }
      std::cerr << rows.size() << " rows written to " << (plan.output_dir / "results.csv").string()
                << '\n';
    } else if (*sum) {
      std::ifstream in(sum_input);
      if (!in) throw Error(ErrorKind::kIo, "cannot open '" + sum_input + "'");
      auto rows = read_results_csv(in);
      Output out(sum_output);
      write_summary_csv(out.stream(), summarize(rows));
    }
  } catch (const Error& e) {
    std::cerr << "error:" << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
