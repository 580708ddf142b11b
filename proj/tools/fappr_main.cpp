#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "fappr/engine.hpp"
#include "fappr/errors.hpp"
#include "fappr/estimate.hpp"
#include "fappr/eval.hpp"
#include "fappr/graph.hpp"
#include "fappr/oracle.hpp"
#include "fappr/serialize.hpp"

namespace {

using namespace fappr;

const std::map<std::string, Weighting> kWeightings{
    {"given", Weighting::given}, {"uniform", Weighting::uniform}, {"linear", Weighting::linear}};

WeightedGraph read_graph(const std::string& path, Weighting weighting) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return load_edge_list(in, weighting);
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path);
}

ScoreTable read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_score_tsv(in);
}

struct RunArgs {
  std::string graph;
  std::string out;
  std::string telemetry;
  std::string id_map;
  std::string weighting = "given";
  double alpha = 0.5;
  double eps = 0.5;
  double delta = 0.5;
  double pf = 0.0;
  std::uint64_t omega = 0;
  std::uint64_t gamma = 0;
  std::uint64_t mem = std::uint64_t{256} << 20;
  std::string bm = "on";
  std::string alias_tree = "on";
  std::uint64_t seed = 0;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::uint32_t d = 0;
  std::uint32_t bm_d = 0;
};

int do_run(const RunArgs& a) {
  const WeightedGraph g = read_graph(a.graph, kWeightings.at(a.weighting));
  RunConfig cfg;
  cfg.alpha = a.alpha;
  cfg.epsilon = a.eps;
  cfg.delta = a.delta;
  cfg.failure_prob = a.pf;
  if (a.omega > 0) cfg.omega = a.omega;
  if (a.gamma > 0) cfg.gamma = a.gamma;
  cfg.memory_budget = a.mem;
  cfg.big_moves = a.bm == "on";
  cfg.alias_trees = a.alias_tree == "on";
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  if (a.d > 0) {
    cfg.tree_block_size = a.d;
    cfg.big_move_threshold = a.d;
  }
  if (a.bm_d > 0) cfg.big_move_threshold = a.bm_d;
  if (cfg.omega && cfg.gamma && *cfg.gamma > *cfg.omega) cfg.gamma = cfg.omega;

  const RunResult result = run_fappr(g, cfg);

  auto out = open_output(a.out);
  write_result_tsv(result.estimates, g, out);
  finish(out, a.out);

  const std::string tel_path = a.telemetry.empty() ? a.out + ".telemetry.tsv" : a.telemetry;
  auto tel = open_output(tel_path);
  write_telemetry(result.telemetry, tel);
  finish(tel, tel_path);

  if (!a.id_map.empty()) {
    auto ids = open_output(a.id_map);
    write_id_map(g, ids);
    finish(ids, a.id_map);
  }

  for (const RoundTelemetry& t : result.telemetry) {
    if (t.over_budget) {
      std::cerr << "warning: round " << t.round << " held " << t.active
                << " walks, more than 10% over the memory budget\n";
      break;
    }
  }
  std::cerr << "omega=" << result.omega << " gamma=" << result.gamma << " pipelines=" << result.pipelines
            << " rounds=" << result.telemetry.size() << " samples=" << result.counters.samples << '\n';
  return 0;
}

int do_oracle(const std::string& graph, const std::string& weighting, double alpha, double tol,
              const std::string& out_path) {
  const WeightedGraph g = read_graph(graph, kWeightings.at(weighting));
  const ExactPpr ppr = exact_ppr(g, alpha, tol);
  auto out = open_output(out_path);
  write_score_tsv(ppr.scores, g, out);
  finish(out, out_path);
  return 0;
}

int do_eval(const std::string& est_path, const std::string& truth_path, std::size_t k, const std::string& out_path) {
  const ScoreTable est = read_scores(est_path);
  const ScoreTable truth = read_scores(truth_path);
  const MetricsReport report = evaluate(est, truth, k);
  auto out = open_output(out_path);
  write_metrics_tsv(report, out);
  finish(out, out_path);
  std::printf("mean_ndcg\t%.9g\nmean_map\t%.9g\n", report.mean_ndcg, report.mean_map);
  return 0;
}

int do_precompute(const std::string& graph, const std::string& weighting, std::uint32_t d, double alpha,
                  unsigned workers, const std::string& dir) {
  const WeightedGraph g = read_graph(graph, kWeightings.at(weighting));
  SamplerOptions opts;
  opts.alpha = alpha;
  opts.tree_block_size = d;
  opts.big_move_threshold = d;
  opts.workers = workers;
  const Samplers samplers = Samplers::build(g, opts);

  std::filesystem::create_directories(dir);
  const std::string alias_path = (std::filesystem::path(dir) / "alias.bin").string();
  const std::string bm_path = (std::filesystem::path(dir) / "bigmoves.bin").string();
  auto alias_out = open_output(alias_path, std::ios::binary);
  write_samplers(alias_out, samplers);
  finish(alias_out, alias_path);
  auto bm_out = open_output(bm_path, std::ios::binary);
  write_big_moves(bm_out, samplers.big_moves());
  finish(bm_out, bm_path);
  std::cerr << "big-move nodes=" << samplers.big_moves().nodes().size() << '\n';
  return 0;
}

int do_stats(const std::string& graph, const std::string& weighting) {
  const WeightedGraph g = read_graph(graph, kWeightings.at(weighting));
  const DegreeStats s = degree_stats(g);
  const double n = static_cast<double>(std::max<std::size_t>(g.node_count(), 1));
  std::printf("n\t%zu\nedges\t%zu\nd_avg\t%.6g\nd_max\t%zu\nsmall_fraction\t%.6g\nlarge_fraction\t%.6g\n",
              g.node_count(), g.edge_count(), s.d_avg, s.d_max, static_cast<double>(s.small_nodes.size()) / n,
              static_cast<double>(s.large_nodes.size()) / n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate all-pairs personalized PageRank on weighted directed graphs"};
  app.require_subcommand(1);

  const auto on_off = CLI::IsMember({"on", "off"});
  const auto weighting_names = CLI::IsMember({"given", "uniform", "linear"});
  const CLI::Validator open_unit(
      [](std::string& text) -> std::string {
        double x = 0.0;
        if (!CLI::detail::lexical_cast(text, x) || !(x > 0.0 && x < 1.0)) return "must lie strictly between 0 and 1";
        return "";
      },
      "(0,1)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Estimate PPR for every source");
  run_cmd->add_option("--graph", run.graph, "Edge list: src dst [weight]")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Result TSV: source target score")->required();
  run_cmd->add_option("--alpha", run.alpha, "Termination probability")->check(open_unit)->capture_default_str();
  run_cmd->add_option("--eps", run.eps, "Relative accuracy")->check(open_unit)->capture_default_str();
  run_cmd->add_option("--delta", run.delta, "Score threshold")->check(open_unit)->capture_default_str();
  run_cmd->add_option("--pf", run.pf, "Failure probability (default 1/n)")->check(open_unit);
  run_cmd->add_option("--omega", run.omega, "Walks per source (overrides eps/delta/pf)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--gamma", run.gamma, "Walks per source per pipeline")->check(CLI::PositiveNumber);
  run_cmd->add_option("--mem", run.mem, "Memory budget for walks in flight, bytes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--bm", run.bm, "Big moves for small nodes")->check(on_off)->capture_default_str();
  run_cmd->add_option("--alias-tree", run.alias_tree, "Alias trees for large nodes")
      ->check(on_off)
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--d", run.d, "Alias tree block size and big-move threshold")->check(CLI::Range(2U, UINT32_MAX));
  run_cmd->add_option("--bm-d", run.bm_d, "Big-move threshold only")->check(CLI::PositiveNumber);
  run_cmd->add_option("--telemetry", run.telemetry, "Per-round telemetry TSV (default OUT.telemetry.tsv)");
  run_cmd->add_option("--weighting", run.weighting, "Edge weights: given, uniform or linear")
      ->check(weighting_names)
      ->capture_default_str();
  run_cmd->add_option("--id-map", run.id_map, "Write internal-to-original id map here");

  std::string o_graph, o_out, o_weighting = "given";
  double o_alpha = 0.5, o_tol = 1e-9;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact PPR for every source (small graphs)");
  oracle_cmd->add_option("--graph", o_graph, "Edge list")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--out", o_out, "Score TSV")->required();
  oracle_cmd->add_option("--alpha", o_alpha, "Termination probability")->check(open_unit)->capture_default_str();
  oracle_cmd->add_option("--tol", o_tol, "Tail mass at which the series stops")->check(open_unit)->capture_default_str();
  oracle_cmd->add_option("--weighting", o_weighting, "Edge weights")->check(weighting_names)->capture_default_str();

  std::string e_est, e_truth, e_out;
  std::size_t e_k = 10;
  auto* eval_cmd = app.add_subcommand("eval", "NDCG and MAP of an estimate against ground truth");
  eval_cmd->add_option("--est", e_est, "Estimated scores TSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", e_truth, "True scores TSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--k", e_k, "Ranking cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  eval_cmd->add_option("--out", e_out, "Metrics TSV")->required();

  std::string p_graph, p_out, p_weighting = "given";
  std::uint32_t p_d = 16;
  double p_alpha = 0.5;
  unsigned p_workers = std::max(1U, std::thread::hardware_concurrency());
  auto* pre_cmd = app.add_subcommand("precompute", "Build and save alias structures and big moves");
  pre_cmd->add_option("--graph", p_graph, "Edge list")->required()->check(CLI::ExistingFile);
  pre_cmd->add_option("--out", p_out, "Output directory")->required();
  pre_cmd->add_option("--d", p_d, "Alias tree block size and big-move threshold")
      ->check(CLI::Range(2U, UINT32_MAX))
      ->capture_default_str();
  pre_cmd->add_option("--alpha", p_alpha, "Termination probability")->check(open_unit)->capture_default_str();
  pre_cmd->add_option("--workers", p_workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  pre_cmd->add_option("--weighting", p_weighting, "Edge weights")->check(weighting_names)->capture_default_str();

  std::string s_graph, s_weighting = "given";
  auto* stats_cmd = app.add_subcommand("stats", "Degree statistics");
  stats_cmd->add_option("--graph", s_graph, "Edge list")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--weighting", s_weighting, "Edge weights")->check(weighting_names)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*oracle_cmd) return do_oracle(o_graph, o_weighting, o_alpha, o_tol, o_out);
    if (*eval_cmd) return do_eval(e_est, e_truth, e_k, e_out);
    if (*pre_cmd) return do_precompute(p_graph, p_weighting, p_d, p_alpha, p_workers, p_out);
    if (*stats_cmd) return do_stats(s_graph, s_weighting);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
