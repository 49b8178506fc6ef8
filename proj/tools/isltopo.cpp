// isltopo: generate candidate links, optimize one topology, evaluate a
// topology file, or run a full trial matrix.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "isltopo/isltopo.hpp"

namespace fs = std::filesystem;
using namespace isltopo;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string model;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "base seed (overrides base_seed)");
  cmd->add_option("--jobs", c.jobs, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  cmd->add_option("--model", c.model, "snapshot | viability | both")
      ->check(CLI::IsMember({"snapshot", "viability", "both"}));
}

ExperimentConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  if (c.seed) cfg.base_seed = *c.seed;
  if (!c.model.empty()) cfg.models = parse_models(c.model);
  cfg.validate();
  return cfg;
}

TrialPoint first_point(const ExperimentConfig& cfg) { return {cfg.models.front(), cfg.feasibility.d_max_km}; }

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int cmd_generate(const Common& c, const std::string& out) {
  const auto cfg = load(c);
  const auto s = build_scenario(cfg, trial_seed(cfg, 0), first_point(cfg));
  write_candidates_csv(out, *s.edges);
  write_satellites_csv(sibling(out, "_satellites.csv"), s.constellation, cfg.t0_s);
  std::cerr << s.constellation.n_sats() << " satellites, " << s.edges->n_edges() << " candidate links ("
            << to_string(s.point.model) << ", d_max " << s.point.d_max_km << " km)\n";
  return 0;
}

int cmd_optimize(const Common& c, const std::string& method, const std::string& out) {
  auto cfg = load(c);
  cfg.methods = {parse_method(method)};
  const auto results = run_trial(cfg, 0, first_point(cfg));
  const auto& r = results.back();
  fs::create_directories(out);
  if (r.failed) throw Error("optimization failed: " + r.error);
  write_topology_file((fs::path(out) / "topology.txt").string(), r.topology);
  if (r.method == Method::spectral) write_trace_csv((fs::path(out) / "trace.csv").string(), r.trace);
  auto j = metrics_json(r.metrics);
  j["method"] = to_string(r.method);
  j["model"] = to_string(r.model);
  j["seed"] = r.seed;
  j["d_max_km"] = r.d_max_km;
  j["lambda2"] = r.lambda2_final ? nlohmann::json(*r.lambda2_final) : nlohmann::json(nullptr);
  j["wall_time_s"] = r.wall_time_s;
  std::ofstream mf(fs::path(out) / "metrics.json");
  mf << j.dump(2) << '\n';
  if (!mf) throw IoError((fs::path(out) / "metrics.json").string(), "write failed");
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& topology_path) {
  const auto cfg = load(c);
  const auto s = build_scenario(cfg, trial_seed(cfg, 0), first_point(cfg));
  const auto topo = read_topology_file(topology_path, s.edges);
  auto j = metrics_json(evaluate_topology(topo, &s.stable_flags));
  const StrengthVector x = warm_start(topo, *s.edges);
  j["lambda2"] = algebraic_connectivity(*s.edges, x);
  j["degree_feasible"] = verify_degree_feasible(topo, cfg.pga.degree_budget).feasible;
  j["model"] = to_string(s.point.model);
  j["seed"] = s.seed;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_experiment(const Common& c, const std::string& out) {
  const auto cfg = load(c);
  auto progress = [](const TrialResult& r) {
    std::cerr << "trial " << r.trial_index << " " << to_string(r.method) << " " << to_string(r.model) << " d_max "
              << r.d_max_km << ": ";
    if (r.failed) std::cerr << "FAILED " << r.error;
    else std::cerr << "diameter " << r.metrics.diameter_hops << ", min degree " << r.metrics.min_degree;
    std::cerr << " (" << r.wall_time_s << " s)\n";
  };
  const auto result = run_experiment(cfg, c.jobs, progress);
  write_results(out, result, cfg);
  std::cout << summary_json(result.summaries).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-satellite link topology design"};
  app.require_subcommand(1);

  Common gen_c, opt_c, eval_c, exp_c;
  std::string gen_out, opt_out, opt_method = "spectral", eval_topo, exp_out;

  auto* gen = app.add_subcommand("generate", "emit satellites and candidate links");
  add_common(gen, gen_c);
  gen->add_option("--out", gen_out, "candidate CSV path")->required();

  auto* opt = app.add_subcommand("optimize", "run one trial and write its topology");
  add_common(opt, opt_c);
  opt->add_option("--method", opt_method, "spectral | heuristic")->check(CLI::IsMember({"spectral", "heuristic"}));
  opt->add_option("--out", opt_out, "output directory")->required();

  auto* eval = app.add_subcommand("evaluate", "print metrics of a topology file as JSON");
  add_common(eval, eval_c);
  eval->add_option("--topology", eval_topo, "topology file")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("experiment", "run the full trial matrix");
  add_common(exp, exp_c);
  exp->add_option("--out", exp_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(gen_c, gen_out);
    if (opt->parsed()) return cmd_optimize(opt_c, opt_method, opt_out);
    if (eval->parsed()) return cmd_evaluate(eval_c, eval_topo);
    if (exp->parsed()) return cmd_experiment(exp_c, exp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
