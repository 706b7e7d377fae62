// Command-line front end: suite generation, reference values, experiment
// runs, and report regeneration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bbo/harness.hpp"
#include "bbo/parallel.hpp"

namespace fs = std::filesystem;

namespace {

bbo::BenchmarkKind parse_kind(const std::string& name) {
  const auto kind = bbo::benchmark_from_string(name);
  if (!kind) throw CLI::ValidationError("--kind must be qubo or hubo");
  return *kind;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

int cmd_generate(const std::string& kind_name, int d, int instances, int initial,
                 std::uint64_t seed, const std::string& out_dir) {
  const bbo::BenchmarkKind kind = parse_kind(kind_name);
  const bbo::InstanceSuite suite = bbo::make_suite(kind, d, instances, initial, seed);

  const fs::path out(out_dir);
  fs::create_directories(out / "instances");

  nlohmann::json manifest;
  manifest["kind"] = bbo::to_string(kind);
  manifest["d"] = d;
  manifest["master_seed"] = seed;
  nlohmann::json seeds = nlohmann::json::array();
  nlohmann::json points = nlohmann::json::array();
  for (const auto& inst : suite.instances) seeds.push_back(inst.seed);
  for (const auto& p : suite.initial_points) points.push_back(p.to_string());
  manifest["instance_seeds"] = seeds;
  manifest["initial_points"] = points;
  write_file(out / "suite.json", manifest.dump(2) + "\n");

  for (const auto& inst : suite.instances) {
    char name[64];
    std::snprintf(name, sizeof(name), "inst%03d.json", inst.id);
    const nlohmann::json j = kind == bbo::BenchmarkKind::qubo
                                 ? bbo::qubo_to_json(inst.qubo, inst.seed)
                                 : bbo::hubo_to_json(inst.hubo, inst.seed);
    write_file(out / "instances" / name, j.dump(2) + "\n");
  }
  std::cout << "wrote " << suite.instances.size() << " instances to " << out_dir << "\n";
  return 0;
}

int cmd_reference(const std::string& suite_dir, const bbo::ReferenceConfig& ref_cfg,
                  int threads) {
  const fs::path dir(suite_dir);
  std::ifstream is(dir / "suite.json");
  if (!is) throw std::runtime_error("cannot open suite.json under " + suite_dir);
  nlohmann::json manifest;
  is >> manifest;

  const auto kind = bbo::benchmark_from_string(manifest.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("suite.json: unknown kind");
  const int d = manifest.at("d").get<int>();
  const auto seeds = manifest.at("instance_seeds").get<std::vector<std::uint64_t>>();

  std::vector<bbo::BenchmarkInstance> instances(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    bbo::BenchmarkInstance& inst = instances[i];
    inst.kind = *kind;
    inst.id = static_cast<int>(i);
    inst.seed = seeds[i];
    if (*kind == bbo::BenchmarkKind::qubo) {
      inst.qubo = bbo::generate_qubo(d, inst.seed);
    } else {
      inst.hubo = bbo::generate_hubo(d, inst.seed);
    }
  }

  fs::create_directories(dir / "refs");
  std::vector<bbo::ReferenceValue> refs(instances.size());
  bbo::parallel_for(static_cast<int>(instances.size()), threads, [&](int i) {
    refs[static_cast<std::size_t>(i)] =
        bbo::compute_reference(instances[static_cast<std::size_t>(i)], ref_cfg, dir / "refs");
  });
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::cout << "instance " << i << ": f_ref=" << refs[i].value << " ("
              << bbo::to_string(refs[i].method) << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete black-box optimization benchmark harness"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a benchmark instance suite");
  std::string g_kind = "qubo", g_out = "suite";
  int g_d = 50, g_instances = 50, g_initial = 50;
  std::uint64_t g_seed = 0;
  generate->add_option("--kind", g_kind, "qubo or hubo");
  generate->add_option("--d", g_d, "dimension");
  generate->add_option("--instances", g_instances, "number of instances");
  generate->add_option("--initial", g_initial, "number of shared initial points");
  generate->add_option("--seed", g_seed, "master seed")->required();
  generate->add_option("--out", g_out, "output directory");

  // reference
  auto* reference = app.add_subcommand("reference", "Compute reference values for a suite");
  std::string r_suite = "suite";
  bbo::ReferenceConfig r_cfg;
  int r_threads = 0;
  reference->add_option("--suite", r_suite, "suite directory (from `generate`)");
  reference->add_option("--mode", r_cfg.mode, "auto | exhaustive | sa");
  reference->add_option("--sa-runs", r_cfg.sa_runs, "SA oracle restarts");
  reference->add_option("--sa-sweeps", r_cfg.sa_sweeps, "SA oracle sweeps per run");
  reference->add_option("--cap", r_cfg.exhaustive_cap, "max dimension for exhaustive search");
  reference->add_option("--threads", r_threads, "worker threads (0 = hardware)");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string run_config_file;
  std::string run_kind, run_strategies, run_sparsities, run_out, run_ref_mode;
  int run_d = -1, run_instances = -1, run_iterations = -1, run_initial = -1, run_threads = -1;
  int run_gibbs_sweeps = -1, run_sa_restarts = -1, run_sa_sweeps = -1;
  std::uint64_t run_seed = 0;
  run->add_option("--config", run_config_file, "JSON config file (flags override it)");
  run->add_option("--kind", run_kind, "qubo or hubo");
  run->add_option("--d", run_d, "dimension");
  run->add_option("--instances", run_instances, "number of instances");
  run->add_option("--iterations", run_iterations, "iterations T");
  run->add_option("--initial", run_initial, "shared initial points");
  run->add_option("--strategies", run_strategies,
                  "comma-separated: bocs-gp-hedge, gp-hedge-only, bocs-random, bocs-spinflip");
  run->add_option("--sparsity", run_sparsities, "comma-separated sparsity levels in [0,1]");
  run->add_option("--gibbs-sweeps", run_gibbs_sweeps, "Gibbs sweeps per surrogate fit");
  run->add_option("--sa-restarts", run_sa_restarts, "acquisition SA restarts");
  run->add_option("--sa-sweeps", run_sa_sweeps, "acquisition SA sweeps");
  run->add_option("--ref-mode", run_ref_mode, "reference mode: auto | exhaustive | sa");
  run->add_option("--threads", run_threads, "worker threads (0 = hardware)");
  run->add_option("--seed", run_seed, "master seed")->required();
  run->add_option("--out", run_out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "Rebuild report CSVs from stored traces");
  std::string rep_out;
  report->add_option("--out", rep_out, "experiment output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return cmd_generate(g_kind, g_d, g_instances, g_initial, g_seed, g_out);
    }
    if (reference->parsed()) {
      return cmd_reference(r_suite, r_cfg, r_threads);
    }
    if (run->parsed()) {
      bbo::ExperimentConfig cfg;
      if (!run_config_file.empty()) {
        std::ifstream is(run_config_file);
        if (!is) throw std::runtime_error("cannot open config " + run_config_file);
        nlohmann::json j;
        is >> j;
        cfg = bbo::config_from_json(j);
      }
      if (!run_kind.empty()) cfg.kind = parse_kind(run_kind);
      if (run_d > 0) cfg.d = run_d;
      if (run_instances > 0) cfg.instance_count = run_instances;
      if (run_iterations > 0) cfg.iterations = run_iterations;
      if (run_initial > 0) cfg.initial_count = run_initial;
      if (run_gibbs_sweeps > 0) cfg.gibbs.sweeps = run_gibbs_sweeps;
      if (run_sa_restarts > 0) cfg.acquisition_sa.restarts = run_sa_restarts;
      if (run_sa_sweeps > 0) cfg.acquisition_sa.sweeps = run_sa_sweeps;
      if (!run_ref_mode.empty()) cfg.reference.mode = run_ref_mode;
      if (run_threads >= 0) cfg.threads = run_threads;
      if (!run_strategies.empty()) {
        cfg.strategies.clear();
        std::stringstream ss(run_strategies);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto kind = bbo::strategy_from_string(item);
          if (!kind) throw CLI::ValidationError("unknown strategy: " + item);
          cfg.strategies.push_back(*kind);
        }
      }
      if (!run_sparsities.empty()) {
        cfg.sparsity_levels.clear();
        std::stringstream ss(run_sparsities);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.sparsity_levels.push_back(std::stod(item));
      }
      cfg.seed = run_seed;
      if (!run_out.empty()) cfg.output_dir = run_out;
      bbo::run_experiment(cfg);
      std::cout << "experiment complete: " << cfg.output_dir << "\n";
      return 0;
    }
    if (report->parsed()) {
      bbo::write_report(rep_out);
      std::cout << "report written under " << rep_out << "/report\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
