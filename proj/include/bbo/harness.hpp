#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bbo/benchmarks.hpp"
#include "bbo/metrics.hpp"
#include "bbo/reference.hpp"
#include "bbo/strategies.hpp"

namespace bbo {

enum class BenchmarkKind { qubo, hubo };

std::string to_string(BenchmarkKind kind);
std::optional<BenchmarkKind> benchmark_from_string(const std::string& name);

struct BenchmarkInstance {
  BenchmarkKind kind = BenchmarkKind::qubo;
  int id = 0;
  std::uint64_t seed = 0;
  QuboInstance qubo;  // populated when kind == qubo
  HuboInstance hubo;  // populated when kind == hubo

  int dim() const;
  std::unique_ptr<PseudoBooleanObjective> make_objective() const;
};

// All instances share the same initial points; everything is regenerable
// from (kind, d, master_seed) alone.
struct InstanceSuite {
  BenchmarkKind kind = BenchmarkKind::qubo;
  int d = 0;
  std::uint64_t master_seed = 0;
  std::vector<BenchmarkInstance> instances;
  std::vector<BinaryVector> initial_points;
};

InstanceSuite make_suite(BenchmarkKind kind, int d, int instance_count, int initial_count,
                         std::uint64_t master_seed);

struct ReferenceConfig {
  std::string mode = "auto";  // auto | exhaustive | sa
  int sa_runs = 1000;
  int sa_sweeps = 1000;
  int exhaustive_cap = 25;
};

// Reference for one instance; a pure function of (instance, config). Results
// are cached under cache_dir (pass empty to disable caching).
ReferenceValue compute_reference(const BenchmarkInstance& instance, const ReferenceConfig& cfg,
                                 const std::filesystem::path& cache_dir);

struct ExperimentConfig {
  BenchmarkKind kind = BenchmarkKind::qubo;
  int d = 50;
  int instance_count = 50;
  int iterations = 500;
  int initial_count = 50;
  std::vector<StrategyKind> strategies = {StrategyKind::gp_hedge_only,
                                          StrategyKind::bocs_random,
                                          StrategyKind::bocs_gp_hedge};
  AcquisitionSaConfig acquisition_sa;
  GibbsConfig gibbs;
  HedgeConfig hedge;
  double gp_jitter = 1e-8;
  double gamma_lo = 1e-3;
  double gamma_hi = 3.1622776601683795;  // 10^0.5
  int gamma_count = 15;
  std::vector<double> sparsity_levels;  // empty: full surrogate, no level suffix
  ReferenceConfig reference;
  std::uint64_t seed = 0;
  std::string output_dir;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  GpConfig gp_config() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct TraceMetadata {
  std::string strategy;
  int instance_id = 0;
  BenchmarkKind kind = BenchmarkKind::qubo;
  int d = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t run_seed = 0;
  std::optional<double> sparsity;
  double f_ref = 0.0;
  std::string ref_method;
  std::optional<BinaryVector> ref_minimizer;
};

// line-delimited records; doubles are printed with 17 significant digits so
// parsing reproduces them bit-exactly
void write_trace(std::ostream& os, const TraceMetadata& meta, const RunTrace& trace);
std::pair<TraceMetadata, RunTrace> read_trace(std::istream& is);

std::string trace_filename(const std::string& strategy, int instance_id,
                           std::optional<double> sparsity);

// per-instance run seed / mask seed, pure functions of the master seed
std::uint64_t run_seed_for(std::uint64_t master_seed, StrategyKind kind, int instance_id,
                           std::optional<double> sparsity);
std::uint64_t mask_seed_for(std::uint64_t master_seed, int instance_id, double sparsity);

// Builds the suite, computes references, runs every strategy on every
// instance (per sparsity level when configured), writes traces under
// <output>/traces, then aggregates by re-reading them from disk.
void run_experiment(const ExperimentConfig& cfg);

// Re-derives curves and summary tables from the trace files in <output>/traces.
void write_report(const std::filesystem::path& output_dir);

}  // namespace bbo
