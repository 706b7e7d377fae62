#include "bbo/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "bbo/parallel.hpp"
#include "bbo/sparse_model.hpp"

namespace bbo {

namespace fs = std::filesystem;

std::string to_string(BenchmarkKind kind) {
  return kind == BenchmarkKind::qubo ? "qubo" : "hubo";
}

std::optional<BenchmarkKind> benchmark_from_string(const std::string& name) {
  if (name == "qubo") return BenchmarkKind::qubo;
  if (name == "hubo") return BenchmarkKind::hubo;
  return std::nullopt;
}

int BenchmarkInstance::dim() const {
  return kind == BenchmarkKind::qubo ? qubo.d : hubo.d;
}

std::unique_ptr<PseudoBooleanObjective> BenchmarkInstance::make_objective() const {
  if (kind == BenchmarkKind::qubo) return std::make_unique<QuboObjective>(qubo);
  return std::make_unique<HuboObjective>(hubo);
}

namespace {

constexpr std::uint64_t kTagInitialPoints = 1;
constexpr std::uint64_t kTagInstanceBase = 0x100;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("parse_double: trailing characters");
  return v;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

int sparsity_permille(double level) {
  return static_cast<int>(std::llround(level * 1000.0));
}

}  // namespace

InstanceSuite make_suite(BenchmarkKind kind, int d, int instance_count, int initial_count,
                         std::uint64_t master_seed) {
  if (d < 1 || instance_count < 1 || initial_count < 1) {
    throw std::invalid_argument("make_suite: d, instance_count, initial_count must be >= 1");
  }
  InstanceSuite suite;
  suite.kind = kind;
  suite.d = d;
  suite.master_seed = master_seed;
  suite.initial_points =
      generate_initial_points(d, initial_count, derive_seed(master_seed, kTagInitialPoints));
  suite.instances.reserve(static_cast<std::size_t>(instance_count));
  for (int i = 0; i < instance_count; ++i) {
    BenchmarkInstance inst;
    inst.kind = kind;
    inst.id = i;
    inst.seed = derive_seed(master_seed, kTagInstanceBase + static_cast<std::uint64_t>(i));
    if (kind == BenchmarkKind::qubo) {
      inst.qubo = generate_qubo(d, inst.seed);
    } else {
      inst.hubo = generate_hubo(d, inst.seed);
    }
    suite.instances.push_back(std::move(inst));
  }
  return suite;
}

namespace {

nlohmann::json reference_to_json(const ReferenceValue& ref) {
  nlohmann::json j;
  j["value"] = ref.value;
  j["method"] = to_string(ref.method);
  if (ref.minimizer) j["minimizer"] = ref.minimizer->to_string();
  return j;
}

ReferenceValue reference_from_json(const nlohmann::json& j) {
  ReferenceValue ref;
  ref.value = j.at("value").get<double>();
  const std::string method = j.at("method").get<std::string>();
  ref.method = method == "exhaustive" ? ReferenceMethod::exhaustive
                                      : ReferenceMethod::multi_restart_sa;
  if (j.contains("minimizer")) {
    ref.minimizer = BinaryVector::from_string(j.at("minimizer").get<std::string>());
  }
  return ref;
}

}  // namespace

ReferenceValue compute_reference(const BenchmarkInstance& instance, const ReferenceConfig& cfg,
                                 const fs::path& cache_dir) {
  const bool exhaustive =
      cfg.mode == "exhaustive" || (cfg.mode == "auto" && instance.dim() <= cfg.exhaustive_cap);

  char name[128];
  if (exhaustive) {
    std::snprintf(name, sizeof(name), "ref_%s_d%d_seed%" PRIu64 "_exhaustive.json",
                  to_string(instance.kind).c_str(), instance.dim(), instance.seed);
  } else {
    std::snprintf(name, sizeof(name), "ref_%s_d%d_seed%" PRIu64 "_sa_r%d_w%d.json",
                  to_string(instance.kind).c_str(), instance.dim(), instance.seed, cfg.sa_runs,
                  cfg.sa_sweeps);
  }

  const fs::path cache_file = cache_dir.empty() ? fs::path{} : cache_dir / name;
  if (!cache_file.empty() && fs::exists(cache_file)) {
    std::ifstream is(cache_file);
    nlohmann::json j;
    is >> j;
    return reference_from_json(j);
  }

  const auto objective = instance.make_objective();
  ReferenceValue ref;
  if (exhaustive) {
    ref = exhaustive_reference(*objective, cfg.exhaustive_cap);
  } else {
    SaOracleConfig oracle{cfg.sa_runs, cfg.sa_sweeps};
    SeededRng rng(derive_seed(instance.seed, 0x5A17));
    ref = sa_reference(*objective, oracle, rng);
  }
  if (!cache_file.empty()) {
    write_text_file(cache_file, reference_to_json(ref).dump(2) + "\n");
  }
  return ref;
}

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (instance_count < 1) throw std::invalid_argument("config: instances must be >= 1");
  if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
  if (initial_count < 1) throw std::invalid_argument("config: initial points must be >= 1");
  if (strategies.empty()) throw std::invalid_argument("config: no strategies");
  for (double level : sparsity_levels) {
    if (!(level >= 0.0 && level <= 1.0)) {
      throw std::invalid_argument("config: sparsity levels must be in [0,1]");
    }
  }
  if (acquisition_sa.restarts < 1 || acquisition_sa.sweeps < 1) {
    throw std::invalid_argument("config: acquisition SA budget must be >= 1");
  }
  if (gibbs.sweeps < 1) throw std::invalid_argument("config: gibbs sweeps must be >= 1");
  if (!(gp_jitter >= 0.0)) throw std::invalid_argument("config: jitter must be >= 0");
  if (gamma_count < 1 || !(gamma_lo > 0.0) || !(gamma_hi >= gamma_lo)) {
    throw std::invalid_argument("config: invalid gamma grid");
  }
  if (reference.mode != "auto" && reference.mode != "exhaustive" && reference.mode != "sa") {
    throw std::invalid_argument("config: reference mode must be auto|exhaustive|sa");
  }
  if (output_dir.empty()) throw std::invalid_argument("config: output directory required");
}

GpConfig ExperimentConfig::gp_config() const {
  GpConfig gp;
  gp.grid = GammaGrid::logarithmic(gamma_lo, gamma_hi, gamma_count);
  gp.jitter = gp_jitter;
  return gp;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("kind")) {
    const auto kind = benchmark_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("config: unknown kind");
    cfg.kind = *kind;
  }
  cfg.d = j.value("d", cfg.d);
  cfg.instance_count = j.value("instances", cfg.instance_count);
  cfg.iterations = j.value("iterations", cfg.iterations);
  cfg.initial_count = j.value("initial_points", cfg.initial_count);
  if (j.contains("strategies")) {
    cfg.strategies.clear();
    for (const auto& name : j.at("strategies")) {
      const auto kind = strategy_from_string(name.get<std::string>());
      if (!kind) throw std::invalid_argument("config: unknown strategy " + name.get<std::string>());
      cfg.strategies.push_back(*kind);
    }
  }
  if (j.contains("acquisition_sa")) {
    const auto& sa = j.at("acquisition_sa");
    cfg.acquisition_sa.restarts = sa.value("restarts", cfg.acquisition_sa.restarts);
    cfg.acquisition_sa.sweeps = sa.value("sweeps", cfg.acquisition_sa.sweeps);
  }
  if (j.contains("gibbs")) {
    cfg.gibbs.sweeps = j.at("gibbs").value("sweeps", cfg.gibbs.sweeps);
  }
  if (j.contains("hedge")) {
    const auto& h = j.at("hedge");
    if (h.contains("kappas")) cfg.hedge.kappas = h.at("kappas").get<std::vector<double>>();
    cfg.hedge.eta = h.value("eta", cfg.hedge.eta);
  }
  if (j.contains("gp")) {
    const auto& gp = j.at("gp");
    cfg.gp_jitter = gp.value("jitter", cfg.gp_jitter);
    cfg.gamma_lo = gp.value("gamma_lo", cfg.gamma_lo);
    cfg.gamma_hi = gp.value("gamma_hi", cfg.gamma_hi);
    cfg.gamma_count = gp.value("gamma_count", cfg.gamma_count);
  }
  if (j.contains("sparsity_levels")) {
    cfg.sparsity_levels = j.at("sparsity_levels").get<std::vector<double>>();
  }
  if (j.contains("reference")) {
    const auto& r = j.at("reference");
    cfg.reference.mode = r.value("mode", cfg.reference.mode);
    cfg.reference.sa_runs = r.value("sa_runs", cfg.reference.sa_runs);
    cfg.reference.sa_sweeps = r.value("sa_sweeps", cfg.reference.sa_sweeps);
    cfg.reference.exhaustive_cap = r.value("exhaustive_cap", cfg.reference.exhaustive_cap);
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output_dir = j.value("output", cfg.output_dir);
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["kind"] = to_string(cfg.kind);
  j["d"] = cfg.d;
  j["instances"] = cfg.instance_count;
  j["iterations"] = cfg.iterations;
  j["initial_points"] = cfg.initial_count;
  nlohmann::json strategies = nlohmann::json::array();
  for (StrategyKind s : cfg.strategies) strategies.push_back(to_string(s));
  j["strategies"] = strategies;
  j["acquisition_sa"] = {{"restarts", cfg.acquisition_sa.restarts},
                         {"sweeps", cfg.acquisition_sa.sweeps}};
  j["gibbs"] = {{"sweeps", cfg.gibbs.sweeps}};
  j["hedge"] = {{"kappas", cfg.hedge.kappas}, {"eta", cfg.hedge.eta}};
  j["gp"] = {{"jitter", cfg.gp_jitter},
             {"gamma_lo", cfg.gamma_lo},
             {"gamma_hi", cfg.gamma_hi},
             {"gamma_count", cfg.gamma_count}};
  if (!cfg.sparsity_levels.empty()) j["sparsity_levels"] = cfg.sparsity_levels;
  j["reference"] = {{"mode", cfg.reference.mode},
                    {"sa_runs", cfg.reference.sa_runs},
                    {"sa_sweeps", cfg.reference.sa_sweeps},
                    {"exhaustive_cap", cfg.reference.exhaustive_cap}};
  j["seed"] = cfg.seed;
  j["output"] = cfg.output_dir;
  j["threads"] = cfg.threads;
  return j;
}

void write_trace(std::ostream& os, const TraceMetadata& meta, const RunTrace& trace) {
  os << "# bbo-trace v1\n";
  os << "# strategy=" << meta.strategy << "\n";
  os << "# instance=" << meta.instance_id << "\n";
  os << "# kind=" << to_string(meta.kind) << "\n";
  os << "# d=" << meta.d << "\n";
  os << "# instance_seed=" << meta.instance_seed << "\n";
  os << "# run_seed=" << meta.run_seed << "\n";
  if (meta.sparsity) os << "# sparsity=" << format_double(*meta.sparsity) << "\n";
  os << "# f_ref=" << format_double(meta.f_ref) << "\n";
  os << "# ref_method=" << meta.ref_method << "\n";
  if (meta.ref_minimizer) os << "# ref_minimizer=" << meta.ref_minimizer->to_string() << "\n";
  os << "# columns: t bits value source stagnation fallback rewards\n";
  for (const IterationRecord& rec : trace.records) {
    os << rec.t << ' ' << rec.point.to_string() << ' ' << format_double(rec.value) << ' '
       << source_tag(rec.source, rec.detail) << ' ' << (rec.stagnation ? 1 : 0) << ' '
       << (rec.fallback ? 1 : 0) << ' ';
    if (rec.rewards.empty()) {
      os << '-';
    } else {
      for (std::size_t i = 0; i < rec.rewards.size(); ++i) {
        if (i > 0) os << ';';
        os << format_double(rec.rewards[i]);
      }
    }
    os << '\n';
  }
}

std::pair<TraceMetadata, RunTrace> read_trace(std::istream& is) {
  TraceMetadata meta;
  RunTrace trace;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (first) {
        if (line != "# bbo-trace v1") throw std::runtime_error("read_trace: bad magic line");
        first = false;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;  // the columns comment
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "strategy") {
        meta.strategy = value;
      } else if (key == "instance") {
        meta.instance_id = std::stoi(value);
      } else if (key == "kind") {
        const auto kind = benchmark_from_string(value);
        if (!kind) throw std::runtime_error("read_trace: unknown kind");
        meta.kind = *kind;
      } else if (key == "d") {
        meta.d = std::stoi(value);
      } else if (key == "instance_seed") {
        meta.instance_seed = std::stoull(value);
      } else if (key == "run_seed") {
        meta.run_seed = std::stoull(value);
      } else if (key == "sparsity") {
        meta.sparsity = parse_double(value);
      } else if (key == "f_ref") {
        meta.f_ref = parse_double(value);
      } else if (key == "ref_method") {
        meta.ref_method = value;
      } else if (key == "ref_minimizer") {
        meta.ref_minimizer = BinaryVector::from_string(value);
      }
      continue;
    }

    std::istringstream fields(line);
    std::string bits, value_str, source_str, rewards_str;
    int t = 0, stagnation = 0, fallback = 0;
    if (!(fields >> t >> bits >> value_str >> source_str >> stagnation >> fallback >>
          rewards_str)) {
      throw std::runtime_error("read_trace: malformed record: " + line);
    }
    IterationRecord rec;
    rec.t = t;
    rec.point = BinaryVector::from_string(bits);
    rec.value = parse_double(value_str);
    if (!parse_source_tag(source_str, rec.source, rec.detail)) {
      throw std::runtime_error("read_trace: unknown source tag " + source_str);
    }
    rec.stagnation = stagnation != 0;
    rec.fallback = fallback != 0;
    if (rewards_str != "-") {
      std::istringstream rs(rewards_str);
      std::string item;
      while (std::getline(rs, item, ';')) rec.rewards.push_back(parse_double(item));
    }
    trace.records.push_back(std::move(rec));
  }

  trace.strategy = meta.strategy;
  trace.instance_id = meta.instance_id;
  trace.dim = meta.d;
  trace.final_dataset_size = trace.records.size();

  // best-so-far: one entry covering the initial block, then one per iteration
  double best = std::numeric_limits<double>::infinity();
  bool past_init = false;
  for (const IterationRecord& rec : trace.records) {
    if (rec.t == 0) {
      best = std::min(best, rec.value);
    } else {
      if (!past_init) {
        trace.best_so_far.push_back(best);
        past_init = true;
      }
      best = std::min(best, rec.value);
      trace.best_so_far.push_back(best);
    }
  }
  if (!past_init && !trace.records.empty()) trace.best_so_far.push_back(best);
  return {std::move(meta), std::move(trace)};
}

std::string trace_filename(const std::string& strategy, int instance_id,
                           std::optional<double> sparsity) {
  char buf[160];
  if (sparsity) {
    std::snprintf(buf, sizeof(buf), "%s__s%04d__inst%03d.trace", strategy.c_str(),
                  sparsity_permille(*sparsity), instance_id);
  } else {
    std::snprintf(buf, sizeof(buf), "%s__inst%03d.trace", strategy.c_str(), instance_id);
  }
  return buf;
}

std::uint64_t run_seed_for(std::uint64_t master_seed, StrategyKind kind, int instance_id,
                           std::optional<double> sparsity) {
  const std::uint64_t level_tag =
      sparsity ? static_cast<std::uint64_t>(sparsity_permille(*sparsity)) : 1500;
  const std::uint64_t tag = 0xA0000000ULL +
                            static_cast<std::uint64_t>(static_cast<int>(kind)) * 0x1000000ULL +
                            static_cast<std::uint64_t>(instance_id) * 0x800ULL + level_tag;
  return derive_seed(master_seed, tag);
}

std::uint64_t mask_seed_for(std::uint64_t master_seed, int instance_id, double sparsity) {
  const std::uint64_t tag = 0xB0000000ULL + static_cast<std::uint64_t>(instance_id) * 2048ULL +
                            static_cast<std::uint64_t>(sparsity_permille(sparsity));
  return derive_seed(master_seed, tag);
}

namespace {

struct GroupKey {
  int sparsity_permille = -1;  // -1: no sparsity study
  std::string strategy;

  bool operator<(const GroupKey& other) const {
    if (sparsity_permille != other.sparsity_permille) {
      return sparsity_permille < other.sparsity_permille;
    }
    return strategy < other.strategy;
  }
};

struct GroupData {
  std::vector<int> instance_ids;
  std::vector<std::vector<double>> gap_series;       // t = 0..T
  std::vector<std::vector<double>> proposal_gaps;    // t = 1..T
  std::vector<std::vector<int>> consecutive;         // t = 2..T
  std::vector<std::vector<int>> to_optimum;          // t = 1..T, when minimizer known
  bool all_have_minimizer = true;
};

std::string group_suffix(const GroupKey& key) {
  if (key.sparsity_permille < 0) return key.strategy;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s__s%04d", key.strategy.c_str(), key.sparsity_permille);
  return buf;
}

void write_mean_stderr_csv(const fs::path& path, const AggregateStats& stats, int first_index) {
  std::ostringstream os;
  os << "iteration,mean,stderr\n";
  for (std::size_t i = 0; i < stats.mean.size(); ++i) {
    os << (first_index + static_cast<int>(i)) << ',' << format_double(stats.mean[i]) << ','
       << format_double(stats.stderr_[i]) << '\n';
  }
  write_text_file(path, os.str());
}

std::vector<std::vector<double>> to_double_series(const std::vector<std::vector<int>>& series) {
  std::vector<std::vector<double>> out;
  out.reserve(series.size());
  for (const auto& s : series) out.emplace_back(s.begin(), s.end());
  return out;
}

}  // namespace

void write_report(const fs::path& output_dir) {
  const fs::path trace_dir = output_dir / "traces";
  const fs::path report_dir = output_dir / "report";
  fs::create_directories(report_dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(trace_dir)) {
    if (entry.path().extension() == ".trace") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("write_report: no trace files found");

  std::map<GroupKey, GroupData> groups;
  for (const fs::path& file : files) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot open trace: " + file.string());
    auto [meta, trace] = read_trace(is);

    GroupKey key;
    key.strategy = meta.strategy;
    key.sparsity_permille = meta.sparsity ? sparsity_permille(*meta.sparsity) : -1;
    GroupData& group = groups[key];

    group.instance_ids.push_back(meta.instance_id);
    std::vector<double> gaps;
    gaps.reserve(trace.best_so_far.size());
    for (double best : trace.best_so_far) gaps.push_back(relative_gap(best, meta.f_ref));
    group.gap_series.push_back(std::move(gaps));

    std::vector<double> proposal_gaps;
    for (const IterationRecord& rec : trace.records) {
      if (rec.t > 0) proposal_gaps.push_back(relative_gap(rec.value, meta.f_ref));
    }
    group.proposal_gaps.push_back(std::move(proposal_gaps));
    group.consecutive.push_back(consecutive_proposal_distances(trace));
    if (meta.ref_minimizer) {
      group.to_optimum.push_back(hamming_to_optimum_series(trace, *meta.ref_minimizer));
    } else {
      group.all_have_minimizer = false;
    }
  }

  // order instances inside each group so aggregation is reproducible
  for (auto& [key, group] : groups) {
    std::vector<std::size_t> order(group.instance_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return group.instance_ids[a] < group.instance_ids[b];
    });
    GroupData sorted;
    sorted.all_have_minimizer = group.all_have_minimizer;
    for (std::size_t i : order) {
      sorted.instance_ids.push_back(group.instance_ids[i]);
      sorted.gap_series.push_back(std::move(group.gap_series[i]));
      sorted.proposal_gaps.push_back(std::move(group.proposal_gaps[i]));
      sorted.consecutive.push_back(std::move(group.consecutive[i]));
      if (group.all_have_minimizer) sorted.to_optimum.push_back(std::move(group.to_optimum[i]));
    }
    group = std::move(sorted);
  }

  for (const auto& [key, group] : groups) {
    const std::string suffix = group_suffix(key);
    write_mean_stderr_csv(report_dir / ("curve__" + suffix + ".csv"),
                          aggregate(group.gap_series), 0);
    write_mean_stderr_csv(report_dir / ("proposal_gap__" + suffix + ".csv"),
                          aggregate(group.proposal_gaps), 1);
    if (!group.consecutive.empty() && !group.consecutive.front().empty()) {
      write_mean_stderr_csv(report_dir / ("consecutive_hamming__" + suffix + ".csv"),
                            aggregate(to_double_series(group.consecutive)), 2);
    }
    if (group.all_have_minimizer && !group.to_optimum.empty()) {
      write_mean_stderr_csv(report_dir / ("hamming_to_opt__" + suffix + ".csv"),
                            aggregate(to_double_series(group.to_optimum)), 1);
    }
  }

  // summary table: final gaps plus improvements of the hybrid over each
  // comparison method at the same sparsity level
  std::ostringstream summary;
  summary << "method,sparsity,instances,final_mean_gap,value_improvement_pct,"
             "iteration_improvement_mean_pct,iteration_improvement_stderr,success_count\n";

  const std::string ours_name = to_string(StrategyKind::bocs_gp_hedge);
  for (const auto& [key, group] : groups) {
    const double final_mean =
        aggregate(group.gap_series).mean.back();

    summary << key.strategy << ',';
    if (key.sparsity_permille >= 0) {
      summary << format_double(key.sparsity_permille / 1000.0);
    }
    summary << ',' << group.instance_ids.size() << ',' << format_double(final_mean);

    GroupKey ours_key{key.sparsity_permille, ours_name};
    const auto ours_it = groups.find(ours_key);
    if (key.strategy != ours_name && ours_it != groups.end() &&
        ours_it->second.instance_ids == group.instance_ids) {
      const GroupData& ours = ours_it->second;
      const double ours_final = aggregate(ours.gap_series).mean.back();
      if (final_mean != 0.0) {
        summary << ',' << format_double(value_improvement(final_mean, ours_final));
      } else {
        summary << ',';
      }

      const int T = static_cast<int>(ours.gap_series.front().size()) - 1;
      std::vector<double> improvements;
      int successes = 0;
      for (std::size_t i = 0; i < group.instance_ids.size(); ++i) {
        const double target = group.gap_series[i].back();
        const std::vector<double> ours_iter_gaps(ours.gap_series[i].begin() + 1,
                                                 ours.gap_series[i].end());
        const double improvement = iteration_improvement(ours_iter_gaps, target, T);
        improvements.push_back(improvement);
        bool reached = false;
        for (double g : ours_iter_gaps) {
          if (g <= target) {
            reached = true;
            break;
          }
        }
        if (reached) ++successes;
      }
      // mean and stderr across instances of the scalar improvements
      double mean = 0.0;
      for (double v : improvements) mean += v;
      mean /= static_cast<double>(improvements.size());
      double se = 0.0;
      if (improvements.size() > 1) {
        double ss = 0.0;
        for (double v : improvements) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (static_cast<double>(improvements.size()) - 1.0)) /
             std::sqrt(static_cast<double>(improvements.size()));
      }
      summary << ',' << format_double(mean) << ',' << format_double(se) << ',' << successes << '/'
              << group.instance_ids.size();
    } else {
      summary << ",,,,";
    }
    summary << '\n';
  }
  write_text_file(report_dir / "summary.csv", summary.str());
}

void run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path out(cfg.output_dir);
  fs::create_directories(out / "instances");
  fs::create_directories(out / "refs");
  fs::create_directories(out / "traces");

  write_text_file(out / "config.json", config_to_json(cfg).dump(2) + "\n");

  const InstanceSuite suite =
      make_suite(cfg.kind, cfg.d, cfg.instance_count, cfg.initial_count, cfg.seed);

  {
    nlohmann::json manifest;
    manifest["kind"] = to_string(cfg.kind);
    manifest["d"] = cfg.d;
    manifest["master_seed"] = cfg.seed;
    nlohmann::json seeds = nlohmann::json::array();
    nlohmann::json points = nlohmann::json::array();
    for (const auto& inst : suite.instances) seeds.push_back(inst.seed);
    for (const auto& p : suite.initial_points) points.push_back(p.to_string());
    manifest["instance_seeds"] = seeds;
    manifest["initial_points"] = points;
    write_text_file(out / "suite.json", manifest.dump(2) + "\n");
  }
  for (const auto& inst : suite.instances) {
    char name[64];
    std::snprintf(name, sizeof(name), "inst%03d.json", inst.id);
    const nlohmann::json j = inst.kind == BenchmarkKind::qubo
                                 ? qubo_to_json(inst.qubo, inst.seed)
                                 : hubo_to_json(inst.hubo, inst.seed);
    write_text_file(out / "instances" / name, j.dump(2) + "\n");
  }

  const int threads = cfg.threads > 0
                          ? cfg.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<ReferenceValue> refs(suite.instances.size());
  parallel_for(static_cast<int>(suite.instances.size()), threads, [&](int i) {
    refs[static_cast<std::size_t>(i)] =
        compute_reference(suite.instances[static_cast<std::size_t>(i)], cfg.reference,
                          out / "refs");
  });

  std::vector<std::optional<double>> levels;
  if (cfg.sparsity_levels.empty()) {
    levels.push_back(std::nullopt);
  } else {
    for (double level : cfg.sparsity_levels) levels.push_back(level);
  }

  struct Task {
    std::optional<double> level;
    StrategyKind strategy;
    int instance;
  };
  std::vector<Task> tasks;
  for (const auto& level : levels) {
    for (StrategyKind strategy : cfg.strategies) {
      for (int i = 0; i < cfg.instance_count; ++i) tasks.push_back({level, strategy, i});
    }
  }

  std::vector<std::string> rendered(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int ti) {
    const Task& task = tasks[static_cast<std::size_t>(ti)];
    const BenchmarkInstance& inst = suite.instances[static_cast<std::size_t>(task.instance)];
    const auto objective = inst.make_objective();

    StrategyConfig scfg;
    scfg.gibbs = cfg.gibbs;
    scfg.gp = cfg.gp_config();
    scfg.acquisition_sa = cfg.acquisition_sa;
    scfg.hedge = cfg.hedge;
    scfg.nomination_threads = 1;
    if (task.level) {
      scfg.feature_map = FeatureMap::with_mask(
          generate_mask(cfg.d, *task.level, mask_seed_for(cfg.seed, inst.id, *task.level)));
    } else {
      scfg.feature_map = FeatureMap::full(cfg.d);
    }

    const std::uint64_t run_seed = run_seed_for(cfg.seed, task.strategy, inst.id, task.level);
    RunTrace trace = run_strategy(task.strategy, *objective, suite.initial_points,
                                  cfg.iterations, scfg, run_seed);
    trace.instance_id = inst.id;

    TraceMetadata meta;
    meta.strategy = to_string(task.strategy);
    meta.instance_id = inst.id;
    meta.kind = cfg.kind;
    meta.d = cfg.d;
    meta.instance_seed = inst.seed;
    meta.run_seed = run_seed;
    meta.sparsity = task.level;
    const ReferenceValue& ref = refs[static_cast<std::size_t>(task.instance)];
    meta.f_ref = ref.value;
    meta.ref_method = to_string(ref.method);
    meta.ref_minimizer = ref.minimizer;

    std::ostringstream os;
    write_trace(os, meta, trace);
    rendered[static_cast<std::size_t>(ti)] = os.str();
  });

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const Task& task = tasks[ti];
    const fs::path file =
        out / "traces" / trace_filename(to_string(task.strategy), task.instance, task.level);
    write_text_file(file, rendered[ti]);
  }

  write_report(out);
}

}  // namespace bbo
