#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbo/annealer.hpp"
#include "bbo/dataset.hpp"
#include "bbo/gp.hpp"
#include "bbo/objective.hpp"
#include "bbo/sparse_model.hpp"

namespace bbo {

enum class StrategyKind { bocs_gp_hedge, gp_hedge_only, bocs_random, bocs_spinflip };

std::string to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(const std::string& name);

struct HedgeConfig {
  std::vector<double> kappas = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double eta = 1.0;
};

struct GpConfig {
  GammaGrid grid = GammaGrid::standard();
  double jitter = 1e-8;
};

struct GibbsConfig {
  int sweeps = 200;
};

// budget for minimizing one acquisition function
struct AcquisitionSaConfig {
  int restarts = 10;
  int sweeps = 1000;
};

struct HedgeState {
  std::vector<double> kappas;
  std::vector<double> gains;  // cumulative, start at 0
  double eta = 1.0;
};

HedgeState make_hedge_state(const HedgeConfig& cfg);

// softmax of eta * gains restricted to `eligible`; entries outside the
// eligible set get exactly zero mass. Max-gain subtraction keeps exp() safe.
std::vector<double> hedge_probabilities(const HedgeState& state,
                                        const std::vector<int>& eligible);

struct ArmNomination {
  int arm = 0;
  BinaryVector candidate;
  double acq_value = 0.0;
  bool unevaluated = false;
};

struct NominationResult {
  std::vector<ArmNomination> nominations;
  double gamma = 0.0;  // grid selection reused for the reward-time refit
  std::shared_ptr<const GpPosterior> posterior;
};

// Fits one GP (gamma from the grid), then minimizes each arm's LCB by
// multi-restart SA started from the incumbent best observation. Arms may be
// minimized on parallel threads; results do not depend on thread count.
NominationResult nominate_candidates(const Dataset& ds, const GpConfig& gp_cfg,
                                     const std::vector<double>& kappas,
                                     const AcquisitionSaConfig& sa_cfg, SeededRng& rng,
                                     int threads = 1);

struct HedgeSelection {
  BinaryVector point;
  std::optional<int> arm;  // absent on the uniform fallback
  bool fallback = false;   // b_t
};

HedgeSelection hedge_select(const std::vector<ArmNomination>& nominations,
                            const HedgeState& state, const Dataset& ds, SeededRng& rng);

// r_m = -mu(x~_m) for every arm when active && !fallback, else all zero; adds
// the rewards to the gains. `posterior_after` must be fitted on the dataset
// that already includes the new observation.
std::vector<double> hedge_reward_update(HedgeState& state,
                                        const std::vector<ArmNomination>& nominations,
                                        bool active, bool fallback,
                                        const GpPosterior& posterior_after);

// surrogate sample -> masked QUBO -> multi-restart SA from the incumbent.
// The result may be an already-evaluated point; that is the stagnation signal.
BinaryVector bocs_propose(const Dataset& ds, const FeatureMap& fm, const GibbsConfig& gibbs_cfg,
                          const AcquisitionSaConfig& sa_cfg, SeededRng& rng);

struct SpinFlipResult {
  BinaryVector point;
  int shell = 0;  // 1..3; 0 means all three shells were exhausted
};

// Uniform unevaluated point from the 1-flip neighborhood of the incumbent,
// escalating to 2- and 3-flip shells, then to a uniform unevaluated point.
SpinFlipResult spinflip_candidate(const Dataset& ds, SeededRng& rng);

enum class ProposalSource { init, bocs, hedge, random_fallback, random_point, spinflip };

// tag grammar: "init", "bocs", "hedge(m)", "random-fallback", "random", "spinflip(k)"
std::string source_tag(ProposalSource source, int detail);
bool parse_source_tag(const std::string& tag, ProposalSource& source, int& detail);

struct IterationRecord {
  int t = 0;  // 0 for initial observations
  BinaryVector point;
  double value = 0.0;
  ProposalSource source = ProposalSource::init;
  int detail = -1;           // hedge arm or spinflip shell
  bool stagnation = false;   // BOCS proposed an already-evaluated point
  bool fallback = false;     // b_t
  std::vector<double> rewards;  // per arm; empty when no reward step ran
};

struct RunTrace {
  std::string strategy;
  int instance_id = 0;
  int dim = 0;
  std::vector<IterationRecord> records;  // initial points (t=0), then t=1..T
  std::vector<double> best_so_far;       // length T+1; entry 0 covers the initial set
  std::size_t final_dataset_size = 0;
};

struct StrategyConfig {
  FeatureMap feature_map;
  GibbsConfig gibbs;
  GpConfig gp;
  AcquisitionSaConfig acquisition_sa;
  HedgeConfig hedge;
  int nomination_threads = 1;
};

RunTrace run_strategy(StrategyKind kind, const PseudoBooleanObjective& objective,
                      const std::vector<BinaryVector>& initial_points, int iterations,
                      const StrategyConfig& cfg, std::uint64_t seed);

}  // namespace bbo
