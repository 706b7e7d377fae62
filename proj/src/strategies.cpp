#include "bbo/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bbo/parallel.hpp"

namespace bbo {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::bocs_gp_hedge: return "bocs-gp-hedge";
    case StrategyKind::gp_hedge_only: return "gp-hedge-only";
    case StrategyKind::bocs_random: return "bocs-random";
    case StrategyKind::bocs_spinflip: return "bocs-spinflip";
  }
  throw std::logic_error("to_string: unknown strategy");
}

std::optional<StrategyKind> strategy_from_string(const std::string& name) {
  if (name == "bocs-gp-hedge") return StrategyKind::bocs_gp_hedge;
  if (name == "gp-hedge-only") return StrategyKind::gp_hedge_only;
  if (name == "bocs-random") return StrategyKind::bocs_random;
  if (name == "bocs-spinflip") return StrategyKind::bocs_spinflip;
  return std::nullopt;
}

HedgeState make_hedge_state(const HedgeConfig& cfg) {
  if (cfg.kappas.empty()) throw std::invalid_argument("HedgeConfig: kappas must be nonempty");
  for (double k : cfg.kappas) {
    if (!(k > 0.0)) throw std::invalid_argument("HedgeConfig: kappas must be > 0");
  }
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("HedgeConfig: eta must be > 0");
  HedgeState state;
  state.kappas = cfg.kappas;
  state.gains.assign(cfg.kappas.size(), 0.0);
  state.eta = cfg.eta;
  return state;
}

std::vector<double> hedge_probabilities(const HedgeState& state,
                                        const std::vector<int>& eligible) {
  if (eligible.empty()) throw std::invalid_argument("hedge_probabilities: no eligible arms");
  std::vector<double> probs(state.gains.size(), 0.0);

  double max_gain = -std::numeric_limits<double>::infinity();
  for (int m : eligible) max_gain = std::max(max_gain, state.gains[static_cast<std::size_t>(m)]);

  double total = 0.0;
  for (int m : eligible) {
    const double w = std::exp(state.eta * (state.gains[static_cast<std::size_t>(m)] - max_gain));
    probs[static_cast<std::size_t>(m)] = w;
    total += w;
  }
  for (int m : eligible) probs[static_cast<std::size_t>(m)] /= total;
  return probs;
}

NominationResult nominate_candidates(const Dataset& ds, const GpConfig& gp_cfg,
                                     const std::vector<double>& kappas,
                                     const AcquisitionSaConfig& sa_cfg, SeededRng& rng,
                                     int threads) {
  if (ds.empty()) throw std::invalid_argument("nominate_candidates: empty dataset");
  if (kappas.empty()) throw std::invalid_argument("nominate_candidates: no arms");

  NominationResult result;
  result.gamma = select_gamma(ds, gp_cfg.grid, gp_cfg.jitter);
  result.posterior =
      std::make_shared<const GpPosterior>(GpPosterior::fit(ds, result.gamma, gp_cfg.jitter));

  const BinaryVector incumbent = best_observation(ds).point;
  const int arm_count = static_cast<int>(kappas.size());
  result.nominations.resize(static_cast<std::size_t>(arm_count));

  const SeededRng base_rng = rng;
  parallel_for(arm_count, threads, [&](int m) {
    const LcbObjective acquisition(result.posterior, kappas[static_cast<std::size_t>(m)]);
    SeededRng arm_rng = base_rng.derive(static_cast<std::uint64_t>(m));
    SeededRng sched_rng = arm_rng.derive(0);
    const SaSchedule sched = default_schedule_for(acquisition, sa_cfg.sweeps, sched_rng);
    SeededRng run_rng = arm_rng.derive(1);
    AnnealResult best = multi_restart(acquisition, {incumbent}, sa_cfg.restarts, sched, run_rng);

    ArmNomination nom;
    nom.arm = m;
    nom.candidate = std::move(best.point);
    nom.acq_value = best.value;
    nom.unevaluated = !ds.contains(nom.candidate);
    result.nominations[static_cast<std::size_t>(m)] = std::move(nom);
  });
  return result;
}

HedgeSelection hedge_select(const std::vector<ArmNomination>& nominations,
                            const HedgeState& state, const Dataset& ds, SeededRng& rng) {
  if (nominations.size() != state.gains.size()) {
    throw std::invalid_argument("hedge_select: nomination/arm count mismatch");
  }
  std::vector<int> eligible;
  for (const ArmNomination& nom : nominations) {
    if (nom.unevaluated) eligible.push_back(nom.arm);
  }

  HedgeSelection sel;
  if (eligible.empty()) {
    sel.point = random_unevaluated(ds.dim(), ds, rng);
    sel.fallback = true;
    return sel;
  }

  const std::vector<double> probs = hedge_probabilities(state, eligible);
  const double u = rng.uniform();
  double cdf = 0.0;
  int chosen = eligible.back();
  for (int m : eligible) {
    cdf += probs[static_cast<std::size_t>(m)];
    if (u < cdf) {
      chosen = m;
      break;
    }
  }
  sel.point = nominations[static_cast<std::size_t>(chosen)].candidate;
  sel.arm = chosen;
  sel.fallback = false;
  return sel;
}

std::vector<double> hedge_reward_update(HedgeState& state,
                                        const std::vector<ArmNomination>& nominations,
                                        bool active, bool fallback,
                                        const GpPosterior& posterior_after) {
  std::vector<double> rewards(state.gains.size(), 0.0);
  if (!active || fallback) return rewards;
  if (nominations.size() != state.gains.size()) {
    throw std::invalid_argument("hedge_reward_update: nomination/arm count mismatch");
  }
  for (const ArmNomination& nom : nominations) {
    const double reward = -posterior_after.predict(nom.candidate).mean;
    rewards[static_cast<std::size_t>(nom.arm)] = reward;
    state.gains[static_cast<std::size_t>(nom.arm)] += reward;
  }
  return rewards;
}

BinaryVector bocs_propose(const Dataset& ds, const FeatureMap& fm, const GibbsConfig& gibbs_cfg,
                          const AcquisitionSaConfig& sa_cfg, SeededRng& rng) {
  if (ds.empty()) throw std::invalid_argument("bocs_propose: empty dataset");
  SeededRng gibbs_rng = rng.derive(0);
  CoefficientSample coeffs = gibbs_fit(ds, fm, gibbs_cfg.sweeps, gibbs_rng);
  const SurrogateObjective acquisition = surrogate_to_objective(std::move(coeffs), fm);

  SeededRng sched_rng = rng.derive(1);
  const SaSchedule sched = default_schedule_for(acquisition, sa_cfg.sweeps, sched_rng);
  SeededRng run_rng = rng.derive(2);
  AnnealResult best = multi_restart(acquisition, {best_observation(ds).point}, sa_cfg.restarts,
                                    sched, run_rng);
  return best.point;
}

SpinFlipResult spinflip_candidate(const Dataset& ds, SeededRng& rng) {
  if (ds.empty()) throw std::invalid_argument("spinflip_candidate: empty dataset");
  const BinaryVector& center = best_observation(ds).point;
  const int d = center.dim();

  for (int shell = 1; shell <= 3; ++shell) {
    std::vector<BinaryVector> open;
    if (shell == 1) {
      for (int i = 0; i < d; ++i) {
        BinaryVector x = center.with_flipped(i);
        if (!ds.contains(x)) open.push_back(std::move(x));
      }
    } else if (shell == 2) {
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          BinaryVector x = center.with_flipped(i);
          x.flip(j);
          if (!ds.contains(x)) open.push_back(std::move(x));
        }
      }
    } else {
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          for (int k = j + 1; k < d; ++k) {
            BinaryVector x = center.with_flipped(i);
            x.flip(j);
            x.flip(k);
            if (!ds.contains(x)) open.push_back(std::move(x));
          }
        }
      }
    }
    if (!open.empty()) {
      return SpinFlipResult{open[rng.uniform_int(open.size())], shell};
    }
  }
  return SpinFlipResult{random_unevaluated(d, ds, rng), 0};
}

std::string source_tag(ProposalSource source, int detail) {
  switch (source) {
    case ProposalSource::init: return "init";
    case ProposalSource::bocs: return "bocs";
    case ProposalSource::hedge: return "hedge(" + std::to_string(detail) + ")";
    case ProposalSource::random_fallback: return "random-fallback";
    case ProposalSource::random_point: return "random";
    case ProposalSource::spinflip: return "spinflip(" + std::to_string(detail) + ")";
  }
  throw std::logic_error("source_tag: unknown source");
}

bool parse_source_tag(const std::string& tag, ProposalSource& source, int& detail) {
  detail = -1;
  if (tag == "init") {
    source = ProposalSource::init;
  } else if (tag == "bocs") {
    source = ProposalSource::bocs;
  } else if (tag == "random-fallback") {
    source = ProposalSource::random_fallback;
  } else if (tag == "random") {
    source = ProposalSource::random_point;
  } else if (tag.rfind("hedge(", 0) == 0 && tag.back() == ')') {
    source = ProposalSource::hedge;
    detail = std::stoi(tag.substr(6, tag.size() - 7));
  } else if (tag.rfind("spinflip(", 0) == 0 && tag.back() == ')') {
    source = ProposalSource::spinflip;
    detail = std::stoi(tag.substr(9, tag.size() - 10));
  } else {
    return false;
  }
  return true;
}

namespace {

// per-iteration rng stream tags
constexpr std::uint64_t kTagBocs = 1;
constexpr std::uint64_t kTagNominate = 2;
constexpr std::uint64_t kTagSelect = 3;
constexpr std::uint64_t kTagFallback = 4;

}  // namespace

RunTrace run_strategy(StrategyKind kind, const PseudoBooleanObjective& objective,
                      const std::vector<BinaryVector>& initial_points, int iterations,
                      const StrategyConfig& cfg, std::uint64_t seed) {
  if (iterations < 0) throw std::invalid_argument("run_strategy: iterations must be >= 0");
  if (initial_points.empty()) {
    throw std::invalid_argument("run_strategy: initial points must be nonempty");
  }
  const bool uses_bocs = kind != StrategyKind::gp_hedge_only;
  if (uses_bocs && cfg.feature_map.d != objective.dim()) {
    throw std::invalid_argument("run_strategy: feature map dimension mismatch");
  }

  RunTrace trace;
  trace.strategy = to_string(kind);
  trace.dim = objective.dim();

  Dataset ds;
  for (const BinaryVector& x : initial_points) {
    const double y = objective.evaluate(x);
    ds.insert(x, y);
    IterationRecord rec;
    rec.t = 0;
    rec.point = x;
    rec.value = y;
    rec.source = ProposalSource::init;
    trace.records.push_back(std::move(rec));
  }
  trace.best_so_far.push_back(ds.best().value);

  HedgeState hedge = make_hedge_state(cfg.hedge);
  const SeededRng root(seed);

  for (int t = 1; t <= iterations; ++t) {
    const SeededRng iter_rng = root.derive(static_cast<std::uint64_t>(t));

    IterationRecord rec;
    rec.t = t;
    std::optional<NominationResult> noms;

    if (kind == StrategyKind::gp_hedge_only) {
      SeededRng nom_rng = iter_rng.derive(kTagNominate);
      noms = nominate_candidates(ds, cfg.gp, hedge.kappas, cfg.acquisition_sa, nom_rng,
                                 cfg.nomination_threads);
      SeededRng sel_rng = iter_rng.derive(kTagSelect);
      HedgeSelection sel = hedge_select(noms->nominations, hedge, ds, sel_rng);
      rec.point = std::move(sel.point);
      rec.fallback = sel.fallback;
      if (sel.arm) {
        rec.source = ProposalSource::hedge;
        rec.detail = *sel.arm;
      } else {
        rec.source = ProposalSource::random_fallback;
      }
    } else {
      SeededRng bocs_rng = iter_rng.derive(kTagBocs);
      BinaryVector bocs_point =
          bocs_propose(ds, cfg.feature_map, cfg.gibbs, cfg.acquisition_sa, bocs_rng);
      rec.stagnation = ds.contains(bocs_point);

      if (!rec.stagnation) {
        rec.point = std::move(bocs_point);
        rec.source = ProposalSource::bocs;
      } else if (kind == StrategyKind::bocs_gp_hedge) {
        SeededRng nom_rng = iter_rng.derive(kTagNominate);
        noms = nominate_candidates(ds, cfg.gp, hedge.kappas, cfg.acquisition_sa, nom_rng,
                                   cfg.nomination_threads);
        SeededRng sel_rng = iter_rng.derive(kTagSelect);
        HedgeSelection sel = hedge_select(noms->nominations, hedge, ds, sel_rng);
        rec.point = std::move(sel.point);
        rec.fallback = sel.fallback;
        if (sel.arm) {
          rec.source = ProposalSource::hedge;
          rec.detail = *sel.arm;
        } else {
          rec.source = ProposalSource::random_fallback;
        }
      } else if (kind == StrategyKind::bocs_random) {
        SeededRng fb_rng = iter_rng.derive(kTagFallback);
        rec.point = random_unevaluated(ds.dim(), ds, fb_rng);
        rec.source = ProposalSource::random_point;
      } else {  // bocs_spinflip
        SeededRng fb_rng = iter_rng.derive(kTagFallback);
        SpinFlipResult sf = spinflip_candidate(ds, fb_rng);
        if (sf.shell > 0) {
          rec.point = std::move(sf.point);
          rec.source = ProposalSource::spinflip;
          rec.detail = sf.shell;
        } else {
          rec.point = std::move(sf.point);
          rec.source = ProposalSource::random_point;
        }
      }
    }

    rec.value = objective.evaluate(rec.point);
    ds.insert(rec.point, rec.value);

    // reward step: hybrid rewards only stagnation iterations; the standalone
    // GP-Hedge baseline applies the same rule every iteration
    const bool reward_active =
        (kind == StrategyKind::bocs_gp_hedge && rec.stagnation && !rec.fallback) ||
        (kind == StrategyKind::gp_hedge_only && !rec.fallback);
    if (reward_active && noms) {
      const GpPosterior posterior_after = GpPosterior::fit(ds, noms->gamma, cfg.gp.jitter);
      rec.rewards =
          hedge_reward_update(hedge, noms->nominations, true, rec.fallback, posterior_after);
    }

    trace.records.push_back(std::move(rec));
    trace.best_so_far.push_back(ds.best().value);
  }

  trace.final_dataset_size = ds.size();
  return trace;
}

}  // namespace bbo
