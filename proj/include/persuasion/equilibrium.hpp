#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/concavify.hpp"
#include "persuasion/experiment.hpp"
#include "persuasion/game.hpp"
#include "persuasion/punishment.hpp"

namespace persuasion {

struct DmResponse {
  Belief belief;
  MixedAction action;
};

// A full strategy profile of the three-stage game: experiments, reporting
// maps (over the signal labels plus one reserved off-path message), a total
// DM response over message pairs, and the babbling continuation used after
// off-path experiment choices.
struct StrategyProfile {
  IntervalPartition experiment1, experiment2;
  std::vector<std::string> messages1, messages2;  // signal labels + reserved label (last)
  std::vector<std::vector<Rational>> report1;     // signals1 x messages1, rows are distributions
  std::vector<std::vector<Rational>> report2;     // signals2 x messages2
  std::vector<std::vector<DmResponse>> response;  // messages1 x messages2
  std::optional<DmResponse> offpath;              // continuation at the prior

  void validate(const GameSpec& g) const;  // throws std::invalid_argument
};

struct DeviationEntry {
  int expert;               // 1 or 2
  std::string signal;
  std::string alt_message;
  Rational gain;            // conditional on the signal; > 0 breaks the profile
};

struct BrCheckEntry {
  std::string m1, m2;
  bool on_path = false;
  bool ok = false;
};

struct BeliefCheckEntry {
  std::string m1, m2;
  bool ok = false;
};

struct EquilibriumReport {
  bool pass = false;
  Rational expert_payoff, expert2_payoff, dm_payoff;
  std::vector<DeviationEntry> deviations;       // single-signal reporting deviations
  Rational first_stage_gain1, first_stage_gain2;
  std::vector<BrCheckEntry> dm_rationality;     // every message pair + the off-path continuation
  std::vector<BeliefCheckEntry> belief_consistency;  // on-path pairs vs Bayes
  bool beliefs_consistent = true;
  // Mismatch beliefs are free of Bayes rule but must stay consistent with
  // the chosen experiments: inside the hull of the feasible signal-pair
  // posteriors.
  bool offpath_beliefs_in_hull = true;
  std::vector<std::string> failures;
};

// Exact verification: reporting deviations signal by signal (sufficient:
// the opponent is truthful to the profile and the DM conditions only on the
// message pair), DM best-reply checks at every stored belief, on-path
// Bayes consistency, and the first-stage deviation against the babbling
// continuation. Verdict: all deviation gains <= 0 and all best-reply checks
// pass.
EquilibriumReport verify_equilibrium(const GameSpec& g, const StrategyProfile& profile);

struct TruthfulEquilibrium {
  StrategyProfile profile;
  Splitting splitting;
  UniformPunishment punishment;
};

// The commitment-value equilibrium: both experts run the experiment induced
// by an optimal splitting and report truthfully; matching reports get the
// posterior best reply that favors the experts, everything else gets the
// uniform punishment.
TruthfulEquilibrium construct_truthful_equilibrium(const GameSpec& g,
                                                   int geometry_limit = kDefaultGeometryLimit,
                                                   int subset_limit = kDefaultSubsetLimit);

// All signals pool on one message; the DM ignores messages and best-replies
// to the prior.
StrategyProfile babbling_profile(const GameSpec& g, IntervalPartition e1, IntervalPartition e2);

struct DmBenefitResult {
  enum class Kind { Profile, NotApplicable, NonGeneric };
  Kind kind = Kind::NotApplicable;
  std::string note;
  std::optional<StrategyProfile> profile;
  std::optional<Splitting> splitting;
  std::optional<EquilibriumReport> report;
  Rational dm_payoff;    // of the returned profile
  Rational dm_baseline;  // v_bar at the prior
};

// An equilibrium in which the DM strictly beats the no-information value,
// when the experts benefit from persuasion. NotApplicable when they do not;
// NonGeneric when the prior is non-interior, the DM has more than two best
// replies at the prior, or the constructive search fails.
DmBenefitResult construct_dm_beneficial_equilibrium(const GameSpec& g,
                                                    int geometry_limit = kDefaultGeometryLimit,
                                                    int subset_limit = kDefaultSubsetLimit);

struct ConcaveValueCandidate {
  enum class Outcome { Refuted, Verified, FailedVerification };
  Belief lo, hi;
  Outcome outcome = Outcome::Refuted;
  std::vector<DualCertificate> certificates;   // Refuted: per realizable subset
  std::optional<Rational> expert_payoff, dm_payoff;  // Verified
};

struct ConcaveValueReport {
  bool ubar_concave = false;
  RedundancyCheck dm_redundancy, expert_redundancy;
  bool applicable = false;  // concave u_bar and both non-redundancy checks
  bool br_minimizes_experts = false;
  std::optional<Belief> br_minimizes_counterexample;
  std::vector<ConcaveValueCandidate> candidates;
  // Every canonical two-atom candidate is either refuted or passes with
  // payoffs exactly (u_bar(prior), v_bar(prior)).
  bool consequence_holds = false;
  std::string summary;
};

// Diagnostics for concave value functions: concavity of u_bar (checked at
// subdivision vertices and midpoints), the non-redundancy assumptions, the
// best-reply/argmin coincidence at vertices and seeded interior beliefs,
// and the canonical two-atom truthful candidates spanning the prior.
ConcaveValueReport concave_value_diagnostics(const GameSpec& g, int geometry_limit = kDefaultGeometryLimit,
                              int subset_limit = kDefaultSubsetLimit, int interior_samples = 100,
                              std::uint64_t seed = 0x5eed);

struct SimulationReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng;
  double mean_expert = 0, se_expert = 0;
  double mean_expert2 = 0, se_expert2 = 0;
  double mean_dm = 0, se_dm = 0;
  Rational exact_expert, exact_expert2, exact_dm;
  std::uint64_t mismatched_pairs = 0;
};

// Monte-Carlo cross-check of the exact payoffs: per-trial seeds derived
// from (seed, trial), states and experiment draws sampled, reporting maps
// and the DM response applied, payoffs averaged in double precision.
// Bit-identical across runs with the same seed.
SimulationReport simulate(const GameSpec& g, const StrategyProfile& profile, std::uint64_t trials,
                          std::uint64_t seed);

// Exact expected payoffs (expert 1, expert 2, DM) of a profile.
struct ExactPayoffs {
  Rational expert, expert2, dm;
};
ExactPayoffs exact_profile_payoffs(const GameSpec& g, const StrategyProfile& profile);

}  // namespace persuasion
