#pragma once

#include <optional>

#include "persuasion/belief_geometry.hpp"
#include "persuasion/concavify.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

// A DM best reply at some belief in the hull of the splitting's posteriors
// that leaves every expert weakly worse off at every on-path posterior.
struct UniformPunishment {
  Belief belief;                     // pi_p, in the hull of the posteriors
  MixedAction action;                // alpha_p, support inside br(pi_p)
  std::vector<Rational> slack;       // per atom: u_bar(pi_s) - u(alpha_p, pi_s), all >= 0
  std::vector<Rational> hull_coeffs; // pi_p as a convex combination of the posteriors
  std::vector<int> subset;           // the action subset whose LP produced alpha_p
};

// Distribution over the splitting's atoms proving that no mixture over the
// subset can avoid a gain of at least `guaranteed_gain` somewhere.
struct DualCertificate {
  std::vector<Rational> lambda_hat;  // over atoms, sums to one
  Rational guaranteed_gain;          // y-hat; > 0 refutes the subset
  std::vector<int> subset;
};

struct PunishmentLpResult {
  Rational x_hat;  // min over mixtures in the subset of the worst gain
  MixedAction alpha;
  DualCertificate certificate;
};

// The min-max program over Delta(B):
//   min x  s.t.  sum_{a in B} alpha_a (u(a, pi_s) - u_bar(pi_s)) <= x  per atom s
// solved exactly together with its dual. x_hat <= 0 means B yields a
// punishment. The dual is replayed entry-wise after the solve and the zero
// gap is asserted.
PunishmentLpResult punishment_lp(const GameSpec& g, const Splitting& split,
                                 const std::vector<int>& subset);

struct PunishmentSearch {
  std::optional<UniformPunishment> punishment;
  // When no punishment exists: one certificate per realizable subset, a
  // machine-checkable refutation of this splitting.
  std::vector<DualCertificate> certificates;
};

// Searches realizable best-reply subsets over the hull of the splitting's
// posteriors in (size, lexicographic) order and returns the first subset
// whose LP value is <= 0, packaged with the realizability witness belief.
// Existence is guaranteed for optimal splittings; arbitrary splittings may
// be refuted, in which case all per-subset certificates come back.
PunishmentSearch find_uniform_punishment(const GameSpec& g, const Splitting& split,
                                         int subset_limit = kDefaultSubsetLimit);

// Same search restricted to two atoms: hull {pi_s, pi_t} and slack rows only
// at those two atoms. Guaranteed to succeed on optimal splittings.
PunishmentSearch pairwise_punishment(const GameSpec& g, const Splitting& split, int s, int t,
                                     int subset_limit = kDefaultSubsetLimit);

struct SecondExpertCheck {
  bool ok = false;
  std::vector<Rational> slack;  // per atom: u2(on-path action) - u2(alpha_p), >= 0 when ok
};

// Whether the punishment also punishes the second expert against the
// on-path actions of the constructed equilibrium (the lexicographically
// first u_bar-attaining pure action at each posterior). Requires a
// configured second expert.
SecondExpertCheck punishes_second_expert(const GameSpec& g, const Splitting& split,
                                         const UniformPunishment& p);

// The construction's on-path selection: lexicographically first pure action
// attaining u_bar at pi.
int ubar_attaining_action(const GameSpec& g, const Belief& pi);

}  // namespace persuasion
