#pragma once

#include "persuasion/belief_geometry.hpp"
#include "persuasion/experiment.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

struct SplittingAtom {
  Rational weight;   // > 0
  Belief posterior;
  Rational value;    // u_bar at the posterior
};

// Bayes-plausible weighted posterior list: weights sum to one and the
// weighted posteriors average exactly to the prior.
struct Splitting {
  std::vector<SplittingAtom> atoms;
  Belief prior;

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  Rational total_value() const;  // sum of weight * value
  // Checks every invariant exactly against the game; throws on violation.
  void validate(const GameSpec& g) const;
};

// Value of the concavification of u_bar at the prior: the exact optimum of
//   max sum_k lambda_k * u_bar(v_k)  s.t.  sum_k lambda_k v_k = prior
// over the subdivision vertex set (u_bar is linear on each best-reply
// region, so vertex support is without loss). Within the geometry limit the
// vertex set is enumerated outright; above it the same program is solved by
// exact column generation (pricing over one best-reply region at a time),
// so large games are solved rather than rejected.
Rational cav_u_bar(const GameSpec& g, const Belief& prior,
                   int geometry_limit = kDefaultGeometryLimit);

// A basic optimal splitting: at most |states| atoms, zero weights dropped,
// achieving cav_u_bar exactly. If the prior cannot be usefully split
// (cav u_bar = u_bar there) the trivial single-atom splitting is returned.
// Deterministic: low vertex indices preferred via a lexicographic
// depth-first support search (enumeration path), or the final simplex basis
// (column-generation path).
Splitting optimal_splitting(const GameSpec& g, const Belief& prior,
                            int geometry_limit = kDefaultGeometryLimit);

// Bayes-plausible splitting with the given posteriors (weights found by
// exact LP; throws std::invalid_argument if none exist).
Splitting splitting_from_posteriors(const GameSpec& g, const Belief& prior,
                                    const std::vector<Belief>& posteriors);

// The experiment inducing the splitting: sigma(s|w) = weight_s *
// posterior_s(w) / prior(w); states outside the prior's support emit the
// first signal. Signals are labeled s0, s1, ... in atom order.
Kernel splitting_to_kernel(const Splitting& split);

// Independent two-state oracle: evaluates u_bar on a uniform grid plus all
// subdivision vertices and takes the upper concave envelope of those points
// at the prior, by literal pairwise-chord maximization (an exact upper-hull
// sweep above 2048 points, same maximum). Never touches the LP path.
Rational grid_cav_oracle(const GameSpec& g, const Belief& prior, long grid_size);

}  // namespace persuasion
