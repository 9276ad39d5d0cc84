#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "persuasion/game.hpp"

namespace persuasion {

inline constexpr int kDefaultGeometryLimit = 4;
inline constexpr int kDefaultSubsetLimit = 12;

struct GeometryLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SubsetLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BestReplySet {
  std::vector<int> actions;  // pure best replies, ascending
  Belief belief;
};

// Exact argmax set of the DM's pure actions at pi. The mixed best replies
// are exactly the simplex over these.
BestReplySet best_replies(const GameSpec& g, const Belief& pi);

// Expert's best payoff over DM best replies (max at ties).
Rational u_bar(const GameSpec& g, const Belief& pi);
// DM's optimal value.
Rational v_bar(const GameSpec& g, const Belief& pi);
// Expert's worst payoff over all pure actions.
Rational u_min(const GameSpec& g, const Belief& pi);

// Actions that are a best reply at some belief (the set usually written
// with a hat). Found by exact LP feasibility, no dimension limit.
std::vector<int> supported_actions(const GameSpec& g);

struct SubdivisionVertex {
  Belief belief;
  std::vector<int> optimal_actions;  // br(belief)
  Rational ubar_value;
};

// All vertices of all best-reply regions, optionally intersected with the
// convex hull of `restrict` (given by generator beliefs). Sorted
// lexicographically by belief; deduplicated; annotated with br and u_bar.
std::vector<SubdivisionVertex> subdivision_vertices(
    const GameSpec& g, const std::vector<Belief>* restrict = nullptr,
    int geometry_limit = kDefaultGeometryLimit);

struct RealizedSet {
  std::vector<int> actions;          // B, ascending
  Belief witness;                    // some pi in the hull with B subset of br(pi)
  std::vector<Rational> hull_coeffs; // witness = sum coeffs[j] * hull[j]
};

// Feasibility probe for a single subset: is there pi in the hull with
// B a subset of br(pi)? Returns the LP witness when so.
std::optional<RealizedSet> realize_subset(const GameSpec& g, const std::vector<Belief>& hull,
                                          const std::vector<int>& subset);

// Every non-empty subset B of the realizable actions such that some belief
// in the hull has B inside its best-reply set; ordered by size then
// lexicographically. Exhaustive; throws SubsetLimitError above the limit.
std::vector<RealizedSet> realized_br_supersets(const GameSpec& g, const std::vector<Belief>& hull,
                                               int subset_limit = kDefaultSubsetLimit);

// A point in the relative interior of BR^-1(action): the barycenter of the
// region's vertices.
Belief cell_interior_point(const GameSpec& g, int action,
                           int geometry_limit = kDefaultGeometryLimit);

// Vertices of one best-reply region (used by cell_interior_point and the
// concavification LP).
std::vector<Belief> cell_vertices(const GameSpec& g, int action,
                                  const std::vector<Belief>* restrict = nullptr,
                                  int geometry_limit = kDefaultGeometryLimit);

namespace detail {
// All vertices of the arrangement of every pairwise DM-indifference
// hyperplane inside the simplex (a superset of the best-reply subdivision's
// vertices; needed for exact separation checks).
std::vector<Belief> arrangement_vertices(const GameSpec& g,
                                         int geometry_limit = kDefaultGeometryLimit);
// Subsets of `universe` in (size, lexicographic) order.
std::vector<std::vector<int>> subsets_by_size(const std::vector<int>& universe);
}  // namespace detail

}  // namespace persuasion
