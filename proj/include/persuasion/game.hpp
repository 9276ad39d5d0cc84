#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persuasion/rational.hpp"

namespace persuasion {

using Matrix = std::vector<std::vector<Rational>>;  // actions x states

// Probability distribution over states. Weights are exact, non-negative and
// sum to exactly one; the constructor enforces this.
class Belief {
 public:
  explicit Belief(std::vector<Rational> weights);
  static Belief point(int num_states, int state);
  static Belief uniform(int num_states);

  int size() const { return static_cast<int>(w_.size()); }
  const Rational& operator[](int i) const { return w_[i]; }
  const std::vector<Rational>& weights() const { return w_; }

  bool interior() const;
  bool operator==(const Belief& o) const { return w_ == o.w_; }
  bool operator!=(const Belief& o) const { return w_ != o.w_; }
  bool operator<(const Belief& o) const { return w_ < o.w_; }  // lexicographic

  std::string str() const;

 private:
  std::vector<Rational> w_;
};

// Mixed action with its support recorded at construction.
class MixedAction {
 public:
  explicit MixedAction(std::vector<Rational> weights);
  static MixedAction pure(int num_actions, int action);

  int size() const { return static_cast<int>(w_.size()); }
  const Rational& operator[](int i) const { return w_[i]; }
  const std::vector<Rational>& weights() const { return w_; }
  const std::vector<int>& support() const { return support_; }
  bool is_pure() const { return support_.size() == 1; }

  bool operator==(const MixedAction& o) const { return w_ == o.w_; }
  std::string str(const std::vector<std::string>& action_names) const;

 private:
  std::vector<Rational> w_;
  std::vector<int> support_;
};

// Second expert's preferences: absent (identical to expert 1), a convex
// combination beta*u + (1-beta)*v, or an explicit payoff matrix.
struct Expert2 {
  enum class Kind { Beta, Payoff };
  Kind kind = Kind::Beta;
  Rational beta;
  Matrix payoff;
};

struct GameSpec {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  Belief prior;
  Matrix expert_payoff;  // u, actions x states
  Matrix dm_payoff;      // v, actions x states
  std::optional<Expert2> expert2;

  // Validates every invariant (sizes, prior, beta range) and throws
  // std::invalid_argument with a description on violation.
  static GameSpec create(std::vector<std::string> states, std::vector<std::string> actions,
                         Belief prior, Matrix expert_payoff, Matrix dm_payoff,
                         std::optional<Expert2> expert2 = std::nullopt);

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }

  const Rational& u(int action, int state) const { return expert_payoff[action][state]; }
  const Rational& v(int action, int state) const { return dm_payoff[action][state]; }
  // Expert 2's payoff entry; equals u when no second expert is configured.
  Rational u2(int action, int state) const;
  bool has_expert2() const { return expert2.has_value(); }
};

Rational expected_expert_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi);
Rational expected_dm_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi);
Rational expected_expert2_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi);

// Row-against-belief evaluations, the workhorse of everything above.
Rational expert_row_payoff(const GameSpec& g, int action, const Belief& pi);
Rational dm_row_payoff(const GameSpec& g, int action, const Belief& pi);
Rational expert2_row_payoff(const GameSpec& g, int action, const Belief& pi);

Belief convex_combination(const std::vector<std::pair<Rational, Belief>>& parts);

// Discretized quadratic-loss game: states on a uniform grid over [0,1],
// actions on a uniform grid over [0,1+b]; v(a,w) = -(a-w)^2,
// u(a,w) = -(a-w-b)^2 and expert 2 gets -(a-w-beta*b)^2. Uniform prior.
GameSpec make_quadratic_game(int n_states, int n_actions, const Rational& b, const Rational& beta);

struct RedundancyCheck {
  bool ok = false;
  std::vector<int> witness;  // violating action subset (DM) or duplicate pair (experts)
};

// True iff every proper non-empty subset B of the DM-relevant actions
// leaves room for strict improvement at some belief. Exhaustive over
// subsets; exact separation via the full indifference arrangement.
RedundancyCheck check_no_redundant_actions_dm(const GameSpec& g, int subset_limit = 12,
                                              int geometry_limit = 4);

// True iff the experts' payoff rows are pairwise distinct.
RedundancyCheck check_no_redundant_actions_experts(const GameSpec& g);

}  // namespace persuasion
