#include "persuasion/game.hpp"

#include <sstream>
#include <stdexcept>

namespace persuasion {

Belief::Belief(std::vector<Rational> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("Belief: empty weight vector");
  Rational sum;
  for (const auto& x : w_) {
    if (x.sign() < 0) throw std::invalid_argument("Belief: negative weight");
    sum += x;
  }
  if (sum != Rational(1)) throw std::invalid_argument("Belief: weights sum to " + sum.str() + ", expected 1");
}

Belief Belief::point(int num_states, int state) {
  std::vector<Rational> w(num_states, Rational(0));
  w.at(state) = 1;
  return Belief(std::move(w));
}

Belief Belief::uniform(int num_states) {
  std::vector<Rational> w(num_states, Rational(1, num_states));
  return Belief(std::move(w));
}

bool Belief::interior() const {
  for (const auto& x : w_) {
    if (x.sign() <= 0) return false;
  }
  return true;
}

std::string Belief::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < size(); ++i) os << (i ? ", " : "") << w_[i];
  os << ")";
  return os.str();
}

MixedAction::MixedAction(std::vector<Rational> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("MixedAction: empty weight vector");
  Rational sum;
  for (int i = 0; i < size(); ++i) {
    if (w_[i].sign() < 0) throw std::invalid_argument("MixedAction: negative weight");
    if (w_[i].sign() > 0) support_.push_back(i);
    sum += w_[i];
  }
  if (sum != Rational(1)) throw std::invalid_argument("MixedAction: weights sum to " + sum.str());
}

MixedAction MixedAction::pure(int num_actions, int action) {
  std::vector<Rational> w(num_actions, Rational(0));
  w.at(action) = 1;
  return MixedAction(std::move(w));
}

std::string MixedAction::str(const std::vector<std::string>& action_names) const {
  std::ostringstream os;
  if (is_pure()) {
    os << action_names[support_[0]];
    return os.str();
  }
  os << "{";
  for (std::size_t k = 0; k < support_.size(); ++k) {
    int a = support_[k];
    os << (k ? ", " : "") << action_names[a] << ": " << w_[a];
  }
  os << "}";
  return os.str();
}

namespace {

void check_matrix(const Matrix& m, int actions, int states, const std::string& name) {
  if (static_cast<int>(m.size()) != actions) {
    throw std::invalid_argument(name + ": expected " + std::to_string(actions) + " rows");
  }
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != states) {
      throw std::invalid_argument(name + ": row length != number of states");
    }
  }
}

}  // namespace

GameSpec GameSpec::create(std::vector<std::string> states, std::vector<std::string> actions,
                          Belief prior, Matrix expert_payoff, Matrix dm_payoff,
                          std::optional<Expert2> expert2) {
  if (states.size() < 2) throw std::invalid_argument("GameSpec: need at least 2 states");
  if (actions.empty()) throw std::invalid_argument("GameSpec: need at least 1 action");
  if (prior.size() != static_cast<int>(states.size())) {
    throw std::invalid_argument("GameSpec: prior dimension mismatch");
  }
  check_matrix(expert_payoff, actions.size(), states.size(), "expert_payoff");
  check_matrix(dm_payoff, actions.size(), states.size(), "dm_payoff");
  if (expert2) {
    if (expert2->kind == Expert2::Kind::Beta) {
      if (expert2->beta.sign() < 0 || expert2->beta > Rational(1)) {
        throw std::invalid_argument("GameSpec: expert2 beta outside [0,1]");
      }
    } else {
      check_matrix(expert2->payoff, actions.size(), states.size(), "expert2 payoff");
    }
  }
  GameSpec g{std::move(states), std::move(actions), std::move(prior),
             std::move(expert_payoff), std::move(dm_payoff), std::move(expert2)};
  return g;
}

Rational GameSpec::u2(int action, int state) const {
  if (!expert2) return u(action, state);
  if (expert2->kind == Expert2::Kind::Payoff) return expert2->payoff[action][state];
  return expert2->beta * u(action, state) + (Rational(1) - expert2->beta) * v(action, state);
}

namespace {

Rational bilinear(const Matrix& m, const MixedAction& alpha, const Belief& pi) {
  Rational total;
  for (int a : alpha.support()) {
    Rational row;
    for (int s = 0; s < pi.size(); ++s) row += m[a][s] * pi[s];
    total += alpha[a] * row;
  }
  return total;
}

void check_dims(const GameSpec& g, const MixedAction& alpha, const Belief& pi) {
  if (alpha.size() != g.num_actions() || pi.size() != g.num_states()) {
    throw std::invalid_argument("payoff evaluation: dimension mismatch");
  }
}

}  // namespace

Rational expected_expert_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi) {
  check_dims(g, alpha, pi);
  return bilinear(g.expert_payoff, alpha, pi);
}

Rational expected_dm_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi) {
  check_dims(g, alpha, pi);
  return bilinear(g.dm_payoff, alpha, pi);
}

Rational expected_expert2_payoff(const GameSpec& g, const MixedAction& alpha, const Belief& pi) {
  check_dims(g, alpha, pi);
  Rational total;
  for (int a : alpha.support()) {
    Rational row;
    for (int s = 0; s < pi.size(); ++s) row += g.u2(a, s) * pi[s];
    total += alpha[a] * row;
  }
  return total;
}

Rational expert_row_payoff(const GameSpec& g, int action, const Belief& pi) {
  Rational r;
  for (int s = 0; s < pi.size(); ++s) r += g.u(action, s) * pi[s];
  return r;
}

Rational dm_row_payoff(const GameSpec& g, int action, const Belief& pi) {
  Rational r;
  for (int s = 0; s < pi.size(); ++s) r += g.v(action, s) * pi[s];
  return r;
}

Rational expert2_row_payoff(const GameSpec& g, int action, const Belief& pi) {
  Rational r;
  for (int s = 0; s < pi.size(); ++s) r += g.u2(action, s) * pi[s];
  return r;
}

Belief convex_combination(const std::vector<std::pair<Rational, Belief>>& parts) {
  if (parts.empty()) throw std::invalid_argument("convex_combination: empty");
  int n = parts.front().second.size();
  std::vector<Rational> w(n, Rational(0));
  for (const auto& [lambda, b] : parts) {
    for (int i = 0; i < n; ++i) w[i] += lambda * b[i];
  }
  return Belief(std::move(w));
}

GameSpec make_quadratic_game(int n_states, int n_actions, const Rational& b, const Rational& beta) {
  if (n_states < 2 || n_actions < 2) {
    throw std::invalid_argument("make_quadratic_game: need >= 2 states and >= 2 actions");
  }
  if (b.sign() < 0) throw std::invalid_argument("make_quadratic_game: b must be >= 0");
  if (beta.sign() < 0 || beta > Rational(1)) {
    throw std::invalid_argument("make_quadratic_game: beta outside [0,1]");
  }
  std::vector<Rational> state_grid(n_states), action_grid(n_actions);
  for (int i = 0; i < n_states; ++i) state_grid[i] = Rational(i, n_states - 1);
  Rational top = Rational(1) + b;
  for (int j = 0; j < n_actions; ++j) action_grid[j] = top * Rational(j, n_actions - 1);

  std::vector<std::string> states(n_states), actions(n_actions);
  for (int i = 0; i < n_states; ++i) states[i] = "w" + std::to_string(i);
  for (int j = 0; j < n_actions; ++j) actions[j] = "a" + std::to_string(j);

  auto sq = [](const Rational& x) { return x * x; };
  Matrix u(n_actions, std::vector<Rational>(n_states));
  Matrix v(n_actions, std::vector<Rational>(n_states));
  Matrix u2(n_actions, std::vector<Rational>(n_states));
  for (int j = 0; j < n_actions; ++j) {
    for (int i = 0; i < n_states; ++i) {
      v[j][i] = -sq(action_grid[j] - state_grid[i]);
      u[j][i] = -sq(action_grid[j] - state_grid[i] - b);
      u2[j][i] = -sq(action_grid[j] - state_grid[i] - beta * b);
    }
  }
  Expert2 e2;
  e2.kind = Expert2::Kind::Payoff;
  e2.payoff = std::move(u2);
  return GameSpec::create(std::move(states), std::move(actions), Belief::uniform(n_states),
                          std::move(u), std::move(v), std::move(e2));
}

RedundancyCheck check_no_redundant_actions_experts(const GameSpec& g) {
  for (int a = 0; a < g.num_actions(); ++a) {
    for (int a2 = a + 1; a2 < g.num_actions(); ++a2) {
      if (g.expert_payoff[a] == g.expert_payoff[a2]) {
        return {false, {a, a2}};
      }
    }
  }
  return {true, {}};
}

}  // namespace persuasion
