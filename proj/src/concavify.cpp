#include "persuasion/concavify.hpp"

#include <algorithm>
#include <optional>

#include "persuasion/lp.hpp"

namespace persuasion {

Rational Splitting::total_value() const {
  Rational t;
  for (const auto& a : atoms) t += a.weight * a.value;
  return t;
}

void Splitting::validate(const GameSpec& g) const {
  if (atoms.empty()) throw std::logic_error("Splitting: no atoms");
  Rational wsum;
  std::vector<Rational> mix(prior.size(), Rational(0));
  for (const auto& a : atoms) {
    if (a.weight.sign() <= 0) throw std::logic_error("Splitting: non-positive weight");
    if (a.posterior.size() != prior.size()) throw std::logic_error("Splitting: dimension mismatch");
    wsum += a.weight;
    for (int s = 0; s < prior.size(); ++s) mix[s] += a.weight * a.posterior[s];
    if (a.value != u_bar(g, a.posterior)) throw std::logic_error("Splitting: stored value != u_bar");
  }
  if (wsum != Rational(1)) throw std::logic_error("Splitting: weights sum to " + wsum.str());
  for (int s = 0; s < prior.size(); ++s) {
    if (mix[s] != prior[s]) throw std::logic_error("Splitting: not Bayes-plausible");
  }
}

namespace {

struct Column {
  Belief belief;
  Rational value;
};

// max sum lambda_k value_k s.t. sum lambda_k belief_k = prior, sum lambda = 1.
LinearProgram master_program(const std::vector<Column>& cols, const Belief& prior) {
  const int k = static_cast<int>(cols.size());
  LinearProgram lp;
  lp.goal = Goal::Maximize;
  lp.nonneg.assign(k, true);
  for (const auto& c : cols) lp.objective.push_back(c.value);
  for (int s = 0; s < prior.size(); ++s) {
    std::vector<Rational> row(k);
    for (int j = 0; j < k; ++j) row[j] = cols[j].belief[s];
    lp.add_row(std::move(row), Sense::Eq, prior[s]);
  }
  lp.add_row(std::vector<Rational>(k, Rational(1)), Sense::Eq, Rational(1));
  return lp;
}

// Feasibility of achieving objective exactly `target` with support inside
// `allowed`; returns the lambdas when feasible.
std::optional<std::vector<Rational>> restricted_solution(const std::vector<Column>& cols,
                                                         const Belief& prior,
                                                         const Rational& target,
                                                         const std::vector<int>& allowed) {
  const int k = static_cast<int>(allowed.size());
  LinearProgram lp;
  lp.goal = Goal::Minimize;
  lp.objective.assign(k, Rational(0));
  lp.nonneg.assign(k, true);
  for (int s = 0; s < prior.size(); ++s) {
    std::vector<Rational> row(k);
    for (int j = 0; j < k; ++j) row[j] = cols[allowed[j]].belief[s];
    lp.add_row(std::move(row), Sense::Eq, prior[s]);
  }
  std::vector<Rational> vrow(k), ones(k, Rational(1));
  for (int j = 0; j < k; ++j) vrow[j] = cols[allowed[j]].value;
  lp.add_row(std::move(ones), Sense::Eq, Rational(1));
  lp.add_row(std::move(vrow), Sense::Eq, target);
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  return sol.primal;
}

// Lexicographic-smallest support achieving the optimum: depth-first over
// ascending vertex indices, pruning branches whose index pool cannot reach
// the target value.
std::optional<std::vector<int>> lex_support(const std::vector<Column>& cols, const Belief& prior,
                                            const Rational& target, std::vector<int>& prefix,
                                            int start, int max_atoms) {
  if (!prefix.empty() && restricted_solution(cols, prior, target, prefix)) return prefix;
  if (static_cast<int>(prefix.size()) == max_atoms) return std::nullopt;
  const int k = static_cast<int>(cols.size());
  for (int i = start; i < k; ++i) {
    std::vector<int> pool = prefix;
    for (int j = i; j < k; ++j) pool.push_back(j);
    // if prefix + {i..} cannot reach the target, neither can any smaller suffix
    if (!restricted_solution(cols, prior, target, pool)) break;
    prefix.push_back(i);
    if (auto res = lex_support(cols, prior, target, prefix, i + 1, max_atoms)) return res;
    prefix.pop_back();
  }
  return std::nullopt;
}

std::vector<Column> vertex_columns(const GameSpec& g, int geometry_limit) {
  std::vector<Column> cols;
  for (const auto& v : subdivision_vertices(g, nullptr, geometry_limit)) {
    cols.push_back({v.belief, v.ubar_value});
  }
  return cols;
}

// Column generation for games beyond the enumeration limit: price one
// best-reply region at a time against the master duals.
std::pair<Rational, Splitting> solve_by_column_generation(const GameSpec& g, const Belief& prior) {
  const int n = g.num_states();
  std::vector<Column> pool;
  for (int s = 0; s < n; ++s) {
    Belief p = Belief::point(n, s);
    pool.push_back({p, u_bar(g, p)});
  }
  std::vector<int> ahat = supported_actions(g);
  LpSolution master;
  for (int round = 0;; ++round) {
    if (round > 10000) throw std::logic_error("column generation failed to terminate");
    master = lp_solve(master_program(pool, prior));
    if (master.status != LpStatus::Optimal) throw std::logic_error("cav master LP not optimal");
    const std::vector<Rational>& y = master.dual;  // n barycenter rows + sum row
    bool improved = false;
    for (int a : ahat) {
      LinearProgram pricing;
      pricing.goal = Goal::Maximize;
      pricing.nonneg.assign(n, true);
      pricing.objective.resize(n);
      for (int s = 0; s < n; ++s) pricing.objective[s] = g.u(a, s) - y[s];
      for (int a2 = 0; a2 < g.num_actions(); ++a2) {
        if (a2 == a) continue;
        std::vector<Rational> row(n);
        for (int s = 0; s < n; ++s) row[s] = g.v(a, s) - g.v(a2, s);
        pricing.add_row(std::move(row), Sense::GreaterEq, Rational(0));
      }
      pricing.add_row(std::vector<Rational>(n, Rational(1)), Sense::Eq, Rational(1));
      LpSolution priced = lp_solve(pricing);
      if (priced.status != LpStatus::Optimal) throw std::logic_error("pricing LP not optimal");
      if (priced.objective - y[n] <= Rational(0)) continue;
      Belief q(priced.primal);
      Rational val = expert_row_payoff(g, a, q);
      bool known = false;
      for (auto& c : pool) {
        if (c.belief == q) {
          known = true;
          if (val > c.value) {
            c.value = val;
            improved = true;
          }
          break;
        }
      }
      if (!known) {
        pool.push_back({q, val});
        improved = true;
      }
    }
    if (!improved) break;
  }
  Splitting split{{}, prior};
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (master.primal[j].sign() > 0) {
      split.atoms.push_back({master.primal[j], pool[j].belief, u_bar(g, pool[j].belief)});
    }
  }
  return {master.objective, std::move(split)};
}

}  // namespace

Rational cav_u_bar(const GameSpec& g, const Belief& prior, int geometry_limit) {
  if (prior.size() != g.num_states()) throw std::invalid_argument("cav_u_bar: dimension mismatch");
  if (g.num_states() > geometry_limit) return solve_by_column_generation(g, prior).first;
  LpSolution sol = lp_solve(master_program(vertex_columns(g, geometry_limit), prior));
  if (sol.status != LpStatus::Optimal) throw std::logic_error("cav LP not optimal");
  return sol.objective;
}

Splitting optimal_splitting(const GameSpec& g, const Belief& prior, int geometry_limit) {
  if (prior.size() != g.num_states()) throw std::invalid_argument("optimal_splitting: dimension mismatch");
  Rational here = u_bar(g, prior);

  if (g.num_states() > geometry_limit) {
    auto [value, split] = solve_by_column_generation(g, prior);
    if (value == here) return Splitting{{{Rational(1), prior, here}}, prior};
    split.validate(g);
    return split;
  }

  std::vector<Column> cols = vertex_columns(g, geometry_limit);
  LpSolution sol = lp_solve(master_program(cols, prior));
  if (sol.status != LpStatus::Optimal) throw std::logic_error("cav LP not optimal");
  if (sol.objective == here) {
    // the prior cannot be usefully split
    return Splitting{{{Rational(1), prior, here}}, prior};
  }
  std::vector<int> prefix;
  auto support = lex_support(cols, prior, sol.objective, prefix, 0, g.num_states());
  if (!support) throw std::logic_error("optimal_splitting: no basic support found");
  auto lambdas = restricted_solution(cols, prior, sol.objective, *support);
  Splitting split{{}, prior};
  for (std::size_t j = 0; j < support->size(); ++j) {
    if ((*lambdas)[j].sign() > 0) {
      split.atoms.push_back({(*lambdas)[j], cols[(*support)[j]].belief, cols[(*support)[j]].value});
    }
  }
  split.validate(g);
  return split;
}

Splitting splitting_from_posteriors(const GameSpec& g, const Belief& prior,
                                    const std::vector<Belief>& posteriors) {
  std::vector<Column> cols;
  for (const auto& p : posteriors) cols.push_back({p, u_bar(g, p)});
  const int k = static_cast<int>(cols.size());
  LinearProgram lp;
  lp.goal = Goal::Minimize;
  lp.objective.assign(k, Rational(0));
  lp.nonneg.assign(k, true);
  for (int s = 0; s < prior.size(); ++s) {
    std::vector<Rational> row(k);
    for (int j = 0; j < k; ++j) row[j] = cols[j].belief[s];
    lp.add_row(std::move(row), Sense::Eq, prior[s]);
  }
  lp.add_row(std::vector<Rational>(k, Rational(1)), Sense::Eq, Rational(1));
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) {
    throw std::invalid_argument("splitting_from_posteriors: prior not in the posteriors' hull");
  }
  Splitting split{{}, prior};
  for (int j = 0; j < k; ++j) {
    if (sol.primal[j].sign() > 0) split.atoms.push_back({sol.primal[j], cols[j].belief, cols[j].value});
  }
  split.validate(g);
  return split;
}

Kernel splitting_to_kernel(const Splitting& split) {
  const int n = split.prior.size();
  const int m = split.num_atoms();
  Kernel k;
  for (int j = 0; j < m; ++j) k.signals.push_back("s" + std::to_string(j));
  k.probs.assign(n, std::vector<Rational>(m, Rational(0)));
  for (int s = 0; s < n; ++s) {
    if (split.prior[s].is_zero()) {
      k.probs[s][0] = 1;  // never reached; any fixed assignment works
      continue;
    }
    for (int j = 0; j < m; ++j) {
      k.probs[s][j] = split.atoms[j].weight * split.atoms[j].posterior[s] / split.prior[s];
    }
  }
  k.validate();
  return k;
}

Rational grid_cav_oracle(const GameSpec& g, const Belief& prior, long grid_size) {
  if (g.num_states() != 2) throw std::invalid_argument("grid_cav_oracle: only two-state games");
  if (grid_size < 1) throw std::invalid_argument("grid_cav_oracle: grid size must be >= 1");
  std::vector<Rational> xs;
  for (long i = 0; i <= grid_size; ++i) xs.push_back(Rational(i, grid_size));
  for (const auto& v : subdivision_vertices(g)) xs.push_back(v.belief[1]);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto at = [&](const Rational& p) {
    return u_bar(g, Belief({Rational(1) - p, p}));
  };
  const Rational p0 = prior[1];
  std::vector<Rational> fs;
  fs.reserve(xs.size());
  for (const auto& x : xs) fs.push_back(at(x));

  if (static_cast<long>(xs.size()) <= 2048) {
    // literal pairwise-chord maximization at the prior
    Rational best;
    bool seen = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] > p0) continue;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (xs[j] < p0) continue;
        Rational val;
        if (i == j) {
          val = fs[i];
        } else {
          val = (fs[i] * (xs[j] - p0) + fs[j] * (p0 - xs[i])) / (xs[j] - xs[i]);
        }
        if (!seen || val > best) {
          best = val;
          seen = true;
        }
      }
    }
    return best;
  }

  // exact upper hull sweep for big grids; same maximum as the chord scan
  std::vector<std::size_t> hull;
  auto cross_nonpos = [&](std::size_t a, std::size_t b, std::size_t c) {
    // true if b is not strictly above segment a-c
    return (fs[b] - fs[a]) * (xs[c] - xs[a]) <= (fs[c] - fs[a]) * (xs[b] - xs[a]);
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2 && cross_nonpos(hull[hull.size() - 2], hull.back(), i)) hull.pop_back();
    hull.push_back(i);
  }
  for (std::size_t k2 = 0; k2 + 1 < hull.size(); ++k2) {
    std::size_t i = hull[k2], j = hull[k2 + 1];
    if (xs[i] <= p0 && p0 <= xs[j]) {
      if (i == j || xs[i] == p0) return fs[i];
      return (fs[i] * (xs[j] - p0) + fs[j] * (p0 - xs[i])) / (xs[j] - xs[i]);
    }
  }
  return fs.back();
}

}  // namespace persuasion
