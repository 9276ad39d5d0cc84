#include "persuasion/punishment.hpp"

#include <algorithm>

#include "persuasion/lp.hpp"

namespace persuasion {

int ubar_attaining_action(const GameSpec& g, const Belief& pi) {
  Rational target = u_bar(g, pi);
  for (int a : best_replies(g, pi).actions) {
    if (expert_row_payoff(g, a, pi) == target) return a;
  }
  throw std::logic_error("u_bar not attained by a pure best reply");  // cannot happen
}

namespace {

PunishmentLpResult punishment_lp_atoms(const GameSpec& g, const std::vector<SplittingAtom>& atoms,
                                       const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("punishment_lp: empty subset");
  const int k = static_cast<int>(subset.size());
  const int m = static_cast<int>(atoms.size());
  // gains[a][s] = u(a, pi_s) - u_bar(pi_s)
  std::vector<std::vector<Rational>> gains(k, std::vector<Rational>(m));
  for (int j = 0; j < k; ++j) {
    for (int s = 0; s < m; ++s) {
      gains[j][s] = expert_row_payoff(g, subset[j], atoms[s].posterior) - atoms[s].value;
    }
  }
  // vars: alpha_0..alpha_{k-1} >= 0, x free; min x
  LinearProgram lp;
  lp.goal = Goal::Minimize;
  lp.objective.assign(k + 1, Rational(0));
  lp.objective[k] = 1;
  lp.nonneg.assign(k + 1, true);
  lp.nonneg[k] = false;
  for (int s = 0; s < m; ++s) {
    std::vector<Rational> row(k + 1);
    for (int j = 0; j < k; ++j) row[j] = gains[j][s];
    row[k] = -1;
    lp.add_row(std::move(row), Sense::LessEq, Rational(0));
  }
  std::vector<Rational> ones(k + 1, Rational(1));
  ones[k] = 0;
  lp.add_row(std::move(ones), Sense::Eq, Rational(1));

  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) throw std::logic_error("punishment LP not optimal");

  std::vector<Rational> weights(g.num_actions(), Rational(0));
  for (int j = 0; j < k; ++j) weights[subset[j]] = sol.primal[j];
  PunishmentLpResult out{sol.objective, MixedAction(std::move(weights)), {}};

  // dual of the atom rows; lambda-hat is a distribution and every member of
  // the subset gains at least y-hat against it (replayed exactly)
  DualCertificate cert;
  cert.subset = subset;
  cert.guaranteed_gain = sol.objective;
  Rational lsum;
  for (int s = 0; s < m; ++s) {
    cert.lambda_hat.push_back(-sol.dual[s]);
    if (cert.lambda_hat.back().sign() < 0) throw std::logic_error("punishment LP: negative dual");
    lsum += cert.lambda_hat.back();
  }
  if (lsum != Rational(1)) throw std::logic_error("punishment LP: dual not a distribution");
  for (int j = 0; j < k; ++j) {
    Rational avg;
    for (int s = 0; s < m; ++s) avg += cert.lambda_hat[s] * gains[j][s];
    if (avg < cert.guaranteed_gain) throw std::logic_error("punishment LP: certificate replay failed");
  }
  out.certificate = std::move(cert);
  return out;
}

PunishmentSearch search_over(const GameSpec& g, const std::vector<SplittingAtom>& atoms,
                             const std::vector<Belief>& hull, int subset_limit) {
  std::vector<int> ahat = supported_actions(g);
  const bool bounded = static_cast<int>(ahat.size()) <= subset_limit;
  const long work_cap = bounded ? -1 : (1L << subset_limit);

  PunishmentSearch out;
  long examined = 0;
  const int n = static_cast<int>(ahat.size());
  for (int k = 1; k <= n; ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      if (work_cap >= 0 && ++examined > work_cap) {
        throw SubsetLimitError("subset enumeration limit exceeded: " + std::to_string(n) +
                               " realizable actions > limit " + std::to_string(subset_limit) +
                               " and no punishment found within the work cap");
      }
      std::vector<int> subset;
      for (int idx : pick) subset.push_back(ahat[idx]);
      if (auto realized = realize_subset(g, hull, subset)) {
        PunishmentLpResult lpres = punishment_lp_atoms(g, atoms, subset);
        if (lpres.x_hat <= Rational(0)) {
          UniformPunishment p{realized->witness, lpres.alpha, {}, realized->hull_coeffs, subset};
          for (const auto& atom : atoms) {
            p.slack.push_back(atom.value - expected_expert_payoff(g, p.action, atom.posterior));
            if (p.slack.back().sign() < 0) throw std::logic_error("punishment: negative slack");
          }
          // support containment in br(pi_p), exactly
          auto br = best_replies(g, p.belief).actions;
          for (int a : p.action.support()) {
            if (std::find(br.begin(), br.end(), a) == br.end()) {
              throw std::logic_error("punishment: support escapes br(pi_p)");
            }
          }
          out.punishment = std::move(p);
          return out;
        }
        out.certificates.push_back(lpres.certificate);
      }
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

PunishmentLpResult punishment_lp(const GameSpec& g, const Splitting& split,
                                 const std::vector<int>& subset) {
  return punishment_lp_atoms(g, split.atoms, subset);
}

PunishmentSearch find_uniform_punishment(const GameSpec& g, const Splitting& split,
                                         int subset_limit) {
  std::vector<Belief> hull;
  for (const auto& a : split.atoms) hull.push_back(a.posterior);
  return search_over(g, split.atoms, hull, subset_limit);
}

PunishmentSearch pairwise_punishment(const GameSpec& g, const Splitting& split, int s, int t,
                                     int subset_limit) {
  if (s == t || s < 0 || t < 0 || s >= split.num_atoms() || t >= split.num_atoms()) {
    throw std::invalid_argument("pairwise_punishment: need two distinct atoms");
  }
  std::vector<SplittingAtom> pair{split.atoms[s], split.atoms[t]};
  std::vector<Belief> hull{split.atoms[s].posterior, split.atoms[t].posterior};
  return search_over(g, pair, hull, subset_limit);
}

SecondExpertCheck punishes_second_expert(const GameSpec& g, const Splitting& split,
                                         const UniformPunishment& p) {
  if (!g.has_expert2()) throw std::invalid_argument("punishes_second_expert: no second expert configured");
  SecondExpertCheck out;
  out.ok = true;
  for (const auto& atom : split.atoms) {
    int on_path = ubar_attaining_action(g, atom.posterior);
    Rational s = expert2_row_payoff(g, on_path, atom.posterior) -
                 expected_expert2_payoff(g, p.action, atom.posterior);
    if (s.sign() < 0) out.ok = false;
    out.slack.push_back(std::move(s));
  }
  return out;
}

}  // namespace persuasion
