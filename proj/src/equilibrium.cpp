#include "persuasion/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "persuasion/lp.hpp"

namespace persuasion {

namespace {

int index_of(const std::vector<std::string>& labels, const std::string& s) {
  auto it = std::find(labels.begin(), labels.end(), s);
  if (it == labels.end()) throw std::invalid_argument("unknown label " + s);
  return static_cast<int>(it - labels.begin());
}

std::string reserved_message(const std::vector<std::string>& signals) {
  std::string m = "m#";
  while (std::find(signals.begin(), signals.end(), m) != signals.end()) m += "#";
  return m;
}

// P(m1, m2 | state) and the prior-weighted law, all exact.
struct MessageLaw {
  std::vector<std::vector<std::vector<Rational>>> cond;  // state x |M1| x |M2|
  std::vector<std::vector<Rational>> uncond;             // |M1| x |M2|
};

MessageLaw message_law(const GameSpec& g, const StrategyProfile& p) {
  JointSignalDist joint = joint_distribution(p.experiment1, p.experiment2, g.prior);
  const int n = g.num_states();
  const int m1 = static_cast<int>(p.messages1.size());
  const int m2 = static_cast<int>(p.messages2.size());
  const int s1n = static_cast<int>(joint.signals1.size());
  const int s2n = static_cast<int>(joint.signals2.size());
  MessageLaw law;
  law.cond.assign(n, std::vector<std::vector<Rational>>(m1, std::vector<Rational>(m2)));
  law.uncond.assign(m1, std::vector<Rational>(m2));
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < s1n; ++i) {
      for (int j = 0; j < s2n; ++j) {
        const Rational& mass = joint.conditional[w][i][j];
        if (mass.is_zero()) continue;
        for (int a = 0; a < m1; ++a) {
          if (p.report1[i][a].is_zero()) continue;
          for (int b = 0; b < m2; ++b) {
            if (p.report2[j][b].is_zero()) continue;
            law.cond[w][a][b] += mass * p.report1[i][a] * p.report2[j][b];
          }
        }
      }
    }
    for (int a = 0; a < m1; ++a) {
      for (int b = 0; b < m2; ++b) law.uncond[a][b] += g.prior[w] * law.cond[w][a][b];
    }
  }
  return law;
}

Rational mixed_payoff_at_state(const GameSpec& g, const MixedAction& alpha, int state,
                               int who /*0=u,1=u2,2=v*/) {
  Rational total;
  for (int a : alpha.support()) {
    const Rational val = who == 0 ? g.u(a, state) : (who == 1 ? g.u2(a, state) : g.v(a, state));
    total += alpha[a] * val;
  }
  return total;
}

bool belief_in_hull(const Belief& b, const std::vector<Belief>& hull) {
  if (hull.empty()) return false;
  LinearProgram lp;
  const int m = static_cast<int>(hull.size());
  lp.objective.assign(m, Rational(0));
  lp.nonneg.assign(m, true);
  for (int s = 0; s < b.size(); ++s) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) row[j] = hull[j][s];
    lp.add_row(std::move(row), Sense::Eq, b[s]);
  }
  lp.add_row(std::vector<Rational>(m, Rational(1)), Sense::Eq, Rational(1));
  return lp_solve(lp).status == LpStatus::Optimal;
}

}  // namespace

void StrategyProfile::validate(const GameSpec& g) const {
  experiment1.validate();
  experiment2.validate();
  if (experiment1.num_states() != g.num_states() || experiment2.num_states() != g.num_states()) {
    throw std::invalid_argument("StrategyProfile: experiment state count mismatch");
  }
  auto check_messages = [](const std::vector<std::string>& signals,
                           const std::vector<std::string>& messages) {
    if (messages.size() != signals.size() + 1) {
      throw std::invalid_argument("StrategyProfile: message set must be signals plus one reserved label");
    }
    for (std::size_t i = 0; i < signals.size(); ++i) {
      if (messages[i] != signals[i]) throw std::invalid_argument("StrategyProfile: message order");
    }
    std::set<std::string> uniq(messages.begin(), messages.end());
    if (uniq.size() != messages.size()) throw std::invalid_argument("StrategyProfile: duplicate messages");
  };
  check_messages(experiment1.signals, messages1);
  check_messages(experiment2.signals, messages2);
  auto check_report = [](const std::vector<std::vector<Rational>>& rep, std::size_t signals,
                         std::size_t messages) {
    if (rep.size() != signals) throw std::invalid_argument("StrategyProfile: reporting map incomplete");
    for (const auto& row : rep) {
      if (row.size() != messages) throw std::invalid_argument("StrategyProfile: reporting row size");
      Rational sum;
      for (const auto& x : row) {
        if (x.sign() < 0) throw std::invalid_argument("StrategyProfile: negative report probability");
        sum += x;
      }
      if (sum != Rational(1)) throw std::invalid_argument("StrategyProfile: report row sums to " + sum.str());
    }
  };
  check_report(report1, experiment1.signals.size(), messages1.size());
  check_report(report2, experiment2.signals.size(), messages2.size());
  if (response.size() != messages1.size()) {
    throw std::invalid_argument("StrategyProfile: response table incomplete");
  }
  for (const auto& row : response) {
    if (row.size() != messages2.size()) throw std::invalid_argument("StrategyProfile: response row size");
    for (const auto& r : row) {
      if (r.belief.size() != g.num_states() || r.action.size() != g.num_actions()) {
        throw std::invalid_argument("StrategyProfile: response dimensions");
      }
    }
  }
  if (offpath) {
    if (offpath->belief != g.prior) {
      throw std::invalid_argument("StrategyProfile: off-path continuation must sit at the prior");
    }
    if (offpath->action.size() != g.num_actions()) {
      throw std::invalid_argument("StrategyProfile: off-path action dimensions");
    }
  }
}

ExactPayoffs exact_profile_payoffs(const GameSpec& g, const StrategyProfile& p) {
  MessageLaw law = message_law(g, p);
  ExactPayoffs out;
  for (int w = 0; w < g.num_states(); ++w) {
    for (std::size_t a = 0; a < p.messages1.size(); ++a) {
      for (std::size_t b = 0; b < p.messages2.size(); ++b) {
        const Rational& mass = law.cond[w][a][b];
        if (mass.is_zero()) continue;
        const MixedAction& act = p.response[a][b].action;
        Rational scale = g.prior[w] * mass;
        out.expert += scale * mixed_payoff_at_state(g, act, w, 0);
        out.expert2 += scale * mixed_payoff_at_state(g, act, w, 1);
        out.dm += scale * mixed_payoff_at_state(g, act, w, 2);
      }
    }
  }
  return out;
}

EquilibriumReport verify_equilibrium(const GameSpec& g, const StrategyProfile& p) {
  p.validate(g);
  EquilibriumReport rep;
  ExactPayoffs pay = exact_profile_payoffs(g, p);
  rep.expert_payoff = pay.expert;
  rep.expert2_payoff = pay.expert2;
  rep.dm_payoff = pay.dm;

  JointSignalDist joint = joint_distribution(p.experiment1, p.experiment2, g.prior);
  MessageLaw law = message_law(g, p);
  bool deviations_ok = true;

  // (i) single-signal reporting deviations, for each expert
  for (int expert = 1; expert <= 2; ++expert) {
    const auto& signals = expert == 1 ? p.experiment1.signals : p.experiment2.signals;
    const auto& messages = expert == 1 ? p.messages1 : p.messages2;
    const auto& own_report = expert == 1 ? p.report1 : p.report2;
    const auto& other_report = expert == 1 ? p.report2 : p.report1;
    const int who = expert == 1 ? 0 : 1;
    for (std::size_t si = 0; si < signals.size(); ++si) {
      // marginal probability of the signal
      Rational lambda;
      for (int w = 0; w < g.num_states(); ++w) {
        for (std::size_t so = 0; so < (expert == 1 ? joint.signals2.size() : joint.signals1.size());
             ++so) {
          lambda += g.prior[w] *
                    (expert == 1 ? joint.conditional[w][si][so] : joint.conditional[w][so][si]);
        }
      }
      if (lambda.is_zero()) continue;
      bool pure_on_path_known = false;
      std::size_t pure_message = 0;
      for (std::size_t mi = 0; mi < messages.size(); ++mi) {
        if (own_report[si][mi] == Rational(1)) {
          pure_on_path_known = true;
          pure_message = mi;
        }
      }
      for (std::size_t alt = 0; alt < messages.size(); ++alt) {
        if (pure_on_path_known && alt == pure_message) continue;
        // gain from always sending `alt` at this signal, conditional on it
        Rational gain;
        for (int w = 0; w < g.num_states(); ++w) {
          for (std::size_t so = 0; so < (expert == 1 ? joint.signals2.size() : joint.signals1.size());
               ++so) {
            const Rational& mass =
                expert == 1 ? joint.conditional[w][si][so] : joint.conditional[w][so][si];
            if (mass.is_zero()) continue;
            for (std::size_t mo = 0; mo < other_report[so].size(); ++mo) {
              if (other_report[so][mo].is_zero()) continue;
              const MixedAction& dev_act =
                  expert == 1 ? p.response[alt][mo].action : p.response[mo][alt].action;
              Rational dev = mixed_payoff_at_state(g, dev_act, w, who);
              Rational onp;
              for (std::size_t mi = 0; mi < messages.size(); ++mi) {
                if (own_report[si][mi].is_zero()) continue;
                const MixedAction& act =
                    expert == 1 ? p.response[mi][mo].action : p.response[mo][mi].action;
                onp += own_report[si][mi] * mixed_payoff_at_state(g, act, w, who);
              }
              gain += g.prior[w] * mass * other_report[so][mo] * (dev - onp);
            }
          }
        }
        gain /= lambda;
        if (gain.sign() > 0) {
          deviations_ok = false;
          rep.failures.push_back("expert " + std::to_string(expert) + " gains " + gain.str() +
                                 " by reporting " + messages[alt] + " at signal " + signals[si]);
        }
        rep.deviations.push_back({expert, signals[si], messages[alt], std::move(gain)});
      }
    }
  }

  // (ii) DM sequential rationality at every message pair, plus the
  // off-path continuation
  bool br_ok = true;
  for (std::size_t a = 0; a < p.messages1.size(); ++a) {
    for (std::size_t b = 0; b < p.messages2.size(); ++b) {
      const DmResponse& r = p.response[a][b];
      auto br = best_replies(g, r.belief).actions;
      bool ok = true;
      for (int act : r.action.support()) {
        if (std::find(br.begin(), br.end(), act) == br.end()) ok = false;
      }
      bool on_path = law.uncond[a][b].sign() > 0;
      if (!ok) {
        br_ok = false;
        rep.failures.push_back("DM action at (" + p.messages1[a] + ", " + p.messages2[b] +
                               ") is not a best reply to the stored belief");
      }
      rep.dm_rationality.push_back({p.messages1[a], p.messages2[b], on_path, ok});
    }
  }
  if (p.offpath) {
    auto br = best_replies(g, p.offpath->belief).actions;
    bool ok = true;
    for (int act : p.offpath->action.support()) {
      if (std::find(br.begin(), br.end(), act) == br.end()) ok = false;
    }
    if (!ok) {
      br_ok = false;
      rep.failures.push_back("off-path continuation action is not a best reply at the prior");
    }
    rep.dm_rationality.push_back({"(off-path)", "(off-path)", false, ok});
  }

  // (iii) on-path belief consistency against Bayes, and off-path beliefs
  // confined to the hull of the feasible signal-pair posteriors
  std::vector<Belief> feasible_posteriors;
  for (std::size_t i = 0; i < joint.signals1.size(); ++i) {
    for (std::size_t j = 0; j < joint.signals2.size(); ++j) {
      Rational mass;
      for (int w = 0; w < g.num_states(); ++w) mass += g.prior[w] * joint.conditional[w][i][j];
      if (mass.is_zero()) continue;
      std::vector<Rational> post(g.num_states());
      for (int w = 0; w < g.num_states(); ++w) {
        post[w] = g.prior[w] * joint.conditional[w][i][j] / mass;
      }
      feasible_posteriors.push_back(Belief(std::move(post)));
    }
  }
  for (std::size_t a = 0; a < p.messages1.size(); ++a) {
    for (std::size_t b = 0; b < p.messages2.size(); ++b) {
      if (law.uncond[a][b].is_zero()) {
        if (!belief_in_hull(p.response[a][b].belief, feasible_posteriors)) {
          rep.offpath_beliefs_in_hull = false;
          rep.failures.push_back("belief at off-path pair (" + p.messages1[a] + ", " +
                                 p.messages2[b] +
                                 ") lies outside the hull of feasible posteriors");
        }
        continue;
      }
      std::vector<Rational> post(g.num_states());
      for (int w = 0; w < g.num_states(); ++w) {
        post[w] = g.prior[w] * law.cond[w][a][b] / law.uncond[a][b];
      }
      bool ok = Belief(std::move(post)) == p.response[a][b].belief;
      if (!ok) {
        rep.beliefs_consistent = false;
        rep.failures.push_back("stored belief at (" + p.messages1[a] + ", " + p.messages2[b] +
                               ") differs from the Bayes posterior");
      }
      rep.belief_consistency.push_back({p.messages1[a], p.messages2[b], ok});
    }
  }

  // (iv) first-stage deviation against the babbling continuation
  if (p.offpath) {
    rep.first_stage_gain1 = expected_expert_payoff(g, p.offpath->action, g.prior) - rep.expert_payoff;
    rep.first_stage_gain2 = expected_expert2_payoff(g, p.offpath->action, g.prior) - rep.expert2_payoff;
    if (rep.first_stage_gain1.sign() > 0 || rep.first_stage_gain2.sign() > 0) {
      deviations_ok = false;
      rep.failures.push_back("a first-stage deviation to another experiment is profitable");
    }
  }

  rep.pass = deviations_ok && br_ok;
  return rep;
}

namespace {

StrategyProfile build_truthful_profile(const GameSpec& g, const Splitting& split,
                                       const UniformPunishment& punishment,
                                       const MixedAction& offpath_action) {
  Kernel kernel = splitting_to_kernel(split);
  IntervalPartition part = kernel_to_partition(kernel);
  StrategyProfile p{part, part, {}, {}, {}, {}, {}, std::nullopt};
  std::string reserved = reserved_message(part.signals);
  p.messages1 = part.signals;
  p.messages1.push_back(reserved);
  p.messages2 = p.messages1;
  const int ns = static_cast<int>(part.signals.size());
  const int nm = ns + 1;
  for (int i = 0; i < ns; ++i) {
    std::vector<Rational> row(nm, Rational(0));
    row[i] = 1;
    p.report1.push_back(row);
    p.report2.push_back(std::move(row));
  }
  for (int a = 0; a < nm; ++a) {
    std::vector<DmResponse> row;
    for (int b = 0; b < nm; ++b) {
      if (a == b && a < ns) {
        const auto& atom = split.atoms[a];
        row.push_back({atom.posterior,
                       MixedAction::pure(g.num_actions(), ubar_attaining_action(g, atom.posterior))});
      } else {
        row.push_back({punishment.belief, punishment.action});
      }
    }
    p.response.push_back(std::move(row));
  }
  p.offpath = DmResponse{g.prior, offpath_action};
  p.validate(g);
  return p;
}

}  // namespace

TruthfulEquilibrium construct_truthful_equilibrium(const GameSpec& g, int geometry_limit,
                                                   int subset_limit) {
  Splitting split = optimal_splitting(g, g.prior, geometry_limit);
  PunishmentSearch search = find_uniform_punishment(g, split, subset_limit);
  if (!search.punishment) {
    // guaranteed to exist for optimal splittings
    throw std::logic_error("no uniform punishment for an optimal splitting");
  }
  MixedAction offpath = MixedAction::pure(g.num_actions(), ubar_attaining_action(g, g.prior));
  StrategyProfile profile = build_truthful_profile(g, split, *search.punishment, offpath);
  return {std::move(profile), std::move(split), std::move(*search.punishment)};
}

StrategyProfile babbling_profile(const GameSpec& g, IntervalPartition e1, IntervalPartition e2) {
  e1.validate();
  e2.validate();
  StrategyProfile p{std::move(e1), std::move(e2), {}, {}, {}, {}, {}, std::nullopt};
  p.messages1 = p.experiment1.signals;
  p.messages1.push_back(reserved_message(p.experiment1.signals));
  p.messages2 = p.experiment2.signals;
  p.messages2.push_back(reserved_message(p.experiment2.signals));
  for (std::size_t i = 0; i < p.experiment1.signals.size(); ++i) {
    std::vector<Rational> row(p.messages1.size(), Rational(0));
    row[0] = 1;  // pool every signal on the first message
    p.report1.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < p.experiment2.signals.size(); ++i) {
    std::vector<Rational> row(p.messages2.size(), Rational(0));
    row[0] = 1;
    p.report2.push_back(std::move(row));
  }
  MixedAction fixed = MixedAction::pure(g.num_actions(), ubar_attaining_action(g, g.prior));
  for (std::size_t a = 0; a < p.messages1.size(); ++a) {
    std::vector<DmResponse> row;
    for (std::size_t b = 0; b < p.messages2.size(); ++b) row.push_back({g.prior, fixed});
    p.response.push_back(std::move(row));
  }
  p.offpath = DmResponse{g.prior, fixed};
  p.validate(g);
  return p;
}

DmBenefitResult construct_dm_beneficial_equilibrium(const GameSpec& g, int geometry_limit,
                                                    int subset_limit) {
  DmBenefitResult out;
  out.dm_baseline = v_bar(g, g.prior);
  Splitting split = optimal_splitting(g, g.prior, geometry_limit);
  Rational cav = split.total_value();
  if (cav == u_bar(g, g.prior)) {
    out.kind = DmBenefitResult::Kind::NotApplicable;
    out.note = "experts do not benefit from persuasion at this prior";
    return out;
  }
  Rational dm_at_split;
  for (const auto& atom : split.atoms) dm_at_split += atom.weight * v_bar(g, atom.posterior);
  if (dm_at_split > out.dm_baseline) {
    TruthfulEquilibrium eq = construct_truthful_equilibrium(g, geometry_limit, subset_limit);
    EquilibriumReport rep = verify_equilibrium(g, eq.profile);
    out.kind = DmBenefitResult::Kind::Profile;
    out.note = "the optimal splitting already benefits the decision-maker";
    out.dm_payoff = rep.dm_payoff;
    out.profile = std::move(eq.profile);
    out.splitting = std::move(eq.splitting);
    out.report = std::move(rep);
    return out;
  }

  auto br0 = best_replies(g, g.prior).actions;
  if (!g.prior.interior()) {
    out.kind = DmBenefitResult::Kind::NonGeneric;
    out.note = "prior lies on the simplex boundary; the constructive argument needs an interior prior";
    return out;
  }
  if (br0.size() > 2) {
    out.kind = DmBenefitResult::Kind::NonGeneric;
    out.note = "more than two best replies at the prior";
    return out;
  }

  // The constructive case: every a in BR(prior) is a best reply across the
  // splitting's hull, and some atom s_a leaves the experts strictly short
  // of u_bar under a. Nudge a belief into the interior of the u_bar
  // attaining action's region near that atom, then stretch the segment
  // through the prior as far as the punishment action's region allows.
  for (int a : br0) {
    for (const auto& atom : split.atoms) {
      if (expert_row_payoff(g, a, atom.posterior) >= atom.value) continue;
      std::vector<int> targets;
      targets.push_back(ubar_attaining_action(g, atom.posterior));
      for (int cand : best_replies(g, atom.posterior).actions) {
        if (cand != targets[0] &&
            expert_row_payoff(g, cand, atom.posterior) > expert_row_payoff(g, a, atom.posterior)) {
          targets.push_back(cand);
        }
      }
      for (int target : targets) {
        // line search toward the atom, staying where `target` is uniquely optimal
        std::optional<Belief> upper;
        Belief z = cell_interior_point(g, target, geometry_limit);
        for (int iter = 0; iter < 64; ++iter) {
          auto brz = best_replies(g, z).actions;
          if (brz.size() == 1 && brz[0] == target &&
              expert_row_payoff(g, a, z) < expert_row_payoff(g, target, z)) {
            upper = z;
            break;
          }
          z = convex_combination({{Rational(1, 2), z}, {Rational(1, 2), atom.posterior}});
        }
        if (!upper) continue;
        // extend the ray from `upper` through the prior inside BR^-1(a)
        // maximal t with upper + t*(prior-upper) feasible
        std::vector<Rational> dir(g.num_states());
        for (int s = 0; s < g.num_states(); ++s) dir[s] = g.prior[s] - (*upper)[s];
        std::optional<Rational> tmax;
        auto bound = [&](const std::vector<Rational>& coeffs, const Rational& at_upper) {
          Rational slope;
          for (int s = 0; s < g.num_states(); ++s) slope += coeffs[s] * dir[s];
          if (slope.sign() >= 0) return;
          Rational t = at_upper / -slope;
          if (!tmax || t < *tmax) tmax = t;
        };
        for (int a2 = 0; a2 < g.num_actions(); ++a2) {
          if (a2 == a) continue;
          std::vector<Rational> coeffs(g.num_states());
          Rational at_upper;
          for (int s = 0; s < g.num_states(); ++s) {
            coeffs[s] = g.v(a, s) - g.v(a2, s);
            at_upper += coeffs[s] * (*upper)[s];
          }
          bound(coeffs, at_upper);
        }
        for (int s = 0; s < g.num_states(); ++s) {
          std::vector<Rational> coeffs(g.num_states(), Rational(0));
          coeffs[s] = 1;
          bound(coeffs, (*upper)[s]);
        }
        if (!tmax || *tmax <= Rational(1)) continue;
        std::vector<Rational> low(g.num_states());
        for (int s = 0; s < g.num_states(); ++s) low[s] = (*upper)[s] + *tmax * dir[s];
        Belief lower(std::move(low));

        Rational w_upper = Rational(1) - Rational(1) / *tmax;
        Splitting cand{{{w_upper, *upper, u_bar(g, *upper)},
                        {Rational(1) / *tmax, lower, u_bar(g, lower)}},
                       g.prior};
        cand.validate(g);
        UniformPunishment pun{g.prior,
                              MixedAction::pure(g.num_actions(), a),
                              {},
                              {w_upper, Rational(1) / *tmax},
                              {a}};
        bool slack_ok = true;
        for (const auto& catom : cand.atoms) {
          pun.slack.push_back(catom.value - expert_row_payoff(g, a, catom.posterior));
          if (pun.slack.back().sign() < 0) slack_ok = false;
        }
        if (!slack_ok) continue;
        StrategyProfile profile =
            build_truthful_profile(g, cand, pun, MixedAction::pure(g.num_actions(), a));
        EquilibriumReport rep = verify_equilibrium(g, profile);
        if (!rep.pass || rep.dm_payoff <= out.dm_baseline) continue;
        out.kind = DmBenefitResult::Kind::Profile;
        out.dm_payoff = rep.dm_payoff;
        out.profile = std::move(profile);
        out.splitting = std::move(cand);
        out.report = std::move(rep);
        return out;
      }
    }
  }
  out.kind = DmBenefitResult::Kind::NonGeneric;
  out.note = "constructive search failed; the prior appears to be one of the non-generic cases";
  return out;
}

ConcaveValueReport concave_value_diagnostics(const GameSpec& g, int geometry_limit, int subset_limit,
                              int interior_samples, std::uint64_t seed) {
  ConcaveValueReport rep;
  rep.dm_redundancy = check_no_redundant_actions_dm(g, subset_limit, geometry_limit);
  rep.expert_redundancy = check_no_redundant_actions_experts(g);

  auto verts = subdivision_vertices(g, nullptr, geometry_limit);
  std::vector<Belief> probes;
  for (const auto& v : verts) probes.push_back(v.belief);
  const std::size_t nverts = probes.size();
  for (std::size_t i = 0; i < nverts; ++i) {
    for (std::size_t j = i + 1; j < nverts; ++j) {
      probes.push_back(
          convex_combination({{Rational(1, 2), probes[i]}, {Rational(1, 2), probes[j]}}));
    }
  }
  rep.ubar_concave = true;
  for (const auto& b : probes) {
    if (cav_u_bar(g, b, geometry_limit) != u_bar(g, b)) {
      rep.ubar_concave = false;
      break;
    }
  }
  if (!rep.ubar_concave) {
    rep.summary = "u_bar is not concave; the no-benefit result does not apply";
    return rep;
  }
  if (!rep.dm_redundancy.ok || !rep.expert_redundancy.ok) {
    rep.summary = "assumption failure: redundant actions present";
    return rep;
  }
  rep.applicable = true;

  // best replies coincide with the experts' worst actions everywhere
  std::vector<int> ahat = supported_actions(g);
  auto coincide_at = [&](const Belief& b) {
    std::vector<int> mins;
    Rational worst;
    for (std::size_t i = 0; i < ahat.size(); ++i) {
      Rational val = expert_row_payoff(g, ahat[i], b);
      if (i == 0 || val < worst) {
        worst = val;
        mins = {ahat[i]};
      } else if (val == worst) {
        mins.push_back(ahat[i]);
      }
    }
    return best_replies(g, b).actions == mins;
  };
  rep.br_minimizes_experts = true;
  std::mt19937_64 rng(seed);
  std::vector<Belief> coincidence_probes;
  for (const auto& v : verts) coincidence_probes.push_back(v.belief);
  for (int k = 0; k < interior_samples; ++k) {
    std::vector<Rational> w(g.num_states());
    Rational sum;
    for (auto& x : w) {
      x = Rational(1 + static_cast<long>(rng() % 997));
      sum += x;
    }
    for (auto& x : w) x /= sum;
    coincidence_probes.push_back(Belief(std::move(w)));
  }
  for (const auto& b : coincidence_probes) {
    if (!coincide_at(b)) {
      rep.br_minimizes_experts = false;
      rep.br_minimizes_counterexample = b;
      break;
    }
  }

  // canonical two-atom truthful candidates spanning the prior
  Rational u0 = u_bar(g, g.prior);
  Rational v0 = v_bar(g, g.prior);
  rep.consequence_holds = true;
  for (std::size_t i = 0; i < nverts; ++i) {
    for (std::size_t j = i + 1; j < nverts; ++j) {
      // prior strictly inside the segment probes[i]..probes[j]?
      std::optional<Rational> t;  // prior = t*lo + (1-t)*hi
      bool colinear = true;
      for (int s = 0; s < g.num_states() && colinear; ++s) {
        Rational d = probes[i][s] - probes[j][s];
        Rational num = g.prior[s] - probes[j][s];
        if (d.is_zero()) {
          if (!num.is_zero()) colinear = false;
        } else if (!t) {
          t = num / d;
        } else if (*t * d != num) {
          colinear = false;
        }
      }
      if (!colinear || !t || t->sign() <= 0 || *t >= Rational(1)) continue;
      ConcaveValueCandidate cand{probes[i], probes[j], ConcaveValueCandidate::Outcome::Refuted, {}, std::nullopt,
                          std::nullopt};
      Splitting split{{{*t, probes[i], u_bar(g, probes[i])},
                       {Rational(1) - *t, probes[j], u_bar(g, probes[j])}},
                      g.prior};
      split.validate(g);
      PunishmentSearch search = find_uniform_punishment(g, split, subset_limit);
      if (!search.punishment) {
        cand.outcome = ConcaveValueCandidate::Outcome::Refuted;
        cand.certificates = std::move(search.certificates);
      } else {
        StrategyProfile profile = build_truthful_profile(
            g, split, *search.punishment,
            MixedAction::pure(g.num_actions(), ubar_attaining_action(g, g.prior)));
        EquilibriumReport vrep = verify_equilibrium(g, profile);
        if (vrep.pass) {
          cand.outcome = ConcaveValueCandidate::Outcome::Verified;
          cand.expert_payoff = vrep.expert_payoff;
          cand.dm_payoff = vrep.dm_payoff;
          if (vrep.expert_payoff != u0 || vrep.dm_payoff != v0) rep.consequence_holds = false;
        } else {
          cand.outcome = ConcaveValueCandidate::Outcome::FailedVerification;
        }
      }
      rep.candidates.push_back(std::move(cand));
    }
  }
  std::ostringstream os;
  os << "u_bar concave; " << rep.candidates.size() << " canonical candidates, all "
     << (rep.consequence_holds ? "consistent with" : "VIOLATING") << " prior-value payoffs ("
     << u0.str() << ", " << v0.str() << ")";
  rep.summary = os.str();
  return rep;
}

SimulationReport simulate(const GameSpec& g, const StrategyProfile& p, std::uint64_t trials,
                          std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("simulate: need at least one trial");
  p.validate(g);
  SimulationReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.rng = rng::kAlgorithm;
  ExactPayoffs exact = exact_profile_payoffs(g, p);
  rep.exact_expert = exact.expert;
  rep.exact_expert2 = exact.expert2;
  rep.exact_dm = exact.dm;

  // per-(state, message pair) payoffs in double, precomputed
  const int nm1 = static_cast<int>(p.messages1.size());
  const int nm2 = static_cast<int>(p.messages2.size());
  std::vector<double> pu(g.num_states() * nm1 * nm2), pu2(pu.size()), pv(pu.size());
  for (int w = 0; w < g.num_states(); ++w) {
    for (int a = 0; a < nm1; ++a) {
      for (int b = 0; b < nm2; ++b) {
        std::size_t idx = (static_cast<std::size_t>(w) * nm1 + a) * nm2 + b;
        const MixedAction& act = p.response[a][b].action;
        pu[idx] = mixed_payoff_at_state(g, act, w, 0).to_double();
        pu2[idx] = mixed_payoff_at_state(g, act, w, 1).to_double();
        pv[idx] = mixed_payoff_at_state(g, act, w, 2).to_double();
      }
    }
  }
  auto pick_message = [](const std::vector<Rational>& row, std::mt19937_64& gen) {
    int last = -1;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == Rational(1)) return static_cast<int>(i);
      if (row[i].sign() > 0) last = static_cast<int>(i);
    }
    // non-degenerate row: walk the exact CDF against a dyadic draw
    Rational x = Rational::from_double(static_cast<double>(gen() >> 11) * 0x1.0p-53);
    Rational cum;
    for (std::size_t i = 0; i < row.size(); ++i) {
      cum += row[i];
      if (x < cum) return static_cast<int>(i);
    }
    return last;
  };

  double sum_u = 0, sumsq_u = 0, sum_u2 = 0, sumsq_u2 = 0, sum_v = 0, sumsq_v = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(rng::trial_seed(seed, t));
    PlayOutcome o = sample_play(p.experiment1, p.experiment2, g.prior, gen);
    int sig1 = index_of(p.experiment1.signals, o.signal1);
    int sig2 = index_of(p.experiment2.signals, o.signal2);
    int m1 = pick_message(p.report1[sig1], gen);
    int m2 = pick_message(p.report2[sig2], gen);
    if (p.messages1[m1] != p.messages2[m2]) ++rep.mismatched_pairs;
    std::size_t idx = (static_cast<std::size_t>(o.state) * nm1 + m1) * nm2 + m2;
    sum_u += pu[idx];
    sumsq_u += pu[idx] * pu[idx];
    sum_u2 += pu2[idx];
    sumsq_u2 += pu2[idx] * pu2[idx];
    sum_v += pv[idx];
    sumsq_v += pv[idx] * pv[idx];
  }
  const double n = static_cast<double>(trials);
  auto finalize = [n](double sum, double sumsq, double& mean, double& se) {
    mean = sum / n;
    double var = n > 1 ? (sumsq - n * mean * mean) / (n - 1) : 0.0;
    if (var < 0) var = 0;
    se = std::sqrt(var / n);
  };
  finalize(sum_u, sumsq_u, rep.mean_expert, rep.se_expert);
  finalize(sum_u2, sumsq_u2, rep.mean_expert2, rep.se_expert2);
  finalize(sum_v, sumsq_v, rep.mean_dm, rep.se_dm);
  return rep;
}

}  // namespace persuasion
