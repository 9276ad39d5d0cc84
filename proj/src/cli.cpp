#include "persuasion/cli.hpp"

#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/game_io.hpp"

namespace persuasion {

namespace {

std::string show(const Rational& r) {
  bool exact = false;
  std::string dec = r.decimal(12, &exact);
  if (r.is_integer()) return r.str();
  if (exact) return r.str() + " (= " + dec + ")";
  return r.str() + " (approx " + dec + ")";
}

std::string show_belief(const Belief& b) {
  std::string s = "(";
  for (int i = 0; i < b.size(); ++i) s += (i ? ", " : "") + b[i].str();
  return s + ")";
}

nlohmann::json belief_json(const Belief& b) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < b.size(); ++i) arr.push_back(b[i].str());
  return arr;
}

nlohmann::json action_json(const MixedAction& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < a.size(); ++i) arr.push_back(a[i].str());
  return arr;
}

Belief parse_belief_arg(const std::string& text, int num_states) {
  std::vector<Rational> w;
  std::size_t start = 0;
  for (;;) {
    std::size_t colon = text.find(':', start);
    w.push_back(Rational::parse(text.substr(start, colon == std::string::npos ? colon : colon - start)));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (static_cast<int>(w.size()) == num_states) return Belief(std::move(w));
  if (w.size() == 1 && num_states == 2) {
    // a single number is the probability of the second state
    return Belief({Rational(1) - w[0], w[0]});
  }
  throw ParseError("posterior '" + text + "' has the wrong dimension");
}

Splitting parse_splitting_arg(const GameSpec& g, const std::string& text) {
  std::vector<SplittingAtom> atoms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string part = text.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t at = part.find('@');
    if (at == std::string::npos) throw ParseError("splitting atom '" + part + "' is not weight@posterior");
    Rational weight = Rational::parse(part.substr(0, at));
    Belief posterior = parse_belief_arg(part.substr(at + 1), g.num_states());
    atoms.push_back({std::move(weight), posterior, u_bar(g, posterior)});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  Splitting split{std::move(atoms), g.prior};
  try {
    split.validate(g);
  } catch (const std::logic_error& e) {
    throw ParseError(std::string("--splitting: ") + e.what());
  }
  return split;
}

void print_splitting(std::ostream& out, const Splitting& split) {
  for (const auto& atom : split.atoms) {
    out << "  weight " << show(atom.weight) << " @ posterior " << show_belief(atom.posterior)
        << "  u_bar " << show(atom.value) << "\n";
  }
}

nlohmann::json splitting_json(const Splitting& split) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : split.atoms) {
    atoms.push_back({{"weight", atom.weight.str()},
                     {"posterior", belief_json(atom.posterior)},
                     {"value", atom.value.str()}});
  }
  return atoms;
}

nlohmann::json kernel_json(const Kernel& k) {
  nlohmann::json probs = nlohmann::json::array();
  for (const auto& row : k.probs) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(x.str());
    probs.push_back(std::move(r));
  }
  return {{"signals", k.signals}, {"probs", std::move(probs)}};
}

nlohmann::json punishment_json(const GameSpec& g, const UniformPunishment& p) {
  nlohmann::json slack = nlohmann::json::array();
  for (const auto& s : p.slack) slack.push_back(s.str());
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.hull_coeffs) coeffs.push_back(c.str());
  nlohmann::json subset = nlohmann::json::array();
  for (int a : p.subset) subset.push_back(g.actions[a]);
  return {{"belief", belief_json(p.belief)},
          {"action", action_json(p.action)},
          {"slack", std::move(slack)},
          {"hull_coeffs", std::move(coeffs)},
          {"subset", std::move(subset)}};
}

nlohmann::json certificate_json(const GameSpec& g, const DualCertificate& c) {
  nlohmann::json lambda = nlohmann::json::array();
  for (const auto& l : c.lambda_hat) lambda.push_back(l.str());
  nlohmann::json subset = nlohmann::json::array();
  for (int a : c.subset) subset.push_back(g.actions[a]);
  return {{"subset", std::move(subset)},
          {"lambda_hat", std::move(lambda)},
          {"guaranteed_gain", c.guaranteed_gain.str()}};
}

nlohmann::json report_json(const EquilibriumReport& r) {
  nlohmann::json dev = nlohmann::json::array();
  for (const auto& d : r.deviations) {
    dev.push_back({{"expert", d.expert},
                   {"signal", d.signal},
                   {"alt_message", d.alt_message},
                   {"gain", d.gain.str()}});
  }
  nlohmann::json br = nlohmann::json::array();
  for (const auto& b : r.dm_rationality) {
    br.push_back({{"m1", b.m1}, {"m2", b.m2}, {"on_path", b.on_path}, {"ok", b.ok}});
  }
  return {{"pass", r.pass},
          {"expert_payoff", r.expert_payoff.str()},
          {"expert2_payoff", r.expert2_payoff.str()},
          {"dm_payoff", r.dm_payoff.str()},
          {"deviations", std::move(dev)},
          {"dm_rationality", std::move(br)},
          {"beliefs_consistent", r.beliefs_consistent},
          {"offpath_beliefs_in_hull", r.offpath_beliefs_in_hull},
          {"first_stage_gain1", r.first_stage_gain1.str()},
          {"first_stage_gain2", r.first_stage_gain2.str()},
          {"failures", r.failures}};
}

struct Options {
  std::string path;
  bool json = false;
  int geometry_limit = kDefaultGeometryLimit;
  long grid = 600;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string splitting;
  std::string out_path;
};

int cmd_solve(const GameSpec& g, const Options& opt, std::ostream& out) {
  Rational here = u_bar(g, g.prior);
  Rational cav = cav_u_bar(g, g.prior, opt.geometry_limit);
  Splitting split = optimal_splitting(g, g.prior, opt.geometry_limit);
  Kernel kernel = splitting_to_kernel(split);
  if (opt.json) {
    nlohmann::json j{{"u_bar_at_prior", here.str()},
                     {"cav_u_bar_at_prior", cav.str()},
                     {"split", split.num_atoms() > 1},
                     {"splitting", splitting_json(split)},
                     {"kernel", kernel_json(kernel)}};
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "u_bar(prior)      = " << show(here) << "\n";
  out << "cav u_bar(prior)  = " << show(cav) << "\n";
  if (split.num_atoms() == 1) {
    out << "prior not split (cav u_bar = u_bar at the prior)\n";
  } else {
    out << "optimal splitting:\n";
    print_splitting(out, split);
    out << "kernel sigma(signal | state):\n";
    for (int s = 0; s < kernel.num_states(); ++s) {
      for (int j = 0; j < kernel.num_signals(); ++j) {
        out << "  " << kernel.signals[j] << "|" << g.states[s] << " = " << show(kernel.probs[s][j])
            << "\n";
      }
    }
  }
  return 0;
}

Splitting splitting_from_kernel(const GameSpec& g, const Kernel& k) {
  std::vector<SplittingAtom> atoms;
  for (const auto& st : signal_stats(k, g.prior)) {
    if (st.zero) continue;
    atoms.push_back({st.lambda, *st.posterior, u_bar(g, *st.posterior)});
  }
  Splitting split{std::move(atoms), g.prior};
  split.validate(g);
  return split;
}

int cmd_punish(const GameSpec& g, const std::optional<Kernel>& experiment, const Options& opt,
               std::ostream& out) {
  // precedence: explicit --splitting, then the game file's experiment
  // block, then the optimal splitting
  Splitting split = !opt.splitting.empty() ? parse_splitting_arg(g, opt.splitting)
                    : experiment           ? splitting_from_kernel(g, *experiment)
                                           : optimal_splitting(g, g.prior, opt.geometry_limit);
  PunishmentSearch search = find_uniform_punishment(g, split);
  if (opt.json) {
    nlohmann::json j{{"splitting", splitting_json(split)}, {"found", search.punishment.has_value()}};
    if (search.punishment) {
      j["punishment"] = punishment_json(g, *search.punishment);
    } else {
      nlohmann::json certs = nlohmann::json::array();
      for (const auto& c : search.certificates) certs.push_back(certificate_json(g, c));
      j["certificates"] = std::move(certs);
    }
    out << j.dump(2) << "\n";
    return search.punishment ? 0 : 4;
  }
  out << "splitting:\n";
  print_splitting(out, split);
  if (search.punishment) {
    const auto& p = *search.punishment;
    out << "uniform punishment found\n";
    out << "  belief pi_p = " << show_belief(p.belief) << "\n";
    out << "  action alpha_p = " << p.action.str(g.actions) << "\n";
    out << "  per-atom slack:";
    for (const auto& s : p.slack) out << " " << show(s);
    out << "\n";
    return 0;
  }
  out << "no uniform punishment; dual certificates per realizable subset:\n";
  for (const auto& c : search.certificates) {
    out << "  subset {";
    for (std::size_t i = 0; i < c.subset.size(); ++i) out << (i ? ", " : "") << g.actions[c.subset[i]];
    out << "}: guaranteed gain " << show(c.guaranteed_gain) << " with lambda-hat (";
    for (std::size_t i = 0; i < c.lambda_hat.size(); ++i)
      out << (i ? ", " : "") << c.lambda_hat[i].str();
    out << ")\n";
  }
  return 4;
}

int cmd_equilibrium(const GameSpec& g, const Options& opt, std::ostream& out) {
  TruthfulEquilibrium eq = construct_truthful_equilibrium(g, opt.geometry_limit);
  EquilibriumReport rep = verify_equilibrium(g, eq.profile);
  if (opt.json) {
    nlohmann::json j{{"report", report_json(rep)},
                     {"splitting", splitting_json(eq.splitting)},
                     {"punishment", punishment_json(g, eq.punishment)},
                     {"profile", nlohmann::json::parse(profile_to_json(eq.profile))}};
    out << j.dump(2) << "\n";
    return rep.pass ? 0 : 4;
  }
  out << "truthful equilibrium " << (rep.pass ? "verified" : "FAILED VERIFICATION") << "\n";
  out << "  expert payoff  = " << show(rep.expert_payoff) << "\n";
  out << "  expert2 payoff = " << show(rep.expert2_payoff) << "\n";
  out << "  dm payoff      = " << show(rep.dm_payoff) << "\n";
  out << "splitting:\n";
  print_splitting(out, eq.splitting);
  out << "punishment belief " << show_belief(eq.punishment.belief) << ", action "
      << eq.punishment.action.str(g.actions) << "\n";
  for (const auto& f : rep.failures) out << "  failure: " << f << "\n";
  return rep.pass ? 0 : 4;
}

int cmd_dm_benefit(const GameSpec& g, const Options& opt, std::ostream& out) {
  DmBenefitResult res = construct_dm_beneficial_equilibrium(g, opt.geometry_limit);
  if (opt.json) {
    nlohmann::json j{{"baseline_v_bar", res.dm_baseline.str()}};
    switch (res.kind) {
      case DmBenefitResult::Kind::Profile:
        j["kind"] = "profile";
        j["dm_payoff"] = res.dm_payoff.str();
        j["splitting"] = splitting_json(*res.splitting);
        j["report"] = report_json(*res.report);
        j["profile"] = nlohmann::json::parse(profile_to_json(*res.profile));
        break;
      case DmBenefitResult::Kind::NotApplicable:
        j["kind"] = "not_applicable";
        j["note"] = res.note;
        break;
      case DmBenefitResult::Kind::NonGeneric:
        j["kind"] = "non_generic";
        j["note"] = res.note;
        break;
    }
    out << j.dump(2) << "\n";
    return res.kind == DmBenefitResult::Kind::Profile ? 0 : 4;
  }
  switch (res.kind) {
    case DmBenefitResult::Kind::Profile:
      out << "decision-maker benefits: payoff " << show(res.dm_payoff) << " vs v_bar(prior) "
          << show(res.dm_baseline) << "\n";
      out << "splitting:\n";
      print_splitting(out, *res.splitting);
      return 0;
    case DmBenefitResult::Kind::NotApplicable:
      out << "not applicable: " << res.note << "\n";
      return 4;
    case DmBenefitResult::Kind::NonGeneric:
      out << "non-generic prior: construction unavailable (" << res.note << ")\n";
      return 4;
  }
  return 4;
}

int cmd_simulate(const GameSpec& g, const Options& opt, std::ostream& out) {
  TruthfulEquilibrium eq = construct_truthful_equilibrium(g, opt.geometry_limit);
  SimulationReport rep = simulate(g, eq.profile, opt.trials, opt.seed);
  if (opt.json) {
    nlohmann::json j{{"trials", rep.trials},
                     {"seed", rep.seed},
                     {"rng", rep.rng},
                     {"mismatched_pairs", rep.mismatched_pairs},
                     {"expert", {{"mean", rep.mean_expert}, {"se", rep.se_expert}, {"exact", rep.exact_expert.str()}}},
                     {"expert2", {{"mean", rep.mean_expert2}, {"se", rep.se_expert2}, {"exact", rep.exact_expert2.str()}}},
                     {"dm", {{"mean", rep.mean_dm}, {"se", rep.se_dm}, {"exact", rep.exact_dm.str()}}}};
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "simulation: " << rep.trials << " trials, seed " << rep.seed << ", rng " << rep.rng << "\n";
  out << "  mismatched message pairs: " << rep.mismatched_pairs << "\n";
  auto line = [&](const char* name, double mean, double se, const Rational& exact) {
    out << "  " << name << ": empirical " << mean << " (se " << se << "), exact " << show(exact)
        << "\n";
  };
  line("expert ", rep.mean_expert, rep.se_expert, rep.exact_expert);
  line("expert2", rep.mean_expert2, rep.se_expert2, rep.exact_expert2);
  line("dm     ", rep.mean_dm, rep.se_dm, rep.exact_dm);
  return 0;
}

int cmd_plot(const GameSpec& g, const Options& opt, std::ostream& out, std::ostream& err) {
  if (g.num_states() != 2) {
    err << "plot requires a two-state game\n";
    return 5;
  }
  std::vector<Rational> xs;
  for (long i = 0; i <= opt.grid; ++i) xs.push_back(Rational(i, opt.grid));
  for (const auto& v : subdivision_vertices(g, nullptr, opt.geometry_limit)) {
    xs.push_back(v.belief[1]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::ofstream file;
  std::ostream* sink = &out;
  if (!opt.out_path.empty() && opt.out_path != "-") {
    file.open(opt.out_path, std::ios::binary);
    if (!file) {
      err << "cannot open output file '" << opt.out_path << "'\n";
      return 2;
    }
    sink = &file;
  }
  *sink << "pi";
  for (const auto& a : g.actions) *sink << ",v(" << a << ")";
  for (const auto& a : g.actions) *sink << ",u(" << a << ")";
  *sink << ",ubar,cav_ubar\n";
  for (const auto& x : xs) {
    Belief b({Rational(1) - x, x});
    *sink << x.decimal(12);
    for (int a = 0; a < g.num_actions(); ++a) *sink << "," << dm_row_payoff(g, a, b).decimal(12);
    for (int a = 0; a < g.num_actions(); ++a) *sink << "," << expert_row_payoff(g, a, b).decimal(12);
    *sink << "," << u_bar(g, b).decimal(12) << "," << cav_u_bar(g, b, opt.geometry_limit).decimal(12)
          << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"solver, verifier and simulator for two-expert cheap-talk persuasion games"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("game", opt.path, "game file (JSON)")->required();
    cmd->add_flag("--json", opt.json, "structured JSON output");
    cmd->add_option("--geometry-limit", opt.geometry_limit, "max states for exact vertex enumeration")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "value functions, concavification, optimal splitting");
  add_common(solve);
  CLI::App* punish = app.add_subcommand("punish", "uniform punishment search or dual certificates");
  add_common(punish);
  punish->add_option("--splitting", opt.splitting,
                     "explicit splitting 'w@p,w@p,...' (posterior: prob of the last state, or "
                     "colon-separated weights)");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "construct and verify the truthful equilibrium");
  add_common(equilibrium);
  CLI::App* dm_benefit = app.add_subcommand("dm-benefit", "equilibrium where the decision-maker gains");
  add_common(dm_benefit);
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo cross-check of the equilibrium");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--trials", opt.trials, "number of trials")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", opt.seed, "PRNG seed");
  CLI::App* plot = app.add_subcommand("plot", "CSV plot data for two-state games");
  add_common(plot);
  plot->add_option("--grid", opt.grid, "grid resolution")->check(CLI::Range(2L, 100000000L));
  plot->add_option("--out", opt.out_path, "output path ('-' for stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    GameFile gf = load_game_file(opt.path);
    const GameSpec& g = gf.game;
    if (solve->parsed()) return cmd_solve(g, opt, out);
    if (punish->parsed()) return cmd_punish(g, gf.experiment, opt, out);
    if (equilibrium->parsed()) return cmd_equilibrium(g, opt, out);
    if (dm_benefit->parsed()) return cmd_dm_benefit(g, opt, out);
    if (simulate_cmd->parsed()) return cmd_simulate(g, opt, out);
    if (plot->parsed()) return cmd_plot(g, opt, out, err);
    err << "no command\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const GeometryLimitError& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const SubsetLimitError& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace persuasion
