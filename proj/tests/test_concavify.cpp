#include "persuasion/concavify.hpp"

#include <random>

#include "doctest.h"
#include "persuasion/fixtures.hpp"

using namespace persuasion;

namespace {

Rational r(const char* s) { return Rational::parse(s); }

Belief at(const char* p) { return Belief({Rational(1) - r(p), r(p)}); }

GameSpec one_action_game() {
  return GameSpec::create({"w0", "w1"}, {"only"}, Belief({r("0.55"), r("0.45")}),
                          {{r("2"), r("5")}}, {{r("1"), r("0")}}, std::nullopt);
}

GameSpec random_two_state_game(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entries(-20, 20), den(1, 8), na(1, 5), pr(1, 19);
  int actions = static_cast<int>(na(rng));
  Matrix u, v;
  for (int a = 0; a < actions; ++a) {
    u.push_back({Rational(entries(rng), den(rng)), Rational(entries(rng), den(rng))});
    v.push_back({Rational(entries(rng), den(rng)), Rational(entries(rng), den(rng))});
  }
  Rational p(pr(rng), 20);
  std::vector<std::string> names;
  for (int a = 0; a < actions; ++a) names.push_back("a" + std::to_string(a));
  return GameSpec::create({"w0", "w1"}, names, Belief({Rational(1) - p, p}), u, v, std::nullopt);
}

}  // namespace

TEST_CASE("grid oracle pins the fixture values first") {
  GameSpec g = fixtures::mixed_punishment_game();
  CHECK(grid_cav_oracle(g, g.prior, 10) == r("27/20"));
  // the large grid takes the hull path; the answer must not move
  CHECK(grid_cav_oracle(g, g.prior, 10000) == r("27/20"));

  GameSpec g4 = fixtures::opposed_payoffs_game();
  CHECK(grid_cav_oracle(g4, g4.prior, 10) == r("-1/20"));

  GameSpec g1 = one_action_game();
  CHECK(grid_cav_oracle(g1, g1.prior, 7) == expected_expert_payoff(g1, MixedAction::pure(1, 0), g1.prior));

  CHECK_THROWS_AS(grid_cav_oracle(fixtures::boundary_prior_game(), fixtures::boundary_prior_game().prior, 10),
                  std::invalid_argument);
}

TEST_CASE("cav u_bar equals the oracle on the fixtures") {
  GameSpec g = fixtures::mixed_punishment_game();
  CHECK(cav_u_bar(g, g.prior) == r("27/20"));
  CHECK(cav_u_bar(g, at("0.3")) == r("1.3"));
  CHECK(cav_u_bar(g, Belief::point(2, 1)) == r("1"));

  GameSpec g4 = fixtures::opposed_payoffs_game();
  CHECK(cav_u_bar(g4, g4.prior) == r("-1/20"));

  GameSpec g1 = one_action_game();
  CHECK(cav_u_bar(g1, g1.prior) == r("67/20"));  // 2*(11/20) + 5*(9/20)
}

TEST_CASE("optimal splitting of the four-action fixture") {
  GameSpec g = fixtures::mixed_punishment_game();
  Splitting s = optimal_splitting(g, g.prior);
  s.validate(g);
  REQUIRE(s.num_atoms() == 2);
  CHECK(s.atoms[0].weight == r("1/2"));
  CHECK(s.atoms[0].posterior == at("3/10"));
  CHECK(s.atoms[0].value == r("13/10"));
  CHECK(s.atoms[1].weight == r("1/2"));
  CHECK(s.atoms[1].posterior == at("3/5"));
  CHECK(s.atoms[1].value == r("7/5"));
  CHECK(s.total_value() == r("27/20"));

  // determinism
  Splitting again = optimal_splitting(g, g.prior);
  CHECK(again.atoms[0].posterior == s.atoms[0].posterior);
  CHECK(again.atoms[1].posterior == s.atoms[1].posterior);
}

TEST_CASE("concave value functions do not split") {
  GameSpec g4 = fixtures::opposed_payoffs_game();
  Splitting s = optimal_splitting(g4, g4.prior);
  REQUIRE(s.num_atoms() == 1);
  CHECK(s.atoms[0].weight == Rational(1));
  CHECK(s.atoms[0].posterior == g4.prior);
  CHECK(s.atoms[0].value == r("-1/20"));

  // a degenerate prior cannot be split either
  GameSpec g = fixtures::mixed_punishment_game();
  Splitting sd = optimal_splitting(g, Belief::point(2, 1));
  REQUIRE(sd.num_atoms() == 1);
  CHECK(sd.atoms[0].posterior == Belief::point(2, 1));
}

TEST_CASE("splitting to kernel reproduces the canonical experiment") {
  GameSpec g = fixtures::mixed_punishment_game();
  Kernel k = splitting_to_kernel(optimal_splitting(g, g.prior));
  REQUIRE(k.signals == std::vector<std::string>{"s0", "s1"});
  CHECK(k.probs[0][0] == r("7/11"));
  CHECK(k.probs[0][1] == r("4/11"));
  CHECK(k.probs[1][0] == r("1/3"));
  CHECK(k.probs[1][1] == r("2/3"));
  // the usual two-digit rendering of these
  CHECK(k.probs[0][0].decimal(2) == "0.64");
  CHECK(k.probs[1][1].decimal(2) == "0.67");

  Kernel single = splitting_to_kernel(optimal_splitting(fixtures::opposed_payoffs_game(),
                                                        fixtures::opposed_payoffs_game().prior));
  CHECK(single.num_signals() == 1);
  CHECK(single.probs[0][0] == Rational(1));
  CHECK(single.probs[1][0] == Rational(1));
}

TEST_CASE("full revelation on a small quadratic game") {
  GameSpec g = make_quadratic_game(2, 3, r("1/10"), Rational(1));
  Splitting s = optimal_splitting(g, g.prior);
  REQUIRE(s.num_atoms() == 2);
  for (const auto& atom : s.atoms) {
    bool degenerate = false;
    for (int i = 0; i < atom.posterior.size(); ++i) {
      if (atom.posterior[i] == Rational(1)) degenerate = true;
    }
    CHECK(degenerate);
  }
  Kernel k = splitting_to_kernel(s);
  CHECK(k.probs[0][0] + k.probs[0][1] == Rational(1));
  for (int w = 0; w < 2; ++w) {
    int own = -1;
    for (int j = 0; j < 2; ++j) {
      if (k.probs[w][j] == Rational(1)) own = j;
    }
    CHECK(own >= 0);  // each state maps to its own signal with probability 1
  }
}

TEST_CASE("splitting invariants and chord domination") {
  GameSpec g = fixtures::pure_punishment_game();
  Splitting s = optimal_splitting(g, g.prior);
  s.validate(g);
  REQUIRE(s.num_atoms() == 2);
  CHECK(s.atoms[0].posterior == at("3/10"));
  CHECK(s.atoms[1].posterior == at("3/5"));
  CHECK(s.total_value() == r("27/20"));

  // any sub-distribution over the optimal posteriors stays below the
  // weighted values
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    Rational t(static_cast<long>(rng() % 11), 10);
    Belief mix = convex_combination({{t, s.atoms[0].posterior}, {Rational(1) - t, s.atoms[1].posterior}});
    CHECK(u_bar(g, mix) <= t * s.atoms[0].value + (Rational(1) - t) * s.atoms[1].value);
  }
}

TEST_CASE("column generation matches vertex enumeration") {
  // force the column-generation path by lowering the geometry limit; the
  // exact optimum must be identical
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 12; ++i) {
    GameSpec g = random_two_state_game(rng);
    Rational direct = cav_u_bar(g, g.prior, kDefaultGeometryLimit);
    Rational generated = cav_u_bar(g, g.prior, 1);
    CHECK(direct == generated);
    Splitting s = optimal_splitting(g, g.prior, 1);
    s.validate(g);
    CHECK(s.total_value() == direct);
  }
}

TEST_CASE("cav dominates u_bar and is concave along segments") {
  std::mt19937_64 rng(77);
  GameSpec g = fixtures::mixed_punishment_game();
  for (int i = 0; i < 25; ++i) {
    Rational p(static_cast<long>(rng() % 101), 100), q(static_cast<long>(rng() % 101), 100);
    Rational t(static_cast<long>(rng() % 11), 10);
    Belief x({Rational(1) - p, p}), y({Rational(1) - q, q});
    CHECK(cav_u_bar(g, x) >= u_bar(g, x));
    Belief mix = convex_combination({{t, x}, {Rational(1) - t, y}});
    CHECK(cav_u_bar(g, mix) >= t * cav_u_bar(g, x) + (Rational(1) - t) * cav_u_bar(g, y));
  }
}

TEST_CASE("random two-state games: cav equals the vertex-augmented oracle") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 40; ++i) {
    GameSpec g = random_two_state_game(rng);
    Rational lp_value = cav_u_bar(g, g.prior);
    CHECK(lp_value == grid_cav_oracle(g, g.prior, 16));
    Splitting s = optimal_splitting(g, g.prior);
    s.validate(g);
    CHECK(s.total_value() == lp_value);
    CHECK(s.num_atoms() <= g.num_states());
  }
}

TEST_CASE("three-state boundary prior splits into the tie vertex") {
  GameSpec g = fixtures::boundary_prior_game();
  CHECK(cav_u_bar(g, g.prior) == Rational(1, 2));
  Splitting s = optimal_splitting(g, g.prior);
  s.validate(g);
  REQUIRE(s.num_atoms() == 2);
  // the only optimal combination averages the first two state vertices
  CHECK(s.atoms[0].weight == Rational(1, 2));
  CHECK(s.atoms[1].weight == Rational(1, 2));
  CHECK(s.total_value() == Rational(1, 2));
}

TEST_CASE("splitting_from_posteriors solves the weights") {
  GameSpec g = fixtures::pure_punishment_game();
  Splitting s = splitting_from_posteriors(g, g.prior, {at("0.2"), at("0.8")});
  REQUIRE(s.num_atoms() == 2);
  CHECK(s.atoms[0].weight == r("7/12"));
  CHECK(s.atoms[1].weight == r("5/12"));
  CHECK_THROWS_AS(splitting_from_posteriors(g, g.prior, {at("0.5"), at("0.8")}),
                  std::invalid_argument);
}
