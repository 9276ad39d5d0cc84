#include "persuasion/game.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "persuasion/fixtures.hpp"

using namespace persuasion;

namespace {

Rational r(const char* s) { return Rational::parse(s); }

MixedAction pure(const GameSpec& g, int a) { return MixedAction::pure(g.num_actions(), a); }

}  // namespace

TEST_CASE("belief and mixed action invariants") {
  CHECK_THROWS_AS(Belief({r("0.5"), r("0.4")}), std::invalid_argument);
  CHECK_THROWS_AS(Belief({r("1.5"), r("-0.5")}), std::invalid_argument);
  CHECK(Belief::uniform(4)[2] == Rational(1, 4));
  CHECK(Belief::point(3, 1).weights() == std::vector<Rational>{0, 1, 0});
  CHECK(Belief({r("0.3"), r("0.7")}).interior());
  CHECK_FALSE(Belief::point(2, 0).interior());

  MixedAction m({r("0"), r("1/2"), r("1/2"), r("0")});
  CHECK(m.support() == std::vector<int>{1, 2});
  CHECK_FALSE(m.is_pure());
  CHECK(MixedAction::pure(3, 2).is_pure());
  CHECK_THROWS_AS(MixedAction({r("0.9"), r("0.2")}), std::invalid_argument);
}

TEST_CASE("expected payoffs on the four-action fixture") {
  GameSpec g = fixtures::mixed_punishment_game();
  Belief prior = g.prior;

  // a0 line is 1 + pi
  CHECK(expected_expert_payoff(g, pure(g, 0), prior) == r("1.45"));
  // degenerate distributions read the matrix entry
  CHECK(expected_expert_payoff(g, pure(g, 2), Belief::point(2, 1)) == r("0.4"));
  CHECK(expected_dm_payoff(g, pure(g, 3), Belief::point(2, 0)) == r("-5.5"));
  // the half-half mix of aL and aR is constant 1.3 in the belief
  MixedAction mix({r("0"), r("1/2"), r("1/2"), r("0")});
  for (const char* p : {"0", "0.25", "0.45", "1"}) {
    Belief b({Rational(1) - r(p), r(p)});
    CHECK(expected_expert_payoff(g, mix, b) == r("1.3"));
  }
  CHECK(expected_dm_payoff(g, pure(g, 1), Belief({r("0.6"), r("0.4")})) == r("-0.5"));

  GameSpec g3 = fixtures::pure_punishment_game();
  for (const char* p : {"0.1", "0.45", "0.8"}) {
    Belief b({Rational(1) - r(p), r(p)});
    CHECK(expected_dm_payoff(g3, pure(g3, 1), b) == Rational(0));
  }

  // dimension mismatch
  CHECK_THROWS_AS(expected_expert_payoff(g, MixedAction::pure(3, 0), prior), std::invalid_argument);
  CHECK_THROWS_AS(expected_dm_payoff(g, pure(g, 0), Belief::uniform(3)), std::invalid_argument);
}

TEST_CASE("payoffs are exactly bilinear") {
  GameSpec g = fixtures::mixed_punishment_game();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(0, 10);
  auto random_belief = [&] {
    std::vector<Rational> w(2);
    Rational a(1 + num(rng)), b(1 + num(rng));
    w[0] = a / (a + b);
    w[1] = b / (a + b);
    return Belief(w);
  };
  for (int i = 0; i < 50; ++i) {
    Belief x = random_belief(), y = random_belief();
    Rational t(num(rng), 10);
    Belief mix = convex_combination({{t, x}, {Rational(1) - t, y}});
    for (int a = 0; a < g.num_actions(); ++a) {
      Rational lhs = expected_expert_payoff(g, pure(g, a), mix);
      Rational rhs = t * expected_expert_payoff(g, pure(g, a), x) +
                     (Rational(1) - t) * expected_expert_payoff(g, pure(g, a), y);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("expert redundancy check") {
  CHECK(check_no_redundant_actions_experts(fixtures::mixed_punishment_game()).ok);
  CHECK(check_no_redundant_actions_experts(fixtures::pure_punishment_game()).ok);

  GameSpec g = fixtures::mixed_punishment_game();
  std::vector<std::string> actions = g.actions;
  actions.push_back("dup");
  Matrix u = g.expert_payoff;
  u.push_back(u[1]);  // duplicate aL's expert row
  Matrix v = g.dm_payoff;
  v.push_back({r("9"), r("9")});
  GameSpec dup = GameSpec::create(g.states, actions, g.prior, u, v, std::nullopt);
  auto res = check_no_redundant_actions_experts(dup);
  CHECK_FALSE(res.ok);
  CHECK(res.witness == std::vector<int>{1, 4});
}

TEST_CASE("dm redundancy check") {
  CHECK(check_no_redundant_actions_dm(fixtures::mixed_punishment_game()).ok);
  CHECK(check_no_redundant_actions_dm(fixtures::opposed_payoffs_game()).ok);

  // duplicated dm row: the duplicate pair can never be strictly separated
  GameSpec g = fixtures::opposed_payoffs_game();
  std::vector<std::string> actions = g.actions;
  actions.push_back("a1copy");
  Matrix u = g.expert_payoff;
  u.push_back({r("5"), r("5")});
  Matrix v = g.dm_payoff;
  v.push_back(v[1]);
  GameSpec dup = GameSpec::create(g.states, actions, g.prior, u, v, std::nullopt);
  auto res = check_no_redundant_actions_dm(dup);
  CHECK_FALSE(res.ok);
  CHECK(res.witness.size() == 2);  // the duplicate pair, reached in size order
}

TEST_CASE("quadratic game construction") {
  // zero bias collapses the preferences
  GameSpec flat = make_quadratic_game(2, 2, Rational(0), Rational(0));
  CHECK(flat.expert_payoff == flat.dm_payoff);

  Rational b = r("1/10"), beta = r("1/2");
  GameSpec g = make_quadratic_game(3, 5, b, beta);
  CHECK(g.num_states() == 3);
  CHECK(g.num_actions() == 5);
  CHECK(g.prior == Belief::uniform(3));
  REQUIRE(g.has_expert2());
  // the convex-combination identity, entry by entry:
  // -(a-w-beta*b)^2 == (1-beta)(-(a-w)^2) + beta(-(a-w-b)^2) + b^2 beta(1-beta)
  Rational shift = b * b * beta * (Rational(1) - beta);
  for (int a = 0; a < g.num_actions(); ++a) {
    for (int s = 0; s < g.num_states(); ++s) {
      Rational lhs = g.u2(a, s);
      Rational rhs = (Rational(1) - beta) * g.v(a, s) + beta * g.u(a, s) + shift;
      CHECK(lhs == rhs);
    }
  }

  // beta = 0 gives expert 2 exactly the dm payoffs
  GameSpec aligned = make_quadratic_game(3, 4, b, Rational(0));
  for (int a = 0; a < aligned.num_actions(); ++a) {
    for (int s = 0; s < aligned.num_states(); ++s) {
      CHECK(aligned.u2(a, s) == aligned.v(a, s));
    }
  }

  CHECK_THROWS_AS(make_quadratic_game(1, 3, b, beta), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic_game(3, 3, b, Rational(2)), std::invalid_argument);
}

TEST_CASE("expert2 payoff variants") {
  GameSpec g = fixtures::mixed_punishment_game();
  CHECK(g.u2(0, 1) == g.u(0, 1));  // defaults to expert 1

  Expert2 beta;
  beta.kind = Expert2::Kind::Beta;
  beta.beta = r("1/4");
  GameSpec gb = GameSpec::create(g.states, g.actions, g.prior, g.expert_payoff, g.dm_payoff, beta);
  CHECK(gb.u2(0, 0) == r("1/4") * g.u(0, 0) + r("3/4") * g.v(0, 0));

  CHECK_THROWS_AS(GameSpec::create(g.states, g.actions, g.prior, g.expert_payoff, g.dm_payoff,
                                   Expert2{Expert2::Kind::Beta, r("7/2"), {}}),
                  std::invalid_argument);
}

TEST_CASE("game validation") {
  GameSpec g = fixtures::mixed_punishment_game();
  CHECK_THROWS_AS(GameSpec::create({"w0"}, {"a"}, Belief({Rational(1)}), {{Rational(0)}},
                                   {{Rational(0)}}, std::nullopt),
                  std::invalid_argument);
  Matrix short_rows = g.expert_payoff;
  short_rows.pop_back();
  CHECK_THROWS_AS(GameSpec::create(g.states, g.actions, g.prior, short_rows, g.dm_payoff, std::nullopt),
                  std::invalid_argument);
}
