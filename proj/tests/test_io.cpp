#include "persuasion/game_io.hpp"

#include "doctest.h"
#include "persuasion/fixtures.hpp"

using namespace persuasion;

namespace {

Rational r(const char* s) { return Rational::parse(s); }

const char* kFourLineGame = R"({
  "states": ["w0", "w1"],
  "actions": ["a0", "aL", "aR", "a1"],
  "prior": [0.55, 0.45],
  "expert_payoff": [[1, 2], [0.7, 2.2], [1.9, 0.4], [2, 1]],
  "dm_payoff": [[3, -7], [1.5, -3.5], [-2.5, 2.5], [-5.5, 4.5]]
})";

}  // namespace

TEST_CASE("json numbers convert exactly, not through doubles") {
  GameFile gf = parse_game_text(kFourLineGame);
  CHECK(gf.game.prior[0] == r("11/20"));
  CHECK(gf.game.prior[1] == r("9/20"));
  CHECK(gf.game.u(1, 1) == r("11/5"));   // 2.2, exactly
  CHECK(gf.game.v(1, 1) == r("-7/2"));   // -3.5, exactly
  CHECK(gf.game.expert_payoff == fixtures::mixed_punishment_game().expert_payoff);
  CHECK(gf.game.dm_payoff == fixtures::mixed_punishment_game().dm_payoff);
}

TEST_CASE("rational strings and expert2 round-trip") {
  std::string text = R"({
    "states": ["w0", "w1"],
    "actions": ["a", "b"],
    "prior": ["7/11", "4/11"],
    "expert_payoff": [["1/3", 2], [0, "5/7"]],
    "dm_payoff": [[1, 0], [0, 1]],
    "expert2": {"beta": "1/4"}
  })";
  GameFile gf = parse_game_text(text);
  CHECK(gf.game.prior[0] == r("7/11"));
  CHECK(gf.game.u(0, 0) == r("1/3"));
  REQUIRE(gf.game.has_expert2());
  CHECK(gf.game.expert2->kind == Expert2::Kind::Beta);
  CHECK(gf.game.expert2->beta == r("1/4"));

  GameFile back = parse_game_text(game_to_json(gf.game));
  CHECK(back.game.prior == gf.game.prior);
  CHECK(back.game.expert_payoff == gf.game.expert_payoff);
  CHECK(back.game.expert2->beta == r("1/4"));
}

TEST_CASE("expert2 as a full matrix") {
  std::string text = R"({
    "states": ["w0", "w1"],
    "actions": ["a", "b"],
    "prior": [0.5, 0.5],
    "expert_payoff": [[1, 0], [0, 1]],
    "dm_payoff": [[1, 0], [0, 1]],
    "expert2": {"payoff": [[0, 1], [1, 0]]}
  })";
  GameFile gf = parse_game_text(text);
  CHECK(gf.game.u2(0, 0) == Rational(0));
  CHECK(gf.game.u2(0, 1) == Rational(1));
}

TEST_CASE("experiment block loads as a kernel") {
  std::string text = R"({
    "states": ["w0", "w1"],
    "actions": ["a"],
    "prior": [0.5, 0.5],
    "expert_payoff": [[1, 0]],
    "dm_payoff": [[1, 0]],
    "experiment": {"signals": ["s0", "s1"], "probs": [["7/11", "4/11"], ["1/3", "2/3"]]}
  })";
  GameFile gf = parse_game_text(text);
  REQUIRE(gf.experiment.has_value());
  CHECK(gf.experiment->probs[0][0] == r("7/11"));
}

TEST_CASE("malformed inputs carry field diagnostics") {
  auto message_of = [](const std::string& text) {
    try {
      parse_game_text(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("(no error)");
  };
  CHECK(message_of("{") .find("byte") != std::string::npos);
  CHECK(message_of(R"({"states": ["a","b"]})").find("missing field") != std::string::npos);
  CHECK(message_of(R"({"states": ["w0","w1"], "actions": ["a"], "prior": [1, "x"],
                      "expert_payoff": [[0,0]], "dm_payoff": [[0,0]]})")
            .find("prior[1]") != std::string::npos);
  CHECK(message_of(R"({"states": ["w0","w1"], "actions": ["a"], "prior": [0.5, 0.5],
                      "expert_payoff": [[0,0,9]], "dm_payoff": [[0,0]]})")
            .find("expert_payoff") != std::string::npos);
  CHECK(message_of(R"({"states": ["w0","w1"], "actions": ["a"], "prior": [0.4, 0.5],
                      "expert_payoff": [[0,0]], "dm_payoff": [[0,0]]})")
            .find("sum") != std::string::npos);
  CHECK(message_of(R"({"states": ["w0","w1"], "actions": ["a"], "prior": [0.5, 0.5],
                      "expert_payoff": [[0,0]], "dm_payoff": [[0,0]], "bogus": 1})")
            .find("unknown field 'bogus'") != std::string::npos);
}

TEST_CASE("shipped game files match the built-in fixtures") {
  auto same = [](const GameFile& file, const GameSpec& fix) {
    CHECK(file.game.states == fix.states);
    CHECK(file.game.actions == fix.actions);
    CHECK(file.game.prior == fix.prior);
    CHECK(file.game.expert_payoff == fix.expert_payoff);
    CHECK(file.game.dm_payoff == fix.dm_payoff);
  };
  same(load_game_file(std::string(GAMES_DIR) + "/mixed_punishment.json"),
       fixtures::mixed_punishment_game());
  same(load_game_file(std::string(GAMES_DIR) + "/pure_punishment.json"),
       fixtures::pure_punishment_game());
  same(load_game_file(std::string(GAMES_DIR) + "/opposed.json"), fixtures::opposed_payoffs_game());
  same(load_game_file(std::string(GAMES_DIR) + "/boundary_prior.json"),
       fixtures::boundary_prior_game());
}

TEST_CASE("profiles round-trip through json and re-verify identically") {
  GameSpec g = fixtures::mixed_punishment_game();
  TruthfulEquilibrium eq = construct_truthful_equilibrium(g);
  std::string text = profile_to_json(eq.profile);
  StrategyProfile back = profile_from_json(g, text);
  EquilibriumReport first = verify_equilibrium(g, eq.profile);
  EquilibriumReport second = verify_equilibrium(g, back);
  CHECK(first.pass == second.pass);
  CHECK(first.expert_payoff == second.expert_payoff);
  CHECK(first.dm_payoff == second.dm_payoff);
  CHECK(back.response[0][1].action == eq.profile.response[0][1].action);
  CHECK(back.experiment1.rows[0][0].hi == eq.profile.experiment1.rows[0][0].hi);
}
