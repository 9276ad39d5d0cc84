#include "persuasion/fixtures.hpp"

namespace persuasion::fixtures {

namespace {

Rational r(const char* s) { return Rational::parse(s); }

Matrix rows(std::initializer_list<std::initializer_list<const char*>> data) {
  Matrix m;
  for (const auto& row : data) {
    std::vector<Rational> out;
    for (const char* cell : row) out.push_back(r(cell));
    m.push_back(std::move(out));
  }
  return m;
}

}  // namespace

GameSpec mixed_punishment_game() {
  return GameSpec::create(
      {"w0", "w1"}, {"a0", "aL", "aR", "a1"},
      Belief({r("0.55"), r("0.45")}),
      rows({{"1", "2"}, {"0.7", "2.2"}, {"1.9", "0.4"}, {"2", "1"}}),
      rows({{"3", "-7"}, {"1.5", "-3.5"}, {"-2.5", "2.5"}, {"-5.5", "4.5"}}));
}

GameSpec pure_punishment_game() {
  return GameSpec::create(
      {"w0", "w1"}, {"a0", "ap", "a1"},
      Belief({r("0.55"), r("0.45")}),
      rows({{"1", "2"}, {"1.1", "1.1"}, {"2", "1"}}),
      rows({{"0.6", "-1.4"}, {"0", "0"}, {"-1.2", "0.8"}}));
}

GameSpec opposed_payoffs_game() {
  return GameSpec::create(
      {"w0", "w1"}, {"a0", "a1"},
      Belief({r("0.55"), r("0.45")}),
      rows({{"-0.8", "1.2"}, {"0.4", "-0.6"}}),
      rows({{"0.8", "-1.2"}, {"-0.4", "0.6"}}));
}

GameSpec boundary_prior_game() {
  return GameSpec::create(
      {"w0", "w1", "w2"}, {"a", "b"},
      Belief({r("0.5"), r("0.5"), r("0")}),
      rows({{"0", "0", "0"}, {"0", "1", "0"}}),
      rows({{"1", "0", "0"}, {"0", "0", "1"}}));
}

}  // namespace persuasion::fixtures
