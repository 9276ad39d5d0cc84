#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "persuasion/equilibrium.hpp"
#include "persuasion/experiment.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GameFile {
  GameSpec game;
  std::optional<Kernel> experiment;
};

// Game files are JSON with exact numbers: numeric literals are converted
// from their decimal text, never through a double, and rationals may be
// written as strings ("7/11", "0.55"). Malformed input raises ParseError
// with the offending field or byte position.
GameFile parse_game_text(const std::string& text);
GameFile load_game_file(const std::string& path);

std::string game_to_json(const GameSpec& g, const Kernel* experiment = nullptr);

// Profiles serialize losslessly (all rationals as strings) for inspection
// and replay.
std::string profile_to_json(const StrategyProfile& p);
StrategyProfile profile_from_json(const GameSpec& g, const std::string& text);

}  // namespace persuasion
