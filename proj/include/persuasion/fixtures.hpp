#pragma once

#include "persuasion/game.hpp"

namespace persuasion::fixtures {

// Two states, four actions a0/aL/aR/a1, prior (0.55, 0.45). The DM's
// optimal action walks a0 -> aL -> aR -> a1 with breakpoints at 0.3, 0.4
// and 0.6 (probability of the second state). The only uniform punishment
// for the optimal splitting {0.3, 0.6} is mixed on {aL, aR}.
GameSpec mixed_punishment_game();

// Two states, three actions a0/ap/a1, prior (0.55, 0.45). ap is optimal
// for the DM on [0.3, 0.6] and is a pure uniform punishment; the DM can be
// made strictly better off than at the prior by a wider splitting.
GameSpec pure_punishment_game();

// Two states, two actions, u = -v, prior (0.55, 0.45). The expert value
// function is a concave tent peaking at the DM breakpoint 0.4; no one
// benefits from information here.
GameSpec opposed_payoffs_game();

// Three states, two actions, prior (0.5, 0.5, 0) on the boundary of the
// simplex. The experts benefit from persuasion but the DM cannot.
GameSpec boundary_prior_game();

}  // namespace persuasion::fixtures
