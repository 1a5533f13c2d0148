#pragma once

#include <random>
#include <string>
#include <vector>

#include "wb/aut.hpp"
#include "wb/game.hpp"
#include "wb/lts.hpp"
#include "wb/mso.hpp"
#include "wb/mu.hpp"
#include "wb/onestep.hpp"

// Seeded generators for the cross-oracle tests and the fuzz driver.
namespace wb::rnd {

using Rng = std::mt19937_64;

lts::Lts random_lts(Rng& g, int max_states, const std::vector<std::string>& props, double edge_p = 0.35);
lts::Lts random_tree(Rng& g, int max_states, const std::vector<std::string>& props);
game::Game random_game(Rng& g, int positions, int max_priority);

// Positive sentence over `preds` predicates with quantifier depth at most `depth`.
onestep::NodeP random_onestep(Rng& g, int preds, onestep::Dialect d, int depth);

// Guarded-or-not formula over `props`; `standard` restricts modalities to dia/box.
mu::NodeP random_mu(Rng& g, const std::vector<std::string>& props, int depth, bool standard);

// Body positive in `var`, built from dia/box, the letters in `props` and their negations.
mu::NodeP random_positive_body(Rng& g, const std::vector<std::string>& props, const std::string& var, int depth);

// One-sorted sentence over `props` with connective depth at most `depth`.
mso::NodeP random_mso(Rng& g, const std::vector<std::string>& props, int depth, mso::Mode m);

aut::Automaton random_automaton(Rng& g, int states, const std::vector<std::string>& props, onestep::Dialect d,
                                int max_priority = 3);

}  // namespace wb::rnd
