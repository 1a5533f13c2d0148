#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wb/game.hpp"
#include "wb/lts.hpp"
#include "wb/mu.hpp"

namespace wb::fix {

using lts::StateSet;

// Map on the subsets of a finite carrier {0..n-1}.
struct Functional {
    int n = 0;
    std::function<StateSet(const StateSet&)> apply;
};

// X |-> [[phi]] in S[p -> X]; p must occur only positively in phi.
Functional from_formula(const mu::NodeP& phi, const std::string& p, const lts::Lts& s);

// F|X (Y) = F(Y) n X.
Functional restrict(const Functional& f, const StateSet& x);

// Exhaustive for carriers up to 6 elements, seeded random pairs X <= Y above.
bool monotone(const Functional& f, int samples = 64);

struct Trace {
    StateSet lfp;
    std::vector<StateSet> stages;  // F^0(empty) = empty, F^1(empty), ... up to the fixpoint
};

// Throws when the iteration is not increasing or a spot check finds X <= Y with F X not <= F Y.
Trace lfp(const Functional& f);

// Stage at which s enters the least fixpoint, or -1.
int stage_of(const Trace& t, int s);

struct UnfoldingGame {
    game::Game game;
    std::vector<int> state_pos;         // position of each carrier element
    std::vector<StateSet> subset_of;    // subset held by a position, empty for element positions
    std::vector<std::string> labels;
};

// Exists picks X with s in F(X), Forall picks an element of X; infinite plays go to Forall.
// Carriers above 8 keep only minimal choices for Exists; above 12 are refused.
UnfoldingGame unfolding_game(const Functional& f);
StateSet unfolding_winners(const UnfoldingGame& u, int n);

using Strategy = std::vector<std::optional<StateSet>>;  // move per element, none off the winning region

// sigma(s) = F^b(empty) where b + 1 is the stage at which s enters the fixpoint.
Strategy descending_strategy(const Functional& f);
bool is_descending(const Functional& f, const Strategy& sigma);
bool is_winning(const Functional& f, const Strategy& sigma);

struct StrategyTree {
    int root = 0;
    StateSet nodes;                      // elements sigma-reachable from the root
    std::vector<std::vector<int>> children;
};

StrategyTree strategy_tree(const Functional& f, const Strategy& sigma, int r);

// Backward witness: a set X with s in LFP(F|X), built level by level from the trace
// with inclusion-minimal supports; none when s is outside the least fixpoint.
std::optional<StateSet> finite_witness(const Functional& f, int s);

// Smallest X with s in LFP(F|X) by subset enumeration (carriers up to 12); with
// `noetherian_in` set only noetherian subsets of that LTS are tried.
std::optional<StateSet> brute_force_witness(const Functional& f, int s, const lts::Lts* noetherian_in = nullptr);

}  // namespace wb::fix
