#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wb/game.hpp"
#include "wb/lts.hpp"
#include "wb/mu.hpp"
#include "wb/onestep.hpp"

namespace wb::aut {

// Parity automaton over a one-step language. Predicate i of a transition
// formula denotes state i; colours are bitmasks over `props`.
struct Automaton {
    onestep::Dialect dialect = onestep::Dialect::foe1inf;
    std::vector<std::string> props;
    int init = 0;
    std::vector<int> omega;
    std::vector<std::vector<onestep::NodeP>> delta;  // [state][colour]
    // Two-sorted automata: sort 1 marks macro-states, `members` their state sets.
    std::vector<int> sort;
    std::vector<onestep::Type> members;

    int size() const { return static_cast<int>(omega.size()); }
    int colours() const { return 1 << props.size(); }
    bool two_sorted() const { return !sort.empty(); }
};

constexpr int max_states = 64;

void validate(const Automaton& a);  // throws on malformed input
std::vector<std::string> state_names(int n);
std::string colour_name(const Automaton& a, int c);

Automaton from_json_text(const std::string& text);
std::string to_json_text(const Automaton& a);

// Colour of an LTS state read through the automaton's alphabet.
int colour_of(const Automaton& a, const lts::Lts& s, int state);

struct AcceptanceGame {
    game::Game game;
    int root = 0;
    std::vector<std::string> labels;
};
AcceptanceGame acceptance_game(const Automaton& a, const lts::Lts& s);
// Nested fixpoint evaluation of the acceptance game.
bool accepts(const Automaton& a, const lts::Lts& s);
// Explicit construction and solution of the acceptance game; the reference for `accepts`.
bool accepts_by_game(const Automaton& a, const lts::Lts& s);

Automaton complement(const Automaton& a);

struct ClusterReport {
    std::vector<std::vector<int>> clusters;  // in topological order, highest first
    std::vector<int> cluster_of;
    std::vector<std::pair<int, int>> higher;  // (i, j): cluster i reaches cluster j, i != j
    std::vector<bool> degenerate;
    bool weak = false;
    bool continuous_weak = false;
};
ClusterReport classify_automaton(const Automaton& a);

Automaton normalize_weak_priorities(const Automaton& a);

// Removes states unreachable from the initial state.
Automaton trim(const Automaton& a);

mu::NodeP to_formula(const Automaton& a);

// `props` fixes the alphabet; empty means the free letters of the formula.
Automaton from_formula(const mu::NodeP& f, const std::vector<std::string>& props = {});

Automaton finitary_construct(const Automaton& a);
Automaton noetherian_construct(const Automaton& a);
Automaton project(const Automaton& a, const std::string& p);
Automaton union_automaton(const Automaton& a0, const Automaton& a1);
Automaton diamond_automaton(const Automaton& a);

// Automata accepting every input, and none.
Automaton top_automaton(const std::vector<std::string>& props, onestep::Dialect d);
Automaton bot_automaton(const std::vector<std::string>& props, onestep::Dialect d);

// Base automata of the monadic second-order compiler on trees.
Automaton root_only(const std::vector<std::string>& props, const std::string& p, onestep::Dialect d);
Automaton included(const std::vector<std::string>& props, const std::string& p, const std::string& q,
                   onestep::Dialect d);
Automaton successor(const std::vector<std::string>& props, const std::string& p, const std::string& q,
                    onestep::Dialect d);

// Copy of `a` over a larger alphabet; added letters are ignored.
Automaton extend_alphabet(const Automaton& a, const std::vector<std::string>& props);

}  // namespace wb::aut
