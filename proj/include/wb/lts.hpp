#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wb/common.hpp"

namespace wb::lts {

constexpr int max_props = 8;

using StateSet = std::vector<bool>;

// Finite pointed transition system with a proposition colouring.
struct Lts {
    std::vector<std::string> props;
    int n = 0;
    std::vector<std::vector<int>> succ;  // sorted, duplicate free
    std::vector<Colour> colour;
    int init = 0;

    int prop_index(const std::string& p) const;
    bool has(int state, int prop) const { return (colour[state] >> prop) & 1u; }
};

struct ValidationReport {
    bool ok = false;
    std::vector<std::string> errors;
    std::vector<bool> reachable;
    bool is_tree = false;
    std::vector<int> parent;  // tree certificate, -1 at the root
};

// Builds an Lts from explicit parts; throws on invariant violations.
Lts make(std::vector<std::string> props, int n, const std::vector<std::pair<int, int>>& edges,
         const std::vector<std::vector<std::string>>& colours, int init);

Lts from_json_text(const std::string& text);
std::string to_json_text(const Lts& s);

ValidationReport validate(const Lts& s);
ValidationReport validate_json_text(const std::string& text);

std::vector<bool> reachable_from(const Lts& s, int from);
bool is_tree(const Lts& s);

// S[p -> X]; p is added to the proposition set when missing.
Lts p_variant(const Lts& s, const std::string& p, const StateSet& x);

struct BisimResult {
    bool bisimilar = false;
    std::vector<std::pair<int, int>> relation;  // maximal bisimulation between the two state sets
};
BisimResult bisimilar(const Lts& a, const Lts& b);

// Tree of paths from the initial state of length at most d.
Lts unravel_to_depth(const Lts& s, int d);

// Finite-model criterion: X is empty or some state reaches every member of X.
bool noetherian_subset(const Lts& s, const StateSet& x);

StateSet empty_set(const Lts& s);
StateSet full_set(const Lts& s);
std::vector<int> members(const StateSet& x);

}  // namespace wb::lts
