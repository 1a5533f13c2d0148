#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wb/aut.hpp"
#include "wb/lts.hpp"
#include "wb/mu.hpp"
#include "wb/onestep.hpp"

namespace wb::mso {

// Range of second-order quantifiers.
enum class Mode { standard, finite, noetherian };
std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);  // smso | wmso | nmso

enum class Kind : std::uint8_t {
    // one-sorted atoms
    down, sub, rel_set,
    // two-sorted atoms
    pred, rel, eq,
    top, bot, neg, disj, conj,
    exists_set, forall_set,
    exists_ind, forall_ind
};

struct Node;
using NodeP = std::shared_ptr<const Node>;

// `a`, `b` hold letters or individual variables depending on the kind;
// quantifiers bind `a` and carry the second-order mode.
struct Node {
    Kind kind;
    std::string a, b;
    Mode mode = Mode::standard;
    std::vector<NodeP> kids;
};

NodeP down(const std::string& p);
NodeP sub(const std::string& p, const std::string& q);
NodeP rel_set(const std::string& p, const std::string& q);
NodeP pred(const std::string& p, const std::string& x);
NodeP rel(const std::string& x, const std::string& y);
NodeP eq(const std::string& x, const std::string& y);
NodeP top();
NodeP bot();
NodeP neg(NodeP f);
NodeP disj(NodeP a, NodeP b);
NodeP conj(NodeP a, NodeP b);
NodeP implies(NodeP a, NodeP b);
NodeP exists_set(const std::string& p, Mode m, NodeP body);
NodeP forall_set(const std::string& p, Mode m, NodeP body);
NodeP exists_ind(const std::string& x, NodeP body);
NodeP forall_ind(const std::string& x, NodeP body);

bool is_one_sorted(const NodeP& n);

// One-sorted: down p | p sub q | Rel(p,q) | ~f | f | f | f & f | ex p. f | all p. f | true | false
// Two-sorted adds p(x) | R(x,y) | x = y | x != y | f -> f and individual ex/all;
// a quantified name used as a predicate is second-order, otherwise first-order.
NodeP parse(const std::string& text, Mode m);
std::string to_string(const NodeP& n);

std::vector<std::string> free_letters(const NodeP& n);
std::vector<std::string> free_individuals(const NodeP& n);

// Brute-force evaluation; finite LTSs make finite and standard modes coincide.
bool eval(const NodeP& n, const lts::Lts& s);
bool eval2(const NodeP& n, const lts::Lts& s, const std::map<std::string, int>& g);
bool holds_at_root(const NodeP& n, const lts::Lts& s);  // designated variable v at the initial state

// Inductive compilation to a continuous-weak (finite mode) or weak
// (noetherian mode) automaton, sound on trees.
aut::Automaton compile(const NodeP& n, Mode m);

// Two-sorted translation with free variable v.
NodeP mu_to_mso(const mu::NodeP& f, Mode m);

// Relativizes the quantifiers of a one-step sentence to the successors of v;
// predicate i becomes the letter names[i].
NodeP onestep_dagger(const onestep::NodeP& alpha, const std::vector<std::string>& names);

extern const std::string designated;  // "v"

}  // namespace wb::mso
