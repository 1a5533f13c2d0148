#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wb/game.hpp"
#include "wb/lts.hpp"
#include "wb/onestep.hpp"

namespace wb::mu {

enum class Kind : std::uint8_t { prop, neg_prop, conj, disj, modal, mu, nu };

struct Node;
using NodeP = std::shared_ptr<const Node>;

// Letters (free propositions and bound variables) are named; a modality
// carries a positive one-step sentence whose predicate i is argument i.
struct Node {
    Kind kind;
    std::string name;
    onestep::NodeP alpha;
    std::vector<NodeP> kids;
};

NodeP prop(const std::string& q);
NodeP neg_prop(const std::string& q);
NodeP conj(std::vector<NodeP> kids);  // flattens and simplifies true/false
NodeP disj(std::vector<NodeP> kids);
NodeP conj2(NodeP a, NodeP b);
NodeP disj2(NodeP a, NodeP b);
NodeP modal(onestep::NodeP alpha, std::vector<NodeP> args);
NodeP fix(Kind k, const std::string& var, NodeP body);
NodeP top();
NodeP bot();
NodeP dia(NodeP f);
NodeP box(NodeP f);

bool is_top(const NodeP& n);
bool is_bot(const NodeP& n);
bool is_fix(const NodeP& n);

// Grammar: mu x. f | nu x. f | dia f | box f | <ONESTEP>(f1,...,fn) | p | ~p |
// f & f | f | f | true | false | (f). Binders are renamed apart on input.
NodeP parse(const std::string& text);
std::string to_string(const NodeP& n);

std::set<std::string> free_letters(const NodeP& n);
std::set<std::string> bound_letters(const NodeP& n);
int size(const NodeP& n);
onestep::Dialect dialect_of(const NodeP& n);  // least dialect covering every modality
bool same(const NodeP& a, const NodeP& b);

// Renames binders so that bound letters are pairwise distinct and disjoint
// from the free letters and from `avoid`.
NodeP rename_apart(const NodeP& n, const std::set<std::string>& avoid = {});

// Capture-avoiding simultaneous substitution of free letters.
NodeP substitute(const NodeP& n, const std::map<std::string, NodeP>& sigma);

// Dual formula: true exactly where the input is false.
NodeP negate(const NodeP& n);

// Semantics on a finite LTS by Knaster-Tarski iteration.
lts::StateSet semantics_eval(const NodeP& n, const lts::Lts& s);
bool holds(const NodeP& n, const lts::Lts& s);

struct EvalGame {
    game::Game game;
    int root = 0;                     // position of (n, s_I)
    std::vector<std::string> labels;  // human-readable position names
};
EvalGame build_eval_game(const NodeP& n, const lts::Lts& s);
bool game_holds(const NodeP& n, const lts::Lts& s);

struct BinderInfo {
    std::string var;
    bool least = true;
    bool noetherian = false;  // body in Noe_p (co-noetherian for nu)
    bool continuous = false;  // body in Cont_p (co-continuous for nu)
};

struct FragmentReport {
    bool in_muML = false;
    bool in_mu_D = false;
    bool in_mu_C = false;
    bool guarded = false;
    std::vector<BinderInfo> binders;
};
FragmentReport classify(const NodeP& n);

bool in_noe(const NodeP& n, const std::set<std::string>& q);
bool in_conoe(const NodeP& n, const std::set<std::string>& q);
bool in_cont(const NodeP& n, const std::set<std::string>& q);
bool in_cocont(const NodeP& n, const std::set<std::string>& q);
bool in_mu_d(const NodeP& n);
bool in_mu_c(const NodeP& n);
bool is_guarded(const NodeP& n);

NodeP guard_transform(const NodeP& n);

// Rewrites every FO1 modality into diamonds and boxes.
NodeP fo1_modal_bridge(const NodeP& n);

// One-step formulas of the standard modalities.
onestep::NodeP dia_alpha();
onestep::NodeP box_alpha();

}  // namespace wb::mu
