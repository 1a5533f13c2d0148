#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wb/common.hpp"

namespace wb::onestep {

enum class Dialect { fo1, foe1, foe1inf };

std::string dialect_name(Dialect d);
Dialect dialect_from_name(const std::string& s);

// A type is a set of predicates, encoded as a bitmask over predicate indices.
using Type = std::uint64_t;
constexpr int max_preds = 64;

enum class Kind : std::uint8_t {
    atom, neg_atom, eq, neq, top, bot, conj, disj,
    exists, forall, exists_inf, forall_inf,
    w  // W x.(phi, psi), sugar for Ax.(phi | psi) & Ainf x.psi
};

struct Node;
using NodeP = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    int var = -1;   // bound variable, or left variable of an (in)equality / atom argument
    int var2 = -1;  // right variable of an (in)equality
    int pred = -1;
    std::vector<NodeP> kids;
};

NodeP atom(int pred, int var);
NodeP neg_atom(int pred, int var);
NodeP eq(int x, int y);
NodeP neq(int x, int y);
NodeP top();
NodeP bot();
NodeP conj(std::vector<NodeP> kids);  // flattens, drops top, collapses on bot
NodeP disj(std::vector<NodeP> kids);  // flattens, drops bot, collapses on top
NodeP conj2(NodeP a, NodeP b);
NodeP disj2(NodeP a, NodeP b);
NodeP quant(Kind k, int var, NodeP body);
NodeP w_node(int var, NodeP phi, NodeP psi);
NodeP tau(Type t, int var);  // positive type formula, top for the empty type

struct Formula {
    Dialect dialect = Dialect::foe1;
    std::vector<std::string> preds;
    NodeP root;
};

// Parsing. When `preds` is non-empty it fixes the predicate order and every
// predicate must come from it; otherwise predicates are numbered by first use.
Formula parse(const std::string& text, Dialect d, const std::vector<std::string>& preds = {});
std::string to_string(const Formula& f);
std::string node_to_string(const NodeP& n, const std::vector<std::string>& preds);
std::string var_name(int v);

// Structural helpers.
bool is_positive(const NodeP& n);
int rank(const NodeP& n);
Type preds_of(const NodeP& n);
std::vector<int> free_vars(const NodeP& n);
bool same(const NodeP& a, const NodeP& b);
NodeP expand_w(const NodeP& n);  // removes W sugar throughout
Dialect min_dialect(const NodeP& n);
void check_dialect(const Formula& f);  // throws when nodes exceed the dialect
NodeP rename_preds(const NodeP& n, const std::vector<int>& map);  // pred i -> map[i]
int max_var(const NodeP& n);

// Finite one-step model: one type per domain element.
struct Model {
    std::vector<Type> elems;
};
Model model_from_valuation(int domain, const std::vector<std::vector<int>>& val);

// Multiplicity-weighted model; omega marks infinitely many copies.
constexpr int omega = -1;
struct WeightedModel {
    std::vector<std::pair<Type, int>> mult;  // multiplicity per type, zero entries omitted
    int cap = 8;
};

bool eval_finite(const Formula& f, const Model& m);
bool eval_node_finite(const NodeP& n, const Model& m);
bool eval_weighted(const Formula& f, const WeightedModel& w);
bool eval_node_weighted(const NodeP& n, const WeightedModel& w);

Formula dual(const Formula& f);
NodeP dual_node(const NodeP& n);

struct FragmentReport {
    bool positive = false;
    bool cont = false;
    bool cocont = false;
    std::optional<bool> separating;  // set only when the input is in basic form
};
FragmentReport fragment_check(const Formula& f, Type b);
bool in_cont(const NodeP& n, Type b);
bool in_cocont(const NodeP& n, Type b);
bool b_free(const NodeP& n, Type b);

// Basic forms. For FO1 `wit` holds the witness family and `pi` the cover;
// for FOE1 (wit, pi); for FOE1INF (wit, pi, sigma).
struct Nabla {
    std::vector<Type> wit;
    std::vector<Type> pi;
    std::vector<Type> sigma;
    bool operator==(const Nabla& o) const { return wit == o.wit && pi == o.pi && sigma == o.sigma; }
    bool operator<(const Nabla& o) const;
};

struct BasicForm {
    Dialect dialect = Dialect::foe1;
    std::vector<std::string> preds;
    std::vector<Nabla> disjuncts;
};

NodeP nabla_node(Dialect d, const Nabla& r);
Formula expand(const BasicForm& bf);
bool nabla_holds(Dialect d, const Nabla& r, const WeightedModel& w);
bool nabla_implies(Dialect d, const Nabla& a, const Nabla& b);
std::optional<Nabla> match_nabla(Dialect d, const NodeP& n);
std::optional<BasicForm> match_basic_form(const Formula& f);

BasicForm to_basic_form(const Formula& f);
BasicForm to_continuous_basic_form(const Formula& f, Type b);
bool separating_sufficient(const BasicForm& bf, Type b);

// Agreement on all finite models up to `bound` elements and all weighted
// models with per-type multiplicities in {0..bound, omega}.
bool equivalent(const Formula& a, const Formula& b, int bound);

Formula diamond_translate(const BasicForm& bf);

std::string basic_form_to_json_text(const BasicForm& bf);
std::string type_to_string(Type t, const std::vector<std::string>& preds);

// Antichain of the subset-minimal valuations on an n-element domain that make
// a positive sentence true; each valuation lists one type per element.
using Valuation = std::vector<Type>;
std::vector<Valuation> minimal_valuations(const NodeP& n, int domain);

}  // namespace wb::onestep
