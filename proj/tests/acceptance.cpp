// Acceptance run: one line per criterion, exit status 0 iff every criterion passes.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "wb/aut.hpp"
#include "wb/fixpoint.hpp"
#include "wb/lts.hpp"
#include "wb/mso.hpp"
#include "wb/mu.hpp"
#include "wb/onestep.hpp"
#include "wb/random.hpp"

namespace {

namespace os = wb::onestep;
namespace mu = wb::mu;
namespace aut = wb::aut;
namespace mso = wb::mso;
namespace fix = wb::fix;
namespace lts = wb::lts;
using wb::rnd::Rng;

const std::vector<std::string> letters{"p", "q"};

int pick(Rng& g, int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
bool coin(Rng& g) { return std::bernoulli_distribution(0.5)(g); }

struct Result {
    bool ok = true;
    std::string summary;
};

// Tree with at most `max_states` nodes and height at most `depth`.
lts::Lts shallow_tree(Rng& g, int max_states, int depth, const std::vector<std::string>& props) {
    int n = 1 + pick(g, max_states);
    std::vector<int> level{0};
    std::vector<std::pair<int, int>> edges;
    for (int s = 1; s < n; ++s) {
        int parent;
        do parent = pick(g, s);
        while (level[parent] >= depth);
        level.push_back(level[parent] + 1);
        edges.emplace_back(parent, s);
    }
    std::vector<std::vector<std::string>> cols(n);
    for (int s = 0; s < n; ++s)
        for (auto& p : props)
            if (coin(g)) cols[s].push_back(p);
    return lts::make(props, n, edges, cols, 0);
}

lts::StateSet set_of_mask(int n, std::uint32_t m) {
    lts::StateSet x(n);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u;
    return x;
}

// ------------------------------------------------------------------ 1
Result adequacy() {
    Rng g(101);
    int n = 0, bad = 0;
    for (; n < 1000; ++n) {
        auto f = wb::rnd::random_mu(g, letters, 3, n % 2 == 0);
        auto s = wb::rnd::random_lts(g, 6, letters);
        bool a = mu::holds(f, s), b = mu::game_holds(f, s), c = aut::accepts(aut::from_formula(f, s.props), s);
        if (a != b || a != c) ++bad;
    }
    return {bad == 0, std::to_string(n) + " pairs, " + std::to_string(bad) + " disagreements"};
}

// ------------------------------------------------------------------ 2
Result complementation() {
    Rng g(202);
    static const os::Dialect ds[] = {os::Dialect::fo1, os::Dialect::foe1, os::Dialect::foe1inf};
    int n = 0, bad = 0;
    for (; n < 600; ++n) {
        aut::Automaton a = n % 3 == 2 ? aut::from_formula(wb::rnd::random_mu(g, letters, 3, false), letters)
                                      : wb::rnd::random_automaton(g, 1 + pick(g, 3), letters, ds[n % 3]);
        auto s = wb::rnd::random_lts(g, 6, letters);
        if (aut::accepts(a, s) == aut::accepts(aut::complement(a), s)) ++bad;
    }
    return {bad == 0, std::to_string(n) + " pairs, " + std::to_string(bad) + " violations"};
}

// ------------------------------------------------------------------ 3
// Every sentence Q1 x.(l(x) op Q2 y.(m1 op' m2)) and its rank-0/1 sub-sentences,
// with atoms over predicates {a0, a1}, (in)equalities and constants.
std::vector<os::NodeP> rank2_sentences() {
    using K = os::Kind;
    std::vector<os::NodeP> atoms_xy{os::atom(0, 0), os::atom(0, 1), os::atom(1, 0), os::atom(1, 1),
                                    os::neg_atom(0, 1), os::eq(0, 1), os::neq(0, 1), os::top()};
    std::vector<os::NodeP> bodies = atoms_xy;
    for (size_t i = 0; i < atoms_xy.size(); ++i)
        for (size_t j = i + 1; j < atoms_xy.size(); ++j) {
            bodies.push_back(os::conj2(atoms_xy[i], atoms_xy[j]));
            bodies.push_back(os::disj2(atoms_xy[i], atoms_xy[j]));
        }
    const K qs[] = {K::exists, K::forall, K::exists_inf, K::forall_inf};
    std::vector<os::NodeP> inner;  // rank 1, free x
    for (auto q : qs)
        for (auto& b : bodies) inner.push_back(os::quant(q, 1, b));
    std::vector<os::NodeP> lits_x{os::atom(0, 0), os::atom(1, 0), os::neg_atom(1, 0), os::bot()};
    std::vector<os::NodeP> out{os::top(), os::bot()};
    for (auto q : qs)
        for (auto& l : lits_x) out.push_back(os::quant(q, 0, l));
    for (auto q : qs)
        for (auto& l : lits_x)
            for (auto& in : inner) {
                out.push_back(os::quant(q, 0, os::conj2(l, in)));
                out.push_back(os::quant(q, 0, os::disj2(l, in)));
            }
    return out;
}

Result dual_law() {
    auto sentences = rank2_sentences();
    // All finite models with |D| <= 3 over two predicates, the empty model included.
    std::vector<os::Model> models{os::Model{}};
    for (int d = 1; d <= 3; ++d) {
        int total = 1 << (2 * d);
        for (int code = 0; code < total; ++code) {
            os::Model m;
            for (int e = 0; e < d; ++e) m.elems.push_back((code >> (2 * e)) & 3);
            models.push_back(m);
        }
    }
    std::vector<os::Model> complemented;
    for (auto& m : models) {
        os::Model c;
        for (auto t : m.elems) c.elems.push_back(3 & ~t);
        complemented.push_back(c);
    }
    long checks = 0, bad = 0;
    for (auto& s : sentences) {
        os::NodeP d = os::dual_node(s);
        if (!os::same(os::dual_node(d), s)) ++bad;
        for (size_t i = 0; i < models.size(); ++i) {
            ++checks;
            if (os::eval_node_finite(s, models[i]) == os::eval_node_finite(d, complemented[i])) ++bad;
        }
    }
    // Empty-domain clauses: universal sentences hold and existential ones fail on (empty, empty).
    os::Model empty;
    for (auto q : {os::Kind::forall, os::Kind::forall_inf}) {
        ++checks;
        if (!os::eval_node_finite(os::quant(q, 0, os::bot()), empty)) ++bad;
    }
    for (auto q : {os::Kind::exists, os::Kind::exists_inf}) {
        ++checks;
        if (os::eval_node_finite(os::quant(q, 0, os::top()), empty)) ++bad;
    }
    return {bad == 0, std::to_string(sentences.size()) + " sentences x " + std::to_string(models.size()) + " models, " +
                          std::to_string(checks) + " checks, " + std::to_string(bad) + " violations"};
}

// ------------------------------------------------------------------ 4
Result normal_forms() {
    Rng g(404);
    static const os::Dialect ds[] = {os::Dialect::fo1, os::Dialect::foe1, os::Dialect::foe1inf};
    int n = 0, bad = 0, cont = 0;
    for (; n < 400; ++n) {
        os::Formula f;
        f.dialect = ds[n % 3];
        f.preds = {"a", "b"};
        f.root = wb::rnd::random_onestep(g, 2, f.dialect, 3);
        int bound = os::rank(f.root) + 1;
        if (!os::equivalent(os::expand(os::to_basic_form(f)), f, bound)) ++bad;
        for (os::Type b : {os::Type(1), os::Type(2)}) {
            if (!os::in_cont(f.root, b)) continue;
            ++cont;
            auto cf = os::to_continuous_basic_form(f, b);
            for (auto& r : cf.disjuncts)
                for (auto t : cf.dialect == os::Dialect::fo1 ? r.pi : r.sigma)
                    if (t & b) ++bad;
            if (!os::equivalent(os::expand(cf), f, bound)) ++bad;
        }
    }
    return {bad == 0 && cont > 0, std::to_string(n) + " sentences, " + std::to_string(cont) + " continuous forms, " +
                                      std::to_string(bad) + " violations"};
}

// ------------------------------------------------------------------ 5, 6
// Continuous-weak FOE1INF automata for the finitary construct, weak FOE1 ones for the noetherian one.
std::vector<aut::Automaton> source_automata(Rng& g, bool finitary, int count) {
    os::Dialect d = finitary ? os::Dialect::foe1inf : os::Dialect::foe1;
    std::vector<aut::Automaton> out{aut::root_only(letters, "p", d), aut::included(letters, "p", "q", d),
                                    aut::successor(letters, "p", "q", d)};
    int guard = 0;
    while (static_cast<int>(out.size()) < count && ++guard < 5000) {
        aut::Automaton a;
        if (coin(g)) {
            a = wb::rnd::random_automaton(g, 1 + pick(g, 3), letters, d, 2);
        } else {
            auto f = wb::rnd::random_mu(g, letters, 3, !finitary && coin(g));
            if (finitary ? !mu::in_mu_c(f) : (!mu::in_mu_d(f) || mu::dialect_of(f) == os::Dialect::foe1inf)) continue;
            a = aut::trim(aut::from_formula(f, letters));
            if (!finitary) a.dialect = os::Dialect::foe1;
        }
        if (a.size() > 3) continue;
        auto rep = aut::classify_automaton(a);
        if (finitary ? rep.continuous_weak : rep.weak) out.push_back(a);
    }
    return out;
}

Result simulation() {
    Rng g(505);
    int automata = 0, trees = 0, bad = 0, class_bad = 0;
    for (bool finitary : {true, false}) {
        for (auto& a : source_automata(g, finitary, 25)) {
            ++automata;
            auto c = finitary ? aut::finitary_construct(a) : aut::noetherian_construct(a);
            auto rep = aut::classify_automaton(c);
            if (finitary ? !rep.continuous_weak : !rep.weak) ++class_bad;
            for (int i = 0; i < 30; ++i) {
                auto t = shallow_tree(g, 6, 3, letters);
                ++trees;
                if (aut::accepts(a, t) != aut::accepts(c, t)) ++bad;
            }
        }
    }
    return {bad == 0 && class_bad == 0, std::to_string(automata) + " automata, " + std::to_string(trees) +
                                            " tree runs, " + std::to_string(bad) + " disagreements, " +
                                            std::to_string(class_bad) + " classifier failures"};
}

Result projection() {
    Rng g(606);
    int n = 0, bad = 0;
    for (bool finitary : {true, false}) {
        for (auto& a : source_automata(g, finitary, 20)) {
            auto pr = aut::project(finitary ? aut::finitary_construct(a) : aut::noetherian_construct(a), "q");
            for (int i = 0; i < 6; ++i) {
                auto t = wb::rnd::random_tree(g, 5, {"p"});
                bool want = false;
                for (std::uint32_t x = 0; x < (1u << t.n) && !want; ++x)
                    want = aut::accepts(a, lts::p_variant(t, "q", set_of_mask(t.n, x)));
                ++n;
                if (aut::accepts(pr, t) != want) ++bad;
            }
        }
    }
    return {bad == 0, std::to_string(n) + " trees, " + std::to_string(bad) + " disagreements"};
}

// ------------------------------------------------------------------ 7
Result fragments() {
    Rng g(707);
    static const os::Dialect ds[] = {os::Dialect::fo1, os::Dialect::foe1, os::Dialect::foe1inf};
    // Automata: random ones plus translations of random formulas.
    std::vector<aut::Automaton> automata;
    for (int i = 0; i < 300; ++i) automata.push_back(wb::rnd::random_automaton(g, 1 + pick(g, 3), letters, ds[i % 3], 2));
    for (int i = 0; i < 300; ++i) automata.push_back(aut::from_formula(wb::rnd::random_mu(g, letters, 3, i % 2 == 0), letters));
    int weak = 0, cw = 0, md = 0, mc = 0, bad = 0, formulas = 0;
    for (auto& a : automata) {
        auto rep = aut::classify_automaton(a);
        auto f = aut::to_formula(a);
        if (rep.weak && (++weak, !mu::in_mu_d(f))) ++bad;
        if (rep.continuous_weak && (++cw, !mu::in_mu_c(f))) ++bad;
    }
    for (int i = 0; i < 500; ++i) {
        auto f = wb::rnd::random_mu(g, letters, 3, i % 2 == 0);
        ++formulas;
        auto rep = aut::classify_automaton(aut::from_formula(f, letters));
        if (mu::in_mu_d(f) && (++md, !rep.weak)) ++bad;
        if (mu::in_mu_c(f) && (++mc, !rep.continuous_weak)) ++bad;
    }
    return {bad == 0, std::to_string(automata.size()) + " automata (" + std::to_string(weak) + " weak, " +
                          std::to_string(cw) + " continuous-weak), " + std::to_string(formulas) + " formulas (" +
                          std::to_string(md) + " mu_D, " + std::to_string(mc) + " mu_C), " + std::to_string(bad) +
                          " classifier failures"};
}

// ------------------------------------------------------------------ 8
Result mu_to_mso() {
    Rng g(808);
    int wm = 0, nm = 0, bad = 0, guard = 0;
    while ((wm < 200 || nm < 200) && ++guard < 50000) {
        auto f = wb::rnd::random_mu(g, letters, 3, coin(g));
        bool c = mu::in_mu_c(f);
        bool d = mu::in_mu_d(f) && mu::dialect_of(f) != os::Dialect::foe1inf;
        for (int k = 0; k < 2; ++k) {
            auto s = wb::rnd::random_lts(g, 5, letters);
            bool h = mu::holds(f, s);
            if (c && wm < 200) {
                ++wm;
                if (mso::holds_at_root(mso::mu_to_mso(f, mso::Mode::finite), s) != h) ++bad;
            }
            if (d && nm < 200) {
                ++nm;
                if (mso::holds_at_root(mso::mu_to_mso(f, mso::Mode::noetherian), s) != h) ++bad;
            }
        }
    }
    return {bad == 0 && wm + nm >= 100, std::to_string(wm) + " mu_C/WMSO and " + std::to_string(nm) +
                                            " mu_D/NMSO pairs, " + std::to_string(bad) + " disagreements"};
}

// ------------------------------------------------------------------ 9
Result fixpoint_theory() {
    Rng g(909);
    int n = 0, bad = 0;
    for (; n < 150; ++n) {
        auto s = wb::rnd::random_lts(g, 5, {"q"});
        mu::NodeP body = wb::rnd::random_positive_body(g, {"q"}, "x", 3);
        auto f = fix::from_formula(body, "x", s);
        auto tr = fix::lfp(f);
        // Restricted fixpoints stay inside the fixpoint, for every X.
        for (std::uint32_t m = 0; m < (1u << s.n); ++m) {
            auto rl = fix::lfp(fix::restrict(f, set_of_mask(s.n, m))).lfp;
            for (int i = 0; i < s.n; ++i)
                if (rl[i] && !tr.lfp[i]) ++bad;
        }
        if (fix::unfolding_winners(fix::unfolding_game(f), s.n) != tr.lfp) ++bad;
        auto sigma = fix::descending_strategy(f);
        if (!fix::is_descending(f, sigma) || !fix::is_winning(f, sigma)) ++bad;
        for (int r = 0; r < s.n; ++r) {
            if (tr.lfp[r]) {
                auto t = fix::strategy_tree(f, sigma, r);
                if (!fix::lfp(fix::restrict(f, t.nodes)).lfp[r]) ++bad;
            }
            auto w = fix::finite_witness(f, r);
            if (w.has_value() != static_cast<bool>(tr.lfp[r])) ++bad;
            if (w && !fix::lfp(fix::restrict(f, *w)).lfp[r]) ++bad;
            if (fix::brute_force_witness(f, r).has_value() != static_cast<bool>(tr.lfp[r])) ++bad;
            if (fix::brute_force_witness(f, r, &s).has_value() != static_cast<bool>(tr.lfp[r])) ++bad;
        }
    }
    return {bad == 0, std::to_string(n) + " functionals, " + std::to_string(bad) + " violations"};
}

// ------------------------------------------------------------------ 10
Result diamond() {
    Rng g(1010);
    static const os::Dialect ds[] = {os::Dialect::fo1, os::Dialect::foe1, os::Dialect::foe1inf};
    long checks = 0;
    int bad = 0, sentences = 0;
    for (int i = 0; i < 300; ++i) {
        os::Formula f;
        f.dialect = ds[i % 3];
        f.preds = {"a", "b"};
        f.root = wb::rnd::random_onestep(g, 2, f.dialect, 2);
        auto d = os::diamond_translate(os::to_basic_form(f));
        ++sentences;
        // Each finite model D (|D| <= 3) against D x omega.
        for (int size = 0; size <= 3; ++size)
            for (int code = 0; code < (1 << (2 * size)); ++code) {
                os::Model m;
                std::set<os::Type> present;
                for (int e = 0; e < size; ++e) {
                    m.elems.push_back((code >> (2 * e)) & 3);
                    present.insert(m.elems.back());
                }
                os::WeightedModel w;
                for (auto t : present) w.mult.emplace_back(t, os::omega);
                ++checks;
                if (os::eval_finite(d, m) != os::eval_weighted(f, w)) ++bad;
            }
    }
    int runs = 0, abad = 0;
    for (int i = 0; i < 60; ++i) {
        auto f = wb::rnd::random_mu(g, letters, 3, true);
        auto a = aut::from_formula(f, letters);
        auto ad = aut::diamond_automaton(a);
        for (int k = 0; k < 12; ++k) {
            auto s = wb::rnd::random_lts(g, 5, letters);
            ++runs;
            if (aut::accepts(a, s) != aut::accepts(ad, s)) ++abad;
        }
    }
    return {bad == 0 && abad == 0, std::to_string(sentences) + " sentences, " + std::to_string(checks) +
                                       " one-step checks, " + std::to_string(bad) + " violations; " +
                                       std::to_string(runs) + " automaton runs, " + std::to_string(abad) +
                                       " disagreements"};
}

// ------------------------------------------------------------------ 11
enum class Conn { none, neg, conj, disj, ex, all };
const char* conn_name(Conn c) {
    static const char* names[] = {"atom", "neg", "and", "or", "ex", "all"};
    return names[static_cast<int>(c)];
}

mso::NodeP mso_atom(Rng& g, const std::vector<std::string>& scope) {
    auto l = [&] { return scope[pick(g, static_cast<int>(scope.size()))]; };
    switch (pick(g, 3)) {
        case 0: return mso::down(l());
        case 1: return mso::sub(l(), l());
        default: return mso::rel_set(l(), l());
    }
}

// Atom mentioning `r` so the quantifier over it matters.
mso::NodeP bound_atom(Rng& g, const std::string& r, const std::vector<std::string>& scope) {
    auto l = [&] { return scope[pick(g, static_cast<int>(scope.size()))]; };
    bool first = pick(g, 2) == 0;
    switch (pick(g, 3)) {
        case 0: return mso::down(r);
        case 1: return first ? mso::sub(r, l()) : mso::sub(l(), r);
        default: return first ? mso::rel_set(r, l()) : mso::rel_set(l(), r);
    }
}

// Formula whose top connective is `outer` over subformulas with top connective `inner`.
mso::NodeP build(Rng& g, Conn c, Conn next, std::vector<std::string> scope, mso::Mode m, int& fresh) {
    auto sub = [&](const std::vector<std::string>& sc) { return build(g, next, Conn::none, sc, m, fresh); };
    switch (c) {
        case Conn::none: return mso_atom(g, scope);
        case Conn::neg: return mso::neg(sub(scope));
        case Conn::conj: return mso::conj(sub(scope), sub(scope));
        case Conn::disj: return mso::disj(sub(scope), sub(scope));
        case Conn::ex:
        case Conn::all: {
            std::string r = "r" + std::to_string(fresh++);
            scope.push_back(r);
            auto body = next == Conn::none ? bound_atom(g, r, scope) : sub(scope);
            return c == Conn::ex ? mso::exists_set(r, m, body) : mso::forall_set(r, m, body);
        }
    }
    return mso::top();
}

Result mso_compiler() {
    Rng g(1111);
    const Conn all[] = {Conn::none, Conn::neg, Conn::conj, Conn::disj, Conn::ex, Conn::all};
    int combos = 0, runs = 0, bad = 0;
    std::string failures;
    for (auto m : {mso::Mode::finite, mso::Mode::noetherian})
        for (auto outer : all)
            for (auto inner : all) {
                if (outer == Conn::none && inner != Conn::none) continue;
                ++combos;
                for (int k = 0; k < 12; ++k) {
                    int fresh = 0;
                    auto f = build(g, outer, inner, letters, m, fresh);
                    auto a = mso::compile(f, m);
                    for (int i = 0; i < 30; ++i) {
                        auto t = wb::rnd::random_tree(g, 6, letters);
                        ++runs;
                        if (aut::accepts(a, t) != mso::eval(f, t)) {
                            ++bad;
                            failures += std::string(" ") + conn_name(outer) + "/" + conn_name(inner);
                        }
                    }
                }
            }
    return {bad == 0, std::to_string(combos) + " connective combinations, " + std::to_string(runs) + " tree runs, " +
                          std::to_string(bad) + " disagreements" + failures};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Result()> run;
    };
    const std::vector<Criterion> criteria{
        {"adequacy", adequacy},         {"complementation", complementation}, {"dual-law", dual_law},
        {"normal-forms", normal_forms}, {"simulation", simulation},           {"projection", projection},
        {"fragments", fragments},       {"mu-to-mso", mu_to_mso},             {"fixpoint", fixpoint_theory},
        {"diamond", diamond},           {"mso-compile", mso_compiler},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!r.ok) ++failed;
        std::printf("%s %2zu %-16s %s (%.1fs)\n", r.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, r.summary.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
