#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <new>

#include "wb/fixpoint.hpp"
#include "wb/fuzz.hpp"
#include "wb/random.hpp"
#include "wb/wb_c.h"

using json = nlohmann::json;
namespace os = wb::onestep;

struct wb_lts {
    wb::lts::Lts v;
};
struct wb_game {
    wb::game::Game v;
};
struct wb_onestep {
    os::Formula v;
};
struct wb_mu {
    wb::mu::NodeP v;
};
struct wb_aut {
    wb::aut::Automaton v;
};
struct wb_mso {
    wb::mso::NodeP v;
};

namespace {

thread_local std::string last_error;

struct ArgError {
    std::string msg;
};

void need(bool cond, const char* what) {
    if (!cond) throw ArgError{what};
}

template <class F>
wb_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return WB_OK;
    } catch (const ArgError& e) {
        last_error = e.msg;
        return WB_ERR_ARG;
    } catch (const wb::Error& e) {
        last_error = e.what();
        switch (e.kind()) {
            case wb::ErrorKind::parse: return WB_ERR_PARSE;
            case wb::ErrorKind::invalid: return WB_ERR_INVALID;
            case wb::ErrorKind::limit: return WB_ERR_LIMIT;
            case wb::ErrorKind::internal: return WB_ERR_INTERNAL;
        }
        return WB_ERR_INTERNAL;
    } catch (const json::exception& e) {
        last_error = std::string("malformed JSON: ") + e.what();
        return WB_ERR_PARSE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return WB_ERR_LIMIT;
    } catch (const std::exception& e) {
        last_error = e.what();
        return WB_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::vector<std::string> names(const char* const* xs, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        need(xs[i] != nullptr, "null name");
        out.emplace_back(xs[i]);
    }
    return out;
}

os::Dialect dialect_of(wb_dialect d) {
    switch (d) {
        case WB_FO1: return os::Dialect::fo1;
        case WB_FOE1: return os::Dialect::foe1;
        case WB_FOE1INF: return os::Dialect::foe1inf;
    }
    throw ArgError{"unknown dialect"};
}

wb::mso::Mode mode_of(wb_logic l) {
    switch (l) {
        case WB_SMSO: return wb::mso::Mode::standard;
        case WB_WMSO: return wb::mso::Mode::finite;
        case WB_NMSO: return wb::mso::Mode::noetherian;
    }
    throw ArgError{"unknown logic"};
}

json set_json(const wb::lts::StateSet& x) {
    json a = json::array();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) a.push_back(i);
    return a;
}

os::Type pred_mask(const os::Formula& f, const char* const* b, std::size_t nb) {
    os::Type m = 0;
    for (auto& p : names(b, nb)) {
        auto it = std::find(f.preds.begin(), f.preds.end(), p);
        if (it == f.preds.end()) wb::fail("predicate " + p + " does not occur in the formula");
        m |= os::Type(1) << (it - f.preds.begin());
    }
    return m;
}

os::Type type_from(const json& j, const os::Formula& f) {
    os::Type t = 0;
    for (auto& p : j) {
        std::string name = p.get<std::string>();
        auto it = std::find(f.preds.begin(), f.preds.end(), name);
        if (it != f.preds.end()) t |= os::Type(1) << (it - f.preds.begin());
    }
    return t;
}

}  // namespace

extern "C" {

const char* wb_version(void) { return "1.0.0"; }
const char* wb_last_error(void) { return last_error.c_str(); }
void wb_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- lts

wb_status wb_lts_from_json(const char* text, wb_lts** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_lts{wb::lts::from_json_text(text)};
    });
}

wb_status wb_lts_to_json(const wb_lts* s, char** out) {
    return guarded([&] {
        need(s && out, "null argument");
        *out = dup(wb::lts::to_json_text(s->v));
    });
}

wb_status wb_lts_validate_json(const char* text, char** report_json, int* ok) {
    return guarded([&] {
        need(text && report_json && ok, "null argument");
        auto r = wb::lts::validate_json_text(text);
        json j{{"ok", r.ok}, {"errors", r.errors}, {"is_tree", r.is_tree}};
        if (r.ok) {
            j["reachable"] = set_json(r.reachable);
            if (r.is_tree) j["parent"] = r.parent;
        }
        *ok = r.ok;
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_lts_bisimilar(const wb_lts* a, const wb_lts* b, int* out) {
    return guarded([&] {
        need(a && b && out, "null argument");
        *out = wb::lts::bisimilar(a->v, b->v).bisimilar;
    });
}

wb_status wb_lts_is_tree(const wb_lts* s, int* out) {
    return guarded([&] {
        need(s && out, "null argument");
        *out = wb::lts::is_tree(s->v);
    });
}

wb_status wb_lts_noetherian(const wb_lts* s, const int* states, size_t count, int* out) {
    return guarded([&] {
        need(s && out && (states || count == 0), "null argument");
        wb::lts::StateSet x(s->v.n, false);
        for (std::size_t i = 0; i < count; ++i) {
            if (states[i] < 0 || states[i] >= s->v.n) wb::fail("state out of range");
            x[states[i]] = true;
        }
        *out = wb::lts::noetherian_subset(s->v, x);
    });
}

wb_status wb_lts_unravel(const wb_lts* s, int depth, wb_lts** out) {
    return guarded([&] {
        need(s && out, "null argument");
        *out = new wb_lts{wb::lts::unravel_to_depth(s->v, depth)};
    });
}

wb_status wb_lts_random_tree(uint64_t seed, int max_states, const char* const* props, size_t nprops, wb_lts** out) {
    return guarded([&] {
        need(out && (props || nprops == 0) && max_states > 0, "bad argument");
        wb::rnd::Rng g(seed);
        *out = new wb_lts{wb::rnd::random_tree(g, max_states, names(props, nprops))};
    });
}

int wb_lts_states(const wb_lts* s) { return s ? s->v.n : 0; }
void wb_lts_free(wb_lts* s) { delete s; }

// ---------------------------------------------------------------- games

wb_status wb_game_from_json(const char* text, wb_game** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_game{wb::game::from_json_text(text)};
    });
}

wb_status wb_game_solve(const wb_game* g, char** solution_json) {
    return guarded([&] {
        need(g && solution_json, "null argument");
        auto sol = wb::game::solve(g->v);
        if (!wb::game::check_strategy(g->v, sol)) throw wb::Error(wb::ErrorKind::internal, "solution certificate failed");
        *solution_json = dup(wb::game::solution_to_json_text(g->v, sol));
    });
}

void wb_game_free(wb_game* g) { delete g; }

// ---------------------------------------------------------------- one-step

wb_status wb_onestep_parse(const char* text, wb_dialect d, wb_onestep** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_onestep{os::parse(text, dialect_of(d))};
    });
}

wb_status wb_onestep_to_string(const wb_onestep* f, char** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = dup(os::to_string(f->v));
    });
}

wb_status wb_onestep_dual(const wb_onestep* f, wb_onestep** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = new wb_onestep{os::dual(f->v)};
    });
}

wb_status wb_onestep_basic_form(const wb_onestep* f, char** bf_json, wb_onestep** expanded) {
    return guarded([&] {
        need(f && bf_json && expanded, "null argument");
        auto bf = os::to_basic_form(f->v);
        std::string j = os::basic_form_to_json_text(bf);
        auto e = std::make_unique<wb_onestep>(wb_onestep{os::expand(bf)});
        *bf_json = dup(j);
        *expanded = e.release();
    });
}

wb_status wb_onestep_continuous_form(const wb_onestep* f, const char* const* b_preds, size_t nb, char** bf_json,
                                     wb_onestep** expanded) {
    return guarded([&] {
        need(f && bf_json && expanded && (b_preds || nb == 0), "null argument");
        auto bf = os::to_continuous_basic_form(f->v, pred_mask(f->v, b_preds, nb));
        std::string j = os::basic_form_to_json_text(bf);
        auto e = std::make_unique<wb_onestep>(wb_onestep{os::expand(bf)});
        *bf_json = dup(j);
        *expanded = e.release();
    });
}

wb_status wb_onestep_diamond(const wb_onestep* f, wb_onestep** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = new wb_onestep{os::diamond_translate(os::to_basic_form(f->v))};
    });
}

wb_status wb_onestep_eval(const wb_onestep* f, const char* model_json, int* out) {
    return guarded([&] {
        need(f && model_json && out, "null argument");
        json j = json::parse(model_json);
        if (j.contains("elements")) {
            os::Model m;
            for (auto& e : j.at("elements")) m.elems.push_back(type_from(e, f->v));
            *out = os::eval_finite(f->v, m);
            return;
        }
        if (!j.contains("weighted")) wb::fail_parse("model needs \"elements\" or \"weighted\"");
        os::WeightedModel w;
        for (auto& e : j.at("weighted")) {
            os::Type t = type_from(e.at(0), f->v);
            const json& c = e.at(1);
            int k = c.is_string() && c.get<std::string>() == "omega" ? os::omega : c.get<int>();
            if (k != os::omega && k < 0) wb::fail("negative multiplicity");
            if (k != 0) w.mult.emplace_back(t, k);
        }
        *out = os::eval_weighted(f->v, w);
    });
}

wb_status wb_onestep_equivalent(const wb_onestep* a, const wb_onestep* b, int bound, int* out) {
    return guarded([&] {
        need(a && b && out && bound >= 0, "bad argument");
        *out = os::equivalent(a->v, b->v, bound);
    });
}

wb_status wb_onestep_fragments(const wb_onestep* f, const char* const* b_preds, size_t nb, char** report_json) {
    return guarded([&] {
        need(f && report_json && (b_preds || nb == 0), "null argument");
        auto r = os::fragment_check(f->v, pred_mask(f->v, b_preds, nb));
        json j{{"positive", r.positive}, {"cont", r.cont}, {"cocont", r.cocont}, {"rank", os::rank(f->v.root)}};
        j["separating"] = r.separating ? json(*r.separating) : json(nullptr);
        *report_json = dup(j.dump(2));
    });
}

void wb_onestep_free(wb_onestep* f) { delete f; }

// ---------------------------------------------------------------- mu

wb_status wb_mu_parse(const char* text, wb_mu** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_mu{wb::mu::parse(text)};
    });
}

wb_status wb_mu_to_string(const wb_mu* f, char** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = dup(wb::mu::to_string(f->v));
    });
}

wb_status wb_mu_holds(const wb_mu* f, const wb_lts* s, int* out) {
    return guarded([&] {
        need(f && s && out, "null argument");
        *out = wb::mu::holds(f->v, s->v);
    });
}

wb_status wb_mu_game(const wb_mu* f, const wb_lts* s, char** report_json) {
    return guarded([&] {
        need(f && s && report_json, "null argument");
        auto eg = wb::mu::build_eval_game(f->v, s->v);
        auto sol = wb::game::solve(eg.game);
        bool certified = wb::game::check_strategy(eg.game, sol);
        json positions = json::array();
        for (int v = 0; v < eg.game.size(); ++v)
            positions.push_back({{"label", eg.labels[v]},
                                 {"owner", eg.game.owner[v] == wb::game::Player::exists ? "exists" : "forall"},
                                 {"priority", eg.game.priority[v]},
                                 {"winner", sol.win_exists[v] ? "exists" : "forall"}});
        json j{{"root", eg.root},
               {"holds", static_cast<bool>(sol.win_exists[eg.root])},
               {"semantics", wb::mu::holds(f->v, s->v)},
               {"certified", certified},
               {"positions", positions}};
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_mu_classify(const wb_mu* f, char** report_json) {
    return guarded([&] {
        need(f && report_json, "null argument");
        auto r = wb::mu::classify(f->v);
        json binders = json::array();
        for (auto& b : r.binders)
            binders.push_back({{"var", b.var}, {"least", b.least}, {"noetherian", b.noetherian}, {"continuous", b.continuous}});
        json j{{"muML", r.in_muML}, {"mu_D", r.in_mu_D}, {"mu_C", r.in_mu_C}, {"guarded", r.guarded},
               {"dialect", os::dialect_name(wb::mu::dialect_of(f->v))}, {"binders", binders}};
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_mu_guard(const wb_mu* f, wb_mu** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = new wb_mu{wb::mu::guard_transform(f->v)};
    });
}

void wb_mu_free(wb_mu* f) { delete f; }

// ---------------------------------------------------------------- automata

wb_status wb_aut_from_json(const char* text, wb_aut** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_aut{wb::aut::from_json_text(text)};
    });
}

wb_status wb_aut_to_json(const wb_aut* a, char** out) {
    return guarded([&] {
        need(a && out, "null argument");
        *out = dup(wb::aut::to_json_text(a->v));
    });
}

wb_status wb_aut_accepts(const wb_aut* a, const wb_lts* s, int* out) {
    return guarded([&] {
        need(a && s && out, "null argument");
        *out = wb::aut::accepts(a->v, s->v);
    });
}

wb_status wb_aut_complement(const wb_aut* a, wb_aut** out) {
    return guarded([&] {
        need(a && out, "null argument");
        *out = new wb_aut{wb::aut::complement(a->v)};
    });
}

wb_status wb_aut_classify(const wb_aut* a, char** report_json) {
    return guarded([&] {
        need(a && report_json, "null argument");
        auto r = wb::aut::classify_automaton(a->v);
        json j{{"weak", r.weak}, {"continuous_weak", r.continuous_weak}, {"clusters", r.clusters},
               {"degenerate", r.degenerate}, {"higher", r.higher}};
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_aut_to_formula(const wb_aut* a, wb_mu** out) {
    return guarded([&] {
        need(a && out, "null argument");
        *out = new wb_mu{wb::aut::to_formula(a->v)};
    });
}

wb_status wb_aut_from_formula(const wb_mu* f, const char* const* props, size_t nprops, wb_aut** out) {
    return guarded([&] {
        need(f && out, "null argument");
        std::vector<std::string> ps = props ? names(props, nprops) : std::vector<std::string>{};
        *out = new wb_aut{wb::aut::from_formula(f->v, ps)};
    });
}

wb_status wb_aut_construct(const wb_aut* a, wb_construct_kind kind, wb_aut** out) {
    return guarded([&] {
        need(a && out, "null argument");
        need(kind == WB_FINITARY || kind == WB_NOETHERIAN, "unknown construct kind");
        *out = new wb_aut{kind == WB_FINITARY ? wb::aut::finitary_construct(a->v) : wb::aut::noetherian_construct(a->v)};
    });
}

wb_status wb_aut_project(const wb_aut* a, const char* letter, wb_aut** out) {
    return guarded([&] {
        need(a && letter && out, "null argument");
        *out = new wb_aut{wb::aut::project(a->v, letter)};
    });
}

wb_status wb_aut_diamond(const wb_aut* a, wb_aut** out) {
    return guarded([&] {
        need(a && out, "null argument");
        *out = new wb_aut{wb::aut::diamond_automaton(a->v)};
    });
}

wb_status wb_aut_simulate(const wb_aut* a, wb_construct_kind kind, int trees, uint64_t seed, char** report_json,
                          int* ok) {
    return guarded([&] {
        need(a && report_json && ok && trees >= 0, "bad argument");
        need(kind == WB_FINITARY || kind == WB_NOETHERIAN, "unknown construct kind");
        auto c = kind == WB_FINITARY ? wb::aut::finitary_construct(a->v) : wb::aut::noetherian_construct(a->v);
        auto rep = wb::aut::classify_automaton(c);
        bool cls = kind == WB_FINITARY ? rep.continuous_weak : rep.weak;
        wb::rnd::Rng g(seed);
        int bad = 0;
        json counter = json::array();
        for (int i = 0; i < trees; ++i) {
            auto t = wb::rnd::random_tree(g, 6, a->v.props);
            if (wb::aut::accepts(a->v, t) != wb::aut::accepts(c, t)) {
                ++bad;
                counter.push_back(json::parse(wb::lts::to_json_text(t)));
            }
        }
        *ok = cls && bad == 0;
        json j{{"kind", kind == WB_FINITARY ? "finitary" : "noetherian"},
               {"input_states", a->v.size()},
               {"construct_states", c.size()},
               {"class_preserved", cls},
               {"trees", trees},
               {"seed", seed},
               {"disagreements", bad},
               {"counterexamples", counter},
               {"ok", static_cast<bool>(*ok)}};
        *report_json = dup(j.dump(2));
    });
}

int wb_aut_states(const wb_aut* a) { return a ? a->v.size() : 0; }
void wb_aut_free(wb_aut* a) { delete a; }

// ---------------------------------------------------------------- mso

wb_status wb_mso_parse(const char* text, wb_logic logic, wb_mso** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new wb_mso{wb::mso::parse(text, mode_of(logic))};
    });
}

wb_status wb_mso_to_string(const wb_mso* f, char** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = dup(wb::mso::to_string(f->v));
    });
}

wb_status wb_mso_eval(const wb_mso* f, const wb_lts* s, int* out) {
    return guarded([&] {
        need(f && s && out, "null argument");
        auto inds = wb::mso::free_individuals(f->v);
        if (inds.empty()) *out = wb::mso::eval(f->v, s->v);
        else if (inds.size() == 1 && inds[0] == wb::mso::designated) *out = wb::mso::holds_at_root(f->v, s->v);
        else wb::fail("only the designated variable " + wb::mso::designated + " may occur free");
    });
}

wb_status wb_mso_compile(const wb_mso* f, wb_logic logic, wb_aut** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = new wb_aut{wb::mso::compile(f->v, mode_of(logic))};
    });
}

wb_status wb_mso_from_mu(const wb_mu* f, wb_logic logic, wb_mso** out) {
    return guarded([&] {
        need(f && out, "null argument");
        *out = new wb_mso{wb::mso::mu_to_mso(f->v, mode_of(logic))};
    });
}

void wb_mso_free(wb_mso* f) { delete f; }

// ---------------------------------------------------------------- fixpoints

wb_status wb_fix_trace(const wb_mu* body, const char* var, const wb_lts* s, char** report_json) {
    return guarded([&] {
        need(body && var && s && report_json, "null argument");
        auto f = wb::fix::from_formula(body->v, var, s->v);
        auto t = wb::fix::lfp(f);
        json stages = json::array();
        for (auto& x : t.stages) stages.push_back(set_json(x));
        json j{{"stages", stages}, {"lfp", set_json(t.lfp)}, {"length", static_cast<int>(t.stages.size()) - 1}};
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_fix_witness(const wb_mu* body, const char* var, const wb_lts* s, int state, char** report_json) {
    return guarded([&] {
        need(body && var && s && report_json, "null argument");
        if (state < 0 || state >= s->v.n) wb::fail("state out of range");
        auto f = wb::fix::from_formula(body->v, var, s->v);
        auto t = wb::fix::lfp(f);
        auto w = wb::fix::finite_witness(f, state);
        json j{{"state", state}, {"member", static_cast<bool>(t.lfp[state])}};
        j["witness"] = w ? set_json(*w) : json(nullptr);
        j["witness_supports"] = w ? json(static_cast<bool>(wb::fix::lfp(wb::fix::restrict(f, *w)).lfp[state])) : json(nullptr);
        if (s->v.n <= 12) {
            auto b = wb::fix::brute_force_witness(f, state);
            auto nb = wb::fix::brute_force_witness(f, state, &s->v);
            j["smallest_witness"] = b ? set_json(*b) : json(nullptr);
            j["smallest_noetherian_witness"] = nb ? set_json(*nb) : json(nullptr);
        }
        *report_json = dup(j.dump(2));
    });
}

wb_status wb_fix_unfold(const wb_mu* body, const char* var, const wb_lts* s, int state, char** report_json) {
    return guarded([&] {
        need(body && var && s && report_json, "null argument");
        if (state < 0 || state >= s->v.n) wb::fail("state out of range");
        auto f = wb::fix::from_formula(body->v, var, s->v);
        auto t = wb::fix::lfp(f);
        auto u = wb::fix::unfolding_game(f);
        auto win = wb::fix::unfolding_winners(u, f.n);
        auto sigma = wb::fix::descending_strategy(f);
        json strat = json::object();
        for (int i = 0; i < f.n; ++i)
            if (sigma[i]) strat[std::to_string(i)] = set_json(*sigma[i]);
        json j{{"positions", u.game.size()},
               {"winners", set_json(win)},
               {"lfp", set_json(t.lfp)},
               {"game_matches_lfp", win == t.lfp},
               {"strategy", strat},
               {"descending", wb::fix::is_descending(f, sigma)},
               {"winning", wb::fix::is_winning(f, sigma)},
               {"state", state}};
        if (sigma[state]) {
            auto tr = wb::fix::strategy_tree(f, sigma, state);
            json children = json::object();
            for (int i = 0; i < f.n; ++i)
                if (tr.nodes[i]) children[std::to_string(i)] = tr.children[i];
            j["tree"] = {{"root", tr.root}, {"nodes", set_json(tr.nodes)}, {"children", children}};
            j["root_in_restricted_lfp"] = static_cast<bool>(wb::fix::lfp(wb::fix::restrict(f, tr.nodes)).lfp[state]);
        } else {
            j["tree"] = nullptr;
        }
        *report_json = dup(j.dump(2));
    });
}

// ---------------------------------------------------------------- harness

wb_status wb_fuzz_suites(char** list_json) {
    return guarded([&] {
        need(list_json, "null argument");
        *list_json = dup(json(wb::fuzz::suites()).dump());
    });
}

wb_status wb_fuzz_run(const char* suite, int n, uint64_t seed, char** report_json, int* ok) {
    return guarded([&] {
        need(suite && report_json && ok, "null argument");
        bool all = false;
        std::string rep = wb::fuzz::run(suite, n, seed, &all);
        *ok = all;
        *report_json = dup(rep);
    });
}

wb_status wb_replay(const char* text, char** report_json, int* ok) {
    return guarded([&] {
        need(text && report_json && ok, "null argument");
        bool all = false;
        std::string rep = wb::fuzz::replay(text, &all);
        *ok = all;
        *report_json = dup(rep);
    });
}

}  // extern "C"
