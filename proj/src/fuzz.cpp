#include <json.hpp>

#include "wb/fixpoint.hpp"
#include "wb/fuzz.hpp"
#include "wb/random.hpp"

namespace wb::fuzz {

using json = nlohmann::json;
namespace os = wb::onestep;

// Size caps shared by all suites.
constexpr int max_lts = 6;
constexpr int max_tree = 6;
constexpr int max_projection_tree = 5;
constexpr int max_automaton = 3;
constexpr int formula_depth = 3;

const std::vector<std::string>& suites() {
    static const std::vector<std::string> all{"adequacy", "complement", "simulation", "projection", "roundtrip",
                                              "normalform", "dual", "mso-agree", "keyfix", "diamond"};
    return all;
}

namespace {

const std::vector<std::string> letters{"p", "q"};

json lts_json(const lts::Lts& s) { return json::parse(lts::to_json_text(s)); }
json aut_json(const aut::Automaton& a) { return json::parse(aut::to_json_text(a)); }
lts::Lts lts_of(const json& j) { return lts::from_json_text(j.dump()); }
aut::Automaton aut_of(const json& j) { return aut::from_json_text(j.dump()); }

int pick(rnd::Rng& g, int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
bool coin(rnd::Rng& g, double p = 0.5) { return std::bernoulli_distribution(p)(g); }

os::Dialect any_dialect(rnd::Rng& g) {
    static const os::Dialect ds[] = {os::Dialect::fo1, os::Dialect::foe1, os::Dialect::foe1inf};
    return ds[pick(g, 3)];
}

std::string alpha_text(const os::NodeP& a, int preds) {
    return os::node_to_string(a, aut::state_names(preds));
}

os::Formula alpha_of(const json& j) {
    return os::parse(j.at("alpha").get<std::string>(), os::dialect_from_name(j.at("dialect").get<std::string>()),
                     aut::state_names(j.at("preds").get<int>()));
}

// Weak automaton with at most `max_automaton` states, continuous-weak over FOE1INF
// for the finitary construct, FOE1 for the noetherian one.
aut::Automaton source_automaton(rnd::Rng& g, bool finitary) {
    os::Dialect d = finitary ? os::Dialect::foe1inf : os::Dialect::foe1;
    for (int tries = 0; tries < 60; ++tries) {
        if (pick(g, 5) == 0) break;
        auto f = rnd::random_mu(g, letters, formula_depth, !finitary || coin(g));
        if (finitary ? !mu::in_mu_c(f) : (!mu::in_mu_d(f) || mu::dialect_of(f) == os::Dialect::foe1inf)) continue;
        aut::Automaton a = aut::trim(aut::from_formula(f, letters));
        if (a.size() > max_automaton) continue;
        if (!finitary) a.dialect = os::Dialect::foe1;
        auto rep = aut::classify_automaton(a);
        if (finitary ? rep.continuous_weak : rep.weak) return a;
    }
    switch (pick(g, 3)) {
        case 0: return aut::root_only(letters, "p", d);
        case 1: return aut::included(letters, "p", "q", d);
        default: return aut::successor(letters, "p", "q", d);
    }
}

// ---------------------------------------------------------------- generators

json gen_adequacy(rnd::Rng& g) {
    auto f = rnd::random_mu(g, letters, formula_depth, true);
    return {{"formula", mu::to_string(f)}, {"lts", lts_json(rnd::random_lts(g, max_lts, letters))}};
}

json gen_complement(rnd::Rng& g) {
    auto a = rnd::random_automaton(g, 1 + pick(g, max_automaton), letters, any_dialect(g));
    return {{"automaton", aut_json(a)}, {"lts", lts_json(rnd::random_lts(g, max_lts, letters))}};
}

json gen_simulation(rnd::Rng& g) {
    bool fin = coin(g);
    json trees = json::array();
    for (int i = 0; i < 3; ++i) trees.push_back(lts_json(rnd::random_tree(g, max_tree, letters)));
    return {{"kind", fin ? "finitary" : "noetherian"}, {"automaton", aut_json(source_automaton(g, fin))}, {"trees", trees}};
}

json gen_projection(rnd::Rng& g) {
    bool fin = coin(g);
    return {{"kind", fin ? "finitary" : "noetherian"},
            {"automaton", aut_json(source_automaton(g, fin))},
            {"letter", "q"},
            {"tree", lts_json(rnd::random_tree(g, max_projection_tree, {"p"}))}};
}

json gen_roundtrip(rnd::Rng& g) {
    json j{{"lts", lts_json(rnd::random_lts(g, 5, letters))}};
    if (coin(g)) j["automaton"] = aut_json(rnd::random_automaton(g, 1 + pick(g, max_automaton), letters, any_dialect(g), 2));
    else j["formula"] = mu::to_string(rnd::random_mu(g, letters, formula_depth, coin(g)));
    return j;
}

json gen_normalform(rnd::Rng& g) {
    os::Dialect d = any_dialect(g);
    return {{"alpha", alpha_text(rnd::random_onestep(g, 2, d, 3), 2)}, {"dialect", os::dialect_name(d)}, {"preds", 2}};
}

json gen_dual(rnd::Rng& g) {
    os::Dialect d = any_dialect(g);
    json model = json::array(), weighted = json::array();
    int k = pick(g, 4);
    for (int i = 0; i < k; ++i) model.push_back(pick(g, 4));
    for (int t = 0; t < 4; ++t) {
        int m = pick(g, 4);
        if (m == 3) m = os::omega;
        if (m != 0) weighted.push_back({t, m});
    }
    return {{"alpha", alpha_text(rnd::random_onestep(g, 2, d, 2), 2)},
            {"dialect", os::dialect_name(d)},
            {"preds", 2},
            {"model", model},
            {"weighted", weighted}};
}

json gen_mso(rnd::Rng& g) {
    mso::Mode m = coin(g) ? mso::Mode::finite : mso::Mode::noetherian;
    auto f = rnd::random_mso(g, letters, 2, m);
    return {{"mso", mso::to_string(f)}, {"logic", mso::mode_name(m)},
            {"tree", lts_json(rnd::random_tree(g, 5, letters))}};
}

json gen_keyfix(rnd::Rng& g) {
    mu::NodeP body;
    do body = rnd::random_positive_body(g, {"q"}, "x", formula_depth);
    while (!mu::free_letters(body).count("x"));
    auto s = rnd::random_lts(g, 5, {"q"});
    json restrict_to = json::array();
    for (int i = 0; i < s.n; ++i)
        if (coin(g)) restrict_to.push_back(i);
    return {{"body", mu::to_string(body)}, {"var", "x"}, {"lts", lts_json(s)}, {"restrict", restrict_to}};
}

json gen_diamond(rnd::Rng& g) {
    auto f = rnd::random_mu(g, letters, formula_depth, true);
    return {{"formula", mu::to_string(f)}, {"lts", lts_json(rnd::random_lts(g, 5, letters))}};
}

// ---------------------------------------------------------------- checks

Outcome fail_with(const std::string& d) { return Outcome{false, d}; }

Outcome check_adequacy(const json& j) {
    auto f = mu::parse(j.at("formula").get<std::string>());
    auto s = lts_of(j.at("lts"));
    bool a = mu::holds(f, s), b = mu::game_holds(f, s);
    bool c = aut::accepts(aut::from_formula(f, s.props), s);
    if (a != b || a != c)
        return fail_with("semantics " + std::to_string(a) + ", game " + std::to_string(b) + ", automaton " +
                         std::to_string(c));
    return {};
}

Outcome check_complement(const json& j) {
    auto a = aut_of(j.at("automaton"));
    auto s = lts_of(j.at("lts"));
    if (aut::accepts(a, s) == aut::accepts(aut::complement(a), s)) return fail_with("automaton and complement agree");
    return {};
}

aut::Automaton construct(const std::string& kind, const aut::Automaton& a) {
    return kind == "finitary" ? aut::finitary_construct(a) : aut::noetherian_construct(a);
}

Outcome check_simulation(const json& j) {
    auto a = aut_of(j.at("automaton"));
    std::string kind = j.at("kind");
    auto c = construct(kind, a);
    auto rep = aut::classify_automaton(c);
    if (kind == "finitary" ? !rep.continuous_weak : !rep.weak) return fail_with("construct lost its class");
    for (auto& cl : rep.clusters) {
        int s0 = c.sort[cl[0]];
        for (int s : cl)
            if (c.sort[s] != s0) return fail_with("cluster mixes sorts");
    }
    for (auto& t : j.at("trees")) {
        auto s = lts_of(t);
        if (aut::accepts(a, s) != aut::accepts(c, s)) return fail_with("construct disagrees on a tree");
    }
    return {};
}

Outcome check_projection(const json& j) {
    auto a = aut_of(j.at("automaton"));
    std::string p = j.at("letter");
    auto t = lts_of(j.at("tree"));
    auto pr = aut::project(construct(j.at("kind"), a), p);
    bool want = false;
    for (std::uint32_t x = 0; x < (1u << t.n) && !want; ++x) {
        lts::StateSet xs(t.n);
        for (int k = 0; k < t.n; ++k) xs[k] = (x >> k) & 1u;
        want = aut::accepts(a, lts::p_variant(t, p, xs));
    }
    if (aut::accepts(pr, t) != want) return fail_with("projection " + std::to_string(!want) + ", brute force " + std::to_string(want));
    return {};
}

Outcome check_roundtrip(const json& j) {
    auto s = lts_of(j.at("lts"));
    if (j.contains("automaton")) {
        auto a = aut_of(j.at("automaton"));
        auto f = aut::to_formula(a);
        if (aut::accepts(a, s) != mu::holds(f, s)) return fail_with("to_formula changes the language");
        auto rep = aut::classify_automaton(a);
        if (rep.weak && !mu::in_mu_d(f)) return fail_with("weak automaton gave a formula outside mu_D");
        if (rep.continuous_weak && !mu::in_mu_c(f)) return fail_with("continuous-weak automaton gave a formula outside mu_C");
        return {};
    }
    auto f = mu::parse(j.at("formula").get<std::string>());
    auto a = aut::from_formula(f, s.props);
    bool h = mu::holds(f, s);
    if (aut::accepts(a, s) != h) return fail_with("from_formula changes the language");
    auto rep = aut::classify_automaton(a);
    if (mu::in_mu_d(f) && !rep.weak) return fail_with("mu_D formula gave a non-weak automaton");
    if (mu::in_mu_c(f) && !rep.continuous_weak) return fail_with("mu_C formula gave a non-continuous-weak automaton");
    if (mu::holds(aut::to_formula(a), s) != h) return fail_with("formula round trip changes the semantics");
    return {};
}

Outcome check_normalform(const json& j) {
    auto f = alpha_of(j);
    int bound = os::rank(f.root) + 1;
    auto bf = os::to_basic_form(f);
    if (!os::equivalent(os::expand(bf), f, bound)) return fail_with("basic form is not equivalent");
    os::Type b = 1;
    if (os::in_cont(f.root, b)) {
        auto cf = os::to_continuous_basic_form(f, b);
        for (auto& r : cf.disjuncts)
            for (auto t : cf.dialect == os::Dialect::fo1 ? r.pi : r.sigma)
                if (t & b) return fail_with("continuous form has a B-type in Sigma");
        if (!os::equivalent(os::expand(cf), f, bound)) return fail_with("continuous form is not equivalent");
    }
    return {};
}

Outcome check_dual(const json& j) {
    auto f = alpha_of(j);
    auto d = os::dual(f);
    if (!os::same(os::dual(d).root, os::expand_w(f.root)) && !os::same(os::dual(d).root, f.root))
        return fail_with("dual is not an involution");
    os::Type full = (os::Type(1) << j.at("preds").get<int>()) - 1;
    os::Model m, mc;
    for (auto& t : j.at("model")) {
        m.elems.push_back(t.get<os::Type>());
        mc.elems.push_back(full & ~t.get<os::Type>());
    }
    if (os::eval_finite(f, m) == os::eval_finite(d, mc)) return fail_with("dual law fails on the finite model");
    os::WeightedModel w, wc;
    for (auto& e : j.at("weighted")) {
        os::Type t = e[0].get<os::Type>();
        int k = e[1].get<int>();
        w.mult.emplace_back(t, k);
        wc.mult.emplace_back(full & ~t, k);
    }
    if (os::eval_weighted(f, w) == os::eval_weighted(d, wc)) return fail_with("dual law fails on the weighted model");
    return {};
}

Outcome check_mso(const json& j) {
    mso::Mode m = mso::mode_from_name(j.at("logic"));
    std::string text = j.at("mso");
    auto f = mso::parse(text, m);
    auto t = lts_of(j.at("tree"));
    bool e = mso::eval(f, t);
    for (auto other : {mso::Mode::standard, mso::Mode::finite, mso::Mode::noetherian})
        if (mso::eval(mso::parse(text, other), t) != e) return fail_with("quantifier modes disagree on a finite tree");
    if (aut::accepts(mso::compile(f, m), t) != e) return fail_with("compiled automaton disagrees with evaluation");
    return {};
}

Outcome check_keyfix(const json& j) {
    auto body = mu::parse(j.at("body").get<std::string>());
    std::string x = j.at("var");
    auto s = lts_of(j.at("lts"));
    auto f = fix::from_formula(body, x, s);
    auto tr = fix::lfp(f);
    auto fixf = mu::fix(mu::Kind::mu, x, body);
    if (mu::semantics_eval(fixf, s) != tr.lfp) return fail_with("iteration and formula semantics differ");
    if (fix::unfolding_winners(fix::unfolding_game(f), s.n) != tr.lfp) return fail_with("unfolding game region differs");
    lts::StateSet xs(s.n, false);
    for (auto& i : j.at("restrict")) xs.at(i.get<int>()) = true;
    auto rl = fix::lfp(fix::restrict(f, xs)).lfp;
    for (int i = 0; i < s.n; ++i)
        if (rl[i] && !tr.lfp[i]) return fail_with("restricted fixpoint is not included");
    auto sigma = fix::descending_strategy(f);
    if (!fix::is_descending(f, sigma) || !fix::is_winning(f, sigma)) return fail_with("descending strategy check fails");
    for (int r = 0; r < s.n; ++r) {
        if (tr.lfp[r]) {
            auto t = fix::strategy_tree(f, sigma, r);
            if (!fix::lfp(fix::restrict(f, t.nodes)).lfp[r]) return fail_with("root outside the strategy-tree fixpoint");
        }
        auto w = fix::finite_witness(f, r);
        if (w.has_value() != static_cast<bool>(tr.lfp[r])) return fail_with("witness existence differs from membership");
        if (w && !fix::lfp(fix::restrict(f, *w)).lfp[r]) return fail_with("witness does not support the state");
        if (fix::brute_force_witness(f, r).has_value() != static_cast<bool>(tr.lfp[r]))
            return fail_with("brute-force witness differs from membership");
        if (fix::brute_force_witness(f, r, &s).has_value() != static_cast<bool>(tr.lfp[r]))
            return fail_with("noetherian witness differs from membership");
    }
    // The existential set of the translation: q works iff the initial state is in LFP(F|q).
    for (std::uint32_t qm = 0; qm < (1u << s.n); ++qm) {
        lts::StateSet q(s.n);
        for (int i = 0; i < s.n; ++i) q[i] = (qm >> i) & 1u;
        auto fq = fix::restrict(f, q);
        bool all_pre = true;
        for (std::uint32_t pm = qm;; pm = (pm - 1) & qm) {
            lts::StateSet p(s.n);
            for (int i = 0; i < s.n; ++i) p[i] = (pm >> i) & 1u;
            auto img = fq.apply(p);
            bool pre = true;
            for (int i = 0; i < s.n; ++i)
                if (img[i] && !p[i]) pre = false;
            if (pre && !p[s.init]) all_pre = false;
            if (pm == 0) break;
        }
        if (all_pre != static_cast<bool>(fix::lfp(fq).lfp[s.init])) return fail_with("prefixpoint reading of q differs");
    }
    if (mu::in_mu_c(fixf) && mso::holds_at_root(mso::mu_to_mso(fixf, mso::Mode::finite), s) != static_cast<bool>(tr.lfp[s.init]))
        return fail_with("second-order translation differs from the fixpoint");
    return {};
}

Outcome check_diamond(const json& j) {
    auto f = mu::parse(j.at("formula").get<std::string>());
    auto s = lts_of(j.at("lts"));
    auto a = aut::from_formula(f, s.props);
    if (aut::accepts(a, s) != aut::accepts(aut::diamond_automaton(a), s)) return fail_with("diamond automaton disagrees");
    return {};
}

json generate_json(const std::string& suite, rnd::Rng& g) {
    if (suite == "adequacy") return gen_adequacy(g);
    if (suite == "complement") return gen_complement(g);
    if (suite == "simulation") return gen_simulation(g);
    if (suite == "projection") return gen_projection(g);
    if (suite == "roundtrip") return gen_roundtrip(g);
    if (suite == "normalform") return gen_normalform(g);
    if (suite == "dual") return gen_dual(g);
    if (suite == "mso-agree") return gen_mso(g);
    if (suite == "keyfix") return gen_keyfix(g);
    if (suite == "diamond") return gen_diamond(g);
    fail("unknown suite " + suite);
}

Outcome check_json(const std::string& suite, const json& j) {
    try {
        if (suite == "adequacy") return check_adequacy(j);
        if (suite == "complement") return check_complement(j);
        if (suite == "simulation") return check_simulation(j);
        if (suite == "projection") return check_projection(j);
        if (suite == "roundtrip") return check_roundtrip(j);
        if (suite == "normalform") return check_normalform(j);
        if (suite == "dual") return check_dual(j);
        if (suite == "mso-agree") return check_mso(j);
        if (suite == "keyfix") return check_keyfix(j);
        if (suite == "diamond") return check_diamond(j);
    } catch (const Error& e) {
        return fail_with(std::string("error: ") + e.what());
    } catch (const json::exception& e) {
        return fail_with(std::string("malformed instance: ") + e.what());
    }
    fail("unknown suite " + suite);
}

rnd::Rng instance_rng(std::uint64_t seed, int index) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index)};
    return rnd::Rng(sq);
}

void known(const std::string& suite) {
    for (auto& s : suites())
        if (s == suite) return;
    fail("unknown suite " + suite);
}

}  // namespace

std::string generate(const std::string& suite, std::uint64_t seed, int index) {
    known(suite);
    auto g = instance_rng(seed, index);
    return generate_json(suite, g).dump();
}

Outcome check(const std::string& suite, const std::string& instance_json) {
    known(suite);
    json j;
    try {
        j = json::parse(instance_json);
    } catch (const json::exception& e) {
        fail_parse(std::string("instance is not JSON: ") + e.what());
    }
    return check_json(suite, j);
}

std::string run(const std::string& suite, int n, std::uint64_t seed, bool* ok) {
    known(suite);
    if (n < 0) fail("instance count must be non-negative");
    json failures = json::array();
    int passed = 0;
    for (int i = 0; i < n; ++i) {
        auto g = instance_rng(seed, i);
        json inst = generate_json(suite, g);
        Outcome o = check_json(suite, inst);
        if (o.ok) ++passed;
        else failures.push_back({{"suite", suite}, {"index", i}, {"detail", o.detail}, {"instance", inst}});
    }
    bool all = failures.empty();
    if (ok) *ok = all;
    json rep{{"suite", suite}, {"seed", seed}, {"n", n}, {"passed", passed},
             {"failed", static_cast<int>(failures.size())}, {"ok", all}, {"failures", failures}};
    return rep.dump(2);
}

std::string replay(const std::string& json_text, bool* ok) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail_parse(std::string("replay file is not JSON: ") + e.what());
    }
    json items = json::array();
    if (j.contains("failures")) items = j.at("failures");
    else if (j.contains("suite") && j.contains("instance")) items.push_back(j);
    else fail("replay needs a run report or a {suite, instance} object");
    json results = json::array();
    int reproduced = 0;
    for (auto& it : items) {
        std::string suite = it.at("suite");
        known(suite);
        Outcome o = check_json(suite, it.at("instance"));
        if (!o.ok) ++reproduced;
        results.push_back({{"suite", suite}, {"index", it.value("index", -1)}, {"ok", o.ok}, {"detail", o.detail}});
    }
    if (ok) *ok = reproduced == 0;
    json rep{{"replayed", static_cast<int>(items.size())}, {"reproduced", reproduced}, {"results", results}};
    return rep.dump(2);
}

}  // namespace wb::fuzz
