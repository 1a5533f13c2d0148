#include <doctest.h>

#include "support.hpp"
#include "wb/aut.hpp"
#include "wb/mu.hpp"

using namespace wb;
using namespace wb::test;
namespace os = wb::onestep;

namespace {

aut::Automaton automaton(const std::string& json) { return aut::from_json_text(json); }

const char* forall_loop = R"j({"dialect":"FOE1INF","props":["p"],"states":1,"init":0,"omega":[0],
                               "delta":{"0,*":"A x. a0(x)"}})j";
const char* forall_loop_odd = R"j({"dialect":"FOE1INF","props":["p"],"states":1,"init":0,"omega":[1],
                                   "delta":{"0,*":"A x. a0(x)"}})j";

std::vector<Lts> corpus(std::uint64_t seed, int n, const std::vector<std::string>& props, bool trees) {
    Rng g(seed);
    std::vector<Lts> out;
    for (int i = 0; i < n; ++i) out.push_back(trees ? rnd::random_tree(g, 6, props) : rnd::random_lts(g, 5, props));
    return out;
}

bool same_language(const aut::Automaton& a, const aut::Automaton& b, const std::vector<Lts>& ss) {
    for (auto& s : ss)
        if (aut::accepts(a, s) != aut::accepts(b, s)) return false;
    return true;
}

int fixpoints(const mu::NodeP& f) {
    int n = mu::is_fix(f) ? 1 : 0;
    for (auto& k : f->kids) n += fixpoints(k);
    return n;
}

}  // namespace

TEST_SUITE("aut") {
    TEST_CASE("json round trip and validation") {
        auto a = automaton(forall_loop);
        auto b = aut::from_json_text(aut::to_json_text(a));
        CHECK(b.size() == 1);
        CHECK(b.omega == a.omega);
        CHECK(os::same(b.delta[0][1], a.delta[0][1]));
        CHECK_THROWS(automaton(R"j({"props":["p"],"states":1,"omega":[0],"delta":{"0,{}":"true"}})j"));
        CHECK_THROWS(automaton(R"j({"props":["p"],"states":1,"omega":[0],"delta":{"0,*":"E x. !a0(x)"}})j"));
        CHECK_THROWS(automaton(R"j({"props":["p"],"states":1,"omega":[0,1],"delta":{"0,*":"true"}})j"));
    }

    TEST_CASE("acceptance examples") {
        auto inc = aut::included({"p", "q"}, "p", "q", os::Dialect::foe1inf);
        auto good = lts::make({"p", "q"}, 3, {{0, 1}, {0, 2}}, {{"p", "q"}, {"q"}, {}}, 0);
        auto bad = lts::make({"p", "q"}, 3, {{0, 1}, {0, 2}}, {{"p", "q"}, {"q"}, {"p"}}, 0);
        CHECK(aut::accepts(inc, good));
        CHECK_FALSE(aut::accepts(inc, bad));

        auto top = aut::top_automaton({"p", "q"}, os::Dialect::foe1);
        for (auto& s : corpus(1, 30, {"p", "q"}, false)) CHECK(aut::accepts(top, s));
        CHECK_THROWS(aut::accepts(top, lts::make({"r"}, 1, {}, {}, 0)));
    }

    TEST_CASE("symbolic acceptance agrees with the explicit game") {
        Rng g(2);
        for (int k = 0; k < 300; ++k) {
            auto d = static_cast<os::Dialect>(k % 3);
            auto a = rnd::random_automaton(g, 1 + static_cast<int>(g() % 3), {"p"}, d);
            auto s = rnd::random_lts(g, 4, {"p"});
            CHECK(aut::accepts(a, s) == aut::accepts_by_game(a, s));
        }
    }

    TEST_CASE("from_formula agrees with the semantics") {
        Rng g(3);
        for (int k = 0; k < 100; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            auto a = aut::from_formula(f, letters());
            auto s = rnd::random_lts(g, 5, letters());
            CHECK(aut::accepts(a, s) == mu::holds(f, s));
        }
    }

    TEST_CASE("complement") {
        Rng g(4);
        auto ss = corpus(5, 40, {"p"}, false);
        for (int k = 0; k < 20; ++k) {
            auto a = rnd::random_automaton(g, 3, {"p"}, static_cast<os::Dialect>(k % 3));
            auto c = aut::complement(a);
            auto cc = aut::complement(c);
            for (std::size_t i = 0; i < a.omega.size(); ++i) CHECK(cc.omega[i] == a.omega[i] + 2);
            for (auto& s : ss) {
                CHECK(aut::accepts(a, s) != aut::accepts(c, s));
                CHECK(aut::accepts(a, s) == aut::accepts(cc, s));
            }
        }
        auto top = aut::top_automaton({"p"}, os::Dialect::fo1);
        for (auto& s : ss) CHECK_FALSE(aut::accepts(aut::complement(top), s));
        auto down = aut::root_only({"p"}, "p", os::Dialect::foe1inf);
        auto nd = aut::complement(down);
        for (auto& t : corpus(6, 30, {"p"}, true)) CHECK(aut::accepts(down, t) != aut::accepts(nd, t));
    }

    TEST_CASE("complement preserves weakness") {
        Rng g(7);
        for (int k = 0; k < 60; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            auto a = aut::from_formula(f, letters());
            auto r = aut::classify_automaton(a), rc = aut::classify_automaton(aut::complement(a));
            CHECK(r.weak == rc.weak);
            CHECK(r.continuous_weak == rc.continuous_weak);
        }
    }

    TEST_CASE("classify examples") {
        auto r = aut::classify_automaton(automaton(forall_loop));
        CHECK(r.clusters.size() == 1);
        CHECK_FALSE(r.degenerate[0]);
        CHECK(r.weak);
        CHECK(r.continuous_weak);

        auto two = automaton(R"j({"dialect":"FOE1","props":["p"],"states":2,"init":0,"omega":[1,0],
                                 "delta":{"0,*":"E x. a1(x)","1,*":"A x. a1(x)"}})j");
        auto r2 = aut::classify_automaton(two);
        CHECK(r2.clusters.size() == 2);
        CHECK(r2.cluster_of[0] != r2.cluster_of[1]);
        CHECK(r2.degenerate[r2.cluster_of[0]]);
        CHECK_FALSE(r2.degenerate[r2.cluster_of[1]]);
        CHECK(r2.higher.size() == 1);

        auto odd = aut::classify_automaton(automaton(forall_loop_odd));
        CHECK(odd.weak);
        CHECK_FALSE(odd.continuous_weak);

        auto mixed = automaton(R"j({"dialect":"FOE1","props":["p"],"states":2,"init":0,"omega":[1,2],
                                   "delta":{"0,*":"E x. a1(x)","1,*":"E x. a0(x)"}})j");
        CHECK_FALSE(aut::classify_automaton(mixed).weak);
    }

    TEST_CASE("normalize weak priorities") {
        auto a = automaton(R"j({"dialect":"FOE1","props":["p"],"states":2,"init":0,"omega":[2,4],
                               "delta":{"0,*":"E x. a1(x)","1,*":"A x. a1(x)"}})j");
        auto n = aut::normalize_weak_priorities(a);
        CHECK(n.omega == std::vector<int>{0, 0});
        auto b = aut::normalize_weak_priorities(automaton(forall_loop_odd));
        b.omega[0] = b.omega[0];
        CHECK(aut::normalize_weak_priorities(automaton(R"j({"props":["p"],"states":1,"omega":[3],
                                                            "delta":{"0,*":"A x. a0(x)"}})j"))
                  .omega == std::vector<int>{1});
        auto mixed = automaton(R"j({"dialect":"FOE1","props":["p"],"states":2,"init":0,"omega":[1,2],
                                   "delta":{"0,*":"E x. a1(x)","1,*":"E x. a0(x)"}})j");
        CHECK_THROWS(aut::normalize_weak_priorities(mixed));

        Rng g(8);
        auto ss = corpus(9, 50, letters(), false);
        for (int k = 0; k < 30; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            if (!mu::classify(f).in_mu_D) continue;
            auto w = aut::from_formula(f, letters());
            REQUIRE(aut::classify_automaton(w).weak);
            auto nw = aut::normalize_weak_priorities(w);
            for (int p : nw.omega) CHECK((p == 0 || p == 1));
            CHECK(same_language(w, nw, ss));
        }
    }

    TEST_CASE("to_formula") {
        auto a = automaton(forall_loop);
        auto f = aut::to_formula(a);
        for (auto& s : corpus(10, 40, {"p"}, false)) CHECK(aut::accepts(a, s) == mu::holds(f, s));

        // A degenerate initial state above a loop: one binder only.
        auto two = automaton(R"j({"dialect":"FOE1","props":["p"],"states":2,"init":0,"omega":[1,0],
                                 "delta":{"0,*":"E x. a1(x)","1,*":"A x. a1(x)"}})j");
        auto f2 = aut::to_formula(two);
        CHECK(fixpoints(f2) == 1);
        for (auto& s : corpus(11, 40, {"p"}, false)) CHECK(aut::accepts(two, s) == mu::holds(f2, s));

        Rng g(12);
        auto ss = corpus(13, 25, {"p"}, false);
        for (int k = 0; k < 40; ++k) {
            auto r = rnd::random_automaton(g, 3, {"p"}, static_cast<os::Dialect>(k % 3));
            auto t = aut::to_formula(r);
            for (auto& s : ss) CHECK(aut::accepts(r, s) == mu::holds(t, s));
            auto rep = aut::classify_automaton(r);
            if (rep.weak) CHECK(mu::classify(t).in_mu_D);
            if (rep.continuous_weak) CHECK(mu::classify(t).in_mu_C);
        }
    }

    TEST_CASE("from_formula examples") {
        auto p = aut::from_formula(mu::parse("p"), {"p"});
        CHECK(p.size() <= 2);
        auto root_p = lts::make({"p"}, 1, {}, {{"p"}}, 0);
        auto root_not = lts::make({"p"}, 2, {{0, 1}}, {{}, {"p"}}, 0);
        CHECK(aut::accepts(p, root_p));
        CHECK_FALSE(aut::accepts(p, root_not));

        auto m = aut::from_formula(mu::parse("mu x. dia x"), {"p"});
        auto rm = aut::classify_automaton(m);
        CHECK(rm.weak);
        CHECK(rm.continuous_weak);
        CHECK_FALSE(aut::accepts(m, loop({}, {"p"})));
        for (auto& s : corpus(14, 100, {"p"}, false)) CHECK(aut::accepts(m, s) == mu::holds(mu::parse("mu x. dia x"), s));

        auto nu = aut::from_formula(mu::parse("nu x. (p & dia x)"), {"p"});
        auto rn = aut::classify_automaton(nu);
        CHECK(rn.weak);
        CHECK(nu.omega[rn.clusters[0][0]] % 2 == 0);
    }

    TEST_CASE("finitary construct") {
        auto a = automaton(R"j({"dialect":"FOE1INF","props":["p"],"states":1,"init":0,"omega":[1],
                               "delta":{"0,{}":"E x. a0(x)","0,{p}":"true"}})j");
        REQUIRE(aut::classify_automaton(a).continuous_weak);
        auto f = aut::finitary_construct(a);
        CHECK(f.size() == 3);
        CHECK(f.two_sorted());
        auto rf = aut::classify_automaton(f);
        CHECK(rf.continuous_weak);
        CHECK(same_language(a, f, corpus(15, 30, {"p"}, true)));
        CHECK_THROWS(aut::finitary_construct(automaton(forall_loop_odd)));
    }

    TEST_CASE("noetherian construct") {
        auto a = automaton(R"j({"dialect":"FOE1","props":["p"],"states":1,"init":0,"omega":[0],
                               "delta":{"0,{}":"A x. a0(x)","0,{p}":"E x. a0(x)"}})j");
        auto n = aut::noetherian_construct(a);
        auto rn = aut::classify_automaton(n);
        CHECK(rn.weak);
        for (int q = 0; q < n.size(); ++q)
            if (n.sort[q] == 1) CHECK(n.omega[q] == 1);
        CHECK(same_language(a, n, corpus(16, 30, {"p"}, true)));
        // Clusters never mix the two sorts.
        for (auto& c : rn.clusters)
            for (int q : c) CHECK(n.sort[q] == n.sort[c[0]]);
    }

    TEST_CASE("projection") {
        // An automaton ignoring q projects to itself on q-free trees.
        auto base = aut::root_only({"p", "q"}, "p", os::Dialect::foe1inf);
        auto pr = aut::project(aut::finitary_construct(base), "q");
        CHECK(pr.props == std::vector<std::string>{"p"});
        auto base_p = aut::root_only({"p"}, "p", os::Dialect::foe1inf);
        CHECK(same_language(pr, base_p, corpus(17, 30, {"p"}, true)));
        CHECK_THROWS(aut::project(base, "r"));

        // Exists q. (q at the root and q included in p) holds iff p at the root.
        auto down_q = aut::root_only({"p", "q"}, "q", os::Dialect::foe1inf);
        auto e = aut::project(aut::finitary_construct(down_q), "q");
        for (auto& t : corpus(18, 20, {"p"}, true)) CHECK(aut::accepts(e, t));
    }

    TEST_CASE("union") {
        Rng g(19);
        auto ss = corpus(20, 30, {"p"}, false);
        for (int k = 0; k < 25; ++k) {
            auto a = aut::from_formula(rnd::random_mu(g, {"p"}, 3, true), {"p"});
            auto b = aut::from_formula(rnd::random_mu(g, {"p"}, 3, true), {"p"});
            auto u = aut::union_automaton(a, b);
            for (auto& s : ss) CHECK(aut::accepts(u, s) == (aut::accepts(a, s) || aut::accepts(b, s)));
            auto ra = aut::classify_automaton(a), rb = aut::classify_automaton(b), ru = aut::classify_automaton(u);
            if (ra.weak && rb.weak) CHECK(ru.weak);
            if (ra.continuous_weak && rb.continuous_weak) CHECK(ru.continuous_weak);
            auto ub = aut::union_automaton(a, aut::bot_automaton({"p"}, a.dialect));
            CHECK(same_language(ub, a, ss));
        }
        CHECK_THROWS(aut::union_automaton(aut::top_automaton({"p"}, os::Dialect::fo1),
                                          aut::top_automaton({"q"}, os::Dialect::fo1)));
    }

    TEST_CASE("diamond automaton") {
        auto a = automaton(R"j({"dialect":"FOE1","props":["p"],"states":1,"init":0,"omega":[0],
                               "delta":{"0,*":"E x. (a0(x) & A y. (y=x | a0(y)))"}})j");
        auto d = aut::diamond_automaton(a);
        CHECK(d.dialect == os::Dialect::fo1);
        os::Formula got{os::Dialect::fo1, {"a0"}, d.delta[0][0]};
        CHECK(os::equivalent(got, os::parse("E x. a0(x) & A x. a0(x)", os::Dialect::fo1, {"a0"}), 2));

        Rng g(21);
        auto ss = corpus(22, 30, letters(), false);
        for (int k = 0; k < 30; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            auto m = aut::from_formula(f, letters());
            auto dm = aut::diamond_automaton(m);
            auto rm = aut::classify_automaton(m), rd = aut::classify_automaton(dm);
            if (rm.weak) CHECK(rd.weak);
            if (rm.continuous_weak) CHECK(rd.continuous_weak);
            CHECK(same_language(m, dm, ss));
        }
    }

    TEST_CASE("alphabet extension and trimming") {
        auto a = aut::root_only({"p"}, "p", os::Dialect::foe1);
        auto e = aut::extend_alphabet(a, {"p", "q"});
        CHECK(e.colours() == 4);
        for (auto& t : corpus(23, 20, {"p", "q"}, true)) {
            auto tp = lts::make({"p"}, t.n, {}, {}, t.init);
            (void)tp;
            CHECK(aut::accepts(e, t) == (t.has(t.init, 0) && [&] {
                      for (int i = 0; i < t.n; ++i)
                          if (i != t.init && t.has(i, 0)) return false;
                      return true;
                  }()));
        }
        auto two = automaton(R"j({"dialect":"FOE1","props":["p"],"states":3,"init":0,"omega":[0,0,1],
                                 "delta":{"0,*":"A x. a0(x)","1,*":"E x. a2(x)","2,*":"true"}})j");
        CHECK(aut::trim(two).size() == 1);
    }
}
