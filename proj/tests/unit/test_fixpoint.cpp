#include <doctest.h>

#include "support.hpp"
#include "wb/fixpoint.hpp"
#include "wb/mu.hpp"

using namespace wb;
using namespace wb::test;
using fix::Functional;
using lts::StateSet;

namespace {

Functional constant(int n, const StateSet& s) { return {n, [s](const StateSet&) { return s; }}; }
Functional identity(int n) { return {n, [](const StateSet& x) { return x; }}; }

bool subset(const StateSet& a, const StateSet& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

// Random functional from a formula positive in x over a small LTS.
Functional random_functional(Rng& g, Lts& keep) {
    keep = rnd::random_lts(g, 5, {"p", "q"});
    auto body = rnd::random_positive_body(g, {"p", "q"}, "x", 3);
    return fix::from_formula(body, "x", keep);
}

}  // namespace

TEST_SUITE("fixpoint") {
    TEST_CASE("lfp examples") {
        CHECK(fix::lfp(identity(3)).lfp == set_of(3, {}));
        auto c = fix::lfp(constant(3, set_of(3, {0, 2})));
        CHECK(c.lfp == set_of(3, {0, 2}));
        CHECK(c.stages.size() == 2);

        auto ch = chain(3);
        CHECK(fix::lfp(fix::from_formula(mu::parse("dia x"), "x", ch)).lfp == set_of(3, {}));
        auto pc = chain(4, {{}, {}, {}, {"p"}});
        auto t = fix::lfp(fix::from_formula(mu::parse("p | dia x"), "x", pc));
        CHECK(t.lfp == lts::full_set(pc));
        REQUIRE(t.stages.size() == 5);
        CHECK(t.stages[1] == set_of(4, {3}));
        CHECK(t.stages[2] == set_of(4, {2, 3}));
        CHECK(t.stages[3] == set_of(4, {1, 2, 3}));
        CHECK(fix::stage_of(t, 0) == 4);
        CHECK(fix::stage_of(t, 3) == 1);
        auto none = fix::lfp(fix::from_formula(mu::parse("q & dia x"), "x", pc));
        CHECK(fix::stage_of(none, 0) == -1);
    }

    TEST_CASE("monotonicity checks") {
        Functional flip{2, [](const StateSet& x) { return StateSet{!x[0], !x[1]}; }};
        CHECK_FALSE(fix::monotone(flip));
        CHECK_THROWS(fix::lfp(flip));
        CHECK(fix::monotone(identity(4)));
        CHECK_THROWS(fix::from_formula(mu::parse("~x"), "x", chain(2)));
    }

    TEST_CASE("restricted fixpoints") {
        Rng g(1);
        for (int k = 0; k < 40; ++k) {
            Lts s;
            auto f = random_functional(g, s);
            auto full = fix::lfp(f).lfp;
            CHECK(fix::lfp(fix::restrict(f, lts::full_set(s))).lfp == full);
            CHECK(fix::lfp(fix::restrict(f, lts::empty_set(s))).lfp == lts::empty_set(s));
            for (unsigned m = 0; m < (1u << s.n); ++m)
                CHECK(subset(fix::lfp(fix::restrict(f, subset_from_mask(s.n, m))).lfp, full));
        }
    }

    TEST_CASE("unfolding game") {
        auto cu = fix::unfolding_game(constant(3, set_of(3, {1})));
        CHECK(fix::unfolding_winners(cu, 3) == set_of(3, {1}));
        auto iu = fix::unfolding_game(identity(3));
        CHECK(fix::unfolding_winners(iu, 3) == set_of(3, {}));

        Rng g(2);
        for (int k = 0; k < 40; ++k) {
            Lts s;
            auto f = random_functional(g, s);
            auto u = fix::unfolding_game(f);
            CHECK(fix::unfolding_winners(u, s.n) == fix::lfp(f).lfp);
        }
    }

    TEST_CASE("descending strategies") {
        auto c = constant(2, set_of(2, {0}));
        auto sc = fix::descending_strategy(c);
        REQUIRE(sc[0].has_value());
        CHECK(*sc[0] == set_of(2, {}));
        CHECK_FALSE(sc[1].has_value());

        Rng g(3);
        for (int k = 0; k < 40; ++k) {
            Lts s;
            auto f = random_functional(g, s);
            auto t = fix::lfp(f);
            auto sigma = fix::descending_strategy(f);
            CHECK(fix::is_descending(f, sigma));
            CHECK(fix::is_winning(f, sigma));
            for (int i = 0; i < s.n; ++i) {
                CHECK(sigma[i].has_value() == static_cast<bool>(t.lfp[i]));
                if (!sigma[i]) continue;
                CHECK(std::find(t.stages.begin(), t.stages.end(), *sigma[i]) != t.stages.end());
                CHECK(f.apply(*sigma[i])[i]);
            }
        }
    }

    TEST_CASE("strategy trees") {
        auto c = constant(3, set_of(3, {2}));
        auto tc = fix::strategy_tree(c, fix::descending_strategy(c), 2);
        CHECK(tc.nodes == set_of(3, {2}));

        auto pc = chain(4, {{}, {}, {}, {"p"}});
        auto f = fix::from_formula(mu::parse("p | dia x"), "x", pc);
        auto tf = fix::strategy_tree(f, fix::descending_strategy(f), 0);
        CHECK(tf.nodes == lts::full_set(pc));
        CHECK_THROWS(fix::strategy_tree(f, fix::descending_strategy(f), 5));

        Rng g(4);
        for (int k = 0; k < 40; ++k) {
            Lts s;
            auto h = random_functional(g, s);
            auto sigma = fix::descending_strategy(h);
            auto l = fix::lfp(h).lfp;
            for (int r = 0; r < s.n; ++r) {
                if (!l[r]) continue;
                auto tr = fix::strategy_tree(h, sigma, r);
                CHECK(fix::lfp(fix::restrict(h, tr.nodes)).lfp[r]);
            }
        }
    }

    TEST_CASE("finite witnesses") {
        auto c = constant(3, set_of(3, {1}));
        CHECK_FALSE(fix::finite_witness(c, 0).has_value());
        auto w = fix::finite_witness(c, 1);
        REQUIRE(w.has_value());
        CHECK(*w == set_of(3, {1}));

        Rng g(5);
        for (int k = 0; k < 40; ++k) {
            Lts s;
            auto f = random_functional(g, s);
            auto l = fix::lfp(f).lfp;
            for (int i = 0; i < s.n; ++i) {
                auto x = fix::finite_witness(f, i);
                CHECK(x.has_value() == static_cast<bool>(l[i]));
                if (x) CHECK(fix::lfp(fix::restrict(f, *x)).lfp[i]);
                auto b = fix::brute_force_witness(f, i);
                CHECK(b.has_value() == static_cast<bool>(l[i]));
                auto bn = fix::brute_force_witness(f, i, &s);
                CHECK(bn.has_value() == static_cast<bool>(l[i]));
                if (bn) CHECK(lts::noetherian_subset(s, *bn));
            }
        }
    }
}
