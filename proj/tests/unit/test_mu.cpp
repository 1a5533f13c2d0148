#include <doctest.h>

#include "support.hpp"
#include "wb/mu.hpp"

using namespace wb;
using namespace wb::test;

namespace {

bool agree_on_random(const mu::NodeP& a, const mu::NodeP& b, std::uint64_t seed, int count = 60) {
    Rng g(seed);
    std::vector<std::string> props{"p", "q"};
    for (int k = 0; k < count; ++k) {
        auto s = rnd::random_lts(g, 5, props);
        if (mu::semantics_eval(a, s) != mu::semantics_eval(b, s)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("mu") {
    TEST_CASE("parse and print") {
        auto f = mu::parse("mu x. (p & dia x) | box ~q");
        CHECK(mu::free_letters(f) == std::set<std::string>{"p", "q"});
        CHECK(mu::bound_letters(f).size() == 1);
        CHECK(mu::same(mu::parse(mu::to_string(f)), f));
        CHECK_THROWS_AS(mu::parse("mu x. ~x"), wb::Error);
        CHECK_THROWS_AS(mu::parse("mu x. (p &"), wb::Error);
        auto m = mu::parse("<E x. (a1(x) & A y. a2(y))>(p, q)");
        CHECK(mu::dialect_of(m) == onestep::Dialect::fo1);
        // Binders are renamed apart.
        auto twice = mu::parse("(mu x. dia x) & (mu x. box x)");
        CHECK(mu::bound_letters(twice).size() == 2);
    }

    TEST_CASE("semantics examples") {
        auto c = chain(2, {{}, {"p"}});
        auto dp = mu::semantics_eval(mu::parse("dia p"), c);
        CHECK(dp == set_of(2, {0}));
        CHECK(mu::holds(mu::parse("dia p"), c));

        auto l = loop();
        CHECK(mu::semantics_eval(mu::parse("mu x. dia x"), l) == set_of(1, {}));
        CHECK(mu::semantics_eval(mu::parse("nu x. dia x"), l) == set_of(1, {0}));
        CHECK(mu::semantics_eval(mu::parse("mu x. box x"), l) == set_of(1, {}));

        Rng g(2);
        for (int k = 0; k < 20; ++k) {
            auto t = rnd::random_tree(g, 6, letters());
            CHECK(mu::semantics_eval(mu::parse("mu x. box x"), t) == lts::full_set(t));
        }
    }

    TEST_CASE("evaluation game examples") {
        auto s = lts::make({"p", "q"}, 1, {}, {{"q"}}, 0);
        auto eg = mu::build_eval_game(mu::parse("q"), s);
        CHECK(eg.game.owner[eg.root] == game::Player::forall);
        CHECK(eg.game.moves[eg.root].empty());
        CHECK(mu::game_holds(mu::parse("q"), s));
        CHECK(mu::game_holds(mu::parse("nu x. dia x"), loop()));
        CHECK_FALSE(mu::game_holds(mu::parse("mu x. dia x"), loop()));
    }

    TEST_CASE("adequacy on random pairs") {
        Rng g(3);
        for (int k = 0; k < 200; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, k % 2 == 0);
            auto s = rnd::random_lts(g, 5, letters());
            CHECK(mu::holds(f, s) == mu::game_holds(f, s));
        }
    }

    TEST_CASE("classify examples") {
        auto d = mu::classify(mu::parse("mu x. dia x"));
        CHECK(d.in_mu_C);
        CHECK(d.in_mu_D);
        CHECK(d.in_muML);
        auto b = mu::classify(mu::parse("mu x. box x"));
        CHECK(b.in_mu_D);
        CHECK_FALSE(b.in_mu_C);
        auto alt = mu::classify(mu::parse("nu y. mu x. ((p & dia x) | dia y)"));
        CHECK_FALSE(alt.in_mu_D);
        CHECK_FALSE(alt.in_mu_C);
        CHECK(mu::classify(mu::parse("nu x. (p & box x)")).in_mu_C);
    }

    TEST_CASE("mu_C implies mu_D") {
        Rng g(4);
        for (int k = 0; k < 300; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, k % 3 == 0);
            auto r = mu::classify(f);
            if (r.in_mu_C) CHECK(r.in_mu_D);
        }
    }

    TEST_CASE("guard transform") {
        auto g0 = mu::parse("mu x. (p | dia x)");
        CHECK(mu::is_guarded(g0));
        CHECK(agree_on_random(mu::guard_transform(g0), g0, 5));

        auto u = mu::parse("mu x. (x | p)");
        CHECK_FALSE(mu::is_guarded(u));
        auto gu = mu::guard_transform(u);
        CHECK(mu::is_guarded(gu));
        CHECK(agree_on_random(gu, mu::parse("p"), 6));

        auto v = mu::parse("mu x. (dia x | x)");
        auto gv = mu::guard_transform(v);
        CHECK(mu::is_guarded(gv));
        CHECK(agree_on_random(gv, v, 7));
        CHECK(mu::classify(gv).in_mu_C == mu::classify(v).in_mu_C);
        CHECK(mu::classify(gv).in_mu_D == mu::classify(v).in_mu_D);

        Rng g(8);
        for (int k = 0; k < 60; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            auto t = mu::guard_transform(f);
            CHECK(mu::is_guarded(t));
            auto before = mu::classify(f), after = mu::classify(t);
            if (before.in_mu_D) CHECK(after.in_mu_D);
            if (before.in_mu_C) CHECK(after.in_mu_C);
            CHECK(agree_on_random(t, f, 100 + k, 10));
        }
    }

    TEST_CASE("substitute") {
        auto f = mu::parse("mu x. (q | dia x)");
        CHECK(mu::same(mu::substitute(f, {{"q", mu::prop("q")}}), f));
        auto d = mu::substitute(mu::parse("dia q"), {{"q", mu::conj({mu::prop("p"), mu::prop("p")})}});
        CHECK(mu::same(d, mu::dia(mu::conj({mu::prop("p"), mu::prop("p")}))));
        // Capture avoidance: the substituted x stays free.
        auto c = mu::substitute(mu::parse("mu x. (q | dia x)"), {{"q", mu::prop("x")}});
        CHECK(mu::free_letters(c).count("x") == 1);

        // Continuity in q is preserved by substituting continuous formulas.
        Rng g(9);
        for (int k = 0; k < 80; ++k) {
            auto a = rnd::random_positive_body(g, {"p"}, "q", 2);
            auto b = rnd::random_positive_body(g, {"p"}, "q", 2);
            if (!mu::in_cont(a, {"q"}) || !mu::in_cont(b, {"q"})) continue;
            CHECK(mu::in_cont(mu::substitute(a, {{"q", b}}), {"q"}));
        }
    }

    TEST_CASE("FO1 modal bridge") {
        auto m = mu::parse("<E x. (a1(x) & A y. a2(y))>(p, q)");
        auto b = mu::fo1_modal_bridge(m);
        CHECK(mu::classify(b).in_muML);
        CHECK(agree_on_random(b, mu::parse("dia p & box q"), 10));
        auto d = mu::parse("dia p");
        CHECK(mu::same(mu::fo1_modal_bridge(d), d));

        Rng g(11);
        int tried = 0;
        for (int k = 0; k < 400 && tried < 100; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, false);
            if (mu::dialect_of(f) != onestep::Dialect::fo1) continue;
            ++tried;
            auto t = mu::fo1_modal_bridge(f);
            INFO(mu::to_string(f), " -> ", mu::to_string(t));
            CHECK(mu::classify(t).in_muML);
            if (mu::classify(f).in_mu_C) CHECK(mu::classify(t).in_mu_C);
            CHECK(agree_on_random(t, f, 200 + k, 8));
        }
        CHECK(tried == 100);
        CHECK_THROWS(mu::fo1_modal_bridge(mu::parse("<E x. E y. (x!=y & a1(x) & a1(y))>(p)")));
    }

    TEST_CASE("bisimulation invariance") {
        auto one = loop({"p"});
        auto two = lts::make({"p", "q"}, 2, {{0, 1}, {1, 0}}, {{"p"}, {"p"}}, 0);
        Rng g(12);
        for (int k = 0; k < 100; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, true);
            CHECK(mu::holds(f, one) == mu::holds(f, two));
            auto s = rnd::random_lts(g, 4, letters());
            auto u = lts::unravel_to_depth(s, 2);
            if (lts::bisimilar(s, u).bisimilar) CHECK(mu::holds(f, s) == mu::holds(f, u));
        }
    }

    TEST_CASE("bound letters act monotonically") {
        Rng g(13);
        for (int k = 0; k < 60; ++k) {
            auto body = rnd::random_positive_body(g, {"p"}, "x", 3);
            auto s = rnd::random_lts(g, 4, {"p"});
            for (unsigned m1 = 0; m1 < (1u << s.n); ++m1)
                for (unsigned m2 = m1;; m2 = (m2 + 1) | m1) {
                    auto lo = mu::semantics_eval(body, lts::p_variant(s, "x", subset_from_mask(s.n, m1)));
                    auto hi = mu::semantics_eval(body, lts::p_variant(s, "x", subset_from_mask(s.n, m2)));
                    for (int i = 0; i < s.n; ++i)
                        if (lo[i]) CHECK(hi[i]);
                    if (m2 == (1u << s.n) - 1) break;
                }
        }
    }

    TEST_CASE("negation") {
        Rng g(14);
        for (int k = 0; k < 80; ++k) {
            auto f = rnd::random_mu(g, letters(), 3, k % 2 == 0);
            auto n = mu::negate(f);
            auto s = rnd::random_lts(g, 5, letters());
            CHECK(mu::holds(f, s) != mu::holds(n, s));
        }
    }
}
