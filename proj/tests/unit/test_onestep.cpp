#include <doctest.h>

#include <functional>

#include "support.hpp"
#include "wb/onestep.hpp"

using namespace wb;
using namespace wb::onestep;
using wb::rnd::Rng;

namespace {

// Every model over `preds` predicates with at most `max_d` elements, the empty one included.
std::vector<Model> all_models(int preds, int max_d) {
    std::vector<Model> out{Model{}};
    std::vector<Model> layer{Model{}};
    for (int d = 1; d <= max_d; ++d) {
        std::vector<Model> next;
        for (auto& m : layer)
            for (Type t = 0; t < (Type(1) << preds); ++t) {
                Model x = m;
                x.elems.push_back(t);
                next.push_back(x);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

Model complement_model(const Model& m, int preds) {
    Model c = m;
    for (auto& t : c.elems) t = ~t & ((Type(1) << preds) - 1);
    return c;
}

// Finite expansion of an all-finite weighted model.
Model expand_weighted(const WeightedModel& w) {
    Model m;
    for (auto [t, c] : w.mult)
        for (int i = 0; i < c; ++i) m.elems.push_back(t);
    return m;
}

// Weighted model from counts per type, `omega` allowed.
WeightedModel weighted(const std::vector<int>& counts, int cap = 4) {
    WeightedModel w;
    w.cap = cap;
    for (std::size_t t = 0; t < counts.size(); ++t)
        if (counts[t] != 0) w.mult.emplace_back(static_cast<Type>(t), counts[t]);
    return w;
}

Formula foe1(const std::string& s, Dialect d = Dialect::foe1, std::vector<std::string> preds = {}) {
    return parse(s, d, preds);
}

const Type a_bit = 1, b_bit = 2;

}  // namespace

TEST_SUITE("onestep") {
    TEST_CASE("parse and print") {
        auto f = foe1("E x. (a(x) & A y. (x=y | b(y)))");
        CHECK(f.preds == std::vector<std::string>{"a", "b"});
        auto g = parse(to_string(f), Dialect::foe1, f.preds);
        CHECK(same(f.root, g.root));
        CHECK_THROWS_AS(parse("E x. a(x) & x=y", Dialect::fo1), wb::Error);
        CHECK_THROWS_AS(parse("Einf x. a(x)", Dialect::foe1), wb::Error);
        CHECK_THROWS_AS(parse("E x. a(", Dialect::foe1), wb::Error);
        auto w = parse("W x.(a(x), b(x))", Dialect::foe1inf);
        CHECK(to_string(w) == "W x.(a(x), b(x))");
        CHECK(rank(f.root) == 2);
    }

    TEST_CASE("eval_finite examples") {
        auto ex = foe1("E x. a(x)");
        CHECK(eval_finite(ex, model_from_valuation(1, {{0}})));
        CHECK_FALSE(eval_finite(ex, Model{}));
        CHECK(eval_finite(foe1("A x. a(x)"), Model{}));
        CHECK_FALSE(eval_finite(foe1("Einf x. a(x)", Dialect::foe1inf), Model{}));
        CHECK(eval_finite(foe1("Ainf x. a(x)", Dialect::foe1inf), Model{}));
        auto two = foe1("E x. E y. (x!=y & a(x) & a(y))");
        CHECK_FALSE(eval_finite(two, model_from_valuation(3, {{1}})));
        CHECK(eval_finite(two, model_from_valuation(3, {{1, 2}})));
        // Infinite quantifiers on finite models.
        CHECK_FALSE(eval_finite(foe1("Einf x. true", Dialect::foe1inf), model_from_valuation(3, {})));
        CHECK(eval_finite(foe1("Ainf x. false", Dialect::foe1inf), model_from_valuation(3, {})));
        CHECK_THROWS(model_from_valuation(1, {{4}}));
    }

    TEST_CASE("eval_weighted examples") {
        auto inf = foe1("Einf x. a(x)", Dialect::foe1inf);
        CHECK(eval_weighted(inf, weighted({0, omega})));
        CHECK_FALSE(eval_weighted(inf, weighted({0, 5}, 5)));
        CHECK_FALSE(eval_weighted(inf, weighted({omega, 3})));
        auto ainf = foe1("Ainf x. a(x)", Dialect::foe1inf);
        CHECK(eval_weighted(ainf, weighted({7, omega}, 7)));
        CHECK_FALSE(eval_weighted(ainf, weighted({omega, omega})));
    }

    TEST_CASE("weighted agrees with finite expansion") {
        Rng g(31);
        int checked = 0;
        for (int k = 0; k < 120; ++k) {
            auto n = rnd::random_onestep(g, 2, Dialect::foe1, 2);
            Formula f{Dialect::foe1, {"a", "b"}, n};
            for (int c = 0; c < 256; ++c) {
                std::vector<int> counts{c & 3, (c >> 2) & 3, (c >> 4) & 3, (c >> 6) & 3};
                auto w = weighted(counts, 3);
                CHECK(eval_weighted(f, w) == eval_finite(f, expand_weighted(w)));
                ++checked;
            }
        }
        CHECK(checked == 120 * 256);
    }

    TEST_CASE("dual examples") {
        auto f = foe1("Einf x. a(x)", Dialect::foe1inf);
        CHECK(to_string(dual(f)) == "Ainf x. a(x)");
        Rng g(4);
        for (auto d : {Dialect::fo1, Dialect::foe1, Dialect::foe1inf})
            for (int k = 0; k < 50; ++k) {
                auto n = rnd::random_onestep(g, 2, d, 2);
                CHECK(same(dual_node(dual_node(n)), n));
            }
        CHECK(same(dual_node(eq(0, 1)), neq(0, 1)));
        CHECK(same(dual_node(top()), bot()));
        CHECK(same(dual_node(atom(0, 0)), atom(0, 0)));
    }

    TEST_CASE("dual law on small models") {
        Rng g(44);
        auto models = all_models(2, 3);
        CHECK(models.size() == 85);
        for (auto d : {Dialect::fo1, Dialect::foe1, Dialect::foe1inf})
            for (int k = 0; k < 80; ++k) {
                Formula f{d, {"a", "b"}, rnd::random_onestep(g, 2, d, 2)};
                auto fd = dual(f);
                for (auto& m : models) CHECK(eval_finite(f, m) == !eval_finite(fd, complement_model(m, 2)));
            }
    }

    TEST_CASE("positive sentences are monotone") {
        Rng g(45);
        auto models = all_models(2, 3);
        for (int k = 0; k < 60; ++k) {
            Formula f{Dialect::foe1, {"a", "b"}, rnd::random_onestep(g, 2, Dialect::foe1, 2)};
            REQUIRE(is_positive(f.root));
            for (auto& m : models) {
                if (!eval_finite(f, m)) continue;
                // Adding any predicate to any element keeps the sentence true.
                for (std::size_t i = 0; i < m.elems.size(); ++i)
                    for (Type t : {a_bit, b_bit}) {
                        Model up = m;
                        up.elems[i] |= t;
                        CHECK(eval_finite(f, up));
                    }
            }
        }
    }

    TEST_CASE("fragment_check examples") {
        auto free = foe1("A x. c(x)", Dialect::foe1, {"a", "c"});
        CHECK(fragment_check(free, a_bit).cont);
        auto bare = foe1("A x. b(x)", Dialect::foe1, {"b"});
        CHECK_FALSE(fragment_check(bare, 1).cont);
        CHECK(fragment_check(bare, 1).cocont);
        auto w = foe1("W x.(b(x), c(x))", Dialect::foe1inf, {"b", "c"});
        auto r = fragment_check(w, 1);
        CHECK(r.cont);
        CHECK(r.positive);
        CHECK_FALSE(fragment_check(foe1("E x. !a(x)"), 1).positive);
        CHECK(fragment_check(foe1("E x. a(x) & A y. b(y)", Dialect::foe1, {"a", "b"}), a_bit).cont);
    }

    TEST_CASE("to_basic_form examples") {
        auto f = foe1("E x. a(x) & A y. a(y)");
        auto bf = to_basic_form(f);
        REQUIRE(bf.disjuncts.size() == 1);
        CHECK(bf.disjuncts[0].wit == std::vector<Type>{a_bit});
        CHECK(bf.disjuncts[0].pi == std::vector<Type>{a_bit});
        for (auto& m : all_models(1, 3)) CHECK(eval_finite(expand(bf), m) == eval_finite(f, m));

        CHECK(to_basic_form(foe1("false")).disjuncts.empty());

        auto all = foe1("A x. a(x)");
        auto bfa = to_basic_form(all);
        CHECK_FALSE(bfa.disjuncts.empty());
        // Records keep the cover inside the witness types, so the empty domain
        // is its own record.
        bool empty_witness = false;
        for (auto& r : bfa.disjuncts) {
            empty_witness |= r.wit.empty();
            for (Type s : r.pi) CHECK(std::find(r.wit.begin(), r.wit.end(), s) != r.wit.end());
        }
        CHECK(empty_witness);
        for (auto& m : all_models(1, 3)) CHECK(eval_finite(expand(bfa), m) == eval_finite(all, m));
        CHECK_THROWS(to_basic_form(foe1("E x. !a(x)")));
    }

    TEST_CASE("normal forms are equivalent") {
        Rng g(46);
        for (auto d : {Dialect::fo1, Dialect::foe1, Dialect::foe1inf})
            for (int k = 0; k < 40; ++k) {
                Formula f{d, {"a", "b"}, rnd::random_onestep(g, 2, d, 2)};
                auto bf = to_basic_form(f);
                auto e = expand(bf);
                CHECK(equivalent(f, e, rank(f.root) + 1));
                for (auto& m : all_models(2, 3)) CHECK(eval_finite(f, m) == eval_finite(e, m));
                auto back = match_basic_form(e);
                INFO(to_string(e));
                REQUIRE(back.has_value());
                CHECK(back->disjuncts.size() == bf.disjuncts.size());
            }
    }

    TEST_CASE("continuous basic forms") {
        auto ex = foe1("E x. b(x)", Dialect::fo1, {"b"});
        auto cf = to_continuous_basic_form(ex, 1);
        for (auto& r : cf.disjuncts)
            for (Type s : r.pi) CHECK((s & 1) == 0);
        CHECK(equivalent(ex, expand(cf), 2));

        auto inf = foe1("E x. b(x) & Ainf y. c(y)", Dialect::foe1inf, {"b", "c"});
        auto ci = to_continuous_basic_form(inf, 1);
        for (auto& r : ci.disjuncts)
            for (Type s : r.sigma) CHECK((s & 1) == 0);
        CHECK(equivalent(inf, expand(ci), 3));

        auto plain = foe1("E x. (a(x) | A y. b(y))", Dialect::foe1, {"a", "b"});
        auto b0 = to_continuous_basic_form(plain, 0);
        auto b1 = to_basic_form(plain);
        CHECK(b0.disjuncts == b1.disjuncts);

        CHECK_THROWS(to_continuous_basic_form(foe1("A x. b(x)", Dialect::fo1, {"b"}), 1));
        CHECK_THROWS(to_continuous_basic_form(foe1("Ainf x. b(x)", Dialect::foe1inf, {"b"}), 1));
    }

    TEST_CASE("equivalent examples") {
        auto f = foe1("E x. (a(x) & A y. (x=y | b(y)))");
        CHECK(equivalent(f, dual(dual(f)), 3));
        CHECK(equivalent(foe1("E x. a(x)"), foe1("E x. E y. a(x)"), 3));
        auto fin = foe1("E x. a(x)", Dialect::foe1inf);
        auto inf = foe1("Einf x. a(x)", Dialect::foe1inf);
        CHECK_FALSE(equivalent(fin, inf, 2));
        CHECK(eval_weighted(fin, weighted({0, 1})));
        CHECK_FALSE(eval_weighted(inf, weighted({0, 1})));
    }

    TEST_CASE("diamond translation") {
        BasicForm bf{Dialect::foe1, {"a"}, {Nabla{{a_bit}, {a_bit}, {}}}};
        auto dt = diamond_translate(bf);
        CHECK(dt.dialect == Dialect::fo1);
        CHECK(equivalent(dt, parse("E x. a(x) & A x. a(x)", Dialect::fo1, {"a"}), 2));
        BasicForm none{Dialect::foe1inf, {"a"}, {}};
        CHECK(same(diamond_translate(none).root, bot()));

        Rng g(47);
        for (auto d : {Dialect::foe1, Dialect::foe1inf})
            for (int k = 0; k < 40; ++k) {
                Formula f{d, {"a", "b"}, rnd::random_onestep(g, 2, d, 2)};
                auto df = diamond_translate(to_basic_form(f));
                for (auto& m : all_models(2, 3)) {
                    // Each element of the model at multiplicity omega.
                    WeightedModel w;
                    w.cap = 4;
                    for (Type t : m.elems) {
                        bool seen = false;
                        for (auto& e : w.mult) seen |= e.first == t;
                        if (!seen) w.mult.emplace_back(t, omega);
                    }
                    CHECK(eval_finite(df, m) == eval_weighted(f, w));
                }
            }
    }

    TEST_CASE("continuity witnesses on finite models") {
        // In Cont_B every satisfying model keeps a B-minimal satisfying restriction;
        // on finite models check that minimal valuations exist below every model.
        Rng g(48);
        for (int k = 0; k < 30; ++k) {
            auto n = rnd::random_onestep(g, 2, Dialect::foe1, 2);
            for (int dsize = 1; dsize <= 3; ++dsize) {
                auto mins = minimal_valuations(n, dsize);
                for (auto& v : mins) {
                    Model m{v};
                    CHECK(eval_node_finite(n, m));
                    for (std::size_t i = 0; i < v.size(); ++i)
                        for (Type t : {a_bit, b_bit})
                            if (v[i] & t) {
                                Model less = m;
                                less.elems[i] &= ~t;
                                CHECK_FALSE(eval_node_finite(n, less));
                            }
                }
            }
        }
    }

    TEST_CASE("separation for basic forms") {
        auto f = foe1("E x. a(x) & E y. b(y)", Dialect::fo1, {"a", "b"});
        auto bf = to_basic_form(f);
        auto rep = fragment_check(expand(bf), a_bit | b_bit);
        CHECK(rep.separating.has_value());
        CHECK(separating_sufficient(bf, a_bit) == true);
    }

    TEST_CASE("json form") {
        auto bf = to_basic_form(foe1("E x. a(x) & A y. a(y)"));
        auto j = basic_form_to_json_text(bf);
        CHECK(j.find("\"pi\"") != std::string::npos);
        CHECK(type_to_string(a_bit | b_bit, {"a", "b"}) == "{a,b}");
    }
}
