#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "wb/wb_c.h"

namespace {

// Takes ownership of a library string.
std::string take(char* s) {
    std::string out = s ? s : "";
    wb_string_free(s);
    return out;
}

const char* loop_json = R"j({"props":["p"],"states":1,"edges":[[0,0]],"colors":{"0":["p"]},"init":0})j";
const char* chain_json = R"j({"props":["p"],"states":2,"edges":[[0,1]],"colors":{"1":["p"]},"init":0})j";

}  // namespace

TEST_CASE("version and errors") {
    CHECK(std::string(wb_version()).size() > 0);
    wb_lts* s = nullptr;
    CHECK(wb_lts_from_json("{", &s) == WB_ERR_PARSE);
    CHECK(s == nullptr);
    CHECK(std::string(wb_last_error()).size() > 0);
    CHECK(wb_lts_from_json(R"j({"props":["p"],"states":1,"edges":[[0,3]]})j", &s) == WB_ERR_INVALID);
    CHECK(wb_lts_from_json(loop_json, nullptr) == WB_ERR_ARG);
    REQUIRE(wb_lts_from_json(loop_json, &s) == WB_OK);
    CHECK(std::string(wb_last_error()).empty());
    wb_lts_free(s);
}

TEST_CASE("transition systems") {
    wb_lts *a = nullptr, *b = nullptr;
    REQUIRE(wb_lts_from_json(loop_json, &a) == WB_OK);
    REQUIRE(wb_lts_from_json(R"j({"props":["p"],"states":2,"edges":[[0,1],[1,0]],"colors":{"0":["p"],"1":["p"]}})j",
                             &b) == WB_OK);
    int out = 0;
    CHECK(wb_lts_bisimilar(a, b, &out) == WB_OK);
    CHECK(out == 1);
    CHECK(wb_lts_is_tree(a, &out) == WB_OK);
    CHECK(out == 0);
    wb_lts* u = nullptr;
    REQUIRE(wb_lts_unravel(a, 2, &u) == WB_OK);
    CHECK(wb_lts_states(u) == 3);
    int xs[] = {0, 1};
    CHECK(wb_lts_noetherian(b, xs, 2, &out) == WB_OK);
    CHECK(out == 1);
    char* report = nullptr;
    CHECK(wb_lts_validate_json(chain_json, &report, &out) == WB_OK);
    CHECK(out == 1);
    CHECK(take(report).find("tree") != std::string::npos);
    char* text = nullptr;
    REQUIRE(wb_lts_to_json(a, &text) == WB_OK);
    CHECK(take(text).find("\"states\"") != std::string::npos);
    wb_lts_free(u);
    wb_lts_free(a);
    wb_lts_free(b);
}

TEST_CASE("games") {
    wb_game* g = nullptr;
    REQUIRE(wb_game_from_json(R"j({"owner":["E"],"priority":[1],"moves":[[0]]})j", &g) == WB_OK);
    char* sol = nullptr;
    REQUIRE(wb_game_solve(g, &sol) == WB_OK);
    CHECK(take(sol).find("\"win_exists\"") != std::string::npos);
    wb_game_free(g);
}

TEST_CASE("one-step formulas") {
    wb_onestep* f = nullptr;
    REQUIRE(wb_onestep_parse("E x. a(x) & A y. a(y)", WB_FOE1, &f) == WB_OK);
    char* bf = nullptr;
    wb_onestep* e = nullptr;
    REQUIRE(wb_onestep_basic_form(f, &bf, &e) == WB_OK);
    CHECK(take(bf).find("\"pi\"") != std::string::npos);
    int same = 0;
    CHECK(wb_onestep_equivalent(f, e, 3, &same) == WB_OK);
    CHECK(same == 1);
    int v = 0;
    CHECK(wb_onestep_eval(f, R"j({"elements":[["a"],["a"]]})j", &v) == WB_OK);
    CHECK(v == 1);
    CHECK(wb_onestep_eval(f, R"j({"elements":[["a"],[]]})j", &v) == WB_OK);
    CHECK(v == 0);
    wb_onestep* d = nullptr;
    REQUIRE(wb_onestep_dual(f, &d) == WB_OK);
    char* ds = nullptr;
    REQUIRE(wb_onestep_to_string(d, &ds) == WB_OK);
    CHECK(take(ds) == "A x. a(x) | (E y. a(y))");
    wb_onestep* bad = nullptr;
    CHECK(wb_onestep_parse("E x. a(", WB_FOE1, &bad) == WB_ERR_PARSE);
    wb_onestep_free(d);
    wb_onestep_free(e);
    wb_onestep_free(f);
}

TEST_CASE("mu formulas and automata") {
    wb_mu* f = nullptr;
    REQUIRE(wb_mu_parse("mu x. dia x", &f) == WB_OK);
    wb_lts* s = nullptr;
    REQUIRE(wb_lts_from_json(loop_json, &s) == WB_OK);
    int out = 1;
    CHECK(wb_mu_holds(f, s, &out) == WB_OK);
    CHECK(out == 0);
    wb_aut* a = nullptr;
    REQUIRE(wb_aut_from_formula(f, nullptr, 0, &a) == WB_OK);
    CHECK(wb_aut_accepts(a, s, &out) == WB_OK);
    CHECK(out == 0);
    wb_aut* c = nullptr;
    REQUIRE(wb_aut_complement(a, &c) == WB_OK);
    CHECK(wb_aut_accepts(c, s, &out) == WB_OK);
    CHECK(out == 1);
    char* rep = nullptr;
    REQUIRE(wb_aut_classify(a, &rep) == WB_OK);
    CHECK(take(rep).find("\"continuous_weak\": true") != std::string::npos);
    wb_mu* back = nullptr;
    REQUIRE(wb_aut_to_formula(a, &back) == WB_OK);
    CHECK(wb_mu_holds(back, s, &out) == WB_OK);
    CHECK(out == 0);
    wb_mu_free(back);
    wb_aut_free(c);
    wb_aut_free(a);
    wb_lts_free(s);
    wb_mu_free(f);
}

TEST_CASE("monadic second-order formulas") {
    wb_mso* f = nullptr;
    REQUIRE(wb_mso_parse("ex r. (down r & r sub p)", WB_WMSO, &f) == WB_OK);
    wb_aut* a = nullptr;
    REQUIRE(wb_mso_compile(f, WB_WMSO, &a) == WB_OK);
    wb_lts* t = nullptr;
    REQUIRE(wb_lts_from_json(R"j({"props":["p"],"states":2,"edges":[[0,1]],"colors":{"0":["p"]}})j", &t) == WB_OK);
    int x = 0, y = 0;
    CHECK(wb_mso_eval(f, t, &x) == WB_OK);
    CHECK(wb_aut_accepts(a, t, &y) == WB_OK);
    CHECK(x == 1);
    CHECK(x == y);
    wb_lts_free(t);
    wb_aut_free(a);
    wb_mso_free(f);
}

TEST_CASE("fuzz and replay") {
    char* list = nullptr;
    REQUIRE(wb_fuzz_suites(&list) == WB_OK);
    CHECK(take(list).find("keyfix") != std::string::npos);
    char* rep = nullptr;
    int ok = 0;
    REQUIRE(wb_fuzz_run("dual", 5, 1, &rep, &ok) == WB_OK);
    CHECK(ok == 1);
    std::string r = take(rep);
    char* again = nullptr;
    REQUIRE(wb_fuzz_run("dual", 5, 1, &again, &ok) == WB_OK);
    CHECK(take(again) == r);
    char* rr = nullptr;
    CHECK(wb_replay(r.c_str(), &rr, &ok) == WB_OK);
    CHECK(ok == 1);
    wb_string_free(rr);
    CHECK(wb_fuzz_run("nosuch", 1, 1, &rep, &ok) != WB_OK);
}
