#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "wb/wb_c.h"

namespace {

using json = nlohmann::json;

// Exit codes.
constexpr int exit_pass = 0;
constexpr int exit_property = 1;
constexpr int exit_usage = 2;

struct CliError {
    std::string msg;
};

void check(wb_status st) {
    if (st != WB_OK) {
        static const char* kinds[] = {"ok", "parse error", "invalid input", "limit exceeded", "internal error", "bad argument"};
        throw CliError{std::string(kinds[st]) + ": " + wb_last_error()};
    }
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    const T* get() const { return p; }
};

using Lts = Handle<wb_lts, wb_lts_free>;
using Game = Handle<wb_game, wb_game_free>;
using OneStep = Handle<wb_onestep, wb_onestep_free>;
using Mu = Handle<wb_mu, wb_mu_free>;
using Aut = Handle<wb_aut, wb_aut_free>;
using Mso = Handle<wb_mso, wb_mso_free>;

std::string take(char* s) {
    std::string out(s ? s : "");
    wb_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{"cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Formula arguments are file names when such a file exists, literal text otherwise.
std::string text_arg(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
    return arg;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<const char*> c_strs(const std::vector<std::string>& xs) {
    std::vector<const char*> out;
    for (auto& x : xs) out.push_back(x.c_str());
    return out;
}

wb_dialect dialect_arg(const std::string& d) {
    if (d == "FO1" || d == "fo1") return WB_FO1;
    if (d == "FOE1" || d == "foe1") return WB_FOE1;
    if (d == "FOE1INF" || d == "foe1inf") return WB_FOE1INF;
    throw CliError{"unknown dialect " + d};
}

wb_logic logic_arg(const std::string& l) {
    if (l == "smso") return WB_SMSO;
    if (l == "wmso") return WB_WMSO;
    if (l == "nmso") return WB_NMSO;
    throw CliError{"unknown logic " + l};
}

wb_construct_kind kind_arg(const std::string& k) {
    if (k == "finitary") return WB_FINITARY;
    if (k == "noetherian") return WB_NOETHERIAN;
    throw CliError{"unknown construct kind " + k};
}

void load_lts(Lts& s, const std::string& path) { check(wb_lts_from_json(read_file(path).c_str(), s.out())); }
void load_aut(Aut& a, const std::string& path) { check(wb_aut_from_json(read_file(path).c_str(), a.out())); }
void parse_mu(Mu& f, const std::string& arg) { check(wb_mu_parse(text_arg(arg).c_str(), f.out())); }

struct Globals {
    std::uint64_t seed = 1;
    std::string json_path;
    bool force = false;
    std::vector<std::string> argv;
};

// Prints the report and mirrors it to --json when requested.
void emit(const Globals& g, const std::string& report) {
    std::cout << report << "\n";
    if (!g.json_path.empty()) {
        std::ofstream out(g.json_path);
        if (!out) throw CliError{"cannot write " + g.json_path};
        out << report << "\n";
    }
}

std::string command_echo(const Globals& g) {
    std::string out;
    for (auto& a : g.argv) out += (out.empty() ? "" : " ") + a;
    return out;
}

// Tree check before running compiled automata, which are sound on trees only.
void require_tree(const Globals& g, const Lts& s) {
    int tree = 0;
    check(wb_lts_is_tree(s.get(), &tree));
    if (!tree && !g.force) throw CliError{"input is not a tree; compiled automata are tree-sound only (use --force)"};
}

}  // namespace

int main(int argc, char** argv) {
    Globals g;
    for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
    int code = exit_pass;

    CLI::App app{"Workbench for one-step logics, fixpoint logics, parity automata and monadic second-order logic"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", g.seed, "seed for randomized commands");
    app.add_option("--json", g.json_path, "also write the report to this file");
    app.add_flag("--force", g.force, "run compiled automata on non-tree inputs");
    app.set_version_flag("--version", std::string(wb_version()));

    // ------------------------------------------------------------ lts
    auto* lts = app.add_subcommand("lts", "transition systems");
    lts->require_subcommand(1);
    std::string file_a, file_b;
    int depth = 2;
    auto* lts_validate = lts->add_subcommand("validate", "check an LTS file");
    lts_validate->add_option("file", file_a)->required();
    lts_validate->callback([&] {
        int ok = 0;
        char* rep = nullptr;
        check(wb_lts_validate_json(read_file(file_a).c_str(), &rep, &ok));
        emit(g, take(rep));
        if (!ok) code = exit_property;
    });
    auto* lts_bisim = lts->add_subcommand("bisim", "bisimilarity of two pointed LTSs");
    lts_bisim->add_option("a", file_a)->required();
    lts_bisim->add_option("b", file_b)->required();
    lts_bisim->callback([&] {
        Lts a, b;
        load_lts(a, file_a);
        load_lts(b, file_b);
        int out = 0;
        check(wb_lts_bisimilar(a.get(), b.get(), &out));
        std::cout << (out ? "true" : "false") << "\n";
    });
    auto* lts_unravel = lts->add_subcommand("unravel", "tree of paths up to a depth");
    lts_unravel->add_option("file", file_a)->required();
    lts_unravel->add_option("--depth", depth);
    lts_unravel->callback([&] {
        Lts a, t;
        load_lts(a, file_a);
        check(wb_lts_unravel(a.get(), depth, t.out()));
        char* out = nullptr;
        check(wb_lts_to_json(t.get(), &out));
        emit(g, take(out));
    });

    // ------------------------------------------------------------ onestep
    auto* onestep = app.add_subcommand("onestep", "one-step formulas");
    onestep->require_subcommand(1);
    std::string formula, dialect = "FOE1INF", model, bset;
    int bound = -1;
    auto onestep_common = [&](CLI::App* c) {
        c->add_option("formula", formula, "formula text or file")->required();
        c->add_option("--dialect", dialect, "FO1, FOE1 or FOE1INF");
    };
    auto parse_onestep = [&](OneStep& f) {
        check(wb_onestep_parse(text_arg(formula).c_str(), dialect_arg(dialect), f.out()));
    };
    auto* os_eval = onestep->add_subcommand("eval", "evaluate on a finite or weighted model");
    onestep_common(os_eval);
    os_eval->add_option("--model", model, "model JSON text or file")->required();
    os_eval->callback([&] {
        OneStep f;
        parse_onestep(f);
        int out = 0;
        check(wb_onestep_eval(f.get(), text_arg(model).c_str(), &out));
        std::cout << (out ? "true" : "false") << "\n";
    });
    auto* os_dual = onestep->add_subcommand("dual", "dual formula");
    onestep_common(os_dual);
    os_dual->callback([&] {
        OneStep f, d;
        parse_onestep(f);
        check(wb_onestep_dual(f.get(), d.out()));
        char* s = nullptr;
        check(wb_onestep_to_string(d.get(), &s));
        std::cout << take(s) << "\n";
    });
    auto* os_nf = onestep->add_subcommand("nf", "basic normal form");
    onestep_common(os_nf);
    os_nf->add_option("--continuous", bset, "comma-separated predicates for the continuous form");
    os_nf->add_option("--check", bound, "verify equivalence up to this bound");
    os_nf->callback([&] {
        OneStep f, e;
        parse_onestep(f);
        char* bf = nullptr;
        if (bset.empty()) {
            check(wb_onestep_basic_form(f.get(), &bf, e.out()));
        } else {
            auto bs = split(bset);
            auto cs = c_strs(bs);
            check(wb_onestep_continuous_form(f.get(), cs.data(), cs.size(), &bf, e.out()));
        }
        char* s = nullptr;
        check(wb_onestep_to_string(e.get(), &s));
        json rep{{"basic_form", json::parse(take(bf))}, {"formula", take(s)}};
        if (bound >= 0) {
            int eq = 0;
            check(wb_onestep_equivalent(f.get(), e.get(), bound, &eq));
            rep["equivalent"] = static_cast<bool>(eq);
            if (!eq) code = exit_property;
        }
        emit(g, rep.dump(2));
    });
    auto* os_diamond = onestep->add_subcommand("diamond", "diamond translation of the basic form");
    onestep_common(os_diamond);
    os_diamond->callback([&] {
        OneStep f, d;
        parse_onestep(f);
        check(wb_onestep_diamond(f.get(), d.out()));
        char* s = nullptr;
        check(wb_onestep_to_string(d.get(), &s));
        std::cout << take(s) << "\n";
    });
    auto* os_frag = onestep->add_subcommand("fragments", "positivity and continuity report");
    onestep_common(os_frag);
    os_frag->add_option("--B", bset, "comma-separated predicates");
    os_frag->callback([&] {
        OneStep f;
        parse_onestep(f);
        auto bs = split(bset);
        auto cs = c_strs(bs);
        char* rep = nullptr;
        check(wb_onestep_fragments(f.get(), cs.data(), cs.size(), &rep));
        emit(g, take(rep));
    });

    // ------------------------------------------------------------ game
    auto* game = app.add_subcommand("game", "parity games");
    game->require_subcommand(1);
    auto* game_solve = game->add_subcommand("solve", "solve a parity game");
    game_solve->add_option("file", file_a)->required();
    game_solve->callback([&] {
        Game gm;
        check(wb_game_from_json(read_file(file_a).c_str(), gm.out()));
        char* sol = nullptr;
        check(wb_game_solve(gm.get(), &sol));
        emit(g, take(sol));
    });

    // ------------------------------------------------------------ mu
    auto* mu = app.add_subcommand("mu", "fixpoint formulas");
    mu->require_subcommand(1);
    std::string lts_file;
    auto* mu_eval = mu->add_subcommand("eval", "truth at the initial state");
    mu_eval->add_option("formula", formula)->required();
    mu_eval->add_option("--lts", lts_file)->required();
    mu_eval->callback([&] {
        Mu f;
        Lts s;
        parse_mu(f, formula);
        load_lts(s, lts_file);
        int out = 0;
        check(wb_mu_holds(f.get(), s.get(), &out));
        std::cout << (out ? "true" : "false") << "\n";
    });
    auto* mu_game = mu->add_subcommand("game", "evaluation game and its solution");
    mu_game->add_option("formula", formula)->required();
    mu_game->add_option("--lts", lts_file)->required();
    mu_game->callback([&] {
        Mu f;
        Lts s;
        parse_mu(f, formula);
        load_lts(s, lts_file);
        char* rep = nullptr;
        check(wb_mu_game(f.get(), s.get(), &rep));
        std::string r = take(rep);
        auto j = json::parse(r);
        if (j["holds"] != j["semantics"] || !j["certified"].get<bool>()) code = exit_property;
        emit(g, r);
    });
    auto* mu_classify = mu->add_subcommand("classify", "fragment membership");
    mu_classify->add_option("formula", formula)->required();
    mu_classify->callback([&] {
        Mu f;
        parse_mu(f, formula);
        char* rep = nullptr;
        check(wb_mu_classify(f.get(), &rep));
        emit(g, take(rep));
    });
    auto* mu_guard = mu->add_subcommand("guard", "equivalent guarded formula");
    mu_guard->add_option("formula", formula)->required();
    mu_guard->callback([&] {
        Mu f, h;
        parse_mu(f, formula);
        check(wb_mu_guard(f.get(), h.out()));
        char* s = nullptr;
        check(wb_mu_to_string(h.get(), &s));
        std::cout << take(s) << "\n";
    });

    // ------------------------------------------------------------ aut
    auto* aut = app.add_subcommand("aut", "parity automata");
    aut->require_subcommand(1);
    std::string in_file, kind = "finitary", letter, props, construct_first;
    int trees = 30;
    bool check_equiv = false;
    auto print_aut = [&](const Aut& a) {
        char* s = nullptr;
        check(wb_aut_to_json(a.get(), &s));
        emit(g, take(s));
    };
    auto* aut_accept = aut->add_subcommand("accept", "acceptance at the initial state");
    aut_accept->add_option("--in", in_file)->required();
    aut_accept->add_option("--lts", lts_file)->required();
    aut_accept->callback([&] {
        Aut a;
        Lts s;
        load_aut(a, in_file);
        load_lts(s, lts_file);
        int out = 0;
        check(wb_aut_accepts(a.get(), s.get(), &out));
        std::cout << (out ? "true" : "false") << "\n";
    });
    auto* aut_complement = aut->add_subcommand("complement", "complement automaton");
    aut_complement->add_option("--in", in_file)->required();
    aut_complement->callback([&] {
        Aut a, c;
        load_aut(a, in_file);
        check(wb_aut_complement(a.get(), c.out()));
        print_aut(c);
    });
    auto* aut_classify = aut->add_subcommand("classify", "weak and continuous-weak classification");
    aut_classify->add_option("--in", in_file)->required();
    aut_classify->callback([&] {
        Aut a;
        load_aut(a, in_file);
        char* rep = nullptr;
        check(wb_aut_classify(a.get(), &rep));
        emit(g, take(rep));
    });
    auto* aut_toformula = aut->add_subcommand("toformula", "equivalent fixpoint formula");
    aut_toformula->add_option("--in", in_file)->required();
    aut_toformula->callback([&] {
        Aut a;
        Mu f;
        load_aut(a, in_file);
        check(wb_aut_to_formula(a.get(), f.out()));
        char* s = nullptr;
        check(wb_mu_to_string(f.get(), &s));
        std::cout << take(s) << "\n";
    });
    auto* aut_fromformula = aut->add_subcommand("fromformula", "automaton of a fixpoint formula");
    aut_fromformula->add_option("formula", formula)->required();
    aut_fromformula->add_option("--props", props, "comma-separated alphabet");
    aut_fromformula->callback([&] {
        Mu f;
        Aut a;
        parse_mu(f, formula);
        auto ps = split(props);
        auto cs = c_strs(ps);
        check(wb_aut_from_formula(f.get(), props.empty() ? nullptr : cs.data(), cs.size(), a.out()));
        print_aut(a);
    });
    auto* aut_simulate = aut->add_subcommand("simulate", "finitary or noetherian construct");
    aut_simulate->add_option("--in", in_file)->required();
    aut_simulate->add_option("--kind", kind, "finitary or noetherian");
    aut_simulate->add_flag("--check-equiv", check_equiv, "compare with the input on random trees");
    aut_simulate->add_option("--trees", trees);
    aut_simulate->callback([&] {
        Aut a;
        load_aut(a, in_file);
        if (!check_equiv) {
            Aut c;
            check(wb_aut_construct(a.get(), kind_arg(kind), c.out()));
            print_aut(c);
            return;
        }
        char* rep = nullptr;
        int ok = 0;
        check(wb_aut_simulate(a.get(), kind_arg(kind), trees, g.seed, &rep, &ok));
        emit(g, take(rep));
        if (!ok) code = exit_property;
    });
    auto* aut_project = aut->add_subcommand("project", "projection of a two-sorted construct");
    aut_project->add_option("--in", in_file)->required();
    aut_project->add_option("--letter", letter)->required();
    aut_project->add_option("--construct", construct_first, "build this construct first: finitary or noetherian");
    aut_project->callback([&] {
        Aut a, c, p;
        load_aut(a, in_file);
        const wb_aut* src = a.get();
        if (!construct_first.empty()) {
            check(wb_aut_construct(a.get(), kind_arg(construct_first), c.out()));
            src = c.get();
        }
        check(wb_aut_project(src, letter.c_str(), p.out()));
        print_aut(p);
    });
    auto* aut_diamond = aut->add_subcommand("diamond", "automaton over the diamond language");
    aut_diamond->add_option("--in", in_file)->required();
    aut_diamond->callback([&] {
        Aut a, d;
        load_aut(a, in_file);
        check(wb_aut_diamond(a.get(), d.out()));
        print_aut(d);
    });

    // ------------------------------------------------------------ mso
    auto* mso = app.add_subcommand("mso", "monadic second-order logic");
    mso->require_subcommand(1);
    std::string logic = "wmso";
    auto* mso_eval = mso->add_subcommand("eval", "brute-force evaluation");
    mso_eval->add_option("formula", formula)->required();
    mso_eval->add_option("--lts", lts_file)->required();
    mso_eval->add_option("--logic", logic, "smso, wmso or nmso");
    mso_eval->callback([&] {
        Mso f;
        Lts s;
        check(wb_mso_parse(text_arg(formula).c_str(), logic_arg(logic), f.out()));
        load_lts(s, lts_file);
        int out = 0;
        check(wb_mso_eval(f.get(), s.get(), &out));
        std::cout << (out ? "true" : "false") << "\n";
    });
    auto* mso_compile = mso->add_subcommand("compile", "automaton of a one-sorted sentence");
    mso_compile->add_option("formula", formula)->required();
    mso_compile->add_option("--logic", logic, "wmso or nmso");
    mso_compile->add_option("--lts", lts_file, "also run the automaton and the evaluator on this tree");
    mso_compile->callback([&] {
        Mso f;
        Aut a;
        check(wb_mso_parse(text_arg(formula).c_str(), logic_arg(logic), f.out()));
        check(wb_mso_compile(f.get(), logic_arg(logic), a.out()));
        if (lts_file.empty()) {
            print_aut(a);
            return;
        }
        Lts s;
        load_lts(s, lts_file);
        require_tree(g, s);
        int acc = 0, ev = 0;
        check(wb_aut_accepts(a.get(), s.get(), &acc));
        check(wb_mso_eval(f.get(), s.get(), &ev));
        json rep{{"states", wb_aut_states(a.get())}, {"accepts", static_cast<bool>(acc)}, {"eval", static_cast<bool>(ev)},
                 {"agree", acc == ev}};
        if (acc != ev) code = exit_property;
        emit(g, rep.dump(2));
    });
    auto* mso_frommu = mso->add_subcommand("frommu", "second-order translation of a fixpoint formula");
    mso_frommu->add_option("formula", formula)->required();
    mso_frommu->add_option("--logic", logic, "wmso or nmso");
    mso_frommu->add_option("--lts", lts_file, "also compare both sides at the initial state");
    mso_frommu->callback([&] {
        Mu f;
        Mso t;
        parse_mu(f, formula);
        check(wb_mso_from_mu(f.get(), logic_arg(logic), t.out()));
        char* s = nullptr;
        check(wb_mso_to_string(t.get(), &s));
        std::string text = take(s);
        if (lts_file.empty()) {
            std::cout << text << "\n";
            return;
        }
        Lts m;
        load_lts(m, lts_file);
        int a = 0, b = 0;
        check(wb_mu_holds(f.get(), m.get(), &a));
        check(wb_mso_eval(t.get(), m.get(), &b));
        json rep{{"translation", text}, {"formula", static_cast<bool>(a)}, {"translation_holds", static_cast<bool>(b)},
                 {"agree", a == b}};
        if (a != b) code = exit_property;
        emit(g, rep.dump(2));
    });

    // ------------------------------------------------------------ fix
    auto* fixc = app.add_subcommand("fix", "least fixpoints of formula functionals");
    fixc->require_subcommand(1);
    std::string var = "x";
    int state = 0;
    auto fix_common = [&](CLI::App* c, bool with_state) {
        c->add_option("formula", formula, "body of the functional")->required();
        c->add_option("--var", var, "the argument letter");
        c->add_option("--lts", lts_file)->required();
        if (with_state) c->add_option("--state", state);
    };
    auto* fix_trace = fixc->add_subcommand("trace", "approximant stages");
    fix_common(fix_trace, false);
    fix_trace->callback([&] {
        Mu f;
        Lts s;
        parse_mu(f, formula);
        load_lts(s, lts_file);
        char* rep = nullptr;
        check(wb_fix_trace(f.get(), var.c_str(), s.get(), &rep));
        emit(g, take(rep));
    });
    auto* fix_witness = fixc->add_subcommand("witness", "finite and noetherian witnesses");
    fix_common(fix_witness, true);
    fix_witness->callback([&] {
        Mu f;
        Lts s;
        parse_mu(f, formula);
        load_lts(s, lts_file);
        char* rep = nullptr;
        check(wb_fix_witness(f.get(), var.c_str(), s.get(), state, &rep));
        std::string r = take(rep);
        auto j = json::parse(r);
        if (j["member"].get<bool>() != !j["witness"].is_null()) code = exit_property;
        if (!j["witness_supports"].is_null() && !j["witness_supports"].get<bool>()) code = exit_property;
        emit(g, r);
    });
    auto* fix_unfold = fixc->add_subcommand("unfold", "unfolding game, strategy and strategy tree");
    fix_common(fix_unfold, true);
    fix_unfold->callback([&] {
        Mu f;
        Lts s;
        parse_mu(f, formula);
        load_lts(s, lts_file);
        char* rep = nullptr;
        check(wb_fix_unfold(f.get(), var.c_str(), s.get(), state, &rep));
        std::string r = take(rep);
        auto j = json::parse(r);
        bool ok = j["game_matches_lfp"].get<bool>() && j["descending"].get<bool>() && j["winning"].get<bool>();
        if (j.contains("root_in_restricted_lfp")) ok = ok && j["root_in_restricted_lfp"].get<bool>();
        if (!ok) code = exit_property;
        emit(g, r);
    });

    // ------------------------------------------------------------ fuzz and replay
    auto* fuzz = app.add_subcommand("fuzz", "seeded cross-oracle suites");
    std::string suite;
    int n = 100;
    fuzz->add_option("suite", suite)->required();
    fuzz->add_option("--n", n, "instance count");
    fuzz->callback([&] {
        char* rep = nullptr;
        int ok = 0;
        check(wb_fuzz_run(suite.c_str(), n, g.seed, &rep, &ok));
        auto j = json::parse(take(rep));
        j["command"] = command_echo(g);
        emit(g, j.dump(2));
        std::cerr << suite << ": " << j["passed"] << "/" << n << " passed\n";
        if (!ok) code = exit_property;
    });
    auto* replay = app.add_subcommand("replay", "re-run recorded failures");
    replay->add_option("file", file_a)->required();
    replay->callback([&] {
        char* rep = nullptr;
        int ok = 0;
        check(wb_replay(read_file(file_a).c_str(), &rep, &ok));
        emit(g, take(rep));
        if (!ok) code = exit_property;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? exit_pass : exit_usage;
    } catch (const CliError& e) {
        std::cerr << "wb: " << e.msg << "\n";
        return exit_usage;
    } catch (const json::exception& e) {
        std::cerr << "wb: bad JSON: " << e.what() << "\n";
        return exit_usage;
    }
    return code;
}
