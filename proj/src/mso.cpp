#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

#include "wb/mso.hpp"

namespace wb::mso {

namespace os = wb::onestep;

const std::string designated = "v";

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::standard: return "smso";
        case Mode::finite: return "wmso";
        case Mode::noetherian: return "nmso";
    }
    return "?";
}

Mode mode_from_name(const std::string& s) {
    if (s == "smso" || s == "standard") return Mode::standard;
    if (s == "wmso" || s == "finite") return Mode::finite;
    if (s == "nmso" || s == "noetherian") return Mode::noetherian;
    fail("unknown logic " + s + " (expected smso, wmso or nmso)");
}

// ---------------------------------------------------------------- builders

namespace {

NodeP make(Kind k, std::string a = {}, std::string b = {}, Mode m = Mode::standard, std::vector<NodeP> kids = {}) {
    return std::make_shared<const Node>(Node{k, std::move(a), std::move(b), m, std::move(kids)});
}

}  // namespace

NodeP down(const std::string& p) { return make(Kind::down, p); }
NodeP sub(const std::string& p, const std::string& q) { return make(Kind::sub, p, q); }
NodeP rel_set(const std::string& p, const std::string& q) { return make(Kind::rel_set, p, q); }
NodeP pred(const std::string& p, const std::string& x) { return make(Kind::pred, p, x); }
NodeP rel(const std::string& x, const std::string& y) { return make(Kind::rel, x, y); }
NodeP eq(const std::string& x, const std::string& y) { return make(Kind::eq, x, y); }
NodeP top() { return make(Kind::top); }
NodeP bot() { return make(Kind::bot); }
NodeP neg(NodeP f) { return make(Kind::neg, {}, {}, Mode::standard, {std::move(f)}); }
NodeP disj(NodeP a, NodeP b) { return make(Kind::disj, {}, {}, Mode::standard, {std::move(a), std::move(b)}); }
NodeP conj(NodeP a, NodeP b) { return make(Kind::conj, {}, {}, Mode::standard, {std::move(a), std::move(b)}); }
NodeP implies(NodeP a, NodeP b) { return disj(neg(std::move(a)), std::move(b)); }
NodeP exists_set(const std::string& p, Mode m, NodeP body) { return make(Kind::exists_set, p, {}, m, {std::move(body)}); }
NodeP forall_set(const std::string& p, Mode m, NodeP body) { return make(Kind::forall_set, p, {}, m, {std::move(body)}); }
NodeP exists_ind(const std::string& x, NodeP body) { return make(Kind::exists_ind, x, {}, Mode::standard, {std::move(body)}); }
NodeP forall_ind(const std::string& x, NodeP body) { return make(Kind::forall_ind, x, {}, Mode::standard, {std::move(body)}); }

bool is_one_sorted(const NodeP& n) {
    switch (n->kind) {
        case Kind::pred:
        case Kind::rel:
        case Kind::eq:
        case Kind::exists_ind:
        case Kind::forall_ind: return false;
        default: break;
    }
    for (auto& k : n->kids)
        if (!is_one_sorted(k)) return false;
    return true;
}

// ---------------------------------------------------------------- free variables

namespace {

void collect_free(const NodeP& n, bool letters, std::set<std::string>& bound, std::vector<std::string>& out) {
    auto add = [&](const std::string& x) {
        if (!bound.count(x) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    };
    switch (n->kind) {
        case Kind::down:
            if (letters) add(n->a);
            return;
        case Kind::sub:
        case Kind::rel_set:
            if (letters) {
                add(n->a);
                add(n->b);
            }
            return;
        case Kind::pred:
            add(letters ? n->a : n->b);
            return;
        case Kind::rel:
        case Kind::eq:
            if (!letters) {
                add(n->a);
                add(n->b);
            }
            return;
        case Kind::exists_set:
        case Kind::forall_set:
        case Kind::exists_ind:
        case Kind::forall_ind: {
            bool binds = letters == (n->kind == Kind::exists_set || n->kind == Kind::forall_set);
            bool fresh = binds && bound.insert(n->a).second;
            collect_free(n->kids[0], letters, bound, out);
            if (fresh) bound.erase(n->a);
            return;
        }
        default:
            for (auto& k : n->kids) collect_free(k, letters, bound, out);
    }
}

}  // namespace

std::vector<std::string> free_letters(const NodeP& n) {
    std::set<std::string> bound;
    std::vector<std::string> out;
    collect_free(n, true, bound, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> free_individuals(const NodeP& n) {
    std::set<std::string> bound;
    std::vector<std::string> out;
    collect_free(n, false, bound, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- parser

namespace {

struct Lexer {
    std::string text;
    std::size_t pos = 0;
    std::string tok;

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string next() {
        skip();
        if (pos >= text.size()) return tok = "";
        char c = text[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
            return tok = text.substr(b, pos - b);
        }
        if (text.compare(pos, 2, "->") == 0 || text.compare(pos, 2, "!=") == 0) {
            pos += 2;
            return tok = text.substr(pos - 2, 2);
        }
        ++pos;
        return tok = std::string(1, c);
    }
};

bool is_ident(const std::string& t) {
    return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_');
}

const std::set<std::string> keywords{"down", "sub", "Rel", "R", "ex", "all", "true", "false"};

struct Parser {
    Lexer lx;
    Mode mode;

    [[noreturn]] void error(const std::string& what) {
        fail_parse("mso parse error at offset " + std::to_string(lx.pos) + ": " + what +
                   (lx.tok.empty() ? " (end of input)" : " near '" + lx.tok + "'"));
    }

    void expect(const std::string& t) {
        if (lx.tok != t) error("expected '" + t + "'");
        lx.next();
    }

    std::string name() {
        if (!is_ident(lx.tok) || keywords.count(lx.tok)) error("expected a name");
        std::string n = lx.tok;
        lx.next();
        return n;
    }

    NodeP implication() {
        NodeP a = disjunction();
        if (lx.tok == "->") {
            lx.next();
            return implies(a, implication());
        }
        return a;
    }

    NodeP disjunction() {
        NodeP a = conjunction();
        while (lx.tok == "|") {
            lx.next();
            a = disj(a, conjunction());
        }
        return a;
    }

    NodeP conjunction() {
        NodeP a = unary();
        while (lx.tok == "&") {
            lx.next();
            a = conj(a, unary());
        }
        return a;
    }

    NodeP unary() {
        if (lx.tok == "~") {
            lx.next();
            return neg(unary());
        }
        if (lx.tok == "ex" || lx.tok == "all") {
            bool ex = lx.tok == "ex";
            lx.next();
            std::string v = name();
            expect(".");
            NodeP body = implication();
            auto inds = free_individuals(body);
            auto lets = free_letters(body);
            bool individual = std::find(inds.begin(), inds.end(), v) != inds.end();
            bool letter = std::find(lets.begin(), lets.end(), v) != lets.end();
            if (individual && letter) fail_parse("name " + v + " is used both as a set and as an individual");
            if (individual) return ex ? exists_ind(v, body) : forall_ind(v, body);
            return ex ? exists_set(v, mode, body) : forall_set(v, mode, body);
        }
        return atom();
    }

    NodeP atom() {
        if (lx.tok == "(") {
            lx.next();
            NodeP f = implication();
            expect(")");
            return f;
        }
        if (lx.tok == "true") {
            lx.next();
            return top();
        }
        if (lx.tok == "false") {
            lx.next();
            return bot();
        }
        if (lx.tok == "down") {
            lx.next();
            return down(name());
        }
        if (lx.tok == "Rel" || lx.tok == "R") {
            bool sets = lx.tok == "Rel";
            lx.next();
            expect("(");
            std::string a = name();
            expect(",");
            std::string b = name();
            expect(")");
            return sets ? rel_set(a, b) : rel(a, b);
        }
        std::string a = name();
        if (lx.tok == "sub") {
            lx.next();
            return sub(a, name());
        }
        if (lx.tok == "(") {
            lx.next();
            std::string x = name();
            expect(")");
            return pred(a, x);
        }
        if (lx.tok == "=") {
            lx.next();
            return eq(a, name());
        }
        if (lx.tok == "!=") {
            lx.next();
            return neg(eq(a, name()));
        }
        error("expected an atom");
    }
};

}  // namespace

NodeP parse(const std::string& text, Mode m) {
    Lexer lx;
    lx.text = text;
    Parser p{lx, m};
    p.lx.next();
    NodeP f = p.implication();
    if (!p.lx.tok.empty()) p.error("trailing input");
    return f;
}

std::string to_string(const NodeP& n) {
    auto q = [&](const char* kw) { return std::string(kw) + " " + n->a + ". " + to_string(n->kids[0]); };
    switch (n->kind) {
        case Kind::down: return "down " + n->a;
        case Kind::sub: return n->a + " sub " + n->b;
        case Kind::rel_set: return "Rel(" + n->a + "," + n->b + ")";
        case Kind::pred: return n->a + "(" + n->b + ")";
        case Kind::rel: return "R(" + n->a + "," + n->b + ")";
        case Kind::eq: return n->a + " = " + n->b;
        case Kind::top: return "true";
        case Kind::bot: return "false";
        case Kind::neg:
            if (n->kids[0]->kind == Kind::eq) return n->kids[0]->a + " != " + n->kids[0]->b;
            return "~" + (n->kids[0]->kind == Kind::disj || n->kids[0]->kind == Kind::conj ||
                                  n->kids[0]->kind == Kind::exists_set || n->kids[0]->kind == Kind::forall_set ||
                                  n->kids[0]->kind == Kind::exists_ind || n->kids[0]->kind == Kind::forall_ind ||
                                  n->kids[0]->kind == Kind::sub || n->kids[0]->kind == Kind::eq
                              ? "(" + to_string(n->kids[0]) + ")"
                              : to_string(n->kids[0]));
        case Kind::disj: return "(" + to_string(n->kids[0]) + " | " + to_string(n->kids[1]) + ")";
        case Kind::conj: return "(" + to_string(n->kids[0]) + " & " + to_string(n->kids[1]) + ")";
        case Kind::exists_set:
        case Kind::exists_ind: return "(" + q("ex") + ")";
        case Kind::forall_set:
        case Kind::forall_ind: return "(" + q("all") + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- evaluation

namespace {

constexpr int max_eval_states = 16;

// Variables resolved to slots; sets are bitmasks over states.
struct Slotted {
    Kind kind;
    int a = -1, b = -1;
    Mode mode = Mode::standard;
    std::vector<Slotted> kids;
    std::vector<int> free_sets, free_inds;  // memo key, set quantifiers only
    int memo = -1;
};

struct Evaluator {
    const lts::Lts& s;
    std::vector<std::uint32_t> succ_mask, reach_mask;
    std::vector<std::uint32_t> sets;
    std::vector<int> inds;
    std::vector<std::unordered_map<std::string, bool>> memo;
    std::vector<std::string> set_names, ind_names;
    std::map<std::string, int> globals;  // free letters read from the colouring

    explicit Evaluator(const lts::Lts& st) : s(st) {
        if (s.n > max_eval_states)
            fail_limit("brute-force evaluation supports at most " + std::to_string(max_eval_states) + " states");
        for (int u = 0; u < s.n; ++u) {
            std::uint32_t m = 0, r = 0;
            for (int t : s.succ[u]) m |= 1u << t;
            auto reach = lts::reachable_from(s, u);
            for (int t = 0; t < s.n; ++t)
                if (reach[t]) r |= 1u << t;
            succ_mask.push_back(m);
            reach_mask.push_back(r);
        }
    }

    bool noetherian(std::uint32_t x) const {
        if (x == 0) return true;
        for (auto r : reach_mask)
            if ((x & ~r) == 0) return true;
        return false;
    }

    // Resolution of names into slots, tracking free variables for memoization.
    struct Scope {
        std::vector<std::pair<std::string, int>> sets, inds;
    };

    int lookup(std::vector<std::pair<std::string, int>>& sc, const std::string& x) {
        for (auto it = sc.rbegin(); it != sc.rend(); ++it)
            if (it->first == x) return it->second;
        return -1;
    }

    int set_slot(Scope& sc, const std::string& p) {
        int k = lookup(sc.sets, p);
        if (k >= 0) return k;
        if (auto g = globals.find(p); g != globals.end()) return g->second;
        int i = s.prop_index(p);
        if (i < 0) fail("unbound letter " + p);
        std::uint32_t m = 0;
        for (int u = 0; u < s.n; ++u)
            if (s.has(u, i)) m |= 1u << u;
        k = static_cast<int>(sets.size());
        sets.push_back(m);
        set_names.push_back(p);
        globals[p] = k;
        return k;
    }

    int ind_slot(Scope& sc, const std::string& x) {
        int k = lookup(sc.inds, x);
        if (k < 0) fail("unassigned variable " + x);
        return k;
    }

    Slotted resolve(const NodeP& n, Scope& sc, std::set<int>& fs, std::set<int>& fi) {
        Slotted r;
        r.kind = n->kind;
        r.mode = n->mode;
        switch (n->kind) {
            case Kind::down: r.a = set_slot(sc, n->a); fs.insert(r.a); break;
            case Kind::sub:
            case Kind::rel_set:
                r.a = set_slot(sc, n->a);
                r.b = set_slot(sc, n->b);
                fs.insert(r.a);
                fs.insert(r.b);
                break;
            case Kind::pred:
                r.a = set_slot(sc, n->a);
                r.b = ind_slot(sc, n->b);
                fs.insert(r.a);
                fi.insert(r.b);
                break;
            case Kind::rel:
            case Kind::eq:
                r.a = ind_slot(sc, n->a);
                r.b = ind_slot(sc, n->b);
                fi.insert(r.a);
                fi.insert(r.b);
                break;
            case Kind::exists_set:
            case Kind::forall_set: {
                r.a = static_cast<int>(sets.size());
                sets.push_back(0);
                set_names.push_back(n->a);
                sc.sets.emplace_back(n->a, r.a);
                std::set<int> bs, bi;
                r.kids.push_back(resolve(n->kids[0], sc, bs, bi));
                sc.sets.pop_back();
                bs.erase(r.a);
                r.free_sets.assign(bs.begin(), bs.end());
                r.free_inds.assign(bi.begin(), bi.end());
                r.memo = static_cast<int>(memo.size());
                memo.emplace_back();
                fs.insert(bs.begin(), bs.end());
                fi.insert(bi.begin(), bi.end());
                break;
            }
            case Kind::exists_ind:
            case Kind::forall_ind: {
                r.a = static_cast<int>(inds.size());
                inds.push_back(0);
                ind_names.push_back(n->a);
                sc.inds.emplace_back(n->a, r.a);
                std::set<int> bi;
                r.kids.push_back(resolve(n->kids[0], sc, fs, bi));
                sc.inds.pop_back();
                bi.erase(r.a);
                fi.insert(bi.begin(), bi.end());
                break;
            }
            default:
                for (auto& k : n->kids) r.kids.push_back(resolve(k, sc, fs, fi));
        }
        return r;
    }

    // `p sub q` guards restrict the enumeration to subsets of q.
    static int guard_of(const Slotted& r) {
        const Slotted& body = r.kids[0];
        if (r.kind == Kind::forall_set && body.kind == Kind::disj && body.kids[0].kind == Kind::neg &&
            body.kids[0].kids[0].kind == Kind::sub && body.kids[0].kids[0].a == r.a && body.kids[0].kids[0].b != r.a)
            return body.kids[0].kids[0].b;
        if (r.kind == Kind::exists_set && body.kind == Kind::conj && body.kids[0].kind == Kind::sub &&
            body.kids[0].a == r.a && body.kids[0].b != r.a)
            return body.kids[0].b;
        return -1;
    }

    bool quantify_set(const Slotted& r) {
        std::string key;
        for (int i : r.free_sets) key.append(reinterpret_cast<const char*>(&sets[i]), sizeof(std::uint32_t));
        for (int i : r.free_inds) key.append(reinterpret_cast<const char*>(&inds[i]), sizeof(int));
        auto& m = memo[r.memo];
        auto it = m.find(key);
        if (it != m.end()) return it->second;
        bool ex = r.kind == Kind::exists_set;
        int g = guard_of(r);
        std::uint32_t univ = s.n == 32 ? ~0u : ((1u << s.n) - 1);
        std::uint32_t range = g >= 0 ? sets[g] : univ;
        std::uint32_t saved = sets[r.a];
        bool result = !ex;
        // Enumerate every subset of `range`.
        std::uint32_t x = 0;
        while (true) {
            if (r.mode != Mode::noetherian || noetherian(x)) {
                sets[r.a] = x;
                if (run(r.kids[0]) == ex) {
                    result = ex;
                    break;
                }
            }
            if (x == range) break;
            x = (x - range) & range;
        }
        sets[r.a] = saved;
        m.emplace(std::move(key), result);
        return result;
    }

    bool run(const Slotted& r) {
        switch (r.kind) {
            case Kind::down: return sets[r.a] == (1u << s.init);
            case Kind::sub: return (sets[r.a] & ~sets[r.b]) == 0;
            case Kind::rel_set:
                for (int u = 0; u < s.n; ++u)
                    if (((sets[r.a] >> u) & 1u) && (succ_mask[u] & sets[r.b]) == 0) return false;
                return true;
            case Kind::pred: return (sets[r.a] >> inds[r.b]) & 1u;
            case Kind::rel: return (succ_mask[inds[r.a]] >> inds[r.b]) & 1u;
            case Kind::eq: return inds[r.a] == inds[r.b];
            case Kind::top: return true;
            case Kind::bot: return false;
            case Kind::neg: return !run(r.kids[0]);
            case Kind::disj: return run(r.kids[0]) || run(r.kids[1]);
            case Kind::conj: return run(r.kids[0]) && run(r.kids[1]);
            case Kind::exists_set:
            case Kind::forall_set: return quantify_set(r);
            case Kind::exists_ind:
            case Kind::forall_ind: {
                bool ex = r.kind == Kind::exists_ind;
                int saved = inds[r.a];
                bool result = !ex;
                for (int u = 0; u < s.n; ++u) {
                    inds[r.a] = u;
                    if (run(r.kids[0]) == ex) {
                        result = ex;
                        break;
                    }
                }
                inds[r.a] = saved;
                return result;
            }
        }
        fail("unsupported mso node");
    }
};

}  // namespace

bool eval2(const NodeP& n, const lts::Lts& s, const std::map<std::string, int>& g) {
    Evaluator ev(s);
    Evaluator::Scope sc;
    for (auto& [x, u] : g) {
        if (u < 0 || u >= s.n) fail("variable " + x + " is assigned to a missing state");
        sc.inds.emplace_back(x, static_cast<int>(ev.inds.size()));
        ev.inds.push_back(u);
        ev.ind_names.push_back(x);
    }
    std::set<int> fs, fi;
    Slotted r = ev.resolve(n, sc, fs, fi);
    return ev.run(r);
}

bool eval(const NodeP& n, const lts::Lts& s) {
    auto inds = free_individuals(n);
    if (!inds.empty()) fail("unassigned variable " + inds.front());
    return eval2(n, s, {});
}

bool holds_at_root(const NodeP& n, const lts::Lts& s) { return eval2(n, s, {{designated, s.init}}); }

// ---------------------------------------------------------------- compiler

namespace {

struct Compiler {
    Mode mode;
    os::Dialect d;
    int fresh = 0;

    aut::Automaton go(const NodeP& n, const std::vector<std::string>& props) {
        switch (n->kind) {
            case Kind::down: return aut::root_only(props, n->a, d);
            case Kind::sub: return aut::included(props, n->a, n->b, d);
            case Kind::rel_set: return aut::successor(props, n->a, n->b, d);
            case Kind::top: return aut::top_automaton(props, d);
            case Kind::bot: return aut::bot_automaton(props, d);
            case Kind::neg: return aut::complement(go(n->kids[0], props));
            case Kind::disj: return aut::trim(aut::union_automaton(go(n->kids[0], props), go(n->kids[1], props)));
            case Kind::conj:
                return aut::complement(aut::trim(aut::union_automaton(aut::complement(go(n->kids[0], props)),
                                                                      aut::complement(go(n->kids[1], props)))));
            case Kind::exists_set: return exists(n->a, n->kids[0], props);
            case Kind::forall_set: return aut::complement(exists(n->a, neg(n->kids[0]), props));
            default: fail("compile supports one-sorted formulas only");
        }
    }

    aut::Automaton exists(const std::string& p, const NodeP& body, const std::vector<std::string>& props) {
        if (std::find(props.begin(), props.end(), p) != props.end())
            fail("bound letter " + p + " shadows a letter in scope");
        if (props.size() + 1 > static_cast<std::size_t>(lts::max_props)) fail_limit("too many letters in scope");
        auto inner = props;
        inner.push_back(p);
        aut::Automaton a = aut::trim(go(body, inner));
        aut::Automaton c = mode == Mode::finite ? aut::finitary_construct(a) : aut::noetherian_construct(a);
        return aut::trim(aut::project(c, p));
    }
};

}  // namespace

aut::Automaton compile(const NodeP& n, Mode m) {
    if (m == Mode::standard) fail("compile supports the wmso and nmso logics");
    if (!is_one_sorted(n)) fail("compile supports one-sorted formulas only");
    Compiler c{m, m == Mode::finite ? os::Dialect::foe1inf : os::Dialect::foe1};
    aut::Automaton a = c.go(n, free_letters(n));
    return aut::classify_automaton(a).weak ? aut::normalize_weak_priorities(a) : a;
}

// ---------------------------------------------------------------- translations

namespace {

struct Fresh {
    std::set<std::string> used;

    std::string get(const std::string& stem) {
        for (int k = 1;; ++k) {
            std::string s = stem + std::to_string(k);
            if (used.insert(s).second) return s;
        }
    }
};

using Leaf = std::function<NodeP(int, const std::string&)>;

NodeP dagger(const os::NodeP& n, const std::string& v, const std::vector<std::string>& vars, const Leaf& leaf,
             Fresh& fr) {
    auto at = [&](int i) {
        if (i < 0 || i >= static_cast<int>(vars.size()) || vars[i].empty()) fail("one-step formula is not a sentence");
        return vars[i];
    };
    auto fold = [&](bool is_conj) {
        NodeP acc = is_conj ? top() : bot();
        bool first = true;
        for (auto& k : n->kids) {
            NodeP t = dagger(k, v, vars, leaf, fr);
            acc = first ? t : (is_conj ? conj(acc, t) : disj(acc, t));
            first = false;
        }
        return acc;
    };
    auto bind = [&](int var, const std::string& y) {
        auto vs = vars;
        if (static_cast<int>(vs.size()) <= var) vs.resize(var + 1);
        vs[var] = y;
        return dagger(n->kids[0], v, vs, leaf, fr);
    };
    switch (n->kind) {
        case os::Kind::atom: return leaf(n->pred, at(n->var));
        case os::Kind::neg_atom: return neg(leaf(n->pred, at(n->var)));
        case os::Kind::eq: return eq(at(n->var), at(n->var2));
        case os::Kind::neq: return neg(eq(at(n->var), at(n->var2)));
        case os::Kind::top: return top();
        case os::Kind::bot: return bot();
        case os::Kind::conj: return fold(true);
        case os::Kind::disj: return fold(false);
        case os::Kind::exists: {
            std::string y = fr.get("x");
            return exists_ind(y, conj(rel(v, y), bind(n->var, y)));
        }
        case os::Kind::forall: {
            std::string y = fr.get("x");
            return forall_ind(y, implies(rel(v, y), bind(n->var, y)));
        }
        case os::Kind::exists_inf: {
            std::string y = fr.get("x"), p = fr.get("F");
            return forall_set(p, Mode::finite, exists_ind(y, conj(rel(v, y), conj(neg(pred(p, y)), bind(n->var, y)))));
        }
        case os::Kind::forall_inf: {
            std::string y = fr.get("x"), p = fr.get("F");
            return exists_set(p, Mode::finite,
                              forall_ind(y, implies(conj(rel(v, y), neg(pred(p, y))), bind(n->var, y))));
        }
        case os::Kind::w: return dagger(os::expand_w(n), v, vars, leaf, fr);
    }
    fail("unsupported one-step node");
}

struct MuTranslator {
    Mode mode;
    Fresh fr;

    NodeP tr(const mu::NodeP& n, const std::string& x) {
        switch (n->kind) {
            case mu::Kind::prop: return pred(n->name, x);
            case mu::Kind::neg_prop: return neg(pred(n->name, x));
            case mu::Kind::conj:
            case mu::Kind::disj: {
                bool c = n->kind == mu::Kind::conj;
                NodeP acc = c ? top() : bot();
                for (std::size_t i = 0; i < n->kids.size(); ++i) {
                    NodeP t = tr(n->kids[i], x);
                    acc = i == 0 ? t : (c ? conj(acc, t) : disj(acc, t));
                }
                return acc;
            }
            case mu::Kind::modal:
                return dagger(n->alpha, x, {}, [&](int i, const std::string& y) { return tr(n->kids.at(i), y); }, fr);
            case mu::Kind::mu: {
                const std::string& p = n->name;
                std::string q = fr.get("Q"), w = fr.get("w");
                NodeP pre = forall_ind(w, implies(conj(pred(q, w), tr(n->kids[0], w)), pred(p, w)));
                return exists_set(q, mode, forall_set(p, mode, implies(sub(p, q), implies(pre, pred(p, x)))));
            }
            case mu::Kind::nu: return neg(tr(mu::negate(n), x));
        }
        fail("unsupported mu node");
    }
};

void reserve_names(const mu::NodeP& f, Fresh& fr) {
    for (auto& q : mu::free_letters(f)) fr.used.insert(q);
    for (auto& q : mu::bound_letters(f)) fr.used.insert(q);
    fr.used.insert(designated);
}

}  // namespace

NodeP mu_to_mso(const mu::NodeP& f0, Mode m) {
    if (m == Mode::finite && !mu::in_mu_c(f0)) fail("fragment violation: wmso translation needs a mu_C formula");
    if (m == Mode::noetherian) {
        if (!mu::in_mu_d(f0)) fail("fragment violation: nmso translation needs a mu_D formula");
        if (mu::dialect_of(f0) == os::Dialect::foe1inf) fail("fragment violation: nmso translation needs FOE1 modalities");
    }
    mu::NodeP f = mu::rename_apart(f0, {designated});
    MuTranslator t{m, {}};
    reserve_names(f, t.fr);
    // Negation may introduce no new letters, but keep its binders apart too.
    reserve_names(mu::negate(f), t.fr);
    return t.tr(f, designated);
}

NodeP onestep_dagger(const os::NodeP& alpha, const std::vector<std::string>& names) {
    Fresh fr;
    fr.used.insert(names.begin(), names.end());
    fr.used.insert(designated);
    return dagger(alpha, designated, {}, [&](int i, const std::string& y) {
        if (i < 0 || i >= static_cast<int>(names.size())) fail("predicate without a name");
        return pred(names[i], y);
    }, fr);
}

}  // namespace wb::mso
