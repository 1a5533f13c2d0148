#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "wb/onestep.hpp"

namespace wb::onestep {

std::string dialect_name(Dialect d) {
    switch (d) {
        case Dialect::fo1: return "FO1";
        case Dialect::foe1: return "FOE1";
        case Dialect::foe1inf: return "FOE1INF";
    }
    return "?";
}

Dialect dialect_from_name(const std::string& s) {
    std::string u;
    for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "FO1") return Dialect::fo1;
    if (u == "FOE1") return Dialect::foe1;
    if (u == "FOE1INF") return Dialect::foe1inf;
    fail("unknown dialect " + s);
}

namespace {

NodeP mk(Kind k, std::vector<NodeP> kids = {}, int var = -1, int var2 = -1, int pred = -1) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    n->var = var;
    n->var2 = var2;
    n->pred = pred;
    return n;
}

bool is_quant(Kind k) {
    return k == Kind::exists || k == Kind::forall || k == Kind::exists_inf || k == Kind::forall_inf || k == Kind::w;
}

}  // namespace

NodeP atom(int pred, int var) { return mk(Kind::atom, {}, var, -1, pred); }
NodeP neg_atom(int pred, int var) { return mk(Kind::neg_atom, {}, var, -1, pred); }
NodeP eq(int x, int y) { return mk(Kind::eq, {}, x, y); }
NodeP neq(int x, int y) { return mk(Kind::neq, {}, x, y); }
NodeP top() {
    static const NodeP t = mk(Kind::top);
    return t;
}
NodeP bot() {
    static const NodeP b = mk(Kind::bot);
    return b;
}

NodeP conj(std::vector<NodeP> kids) {
    std::vector<NodeP> out;
    for (auto& k : kids) {
        if (k->kind == Kind::top) continue;
        if (k->kind == Kind::bot) return bot();
        if (k->kind == Kind::conj)
            out.insert(out.end(), k->kids.begin(), k->kids.end());
        else
            out.push_back(k);
    }
    if (out.empty()) return top();
    if (out.size() == 1) return out[0];
    return mk(Kind::conj, std::move(out));
}

NodeP disj(std::vector<NodeP> kids) {
    std::vector<NodeP> out;
    for (auto& k : kids) {
        if (k->kind == Kind::bot) continue;
        if (k->kind == Kind::top) return top();
        if (k->kind == Kind::disj)
            out.insert(out.end(), k->kids.begin(), k->kids.end());
        else
            out.push_back(k);
    }
    if (out.empty()) return bot();
    if (out.size() == 1) return out[0];
    return mk(Kind::disj, std::move(out));
}

NodeP conj2(NodeP a, NodeP b) { return conj({std::move(a), std::move(b)}); }
NodeP disj2(NodeP a, NodeP b) { return disj({std::move(a), std::move(b)}); }
NodeP quant(Kind k, int var, NodeP body) { return mk(k, {std::move(body)}, var); }
NodeP w_node(int var, NodeP phi, NodeP psi) { return mk(Kind::w, {std::move(phi), std::move(psi)}, var); }

NodeP tau(Type t, int var) {
    std::vector<NodeP> parts;
    for (int i = 0; i < max_preds; ++i)
        if ((t >> i) & 1u) parts.push_back(atom(i, var));
    return conj(std::move(parts));
}

std::string var_name(int v) {
    static const char* names[] = {"x", "y", "z", "w", "u", "v"};
    if (v >= 0 && v < 6) return names[v];
    return "x" + std::to_string(v);
}

// ---------------------------------------------------------------- parsing

namespace {

struct Tok {
    enum K { ident, lp, rp, comma, dot, amp, bar, bang, eqs, neqs, end } k;
    std::string s;
    std::size_t pos;
};

std::vector<Tok> lex(const std::string& t) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < t.size()) {
        char c = t[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t st = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_' || t[i] == '\''))
                ++i;
            out.push_back({Tok::ident, t.substr(st, i - st), st});
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::lp, "(", st}); break;
            case ')': out.push_back({Tok::rp, ")", st}); break;
            case ',': out.push_back({Tok::comma, ",", st}); break;
            case '.': out.push_back({Tok::dot, ".", st}); break;
            case '&': out.push_back({Tok::amp, "&", st}); break;
            case '|': out.push_back({Tok::bar, "|", st}); break;
            case '=': out.push_back({Tok::eqs, "=", st}); break;
            case '!':
                if (i + 1 < t.size() && t[i + 1] == '=') {
                    out.push_back({Tok::neqs, "!=", st});
                    ++i;
                } else {
                    out.push_back({Tok::bang, "!", st});
                }
                break;
            default: fail_parse("one-step formula: unexpected character '" + std::string(1, c) + "' at column " + std::to_string(st + 1));
        }
        ++i;
    }
    out.push_back({Tok::end, "", t.size()});
    return out;
}

struct Parser {
    std::vector<Tok> toks;
    std::size_t p = 0;
    std::vector<std::string> preds;
    bool fixed_preds = false;
    std::map<std::string, int> other_vars;

    const Tok& peek() const { return toks[p]; }
    [[noreturn]] void error(const std::string& msg) const {
        fail_parse("one-step formula: " + msg + " at column " + std::to_string(peek().pos + 1));
    }
    void expect(Tok::K k, const char* what) {
        if (peek().k != k) error(std::string("expected ") + what);
        ++p;
    }
    static bool keyword(const std::string& s) {
        return s == "E" || s == "A" || s == "Einf" || s == "Ainf" || s == "W" || s == "true" || s == "false";
    }
    int var_id(const std::string& s) {
        static const std::map<std::string, int> std_names = {{"x", 0}, {"y", 1}, {"z", 2}, {"w", 3}, {"u", 4}, {"v", 5}};
        auto it = std_names.find(s);
        if (it != std_names.end()) return it->second;
        if (s.size() > 1 && s[0] == 'x' && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int v = std::stoi(s.substr(1));
            if (v >= 6 && v < 1000) return v;
        }
        auto jt = other_vars.find(s);
        if (jt != other_vars.end()) return jt->second;
        int id = 1000 + static_cast<int>(other_vars.size());
        other_vars[s] = id;
        return id;
    }
    int pred_id(const std::string& s) {
        for (std::size_t i = 0; i < preds.size(); ++i)
            if (preds[i] == s) return static_cast<int>(i);
        if (fixed_preds) error("unknown predicate " + s);
        if (static_cast<int>(preds.size()) >= max_preds) error("too many predicates");
        preds.push_back(s);
        return static_cast<int>(preds.size()) - 1;
    }
    std::string ident() {
        if (peek().k != Tok::ident) error("expected identifier");
        return toks[p++].s;
    }

    NodeP formula() {
        std::vector<NodeP> parts{conjunction()};
        while (peek().k == Tok::bar) {
            ++p;
            parts.push_back(conjunction());
        }
        if (parts.size() == 1) return parts[0];
        return mk(Kind::disj, std::move(parts));
    }
    NodeP conjunction() {
        std::vector<NodeP> parts{unary()};
        while (peek().k == Tok::amp) {
            ++p;
            parts.push_back(unary());
        }
        if (parts.size() == 1) return parts[0];
        return mk(Kind::conj, std::move(parts));
    }
    NodeP unary() {
        const Tok& t = peek();
        if (t.k == Tok::lp) {
            ++p;
            NodeP f = formula();
            expect(Tok::rp, "')'");
            return f;
        }
        if (t.k == Tok::bang) {
            ++p;
            std::string a = ident();
            expect(Tok::lp, "'('");
            int x = var_id(ident());
            expect(Tok::rp, "')'");
            return mk(Kind::neg_atom, {}, x, -1, pred_id(a));
        }
        if (t.k != Tok::ident) error("expected formula");
        std::string s = t.s;
        if (s == "true") {
            ++p;
            return top();
        }
        if (s == "false") {
            ++p;
            return bot();
        }
        if (s == "E" || s == "A" || s == "Einf" || s == "Ainf") {
            ++p;
            int x = var_id(ident());
            expect(Tok::dot, "'.'");
            NodeP body = formula();
            Kind k = s == "E" ? Kind::exists : s == "A" ? Kind::forall : s == "Einf" ? Kind::exists_inf : Kind::forall_inf;
            return mk(k, {body}, x);
        }
        if (s == "W") {
            ++p;
            int x = var_id(ident());
            expect(Tok::dot, "'.'");
            expect(Tok::lp, "'('");
            NodeP a = formula();
            expect(Tok::comma, "','");
            NodeP b = formula();
            expect(Tok::rp, "')'");
            return mk(Kind::w, {a, b}, x);
        }
        ++p;
        if (peek().k == Tok::lp) {
            ++p;
            int x = var_id(ident());
            expect(Tok::rp, "')'");
            return mk(Kind::atom, {}, x, -1, pred_id(s));
        }
        if (peek().k == Tok::eqs || peek().k == Tok::neqs) {
            bool is_eq = peek().k == Tok::eqs;
            ++p;
            std::string rhs = ident();
            if (keyword(rhs)) error("expected variable");
            return mk(is_eq ? Kind::eq : Kind::neq, {}, var_id(s), var_id(rhs));
        }
        error("expected '(' or '=' after " + s);
    }
};

}  // namespace

Formula parse(const std::string& text, Dialect d, const std::vector<std::string>& preds) {
    Parser ps;
    ps.toks = lex(text);
    ps.preds = preds;
    ps.fixed_preds = !preds.empty();
    NodeP root = ps.formula();
    if (ps.peek().k != Tok::end) ps.error("unexpected trailing input");
    Formula f{d, ps.preds, root};
    if (!free_vars(root).empty()) fail_parse("one-step formula: free variable " + var_name(free_vars(root)[0]) + " at top level");
    check_dialect(f);
    return f;
}

// ---------------------------------------------------------------- printing

namespace {

int prec(const NodeP& n) {
    switch (n->kind) {
        case Kind::disj: return 1;
        case Kind::conj: return 2;
        case Kind::exists:
        case Kind::forall:
        case Kind::exists_inf:
        case Kind::forall_inf: return 0;
        default: return 4;
    }
}

void print(const NodeP& n, const std::vector<std::string>& preds, std::string& out) {
    auto pname = [&](int i) { return i >= 0 && i < static_cast<int>(preds.size()) ? preds[i] : "p" + std::to_string(i); };
    auto child = [&](const NodeP& c, int need) {
        if (prec(c) < need) {
            out += "(";
            print(c, preds, out);
            out += ")";
        } else {
            print(c, preds, out);
        }
    };
    switch (n->kind) {
        case Kind::atom: out += pname(n->pred) + "(" + var_name(n->var) + ")"; break;
        case Kind::neg_atom: out += "!" + pname(n->pred) + "(" + var_name(n->var) + ")"; break;
        case Kind::eq: out += var_name(n->var) + "=" + var_name(n->var2); break;
        case Kind::neq: out += var_name(n->var) + "!=" + var_name(n->var2); break;
        case Kind::top: out += "true"; break;
        case Kind::bot: out += "false"; break;
        case Kind::conj:
        case Kind::disj: {
            bool c = n->kind == Kind::conj;
            for (std::size_t i = 0; i < n->kids.size(); ++i) {
                if (i) out += c ? " & " : " | ";
                child(n->kids[i], c ? 3 : 2);
            }
            break;
        }
        case Kind::exists: out += "E " + var_name(n->var) + ". "; print(n->kids[0], preds, out); break;
        case Kind::forall: out += "A " + var_name(n->var) + ". "; print(n->kids[0], preds, out); break;
        case Kind::exists_inf: out += "Einf " + var_name(n->var) + ". "; print(n->kids[0], preds, out); break;
        case Kind::forall_inf: out += "Ainf " + var_name(n->var) + ". "; print(n->kids[0], preds, out); break;
        case Kind::w:
            out += "W " + var_name(n->var) + ".(";
            print(n->kids[0], preds, out);
            out += ", ";
            print(n->kids[1], preds, out);
            out += ")";
            break;
    }
}

}  // namespace

std::string node_to_string(const NodeP& n, const std::vector<std::string>& preds) {
    std::string out;
    print(n, preds, out);
    return out;
}

std::string to_string(const Formula& f) { return node_to_string(f.root, f.preds); }

// ---------------------------------------------------------------- helpers

bool is_positive(const NodeP& n) {
    if (n->kind == Kind::neg_atom) return false;
    for (auto& k : n->kids)
        if (!is_positive(k)) return false;
    return true;
}

int rank(const NodeP& n) {
    int r = 0;
    for (auto& k : n->kids) r = std::max(r, rank(k));
    return is_quant(n->kind) ? r + 1 : r;
}

Type preds_of(const NodeP& n) {
    Type t = 0;
    if (n->kind == Kind::atom || n->kind == Kind::neg_atom) t |= Type(1) << n->pred;
    for (auto& k : n->kids) t |= preds_of(k);
    return t;
}

std::vector<int> free_vars(const NodeP& n) {
    std::set<int> out;
    std::function<void(const NodeP&, std::set<int>&)> go = [&](const NodeP& m, std::set<int>& bound) {
        auto use = [&](int v) {
            if (v >= 0 && !bound.count(v)) out.insert(v);
        };
        switch (m->kind) {
            case Kind::atom:
            case Kind::neg_atom: use(m->var); break;
            case Kind::eq:
            case Kind::neq:
                use(m->var);
                use(m->var2);
                break;
            default:
                if (is_quant(m->kind)) {
                    bool had = bound.count(m->var);
                    bound.insert(m->var);
                    for (auto& k : m->kids) go(k, bound);
                    if (!had) bound.erase(m->var);
                } else {
                    for (auto& k : m->kids) go(k, bound);
                }
        }
    };
    std::set<int> bound;
    go(n, bound);
    return {out.begin(), out.end()};
}

bool same(const NodeP& a, const NodeP& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->var != b->var || a->var2 != b->var2 || a->pred != b->pred ||
        a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!same(a->kids[i], b->kids[i])) return false;
    return true;
}

NodeP expand_w(const NodeP& n) {
    if (n->kids.empty()) return n;
    std::vector<NodeP> kids;
    for (auto& k : n->kids) kids.push_back(expand_w(k));
    if (n->kind == Kind::w)
        return mk(Kind::conj, {mk(Kind::forall, {mk(Kind::disj, {kids[0], kids[1]})}, n->var),
                               mk(Kind::forall_inf, {kids[1]}, n->var)});
    return mk(n->kind, std::move(kids), n->var, n->var2, n->pred);
}

Dialect min_dialect(const NodeP& n) {
    Dialect d = Dialect::fo1;
    if (n->kind == Kind::eq || n->kind == Kind::neq) d = Dialect::foe1;
    if (n->kind == Kind::exists_inf || n->kind == Kind::forall_inf || n->kind == Kind::w) d = Dialect::foe1inf;
    for (auto& k : n->kids) d = std::max(d, min_dialect(k));
    return d;
}

void check_dialect(const Formula& f) {
    Dialect need = min_dialect(f.root);
    if (need > f.dialect) {
        if (need == Dialect::foe1inf) fail("infinity quantifiers and W require FOE1INF, got " + dialect_name(f.dialect));
        fail("equality requires FOE1 or FOE1INF, got " + dialect_name(f.dialect));
    }
}

NodeP rename_preds(const NodeP& n, const std::vector<int>& map) {
    if (n->kind == Kind::atom || n->kind == Kind::neg_atom) return mk(n->kind, {}, n->var, -1, map.at(n->pred));
    if (n->kids.empty()) return n;
    std::vector<NodeP> kids;
    for (auto& k : n->kids) kids.push_back(rename_preds(k, map));
    return mk(n->kind, std::move(kids), n->var, n->var2, n->pred);
}

int max_var(const NodeP& n) {
    int m = std::max(n->var, n->var2);
    for (auto& k : n->kids) m = std::max(m, max_var(k));
    return m;
}

// ---------------------------------------------------------------- duals and fragments

NodeP dual_node(const NodeP& n) {
    switch (n->kind) {
        case Kind::atom:
        case Kind::neg_atom: return n;
        case Kind::eq: return mk(Kind::neq, {}, n->var, n->var2);
        case Kind::neq: return mk(Kind::eq, {}, n->var, n->var2);
        case Kind::top: return bot();
        case Kind::bot: return top();
        case Kind::w: return dual_node(expand_w(n));
        default: break;
    }
    static const std::map<Kind, Kind> flip = {{Kind::conj, Kind::disj}, {Kind::disj, Kind::conj},
                                               {Kind::exists, Kind::forall}, {Kind::forall, Kind::exists},
                                               {Kind::exists_inf, Kind::forall_inf}, {Kind::forall_inf, Kind::exists_inf}};
    std::vector<NodeP> kids;
    for (auto& k : n->kids) kids.push_back(dual_node(k));
    return mk(flip.at(n->kind), std::move(kids), n->var, n->var2, n->pred);
}

Formula dual(const Formula& f) { return Formula{f.dialect, f.preds, dual_node(f.root)}; }

bool b_free(const NodeP& n, Type b) { return (preds_of(n) & b) == 0; }

namespace {

std::vector<NodeP> disjuncts(const NodeP& n) {
    if (n->kind == Kind::disj) return n->kids;
    return {n};
}

bool same_set(const std::vector<NodeP>& a, const std::vector<NodeP>& b) {
    auto covered = [](const std::vector<NodeP>& x, const std::vector<NodeP>& y) {
        for (auto& u : x) {
            bool found = false;
            for (auto& w : y)
                if (same(u, w)) found = true;
            if (!found) return false;
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

}  // namespace

// Recognizes Ax.(phi | psi) as a conjunct next to Ainf x.psi, the unfolded W shape.
static bool expanded_w_cont(const NodeP& conj, const NodeP& k, Type b) {
    if (k->kind != Kind::forall) return false;
    std::vector<NodeP> bpart, free;
    for (auto& d : disjuncts(k->kids[0])) (b_free(d, b) ? free : bpart).push_back(d);
    for (auto& s : conj->kids) {
        if (s->kind != Kind::forall_inf || s->var != k->var || !b_free(s->kids[0], b)) continue;
        if (same_set(disjuncts(s->kids[0]), free) && in_cont(disj(bpart), b)) return true;
    }
    return false;
}

bool in_cont(const NodeP& n, Type b) {
    if (!is_positive(n)) return false;
    if (b_free(n, b)) return true;
    switch (n->kind) {
        case Kind::atom: return true;
        case Kind::conj:
            for (auto& k : n->kids)
                if (!in_cont(k, b) && !expanded_w_cont(n, k, b)) return false;
            return true;
        case Kind::disj:
            for (auto& k : n->kids)
                if (!in_cont(k, b)) return false;
            return true;
        case Kind::exists: return in_cont(n->kids[0], b);
        case Kind::w: return in_cont(n->kids[0], b) && b_free(n->kids[1], b);
        default: return false;
    }
}

bool in_cocont(const NodeP& n, Type b) { return in_cont(dual_node(n), b); }

FragmentReport fragment_check(const Formula& f, Type b) {
    FragmentReport r;
    r.positive = is_positive(f.root);
    r.cont = in_cont(f.root, b);
    r.cocont = in_cocont(f.root, b);
    if (auto bf = match_basic_form(f)) r.separating = separating_sufficient(*bf, b);
    return r;
}

}  // namespace wb::onestep
