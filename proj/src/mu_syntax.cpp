#include <algorithm>
#include <cctype>
#include <functional>

#include "wb/mu.hpp"

namespace wb::mu {

namespace os = wb::onestep;

namespace {

NodeP mk(Kind k, std::string name = {}, os::NodeP alpha = nullptr, std::vector<NodeP> kids = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->alpha = std::move(alpha);
    n->kids = std::move(kids);
    return n;
}

}  // namespace

os::NodeP dia_alpha() {
    static const os::NodeP a = os::quant(os::Kind::exists, 0, os::atom(0, 0));
    return a;
}

os::NodeP box_alpha() {
    static const os::NodeP a = os::quant(os::Kind::forall, 0, os::atom(0, 0));
    return a;
}

NodeP prop(const std::string& q) { return mk(Kind::prop, q); }
NodeP neg_prop(const std::string& q) { return mk(Kind::neg_prop, q); }

NodeP top() {
    static const NodeP t = mk(Kind::modal, {}, os::top());
    return t;
}

NodeP bot() {
    static const NodeP b = mk(Kind::modal, {}, os::bot());
    return b;
}

bool is_top(const NodeP& n) { return n->kind == Kind::modal && n->alpha->kind == os::Kind::top; }
bool is_bot(const NodeP& n) { return n->kind == Kind::modal && n->alpha->kind == os::Kind::bot; }
bool is_fix(const NodeP& n) { return n->kind == Kind::mu || n->kind == Kind::nu; }

NodeP conj(std::vector<NodeP> kids) {
    std::vector<NodeP> out;
    for (auto& k : kids) {
        if (is_top(k)) continue;
        if (is_bot(k)) return bot();
        if (k->kind == Kind::conj)
            out.insert(out.end(), k->kids.begin(), k->kids.end());
        else
            out.push_back(k);
    }
    if (out.empty()) return top();
    if (out.size() == 1) return out[0];
    return mk(Kind::conj, {}, nullptr, std::move(out));
}

NodeP disj(std::vector<NodeP> kids) {
    std::vector<NodeP> out;
    for (auto& k : kids) {
        if (is_bot(k)) continue;
        if (is_top(k)) return top();
        if (k->kind == Kind::disj)
            out.insert(out.end(), k->kids.begin(), k->kids.end());
        else
            out.push_back(k);
    }
    if (out.empty()) return bot();
    if (out.size() == 1) return out[0];
    return mk(Kind::disj, {}, nullptr, std::move(out));
}

NodeP conj2(NodeP a, NodeP b) { return conj({std::move(a), std::move(b)}); }
NodeP disj2(NodeP a, NodeP b) { return disj({std::move(a), std::move(b)}); }

NodeP modal(os::NodeP alpha, std::vector<NodeP> args) {
    if (!os::is_positive(alpha)) fail("modality formula must be positive");
    if (!os::free_vars(alpha).empty()) fail("modality formula must be a sentence");
    os::Type used = os::preds_of(alpha);
    if (args.size() < 64 && (used >> args.size()) != 0) fail("modality mentions a predicate without an argument");
    return mk(Kind::modal, {}, std::move(alpha), std::move(args));
}

NodeP fix(Kind k, const std::string& var, NodeP body) { return mk(k, var, nullptr, {std::move(body)}); }
NodeP dia(NodeP f) { return mk(Kind::modal, {}, dia_alpha(), {std::move(f)}); }
NodeP box(NodeP f) { return mk(Kind::modal, {}, box_alpha(), {std::move(f)}); }

// ---------------------------------------------------------------- parsing

namespace {

struct Tok {
    enum K { ident, lp, rp, comma, dot, amp, bar, tilde, onestep, end } k;
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
            while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_' || t[i] == '\'')) ++i;
            out.push_back({Tok::ident, t.substr(st, i - st), st});
            continue;
        }
        if (c == '<') {
            std::size_t e = t.find('>', i);
            if (e == std::string::npos) fail_parse("mu formula: unterminated modality at column " + std::to_string(st + 1));
            out.push_back({Tok::onestep, t.substr(i + 1, e - i - 1), st});
            i = e + 1;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::lp, "(", st}); break;
            case ')': out.push_back({Tok::rp, ")", st}); break;
            case ',': out.push_back({Tok::comma, ",", st}); break;
            case '.': out.push_back({Tok::dot, ".", st}); break;
            case '&': out.push_back({Tok::amp, "&", st}); break;
            case '|': out.push_back({Tok::bar, "|", st}); break;
            case '~': out.push_back({Tok::tilde, "~", st}); break;
            default: fail_parse("mu formula: unexpected character '" + std::string(1, c) + "' at column " + std::to_string(st + 1));
        }
        ++i;
    }
    out.push_back({Tok::end, "", t.size()});
    return out;
}

bool keyword(const std::string& s) {
    return s == "mu" || s == "nu" || s == "dia" || s == "box" || s == "true" || s == "false";
}

struct Parser {
    std::vector<Tok> toks;
    std::size_t p = 0;
    std::vector<std::string> scope;

    const Tok& peek() const { return toks[p]; }
    [[noreturn]] void error(const std::string& msg) const {
        fail_parse("mu formula: " + msg + " at column " + std::to_string(peek().pos + 1));
    }
    void expect(Tok::K k, const char* what) {
        if (peek().k != k) error(std::string("expected ") + what);
        ++p;
    }
    std::string letter() {
        if (peek().k != Tok::ident || keyword(peek().s)) error("expected a letter");
        return toks[p++].s;
    }
    bool bound(const std::string& s) const { return std::find(scope.begin(), scope.end(), s) != scope.end(); }

    NodeP formula() {
        std::vector<NodeP> parts{conjunction()};
        while (peek().k == Tok::bar) {
            ++p;
            parts.push_back(conjunction());
        }
        if (parts.size() == 1) return parts[0];
        return mk(Kind::disj, {}, nullptr, std::move(parts));
    }
    NodeP conjunction() {
        std::vector<NodeP> parts{unary()};
        while (peek().k == Tok::amp) {
            ++p;
            parts.push_back(unary());
        }
        if (parts.size() == 1) return parts[0];
        return mk(Kind::conj, {}, nullptr, std::move(parts));
    }
    NodeP unary() {
        const Tok t = peek();
        switch (t.k) {
            case Tok::lp: {
                ++p;
                NodeP f = formula();
                expect(Tok::rp, "')'");
                return f;
            }
            case Tok::tilde: {
                ++p;
                std::string q = letter();
                if (bound(q)) error("bound letter " + q + " under negation");
                return neg_prop(q);
            }
            case Tok::onestep: {
                ++p;
                expect(Tok::lp, "'(' after modality");
                std::vector<NodeP> args;
                if (peek().k != Tok::rp) {
                    args.push_back(formula());
                    while (peek().k == Tok::comma) {
                        ++p;
                        args.push_back(formula());
                    }
                }
                expect(Tok::rp, "')'");
                std::vector<std::string> names;
                for (std::size_t i = 0; i < std::max<std::size_t>(args.size(), 1); ++i) names.push_back("a" + std::to_string(i + 1));
                os::Formula f;
                try {
                    f = os::parse(t.s, os::Dialect::foe1inf, names);
                } catch (const Error& e) {
                    fail_parse(std::string("in modality: ") + e.what());
                }
                if ((os::preds_of(f.root) >> args.size()) != 0) fail_parse("modality mentions a predicate without an argument");
                if (!os::is_positive(f.root)) fail_parse("modality formula must be positive");
                return mk(Kind::modal, {}, f.root, std::move(args));
            }
            case Tok::ident: break;
            default: error("expected formula");
        }
        if (t.s == "true") {
            ++p;
            return top();
        }
        if (t.s == "false") {
            ++p;
            return bot();
        }
        if (t.s == "mu" || t.s == "nu") {
            ++p;
            std::string v = letter();
            expect(Tok::dot, "'.'");
            scope.push_back(v);
            NodeP body = formula();
            scope.pop_back();
            return fix(t.s == "mu" ? Kind::mu : Kind::nu, v, body);
        }
        if (t.s == "dia" || t.s == "box") {
            ++p;
            NodeP f = unary();
            return t.s == "dia" ? dia(f) : box(f);
        }
        ++p;
        return prop(t.s);
    }
};

}  // namespace

NodeP parse(const std::string& text) {
    Parser ps;
    ps.toks = lex(text);
    NodeP n = ps.formula();
    if (ps.peek().k != Tok::end) ps.error("unexpected trailing input");
    return rename_apart(n);
}

// ---------------------------------------------------------------- printing

namespace {

int prec(const NodeP& n) {
    switch (n->kind) {
        case Kind::disj: return 1;
        case Kind::conj: return 2;
        case Kind::mu:
        case Kind::nu: return 0;
        default: return 4;
    }
}

void print(const NodeP& n, std::string& out) {
    auto child = [&](const NodeP& c, int need) {
        if (prec(c) < need) {
            out += "(";
            print(c, out);
            out += ")";
        } else {
            print(c, out);
        }
    };
    switch (n->kind) {
        case Kind::prop: out += n->name; break;
        case Kind::neg_prop: out += "~" + n->name; break;
        case Kind::conj:
        case Kind::disj: {
            bool c = n->kind == Kind::conj;
            for (std::size_t i = 0; i < n->kids.size(); ++i) {
                if (i) out += c ? " & " : " | ";
                child(n->kids[i], c ? 3 : 2);
            }
            break;
        }
        case Kind::mu:
        case Kind::nu:
            out += (n->kind == Kind::mu ? "mu " : "nu ") + n->name + ". ";
            print(n->kids[0], out);
            break;
        case Kind::modal: {
            if (n->kids.empty() && n->alpha->kind == os::Kind::top) {
                out += "true";
                break;
            }
            if (n->kids.empty() && n->alpha->kind == os::Kind::bot) {
                out += "false";
                break;
            }
            if (n->kids.size() == 1 && (os::same(n->alpha, dia_alpha()) || os::same(n->alpha, box_alpha()))) {
                out += os::same(n->alpha, dia_alpha()) ? "dia " : "box ";
                child(n->kids[0], 3);
                break;
            }
            std::vector<std::string> names;
            for (std::size_t i = 0; i < std::max<std::size_t>(n->kids.size(), 1); ++i) names.push_back("a" + std::to_string(i + 1));
            out += "<" + os::node_to_string(n->alpha, names) + ">(";
            for (std::size_t i = 0; i < n->kids.size(); ++i) {
                if (i) out += ", ";
                print(n->kids[i], out);
            }
            out += ")";
            break;
        }
    }
}

}  // namespace

std::string to_string(const NodeP& n) {
    std::string out;
    print(n, out);
    return out;
}

// ---------------------------------------------------------------- structure

namespace {

void collect_free(const NodeP& n, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (n->kind) {
        case Kind::prop:
        case Kind::neg_prop:
            if (!bound.count(n->name)) out.insert(n->name);
            return;
        case Kind::mu:
        case Kind::nu: {
            bool had = bound.count(n->name);
            bound.insert(n->name);
            collect_free(n->kids[0], bound, out);
            if (!had) bound.erase(n->name);
            return;
        }
        default:
            for (auto& k : n->kids) collect_free(k, bound, out);
    }
}

}  // namespace

std::set<std::string> free_letters(const NodeP& n) {
    std::set<std::string> bound, out;
    collect_free(n, bound, out);
    return out;
}

std::set<std::string> bound_letters(const NodeP& n) {
    std::set<std::string> out;
    std::function<void(const NodeP&)> go = [&](const NodeP& m) {
        if (is_fix(m)) out.insert(m->name);
        for (auto& k : m->kids) go(k);
    };
    go(n);
    return out;
}

int size(const NodeP& n) {
    int s = 1;
    for (auto& k : n->kids) s += size(k);
    return s;
}

os::Dialect dialect_of(const NodeP& n) {
    os::Dialect d = os::Dialect::fo1;
    if (n->kind == Kind::modal) d = os::min_dialect(n->alpha);
    for (auto& k : n->kids) d = std::max(d, dialect_of(k));
    return d;
}

bool same(const NodeP& a, const NodeP& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
    if (a->kind == Kind::modal && !os::same(a->alpha, b->alpha)) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!same(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace {

std::string fresh_name(const std::string& base0, const std::set<std::string>& used) {
    std::string base = base0;
    while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
    if (base.empty()) base = "x";
    for (int k = 1;; ++k) {
        std::string c = base + std::to_string(k);
        if (!used.count(c)) return c;
    }
}

NodeP rebuild(const NodeP& n, std::vector<NodeP> kids) {
    auto m = std::make_shared<Node>(*n);
    m->kids = std::move(kids);
    return m;
}

}  // namespace

NodeP rename_apart(const NodeP& n, const std::set<std::string>& avoid) {
    std::set<std::string> used = free_letters(n);
    used.insert(avoid.begin(), avoid.end());
    std::map<std::string, std::vector<std::string>> scope;
    std::function<NodeP(const NodeP&)> go = [&](const NodeP& m) -> NodeP {
        switch (m->kind) {
            case Kind::prop:
            case Kind::neg_prop: {
                auto it = scope.find(m->name);
                if (it == scope.end() || it->second.empty()) return m;
                return mk(m->kind, it->second.back());
            }
            case Kind::mu:
            case Kind::nu: {
                std::string nm = used.count(m->name) ? fresh_name(m->name, used) : m->name;
                used.insert(nm);
                scope[m->name].push_back(nm);
                NodeP body = go(m->kids[0]);
                scope[m->name].pop_back();
                return fix(m->kind, nm, body);
            }
            default: {
                if (m->kids.empty()) return m;
                std::vector<NodeP> kids;
                for (auto& k : m->kids) kids.push_back(go(k));
                return rebuild(m, std::move(kids));
            }
        }
    };
    return go(n);
}

namespace {

// Replaces free occurrences of letters without any renaming.
NodeP replace_raw(const NodeP& n, const std::map<std::string, NodeP>& sigma, std::set<std::string>& bound) {
    switch (n->kind) {
        case Kind::prop: {
            if (bound.count(n->name)) return n;
            auto it = sigma.find(n->name);
            return it == sigma.end() ? n : it->second;
        }
        case Kind::neg_prop: {
            if (bound.count(n->name)) return n;
            auto it = sigma.find(n->name);
            return it == sigma.end() ? n : negate(it->second);
        }
        case Kind::mu:
        case Kind::nu: {
            bool had = bound.count(n->name);
            bound.insert(n->name);
            NodeP body = replace_raw(n->kids[0], sigma, bound);
            if (!had) bound.erase(n->name);
            return fix(n->kind, n->name, body);
        }
        case Kind::conj: {
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(replace_raw(k, sigma, bound));
            return conj(kids);
        }
        case Kind::disj: {
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(replace_raw(k, sigma, bound));
            return disj(kids);
        }
        case Kind::modal: {
            if (n->kids.empty()) return n;
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(replace_raw(k, sigma, bound));
            return rebuild(n, std::move(kids));
        }
    }
    return n;
}

NodeP replace_raw(const NodeP& n, const std::map<std::string, NodeP>& sigma) {
    std::set<std::string> bound;
    return replace_raw(n, sigma, bound);
}

}  // namespace

NodeP substitute(const NodeP& n, const std::map<std::string, NodeP>& sigma) {
    std::set<std::string> avoid;
    for (auto& [q, f] : sigma) {
        auto fl = free_letters(f);
        avoid.insert(fl.begin(), fl.end());
        avoid.insert(q);
    }
    NodeP m = rename_apart(n, avoid);
    return rename_apart(replace_raw(m, sigma));
}

NodeP negate(const NodeP& n) {
    std::set<std::string> bound;
    std::function<NodeP(const NodeP&)> go = [&](const NodeP& m) -> NodeP {
        switch (m->kind) {
            case Kind::prop: return bound.count(m->name) ? m : neg_prop(m->name);
            case Kind::neg_prop:
                if (bound.count(m->name)) fail("negated bound letter");
                return prop(m->name);
            case Kind::conj:
            case Kind::disj: {
                std::vector<NodeP> kids;
                for (auto& k : m->kids) kids.push_back(go(k));
                return m->kind == Kind::conj ? disj(kids) : conj(kids);
            }
            case Kind::modal: {
                std::vector<NodeP> kids;
                for (auto& k : m->kids) kids.push_back(go(k));
                if (kids.empty() && m->alpha->kind == os::Kind::top) return bot();
                if (kids.empty() && m->alpha->kind == os::Kind::bot) return top();
                return mk(Kind::modal, {}, os::dual_node(m->alpha), std::move(kids));
            }
            case Kind::mu:
            case Kind::nu: {
                bool had = bound.count(m->name);
                bound.insert(m->name);
                NodeP body = go(m->kids[0]);
                if (!had) bound.erase(m->name);
                return fix(m->kind == Kind::mu ? Kind::nu : Kind::mu, m->name, body);
            }
        }
        return m;
    };
    return go(n);
}

// ---------------------------------------------------------------- fragments

namespace {

bool q_free(const NodeP& n, const std::set<std::string>& q) {
    for (auto& l : free_letters(n))
        if (q.count(l)) return false;
    return true;
}

// Shared grammar walker: `least` selects the noetherian/continuous side,
// `cont` the continuous variant.
bool in_fragment(const NodeP& n, const std::set<std::string>& q, bool least, bool cont) {
    if (q_free(n, q)) return true;
    switch (n->kind) {
        case Kind::prop: return true;
        case Kind::neg_prop: return false;
        case Kind::conj:
        case Kind::disj:
            for (auto& k : n->kids)
                if (!in_fragment(k, q, least, cont)) return false;
            return true;
        case Kind::modal: {
            os::Type b = 0;
            for (std::size_t i = 0; i < n->kids.size(); ++i) {
                if (q_free(n->kids[i], q)) continue;
                b |= os::Type(1) << i;
                if (!in_fragment(n->kids[i], q, least, cont)) return false;
            }
            if (!cont) return true;
            return least ? os::in_cont(n->alpha, b) : os::in_cocont(n->alpha, b);
        }
        case Kind::mu:
        case Kind::nu: {
            if ((n->kind == Kind::mu) != least) return false;
            auto q2 = q;
            q2.insert(n->name);
            return in_fragment(n->kids[0], q2, least, cont);
        }
    }
    return false;
}

bool in_alt_free(const NodeP& n, bool cont) {
    switch (n->kind) {
        case Kind::prop:
        case Kind::neg_prop: return true;
        case Kind::mu:
        case Kind::nu:
            return in_alt_free(n->kids[0], cont) &&
                   in_fragment(n->kids[0], {n->name}, n->kind == Kind::mu, cont);
        default:
            for (auto& k : n->kids)
                if (!in_alt_free(k, cont)) return false;
            return true;
    }
}

bool is_standard_modal(const NodeP& n) {
    if (n->kind == Kind::modal) {
        bool ok = (n->kids.empty() && (n->alpha->kind == os::Kind::top || n->alpha->kind == os::Kind::bot)) ||
                  (n->kids.size() == 1 && (os::same(n->alpha, dia_alpha()) || os::same(n->alpha, box_alpha())));
        if (!ok) return false;
    }
    for (auto& k : n->kids)
        if (!is_standard_modal(k)) return false;
    return true;
}

// Does `var` occur in `n` outside every modality?
bool occurs_unguarded(const NodeP& n, const std::string& var) {
    switch (n->kind) {
        case Kind::prop: return n->name == var;
        case Kind::modal: return false;
        default:
            for (auto& k : n->kids)
                if (occurs_unguarded(k, var)) return true;
            return false;
    }
}

}  // namespace

bool in_noe(const NodeP& n, const std::set<std::string>& q) { return in_fragment(n, q, true, false); }
bool in_conoe(const NodeP& n, const std::set<std::string>& q) { return in_fragment(n, q, false, false); }
bool in_cont(const NodeP& n, const std::set<std::string>& q) { return in_fragment(n, q, true, true); }
bool in_cocont(const NodeP& n, const std::set<std::string>& q) { return in_fragment(n, q, false, true); }
bool in_mu_d(const NodeP& n) { return in_alt_free(n, false); }
bool in_mu_c(const NodeP& n) { return in_alt_free(n, true); }

bool is_guarded(const NodeP& n) {
    if (is_fix(n) && occurs_unguarded(n->kids[0], n->name)) return false;
    for (auto& k : n->kids)
        if (!is_guarded(k)) return false;
    return true;
}

FragmentReport classify(const NodeP& n) {
    FragmentReport r;
    r.in_muML = is_standard_modal(n);
    r.in_mu_D = in_mu_d(n);
    r.in_mu_C = in_mu_c(n);
    r.guarded = is_guarded(n);
    std::function<void(const NodeP&)> go = [&](const NodeP& m) {
        if (is_fix(m)) {
            BinderInfo b;
            b.var = m->name;
            b.least = m->kind == Kind::mu;
            b.noetherian = in_fragment(m->kids[0], {m->name}, b.least, false);
            b.continuous = in_fragment(m->kids[0], {m->name}, b.least, true);
            r.binders.push_back(b);
        }
        for (auto& k : m->kids) go(k);
    };
    go(n);
    return r;
}

// ---------------------------------------------------------------- guarded transform

namespace {

// Unfolds every fixpoint that sits outside all modalities.
NodeP unfold_unguarded(const NodeP& n) {
    switch (n->kind) {
        case Kind::mu:
        case Kind::nu: return unfold_unguarded(replace_raw(n->kids[0], {{n->name, n}}));
        case Kind::conj:
        case Kind::disj: {
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(unfold_unguarded(k));
            return n->kind == Kind::conj ? conj(kids) : disj(kids);
        }
        default: return n;
    }
}

NodeP drop_unguarded(const NodeP& n, const std::string& var, const NodeP& with) {
    switch (n->kind) {
        case Kind::prop: return n->name == var ? with : n;
        case Kind::conj:
        case Kind::disj: {
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(drop_unguarded(k, var, with));
            return n->kind == Kind::conj ? conj(kids) : disj(kids);
        }
        default: return n;
    }
}

NodeP guard_rec(const NodeP& n) {
    switch (n->kind) {
        case Kind::mu:
        case Kind::nu: {
            NodeP body = guard_rec(n->kids[0]);
            if (occurs_unguarded(body, n->name)) {
                body = unfold_unguarded(body);
                body = drop_unguarded(body, n->name, n->kind == Kind::mu ? bot() : top());
            }
            return fix(n->kind, n->name, body);
        }
        case Kind::conj:
        case Kind::disj: {
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(guard_rec(k));
            return n->kind == Kind::conj ? conj(kids) : disj(kids);
        }
        case Kind::modal: {
            if (n->kids.empty()) return n;
            std::vector<NodeP> kids;
            for (auto& k : n->kids) kids.push_back(guard_rec(k));
            return rebuild(n, std::move(kids));
        }
        default: return n;
    }
}

}  // namespace

NodeP guard_transform(const NodeP& n) { return rename_apart(guard_rec(rename_apart(n))); }

// ---------------------------------------------------------------- diamonds and boxes

namespace {

NodeP conj_of(os::Type s, const std::vector<NodeP>& args) {
    std::vector<NodeP> parts;
    for (std::size_t i = 0; i < args.size(); ++i)
        if ((s >> i) & 1u) parts.push_back(args[i]);
    return conj(parts);
}

NodeP disj_of(os::Type s, const std::vector<NodeP>& args) {
    std::vector<NodeP> parts;
    for (std::size_t i = 0; i < args.size(); ++i)
        if ((s >> i) & 1u) parts.push_back(args[i]);
    return disj(parts);
}

}  // namespace

NodeP fo1_modal_bridge(const NodeP& n0) {
    NodeP n = rename_apart(n0);
    std::map<std::string, bool> least;  // binder kind per bound letter
    std::function<void(const NodeP&)> scan = [&](const NodeP& m) {
        if (is_fix(m)) least[m->name] = m->kind == Kind::mu;
        for (auto& k : m->kids) scan(k);
    };
    scan(n);
    std::function<NodeP(const NodeP&)> go = [&](const NodeP& m) -> NodeP {
        switch (m->kind) {
            case Kind::prop:
            case Kind::neg_prop: return m;
            case Kind::conj:
            case Kind::disj: {
                std::vector<NodeP> kids;
                for (auto& k : m->kids) kids.push_back(go(k));
                return m->kind == Kind::conj ? conj(kids) : disj(kids);
            }
            case Kind::mu:
            case Kind::nu: return fix(m->kind, m->name, go(m->kids[0]));
            case Kind::modal: break;
        }
        if (os::min_dialect(m->alpha) != os::Dialect::fo1) fail("modality outside FO1: " + to_string(m));
        std::vector<NodeP> args;
        for (auto& k : m->kids) args.push_back(go(k));
        if (is_top(m) || is_bot(m)) return m;
        if (args.size() == 1 && (os::same(m->alpha, dia_alpha()) || os::same(m->alpha, box_alpha())))
            return modal(m->alpha, args);
        // Arguments mentioning bound letters, and the kind of those letters.
        os::Type b = 0;
        int kinds = 0;
        for (std::size_t i = 0; i < m->kids.size(); ++i)
            for (auto& l : free_letters(m->kids[i])) {
                auto it = least.find(l);
                if (it == least.end()) continue;
                b |= os::Type(1) << i;
                kinds |= it->second ? 1 : 2;
            }
        std::vector<std::string> names;
        for (std::size_t i = 0; i < std::max<std::size_t>(m->kids.size(), 1); ++i) names.push_back("a" + std::to_string(i + 1));
        os::Formula alpha{os::Dialect::fo1, names, m->alpha};
        if (kinds == 2 && os::in_cocont(m->alpha, b) && !os::in_cont(m->alpha, b)) {
            // Co-continuous: normalize the dual continuously and dualize back.
            os::BasicForm bf;
            try {
                bf = os::to_continuous_basic_form(os::dual(alpha), b);
            } catch (const Error&) {
                bf = os::to_basic_form(os::dual(alpha));
            }
            std::vector<NodeP> conjuncts;
            for (auto& r : bf.disjuncts) {
                std::vector<NodeP> parts;
                for (os::Type s : r.wit) parts.push_back(box(disj_of(s, args)));
                std::vector<NodeP> inner;
                for (os::Type s : r.pi) inner.push_back(disj_of(s, args));
                parts.push_back(dia(conj(inner)));
                conjuncts.push_back(disj(parts));
            }
            return conj(conjuncts);
        }
        os::BasicForm bf;
        if (kinds == 1 && os::in_cont(m->alpha, b)) {
            try {
                bf = os::to_continuous_basic_form(alpha, b);
            } catch (const Error&) {
                bf = os::to_basic_form(alpha);
            }
        } else {
            bf = os::to_basic_form(alpha);
        }
        std::vector<NodeP> disjuncts;
        for (auto& r : bf.disjuncts) {
            std::vector<NodeP> parts;
            for (os::Type s : r.wit) parts.push_back(dia(conj_of(s, args)));
            std::vector<NodeP> cover;
            for (os::Type s : r.pi) cover.push_back(conj_of(s, args));
            parts.push_back(box(disj(cover)));
            disjuncts.push_back(conj(parts));
        }
        return disj(disjuncts);
    };
    return rename_apart(go(n));
}

}  // namespace wb::mu
