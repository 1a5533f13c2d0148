#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "wb/onestep.hpp"

namespace wb::onestep {

bool Nabla::operator<(const Nabla& o) const {
    return std::tie(wit, pi, sigma) < std::tie(o.wit, o.pi, o.sigma);
}

std::string type_to_string(Type t, const std::vector<std::string>& preds) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < max_preds; ++i) {
        if (!((t >> i) & 1u)) continue;
        if (!first) s += ",";
        s += i < static_cast<int>(preds.size()) ? preds[i] : "p" + std::to_string(i);
        first = false;
    }
    return s + "}";
}

namespace {

using Recs = std::vector<Nabla>;

bool subset(Type a, Type b) { return (a & ~b) == 0; }

void sort_unique(std::vector<Type>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Keeps the subset-minimal members of `v`, also dropping any member that has a
// proper or equal subset in `extra`.
void keep_minimal(std::vector<Type>& v, const std::vector<Type>& extra) {
    sort_unique(v);
    std::vector<Type> out;
    for (Type s : v) {
        bool drop = false;
        for (Type r : v)
            if (r != s && subset(r, s)) drop = true;
        for (Type r : extra)
            if (subset(r, s)) drop = true;
        if (!drop) out.push_back(s);
    }
    v = std::move(out);
}

void keep_maximal(std::vector<Type>& v) {
    sort_unique(v);
    std::vector<Type> out;
    for (Type s : v) {
        bool drop = false;
        for (Type r : v)
            if (r != s && subset(s, r)) drop = true;
        if (!drop) out.push_back(s);
    }
    v = std::move(out);
}

void canon(Dialect d, Nabla& r) {
    if (d == Dialect::fo1) {
        keep_maximal(r.wit);
        keep_minimal(r.pi, {});
        r.sigma.clear();
        return;
    }
    std::sort(r.wit.begin(), r.wit.end());
    sort_unique(r.sigma);
    keep_minimal(r.pi, r.sigma);
}

std::vector<Type> cover_set(const Nabla& r) {
    std::vector<Type> p = r.pi;
    p.insert(p.end(), r.sigma.begin(), r.sigma.end());
    sort_unique(p);
    return p;
}

bool covered(Type t, const std::vector<Type>& by) {
    for (Type s : by)
        if (subset(s, t)) return true;
    return false;
}

}  // namespace

// ---------------------------------------------------------------- expansion and semantics

NodeP nabla_node(Dialect d, const Nabla& r) {
    if (d == Dialect::fo1) {
        std::vector<NodeP> parts;
        for (Type s : r.wit) parts.push_back(quant(Kind::exists, 0, tau(s, 0)));
        std::vector<NodeP> cov;
        for (Type s : r.pi) cov.push_back(tau(s, 0));
        parts.push_back(quant(Kind::forall, 0, disj(cov)));
        return conj(parts);
    }
    const int n = static_cast<int>(r.wit.size());
    const int z = n;
    std::vector<NodeP> body;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) body.push_back(neq(i, j));
    for (int i = 0; i < n; ++i) body.push_back(tau(r.wit[i], i));
    std::vector<NodeP> first;
    for (int i = 0; i < n; ++i) first.push_back(eq(z, i));
    for (Type s : r.pi) first.push_back(tau(s, z));
    if (d == Dialect::foe1) {
        body.push_back(quant(Kind::forall, z, disj(first)));
    } else {
        std::vector<NodeP> inf;
        for (Type s : r.sigma) inf.push_back(tau(s, z));
        body.push_back(w_node(z, disj(first), disj(inf)));
    }
    NodeP m = conj(body);
    for (int i = n - 1; i >= 0; --i) m = quant(Kind::exists, i, m);
    if (d == Dialect::foe1) return m;
    std::vector<NodeP> parts{m};
    for (Type s : r.sigma) parts.push_back(quant(Kind::exists_inf, 0, tau(s, 0)));
    return conj(parts);
}

Formula expand(const BasicForm& bf) {
    std::vector<NodeP> ds;
    for (auto& r : bf.disjuncts) ds.push_back(nabla_node(bf.dialect, r));
    return Formula{bf.dialect, bf.preds, disj(ds)};
}

bool nabla_holds(Dialect d, const Nabla& r, const WeightedModel& w) {
    if (d == Dialect::fo1) {
        for (Type s : r.wit) {
            bool found = false;
            for (auto& [t, m] : w.mult)
                if (m != 0 && subset(s, t)) found = true;
            if (!found) return false;
        }
        for (auto& [t, m] : w.mult)
            if (m != 0 && !covered(t, r.pi)) return false;
        return true;
    }
    const auto cov = cover_set(r);
    if (d == Dialect::foe1inf) {
        for (Type s : r.sigma) {
            bool found = false;
            for (auto& [t, m] : w.mult)
                if (m == omega && subset(s, t)) found = true;
            if (!found) return false;
        }
        for (auto& [t, m] : w.mult)
            if (m == omega && !covered(t, r.sigma)) return false;
    }
    std::vector<int> rem;
    for (auto& [t, m] : w.mult) rem.push_back(m);
    std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
        if (i == r.wit.size()) {
            for (std::size_t j = 0; j < rem.size(); ++j)
                if (rem[j] != 0 && !covered(w.mult[j].first, cov)) return false;
            return true;
        }
        for (std::size_t j = 0; j < rem.size(); ++j) {
            if (rem[j] == 0 || !subset(r.wit[i], w.mult[j].first)) continue;
            if (rem[j] != omega) --rem[j];
            bool ok = assign(i + 1);
            if (rem[j] != omega) ++rem[j];
            if (ok) return true;
        }
        return false;
    };
    return assign(0);
}

// Sound implication test used for pruning; exact for the records produced here.
bool nabla_implies(Dialect d, const Nabla& a, const Nabla& b) {
    if (d == Dialect::fo1) {
        for (Type r : a.pi)
            if (!covered(r, b.pi)) return false;
        for (Type s : b.wit) {
            bool ok = false;
            for (Type s2 : a.wit) {
                bool all = true;
                for (Type r : a.pi)
                    if (!subset(s, s2 | r)) all = false;
                if (all) ok = true;
            }
            if (!ok) return false;
        }
        return true;
    }
    WeightedModel canon_model;
    canon_model.cap = 1 << 20;
    std::map<Type, int> counts;
    for (Type t : a.wit) ++counts[t];
    for (Type t : a.sigma) counts[t] = omega;
    for (auto& [t, c] : counts) canon_model.mult.emplace_back(t, c);
    if (!nabla_holds(d, b, canon_model)) return false;
    const auto cov_b = d == Dialect::foe1 ? b.pi : cover_set(b);
    for (Type s : a.pi)
        if (!covered(s, cov_b)) return false;
    return true;
}

namespace {

bool fo1_unsat(const Nabla& r) { return r.pi.empty() && !r.wit.empty(); }

void prune(Dialect d, Recs& rs) {
    Recs kept;
    for (auto& r0 : rs) {
        Nabla r = r0;
        canon(d, r);
        if (d == Dialect::fo1 && fo1_unsat(r)) continue;
        bool implied = false;
        for (auto& k : kept)
            if (k == r || nabla_implies(d, r, k)) {
                implied = true;
                break;
            }
        if (implied) continue;
        Recs next;
        for (auto& k : kept)
            if (!nabla_implies(d, k, r)) next.push_back(k);
        next.push_back(r);
        kept = std::move(next);
    }
    std::sort(kept.begin(), kept.end());
    rs = std::move(kept);
}

// ---------------------------------------------------------------- matching expansions

std::optional<Type> tau_of(const NodeP& n, int v) {
    if (n->kind == Kind::top) return Type(0);
    if (n->kind == Kind::atom) return n->var == v ? std::optional<Type>(Type(1) << n->pred) : std::nullopt;
    if (n->kind != Kind::conj) return std::nullopt;
    Type t = 0;
    for (auto& k : n->kids) {
        if (k->kind != Kind::atom || k->var != v) return std::nullopt;
        t |= Type(1) << k->pred;
    }
    return t;
}

struct CoverParts {
    std::vector<Type> types;
    std::set<int> eqs;
};

std::optional<CoverParts> cover_of(const NodeP& n, int v) {
    CoverParts c;
    if (n->kind == Kind::bot) return c;
    std::vector<NodeP> kids = n->kind == Kind::disj ? n->kids : std::vector<NodeP>{n};
    for (auto& k : kids) {
        if (k->kind == Kind::eq && (k->var == v || k->var2 == v)) {
            c.eqs.insert(k->var == v ? k->var2 : k->var);
            continue;
        }
        auto t = tau_of(k, v);
        if (!t) return std::nullopt;
        c.types.push_back(*t);
    }
    return c;
}

std::vector<NodeP> conjuncts(const NodeP& n) { return n->kind == Kind::conj ? n->kids : std::vector<NodeP>{n}; }

}  // namespace

std::optional<Nabla> match_nabla(Dialect d, const NodeP& n) {
    Nabla r;
    auto parts = conjuncts(n);
    if (d == Dialect::fo1) {
        bool have_cover = false;
        for (auto& p : parts) {
            if (p->kind == Kind::exists) {
                auto t = tau_of(p->kids[0], p->var);
                if (!t) return std::nullopt;
                r.wit.push_back(*t);
            } else if (p->kind == Kind::forall && !have_cover) {
                auto c = cover_of(p->kids[0], p->var);
                if (!c || !c->eqs.empty()) return std::nullopt;
                r.pi = c->types;
                have_cover = true;
            } else {
                return std::nullopt;
            }
        }
        if (!have_cover) r.pi = {0};
        canon(d, r);
        return r;
    }
    std::vector<Type> inf;
    NodeP main;
    for (auto& p : parts) {
        if (p->kind == Kind::exists_inf && d == Dialect::foe1inf) {
            auto t = tau_of(p->kids[0], p->var);
            if (!t) return std::nullopt;
            inf.push_back(*t);
        } else if (!main) {
            main = p;
        } else {
            return std::nullopt;
        }
    }
    if (!main) return std::nullopt;
    std::vector<int> xs;
    NodeP m = main;
    while (m->kind == Kind::exists) {
        if (std::find(xs.begin(), xs.end(), m->var) != xs.end()) return std::nullopt;
        xs.push_back(m->var);
        m = m->kids[0];
    }
    std::map<int, Type> wit;
    for (int x : xs) wit[x] = 0;
    std::set<std::pair<int, int>> diff;
    NodeP last;
    for (auto& p : conjuncts(m)) {
        if (p->kind == Kind::neq && wit.count(p->var) && wit.count(p->var2) && p->var != p->var2) {
            diff.insert(std::minmax(p->var, p->var2));
        } else if (p->kind == Kind::atom && wit.count(p->var)) {
            wit[p->var] |= Type(1) << p->pred;
        } else if (!last && (p->kind == Kind::forall || p->kind == Kind::w) && !wit.count(p->var)) {
            last = p;
        } else {
            return std::nullopt;
        }
    }
    if (!last || diff.size() != xs.size() * (xs.size() - (xs.empty() ? 0 : 1)) / 2) return std::nullopt;
    if ((last->kind == Kind::w) != (d == Dialect::foe1inf)) return std::nullopt;
    auto first = cover_of(last->kids[0], last->var);
    if (!first) return std::nullopt;
    bool trivial = std::find(first->types.begin(), first->types.end(), Type(0)) != first->types.end();
    if (d == Dialect::foe1inf && last->kids[1]->kind == Kind::top) trivial = true;
    for (int x : xs)
        if (!first->eqs.count(x) && !trivial) return std::nullopt;
    for (int e : first->eqs)
        if (!wit.count(e)) return std::nullopt;
    for (auto& [x, t] : wit) r.wit.push_back(t);
    r.pi = first->types;
    if (d == Dialect::foe1inf) {
        sort_unique(inf);
        if (last->kids[1]->kind == Kind::top) {
            // The empty type absorbed the other infinite types; the counting conjuncts still list them.
            if (std::find(inf.begin(), inf.end(), Type(0)) == inf.end()) return std::nullopt;
            r.sigma = inf;
            r.pi.insert(r.pi.end(), inf.begin(), inf.end());
            sort_unique(r.pi);
        } else {
            auto second = cover_of(last->kids[1], last->var);
            if (!second || !second->eqs.empty()) return std::nullopt;
            r.sigma = second->types;
            sort_unique(r.sigma);
            if (inf != r.sigma) return std::nullopt;
        }
    }
    canon(d, r);
    return r;
}

std::optional<BasicForm> match_basic_form(const Formula& f) {
    BasicForm bf{f.dialect, f.preds, {}};
    if (f.root->kind == Kind::bot) return bf;
    std::vector<NodeP> ds = f.root->kind == Kind::disj ? f.root->kids : std::vector<NodeP>{f.root};
    for (auto& dn : ds) {
        auto r = match_nabla(f.dialect, dn);
        if (!r) return std::nullopt;
        bf.disjuncts.push_back(*r);
    }
    return bf;
}

// ---------------------------------------------------------------- normalization

namespace {

constexpr long profile_limit = 200000;

struct Normalizer {
    Dialect d;

    Nabla rec(std::vector<Type> wit, std::vector<Type> pi, std::vector<Type> sigma = {}) {
        Nabla r{std::move(wit), std::move(pi), std::move(sigma)};
        canon(d, r);
        return r;
    }

    Recs top_recs() {
        if (d == Dialect::foe1inf) return {rec({}, {0}, {}), rec({}, {}, {0})};
        return {rec({}, {0})};
    }

    static std::vector<std::vector<Type>> nonempty_subsets(const std::vector<Type>& v) {
        std::vector<std::vector<Type>> out;
        if (v.size() > 16) fail_limit("normalization: cover too large");
        for (unsigned m = 1; m < (1u << v.size()); ++m) {
            std::vector<Type> s;
            for (std::size_t i = 0; i < v.size(); ++i)
                if ((m >> i) & 1u) s.push_back(v[i]);
            out.push_back(s);
        }
        return out;
    }

    Recs exists1(Type u) {
        if (d == Dialect::fo1) return {rec({u}, {0})};
        if (d == Dialect::foe1) return {rec({u}, {0})};
        return {rec({u}, {0}, {}), rec({u}, {}, {0})};
    }

    Recs forall1(std::vector<Type> cov) {
        sort_unique(cov);
        if (d != Dialect::foe1inf) return {rec({}, cov)};
        Recs out{rec({}, cov, {})};
        for (auto& s : nonempty_subsets(cov)) out.push_back(rec({}, cov, s));
        return out;
    }

    Recs exists_inf1(Type u) { return {rec({}, {}, {0, u})}; }

    Recs forall_inf1(std::vector<Type> cov) {
        sort_unique(cov);
        Recs out{rec({}, {0}, {})};
        for (auto& s : nonempty_subsets(cov)) out.push_back(rec({}, {0}, s));
        return out;
    }

    // ------------------------------------------------------------ conjunction

    Recs merge(const Nabla& a, const Nabla& b) {
        if (d == Dialect::fo1) {
            Nabla r;
            r.wit = a.wit;
            r.wit.insert(r.wit.end(), b.wit.begin(), b.wit.end());
            for (Type s : a.pi)
                for (Type t : b.pi) r.pi.push_back(s | t);
            canon(d, r);
            if (fo1_unsat(r)) return {};
            return {r};
        }
        const bool inf = d == Dialect::foe1inf;
        if (inf && (a.sigma.empty() != b.sigma.empty())) return {};
        const auto pa = inf ? cover_set(a) : a.pi;
        const auto pb = inf ? cover_set(b) : b.pi;
        std::vector<Type> pi;
        for (Type s : pa)
            for (Type t : pb) pi.push_back(s | t);
        std::vector<std::vector<Type>> sigmas;
        if (!inf || a.sigma.empty()) {
            sigmas.push_back({});
        } else {
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t i = 0; i < a.sigma.size(); ++i)
                for (std::size_t j = 0; j < b.sigma.size(); ++j) pairs.emplace_back(i, j);
            if (pairs.size() > 16) fail_limit("normalization: infinite blocks too large");
            for (unsigned m = 1; m < (1u << pairs.size()); ++m) {
                std::vector<char> ua(a.sigma.size(), 0), ub(b.sigma.size(), 0);
                std::vector<Type> s;
                for (std::size_t k = 0; k < pairs.size(); ++k)
                    if ((m >> k) & 1u) {
                        ua[pairs[k].first] = ub[pairs[k].second] = 1;
                        s.push_back(a.sigma[pairs[k].first] | b.sigma[pairs[k].second]);
                    }
                if (std::count(ua.begin(), ua.end(), 0) || std::count(ub.begin(), ub.end(), 0)) continue;
                sort_unique(s);
                sigmas.push_back(s);
            }
            std::sort(sigmas.begin(), sigmas.end());
            sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
        }
        // Witness lists: partial matchings of the two witness lists.
        std::set<std::vector<Type>> wits;
        std::vector<char> used(b.wit.size(), 0);
        std::vector<Type> cur;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == a.wit.size()) {
                std::vector<std::size_t> rest;
                for (std::size_t j = 0; j < b.wit.size(); ++j)
                    if (!used[j]) rest.push_back(j);
                std::function<void(std::size_t)> fill = [&](std::size_t k) {
                    if (k == rest.size()) {
                        auto w = cur;
                        std::sort(w.begin(), w.end());
                        wits.insert(w);
                        if (wits.size() > 20000) fail_limit("normalization: witness merge too large");
                        return;
                    }
                    for (Type s : pa) {
                        cur.push_back(b.wit[rest[k]] | s);
                        fill(k + 1);
                        cur.pop_back();
                    }
                };
                fill(0);
                return;
            }
            for (Type s : pb) {
                cur.push_back(a.wit[i] | s);
                go(i + 1);
                cur.pop_back();
            }
            for (std::size_t j = 0; j < b.wit.size(); ++j) {
                if (used[j]) continue;
                used[j] = 1;
                cur.push_back(a.wit[i] | b.wit[j]);
                go(i + 1);
                cur.pop_back();
                used[j] = 0;
            }
        };
        go(0);
        Recs out;
        for (auto& w : wits)
            for (auto& s : sigmas) out.push_back(rec(w, pi, s));
        return out;
    }

    Recs conj_recs(const Recs& a, const Recs& b) {
        Recs out;
        for (auto& x : a)
            for (auto& y : b) {
                auto m = merge(x, y);
                out.insert(out.end(), m.begin(), m.end());
            }
        prune(d, out);
        return out;
    }

    // ------------------------------------------------------------ formulas

    Recs go(const NodeP& n) {
        switch (n->kind) {
            case Kind::top: return top_recs();
            case Kind::bot: return {};
            case Kind::disj: {
                if (auto r = match_nabla(d, n)) return {*r};
                Recs out;
                for (auto& k : n->kids) {
                    auto r = go(k);
                    out.insert(out.end(), r.begin(), r.end());
                }
                prune(d, out);
                return out;
            }
            case Kind::conj: {
                if (auto r = match_nabla(d, n)) return {*r};
                Recs acc = top_recs();
                for (auto& k : n->kids) {
                    acc = conj_recs(acc, go(k));
                    if (acc.empty()) break;
                }
                return acc;
            }
            case Kind::exists:
            case Kind::forall:
            case Kind::exists_inf:
            case Kind::forall_inf:
            case Kind::w: return block(n);
            default: fail("normalization: formula is not a sentence");
        }
    }

    // Blocks are memoized up to a renaming of predicates in order of first use.
    Recs block(const NodeP& n) {
        NodeP p = pull_out(n);
        if (p->kind == Kind::conj || p->kind == Kind::disj || p->kind == Kind::top || p->kind == Kind::bot)
            return go(p);
        return block_pulled(p);
    }

    // Moves parts that do not mention the bound variable out of universal
    // disjunctions and existential conjunctions.
    static NodeP pull_out(const NodeP& n) {
        if (n->kids.empty()) return n;
        std::vector<NodeP> kids;
        bool changed = false;
        for (auto& k : n->kids) {
            kids.push_back(pull_out(k));
            changed |= kids.back() != k || k->kind == Kind::conj || k->kind == Kind::disj;
        }
        switch (n->kind) {
            case Kind::conj: return conj(kids);
            case Kind::disj: return disj(kids);
            case Kind::w: return changed ? w_node(n->var, kids[0], kids[1]) : n;
            default: break;
        }
        bool universal = n->kind == Kind::forall || n->kind == Kind::forall_inf;
        Kind joint = universal ? Kind::disj : Kind::conj;
        const NodeP& body = kids[0];
        if (body->kind != joint) return changed ? quant(n->kind, n->var, body) : n;
        std::vector<NodeP> inside, outside;
        for (auto& k : body->kids) {
            auto fv = free_vars(k);
            (std::find(fv.begin(), fv.end(), n->var) == fv.end() ? outside : inside).push_back(k);
        }
        if (outside.empty()) return changed ? quant(n->kind, n->var, body) : n;
        NodeP q = quant(n->kind, n->var, universal ? disj(inside) : conj(inside));
        outside.push_back(q);
        return universal ? disj(outside) : conj(outside);
    }

    Recs block_pulled(const NodeP& n) {
        static const std::vector<std::string> names = [] {
            std::vector<std::string> v;
            for (int i = 0; i < max_preds; ++i) v.push_back("p" + std::to_string(i));
            return v;
        }();
        std::vector<int> order;
        std::function<void(const NodeP&)> walk = [&](const NodeP& m) {
            if ((m->kind == Kind::atom || m->kind == Kind::neg_atom) &&
                std::find(order.begin(), order.end(), m->pred) == order.end())
                order.push_back(m->pred);
            for (auto& k : m->kids) walk(k);
        };
        walk(n);
        std::vector<int> to_canon(max_preds, 0);
        for (std::size_t j = 0; j < order.size(); ++j) to_canon[order[j]] = static_cast<int>(j);
        NodeP c = rename_preds(n, to_canon);
        // Shared across normalizations: constructs renormalize the same blocks many times.
        thread_local std::map<std::string, Recs> cache;
        std::string key = dialect_name(d) + ":" + node_to_string(c, names);
        auto it = cache.find(key);
        if (it == cache.end()) {
            Recs r = block_canonical(c);
            if (cache.size() > 20000) cache.clear();
            it = cache.emplace(key, std::move(r)).first;
        }
        auto back = [&](Type t) {
            Type out = 0;
            for (std::size_t j = 0; j < order.size(); ++j)
                if ((t >> j) & 1u) out |= Type(1) << order[j];
            return out;
        };
        Recs out;
        for (auto& r : it->second) {
            Nabla q;
            for (Type t : r.wit) q.wit.push_back(back(t));
            for (Type t : r.pi) q.pi.push_back(back(t));
            for (Type t : r.sigma) q.sigma.push_back(back(t));
            canon(d, q);
            out.push_back(q);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Recs block_canonical(const NodeP& n) {
        if (auto m = match_nabla(d, n)) return {*m};
        if (n->kind == Kind::w) return go(expand_w(n));
        if (auto ms = miniscope(n)) return *ms;
        return profile(n);
    }

    // Disjunctive form of a body relative to the bound variable: pairs of an
    // x-type and a conjunction of closed sentences.
    using Item = std::pair<Type, std::vector<NodeP>>;

    std::optional<std::vector<Item>> dnf(const NodeP& n, int x) {
        switch (n->kind) {
            case Kind::atom:
                if (n->var != x) return std::nullopt;
                return std::vector<Item>{{Type(1) << n->pred, {}}};
            case Kind::eq:
                if (n->var == x && n->var2 == x) return std::vector<Item>{{0, {}}};
                return std::nullopt;
            case Kind::neq:
                if (n->var == x && n->var2 == x) return std::vector<Item>{};
                return std::nullopt;
            case Kind::top: return std::vector<Item>{{0, {}}};
            case Kind::bot: return std::vector<Item>{};
            case Kind::disj: {
                std::vector<Item> out;
                for (auto& k : n->kids) {
                    auto r = dnf(k, x);
                    if (!r) return std::nullopt;
                    out.insert(out.end(), r->begin(), r->end());
                }
                return out;
            }
            case Kind::conj: {
                std::vector<Item> acc{{0, {}}};
                for (auto& k : n->kids) {
                    auto r = dnf(k, x);
                    if (!r) return std::nullopt;
                    std::vector<Item> next;
                    for (auto& a : acc)
                        for (auto& b : *r) {
                            Item c{a.first | b.first, a.second};
                            c.second.insert(c.second.end(), b.second.begin(), b.second.end());
                            next.push_back(std::move(c));
                        }
                    if (next.size() > 4096) return std::nullopt;
                    acc = std::move(next);
                }
                return acc;
            }
            case Kind::neg_atom: fail("normalization needs a positive formula");
            default: {
                auto fv = free_vars(n);
                if (!fv.empty()) return std::nullopt;
                return std::vector<Item>{{0, {n}}};
            }
        }
    }

    std::optional<Recs> miniscope(const NodeP& n) {
        auto items = dnf(n->kids[0], n->var);
        if (!items) return std::nullopt;
        Recs out;
        if (n->kind == Kind::exists || n->kind == Kind::exists_inf) {
            for (auto& [u, bs] : *items) {
                Recs r = n->kind == Kind::exists ? exists1(u) : exists_inf1(u);
                for (auto& b : bs) {
                    r = conj_recs(r, go(b));
                    if (r.empty()) break;
                }
                out.insert(out.end(), r.begin(), r.end());
            }
            prune(d, out);
            return out;
        }
        std::vector<Type> always;
        std::vector<Item> cond;
        for (auto& it : *items) {
            if (it.second.empty())
                always.push_back(it.first);
            else
                cond.push_back(it);
        }
        if (cond.size() > 10) return std::nullopt;
        for (unsigned m = 0; m < (1u << cond.size()); ++m) {
            std::vector<Type> cov = always;
            std::vector<NodeP> bs;
            for (std::size_t j = 0; j < cond.size(); ++j)
                if ((m >> j) & 1u) {
                    cov.push_back(cond[j].first);
                    bs.insert(bs.end(), cond[j].second.begin(), cond[j].second.end());
                }
            Recs r = n->kind == Kind::forall ? forall1(cov) : forall_inf1(cov);
            for (auto& b : bs) {
                r = conj_recs(r, go(b));
                if (r.empty()) break;
            }
            out.insert(out.end(), r.begin(), r.end());
        }
        prune(d, out);
        return out;
    }

    // Semantic fallback: enumerate count profiles of the block. Elements are
    // grouped into classes by the maximal one-variable atom combinations they
    // satisfy; records over classes are then expanded into records over types.
    Recs profile(const NodeP& n) {
        std::vector<int> local;
        Type ps = preds_of(n);
        for (int i = 0; i < max_preds; ++i)
            if ((ps >> i) & 1u) local.push_back(i);
        if (local.size() > 6) fail_limit("normalization: too many predicates in one block");
        const int k = std::max(1, rank(n));
        std::vector<Type> types;
        for (unsigned m = 0; m < (1u << local.size()); ++m) {
            Type t = 0;
            for (std::size_t i = 0; i < local.size(); ++i)
                if ((m >> i) & 1u) t |= Type(1) << local[i];
            types.push_back(t);
        }
        // Patterns, identified by their truth tables over the local types.
        std::vector<NodeP> found;
        collect_patterns(n, found);
        std::vector<std::vector<bool>> tables;
        for (auto& pat : found) {
            std::vector<bool> tab;
            for (Type t : types) tab.push_back(local_eval(pat, t));
            if (std::find(tables.begin(), tables.end(), tab) == tables.end()) tables.push_back(tab);
        }
        if (tables.size() > 30) fail_limit("normalization: too many patterns in one block");
        std::vector<Type> sig(types.size(), 0);
        for (std::size_t i = 0; i < types.size(); ++i)
            for (std::size_t j = 0; j < tables.size(); ++j)
                if (tables[j][i]) sig[i] |= Type(1) << j;
        std::map<Type, Type> rep;  // class -> a type of that class
        for (std::size_t i = 0; i < types.size(); ++i) rep.emplace(sig[i], types[i]);
        std::vector<Type> classes;
        for (auto& [c, t] : rep) classes.push_back(c);

        std::vector<int> values;
        if (d == Dialect::fo1) {
            values = {0, 1};
        } else {
            for (int c = 0; c <= k; ++c) values.push_back(c);
            if (d == Dialect::foe1inf) values.push_back(omega);
        }
        double total = 1;
        for (std::size_t i = 0; i < classes.size(); ++i) total *= static_cast<double>(values.size());
        if (total > profile_limit) fail_limit("normalization: profile space too large");
        Recs over_classes;
        std::vector<std::size_t> idx(classes.size(), 0);
        for (;;) {
            WeightedModel w;
            w.cap = std::max(k, 1);
            for (std::size_t i = 0; i < classes.size(); ++i)
                if (values[idx[i]] != 0) w.mult.emplace_back(rep[classes[i]], values[idx[i]]);
            if (eval_node_weighted(n, w)) {
                Nabla r;
                for (std::size_t i = 0; i < classes.size(); ++i) {
                    int c = values[idx[i]];
                    if (c == 0) continue;
                    Type t = classes[i];
                    if (d == Dialect::fo1) {
                        r.wit.push_back(t);
                        r.pi.push_back(t);
                    } else if (c == omega) {
                        r.sigma.push_back(t);
                    } else {
                        for (int j = 0; j < c; ++j) r.wit.push_back(t);
                        if (c == k) r.pi.push_back(t);
                    }
                }
                canon(d, r);
                over_classes.push_back(r);
            }
            std::size_t p = 0;
            while (p < idx.size() && ++idx[p] == values.size()) idx[p++] = 0;
            if (p == idx.size()) break;
        }
        // Class records read the classes as fresh predicates, so pruning them is sound.
        prune(d, over_classes);
        // Minimal types of each upward-closed class condition.
        std::map<Type, std::vector<Type>> up;
        for (Type c : classes) {
            std::vector<Type> ts;
            for (std::size_t i = 0; i < types.size(); ++i)
                if (subset(c, sig[i])) ts.push_back(types[i]);
            keep_minimal(ts, {});
            up[c] = ts;
        }
        Recs out;
        for (auto& r : over_classes) expand_record(r, up, out);
        prune(d, out);
        return out;
    }

    // Witness conditions choose one minimal type each; covers take all of them;
    // each infinite condition chooses a non-empty set of infinitely populated types.
    void expand_record(const Nabla& r, const std::map<Type, std::vector<Type>>& up, Recs& out) {
        std::vector<Type> pi;
        for (Type c : r.pi)
            for (Type t : up.at(c)) pi.push_back(t);
        for (Type c : r.sigma)
            for (Type t : up.at(c)) pi.push_back(t);
        std::vector<std::vector<std::vector<Type>>> sigma_choices;
        for (Type c : r.sigma) {
            const auto& u = up.at(c);
            if (u.size() > 8) fail_limit("normalization: class expansion too large");
            std::vector<std::vector<Type>> opts;
            for (unsigned m = 1; m < (1u << u.size()); ++m) {
                std::vector<Type> s;
                for (std::size_t i = 0; i < u.size(); ++i)
                    if ((m >> i) & 1u) s.push_back(u[i]);
                opts.push_back(s);
            }
            sigma_choices.push_back(opts);
        }
        double count = 1;
        for (Type c : r.wit) count *= static_cast<double>(up.at(c).size());
        for (auto& o : sigma_choices) count *= static_cast<double>(o.size());
        if (count > 20000) fail_limit("normalization: class expansion too large");
        std::vector<Type> wit(r.wit.size());
        std::vector<Type> sigma;
        std::function<void(std::size_t)> choose_sigma = [&](std::size_t i) {
            if (i == sigma_choices.size()) {
                Nabla q{wit, pi, sigma};
                canon(d, q);
                out.push_back(q);
                return;
            }
            for (auto& opt : sigma_choices[i]) {
                std::size_t before = sigma.size();
                sigma.insert(sigma.end(), opt.begin(), opt.end());
                choose_sigma(i + 1);
                sigma.resize(before);
            }
        };
        std::function<void(std::size_t)> choose_wit = [&](std::size_t i) {
            if (i == r.wit.size()) {
                choose_sigma(0);
                return;
            }
            for (Type t : up.at(r.wit[i])) {
                wit[i] = t;
                choose_wit(i + 1);
            }
        };
        choose_wit(0);
    }

    // Variable of a positive combination of atoms on one variable; -2 for
    // constant combinations, -1 otherwise.
    static int local_var(const NodeP& n) {
        switch (n->kind) {
            case Kind::atom: return n->var;
            case Kind::top:
            case Kind::bot: return -2;
            case Kind::conj:
            case Kind::disj: {
                int v = -2;
                for (auto& k : n->kids) {
                    int kv = local_var(k);
                    if (kv == -1) return -1;
                    if (kv == -2) continue;
                    if (v != -2 && v != kv) return -1;
                    v = kv;
                }
                return v;
            }
            default: return -1;
        }
    }

    // Maximal one-variable combinations; local children of a connective are
    // grouped per variable.
    static void collect_patterns(const NodeP& n, std::vector<NodeP>& out) {
        if (local_var(n) >= 0) {
            out.push_back(n);
            return;
        }
        if (n->kind == Kind::conj || n->kind == Kind::disj) {
            std::map<int, std::vector<NodeP>> groups;
            for (auto& k : n->kids) {
                int v = local_var(k);
                if (v >= 0)
                    groups[v].push_back(k);
                else
                    collect_patterns(k, out);
            }
            for (auto& [v, g] : groups) out.push_back(n->kind == Kind::conj ? conj(g) : disj(g));
            return;
        }
        for (auto& k : n->kids) collect_patterns(k, out);
    }

    static bool local_eval(const NodeP& n, Type t) {
        switch (n->kind) {
            case Kind::atom: return (t >> n->pred) & 1u;
            case Kind::top: return true;
            case Kind::bot: return false;
            case Kind::conj:
                for (auto& k : n->kids)
                    if (!local_eval(k, t)) return false;
                return true;
            case Kind::disj:
                for (auto& k : n->kids)
                    if (local_eval(k, t)) return true;
                return false;
            default: return false;
        }
    }
};

// Rewrites FOE1 records so that the cover is contained in the witness list.
Recs complete_foe1(const Recs& rs) {
    Recs out;
    for (auto& r : rs) {
        std::vector<Type> in, extra;
        for (Type s : r.pi) (std::find(r.wit.begin(), r.wit.end(), s) != r.wit.end() ? in : extra).push_back(s);
        if (extra.size() > 12) fail_limit("normalization: cover too large");
        for (unsigned m = 0; m < (1u << extra.size()); ++m) {
            Nabla q;
            q.wit = r.wit;
            q.pi = in;
            for (std::size_t i = 0; i < extra.size(); ++i)
                if ((m >> i) & 1u) {
                    q.wit.push_back(extra[i]);
                    q.pi.push_back(extra[i]);
                }
            std::sort(q.wit.begin(), q.wit.end());
            sort_unique(q.pi);
            out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

BasicForm to_basic_form(const Formula& f) {
    check_dialect(f);
    if (!is_positive(f.root)) fail("normal form needs a positive sentence");
    if (!free_vars(f.root).empty()) fail("free variable at top level");
    Normalizer nz{f.dialect};
    Recs rs = nz.go(f.root);
    if (f.dialect == Dialect::foe1) rs = complete_foe1(rs);
    return BasicForm{f.dialect, f.preds, rs};
}

BasicForm to_continuous_basic_form(const Formula& f, Type b) {
    const int bound = rank(f.root) + 1;
    auto not_cont = [] { fail("not B-continuous"); };
    if (f.dialect == Dialect::fo1) {
        BasicForm bf = to_basic_form(f);
        for (auto& r : bf.disjuncts) {
            std::vector<Type> keep;
            for (Type s : r.pi)
                if (!(s & b)) keep.push_back(s);
            r.pi = keep;
        }
        Recs rs = bf.disjuncts;
        prune(Dialect::fo1, rs);
        bf.disjuncts = rs;
        if (!equivalent(expand(bf), f, bound)) not_cont();
        return bf;
    }
    Formula g = f;
    g.dialect = Dialect::foe1inf;
    BasicForm bf = to_basic_form(g);
    Recs keep;
    for (auto& r : bf.disjuncts) {
        bool meets = false;
        for (Type s : r.sigma)
            if (s & b) meets = true;
        if (!meets) keep.push_back(r);
    }
    bf.disjuncts = keep;
    if (!equivalent(expand(bf), g, bound)) not_cont();
    if (f.dialect == Dialect::foe1) return to_basic_form(f);
    return bf;
}

bool separating_sufficient(const BasicForm& bf, Type b) {
    for (auto& r : bf.disjuncts) {
        for (Type s : r.wit)
            if (popcount64(s & b) > 1) return false;
        for (Type s : r.pi)
            if (popcount64(s & b) > 1) return false;
        for (Type s : r.sigma)
            if (popcount64(s & b) > 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------- equivalence

bool equivalent(const Formula& a0, const Formula& b0, int bound) {
    // Align the two signatures by predicate name.
    std::vector<std::string> preds = a0.preds;
    std::vector<int> map_b;
    for (auto& p : b0.preds) {
        auto it = std::find(preds.begin(), preds.end(), p);
        if (it == preds.end()) {
            preds.push_back(p);
            it = preds.end() - 1;
        }
        map_b.push_back(static_cast<int>(it - preds.begin()));
    }
    if (static_cast<int>(preds.size()) > max_preds) fail_limit("equivalence: too many predicates");
    NodeP a = a0.root;
    NodeP b = rename_preds(b0.root, map_b);
    Type used = preds_of(a) | preds_of(b);
    std::vector<int> local;
    for (int i = 0; i < max_preds; ++i)
        if ((used >> i) & 1u) local.push_back(i);
    if (local.size() > 4) fail_limit("equivalence: too many predicates");
    std::vector<Type> types;
    for (unsigned m = 0; m < (1u << local.size()); ++m) {
        Type t = 0;
        for (std::size_t i = 0; i < local.size(); ++i)
            if ((m >> i) & 1u) t |= Type(1) << local[i];
        types.push_back(t);
    }
    // Finite models as multisets of element types.
    std::vector<Type> elems;
    std::function<bool(std::size_t, int)> finite = [&](std::size_t from, int left) -> bool {
        Model m{elems};
        if (eval_node_finite(a, m) != eval_node_finite(b, m)) return false;
        if (left == 0) return true;
        for (std::size_t i = from; i < types.size(); ++i) {
            elems.push_back(types[i]);
            bool ok = finite(i, left - 1);
            elems.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    if (!finite(0, bound)) return false;
    std::vector<int> values;
    for (int c = 0; c <= bound; ++c) values.push_back(c);
    values.push_back(omega);
    double total = 1;
    for (std::size_t i = 0; i < types.size(); ++i) total *= static_cast<double>(values.size());
    if (total > 2e6) fail_limit("equivalence: model space too large");
    const int cap = std::max({bound, rank(a), rank(b), 1});
    std::vector<std::size_t> idx(types.size(), 0);
    for (;;) {
        WeightedModel w;
        w.cap = cap;
        for (std::size_t i = 0; i < types.size(); ++i)
            if (values[idx[i]] != 0) w.mult.emplace_back(types[i], values[idx[i]]);
        if (eval_node_weighted(a, w) != eval_node_weighted(b, w)) return false;
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == values.size()) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    return true;
}

// ---------------------------------------------------------------- diamond translation

Formula diamond_translate(const BasicForm& bf) {
    if (bf.dialect == Dialect::fo1) {
        Formula f = expand(bf);
        return f;
    }
    std::vector<NodeP> ds;
    for (auto& r : bf.disjuncts) {
        std::vector<NodeP> parts;
        std::vector<Type> wit = r.wit;
        // Every infinite block type is also realized at least once.
        for (Type s : r.sigma)
            if (std::find(wit.begin(), wit.end(), s) == wit.end()) wit.push_back(s);
        sort_unique(wit);
        for (Type t : wit) parts.push_back(quant(Kind::exists, 0, tau(t, 0)));
        const auto& cov = bf.dialect == Dialect::foe1 ? r.pi : r.sigma;
        std::vector<NodeP> cs;
        for (Type s : cov) cs.push_back(tau(s, 0));
        parts.push_back(quant(Kind::forall, 0, disj(cs)));
        ds.push_back(conj(parts));
    }
    return Formula{Dialect::fo1, bf.preds, disj(ds)};
}

std::string basic_form_to_json_text(const BasicForm& bf) {
    using nlohmann::json;
    auto names = [&](Type t) {
        std::vector<std::string> out;
        for (int i = 0; i < max_preds; ++i)
            if ((t >> i) & 1u) out.push_back(i < static_cast<int>(bf.preds.size()) ? bf.preds[i] : "p" + std::to_string(i));
        return out;
    };
    json ds = json::array();
    for (auto& r : bf.disjuncts) {
        json j;
        json w = json::array(), p = json::array(), s = json::array();
        for (Type t : r.wit) w.push_back(names(t));
        for (Type t : r.pi) p.push_back(names(t));
        for (Type t : r.sigma) s.push_back(names(t));
        if (bf.dialect == Dialect::fo1) {
            j["witnesses"] = w;
            j["cover"] = p;
        } else {
            j["witnesses"] = w;
            j["pi"] = p;
            if (bf.dialect == Dialect::foe1inf) j["sigma"] = s;
        }
        ds.push_back(j);
    }
    json out;
    out["dialect"] = dialect_name(bf.dialect);
    out["disjuncts"] = ds;
    out["formula"] = to_string(expand(bf));
    return out.dump();
}

}  // namespace wb::onestep
