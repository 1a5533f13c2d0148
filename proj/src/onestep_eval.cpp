#include <algorithm>
#include <set>

#include "wb/onestep.hpp"

namespace wb::onestep {

Model model_from_valuation(int domain, const std::vector<std::vector<int>>& val) {
    if (domain < 0) fail("negative domain size");
    Model m;
    m.elems.assign(domain, 0);
    for (std::size_t a = 0; a < val.size(); ++a)
        for (int d : val[a]) {
            if (d < 0 || d >= domain) fail("valuation outside the domain");
            m.elems[d] |= Type(1) << a;
        }
    return m;
}

// ---------------------------------------------------------------- finite models

namespace {

struct FiniteEval {
    const Model& m;
    std::vector<int> env;

    bool go(const NodeP& n) {
        switch (n->kind) {
            case Kind::atom: return (m.elems[env[n->var]] >> n->pred) & 1u;
            case Kind::neg_atom: return !((m.elems[env[n->var]] >> n->pred) & 1u);
            case Kind::eq: return env[n->var] == env[n->var2];
            case Kind::neq: return env[n->var] != env[n->var2];
            case Kind::top: return true;
            case Kind::bot: return false;
            case Kind::conj:
                for (auto& k : n->kids)
                    if (!go(k)) return false;
                return true;
            case Kind::disj:
                for (auto& k : n->kids)
                    if (go(k)) return true;
                return false;
            case Kind::exists:
            case Kind::forall: {
                bool ex = n->kind == Kind::exists;
                int saved = env[n->var];
                bool result = !ex;
                for (int d = 0; d < static_cast<int>(m.elems.size()); ++d) {
                    env[n->var] = d;
                    if (go(n->kids[0]) == ex) {
                        result = ex;
                        break;
                    }
                }
                env[n->var] = saved;
                return result;
            }
            case Kind::exists_inf: return false;
            case Kind::forall_inf: return true;
            case Kind::w: return go(expand_w(n));
        }
        return false;
    }
};

}  // namespace

bool eval_node_finite(const NodeP& n, const Model& m) {
    if (!free_vars(n).empty()) fail("free variable at top level");
    FiniteEval e{m, std::vector<int>(max_var(n) + 1, -1)};
    return e.go(n);
}

bool eval_finite(const Formula& f, const Model& m) {
    Type allowed = f.preds.size() >= 64 ? ~Type(0) : (Type(1) << f.preds.size()) - 1;
    if (preds_of(f.root) & ~allowed) fail("predicate outside the formula's signature");
    for (Type t : m.elems)
        if (t & ~allowed) fail("model valuation uses an unknown predicate");
    check_dialect(f);
    return eval_node_finite(f.root, m);
}

// ---------------------------------------------------------------- weighted models

namespace {

struct WeightedEval {
    const WeightedModel& w;
    std::vector<int> ty;  // per variable: index into w.mult, -1 if unbound
    std::vector<int> cp;  // per variable: copy index

    bool atom_holds(int var, int pred) const { return (w.mult[ty[var]].first >> pred) & 1u; }

    // Candidate (type, copy) values for a freshly bound variable x.
    std::vector<std::pair<int, int>> candidates(int x) const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < static_cast<int>(w.mult.size()); ++i) {
            int m = w.mult[i].second;
            if (m == 0) continue;
            std::set<int> pinned;
            for (std::size_t v = 0; v < ty.size(); ++v)
                if (static_cast<int>(v) != x && ty[v] == i) pinned.insert(cp[v]);
            for (int c : pinned) out.emplace_back(i, c);
            if (m == omega || static_cast<int>(pinned.size()) < m)
                out.emplace_back(i, pinned.empty() ? 0 : *pinned.rbegin() + 1);
        }
        return out;
    }

    // Fresh copy of an omega type, for the infinity quantifiers.
    int fresh_copy(int x, int i) const {
        int c = 0;
        for (std::size_t v = 0; v < ty.size(); ++v)
            if (static_cast<int>(v) != x && ty[v] == i) c = std::max(c, cp[v] + 1);
        return c;
    }

    bool with(int x, int i, int c, const NodeP& body) {
        int st = ty[x], sc = cp[x];
        ty[x] = i;
        cp[x] = c;
        bool r = go(body);
        ty[x] = st;
        cp[x] = sc;
        return r;
    }

    bool go(const NodeP& n) {
        switch (n->kind) {
            case Kind::atom: return atom_holds(n->var, n->pred);
            case Kind::neg_atom: return !atom_holds(n->var, n->pred);
            case Kind::eq: return ty[n->var] == ty[n->var2] && cp[n->var] == cp[n->var2];
            case Kind::neq: return !(ty[n->var] == ty[n->var2] && cp[n->var] == cp[n->var2]);
            case Kind::top: return true;
            case Kind::bot: return false;
            case Kind::conj:
                for (auto& k : n->kids)
                    if (!go(k)) return false;
                return true;
            case Kind::disj:
                for (auto& k : n->kids)
                    if (go(k)) return true;
                return false;
            case Kind::exists:
                for (auto [i, c] : candidates(n->var))
                    if (with(n->var, i, c, n->kids[0])) return true;
                return false;
            case Kind::forall:
                for (auto [i, c] : candidates(n->var))
                    if (!with(n->var, i, c, n->kids[0])) return false;
                return true;
            case Kind::exists_inf:
                for (int i = 0; i < static_cast<int>(w.mult.size()); ++i)
                    if (w.mult[i].second == omega && with(n->var, i, fresh_copy(n->var, i), n->kids[0])) return true;
                return false;
            case Kind::forall_inf:
                for (int i = 0; i < static_cast<int>(w.mult.size()); ++i)
                    if (w.mult[i].second == omega && !with(n->var, i, fresh_copy(n->var, i), n->kids[0])) return false;
                return true;
            case Kind::w: return go(expand_w(n));
        }
        return false;
    }
};

}  // namespace

bool eval_node_weighted(const NodeP& n, const WeightedModel& w) {
    if (!free_vars(n).empty()) fail("free variable at top level");
    if (rank(n) > w.cap) fail_limit("CAP too small: quantifier rank " + std::to_string(rank(n)) + " exceeds " + std::to_string(w.cap));
    for (auto& [t, m] : w.mult)
        if (m != omega && (m < 0 || m > w.cap)) fail_limit("CAP too small: multiplicity " + std::to_string(m));
    int nv = max_var(n) + 1;
    WeightedEval e{w, std::vector<int>(nv, -1), std::vector<int>(nv, -1)};
    return e.go(n);
}

bool eval_weighted(const Formula& f, const WeightedModel& w) {
    check_dialect(f);
    return eval_node_weighted(f.root, w);
}

// ---------------------------------------------------------------- minimal valuations

namespace {

bool leq(const Valuation& a, const Valuation& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

void minimize(std::vector<Valuation>& vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<Valuation> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < vs.size() && !dominated; ++j)
            if (j != i && leq(vs[j], vs[i])) dominated = true;
        if (!dominated) out.push_back(vs[i]);
    }
    vs = std::move(out);
}

struct Mve {
    int domain;
    std::vector<int> env;

    std::vector<Valuation> join(const std::vector<Valuation>& a, const std::vector<Valuation>& b) {
        std::vector<Valuation> out;
        for (auto& x : a)
            for (auto& y : b) {
                Valuation z(domain);
                for (int i = 0; i < domain; ++i) z[i] = x[i] | y[i];
                out.push_back(std::move(z));
            }
        minimize(out);
        if (out.size() > 200000) fail_limit("minimal valuation set too large");
        return out;
    }

    std::vector<Valuation> go(const NodeP& n) {
        const Valuation zero(domain, 0);
        switch (n->kind) {
            case Kind::atom: {
                Valuation v = zero;
                v[env[n->var]] |= Type(1) << n->pred;
                return {v};
            }
            case Kind::neg_atom: fail("minimal valuations need a positive formula");
            case Kind::eq: return env[n->var] == env[n->var2] ? std::vector<Valuation>{zero} : std::vector<Valuation>{};
            case Kind::neq: return env[n->var] != env[n->var2] ? std::vector<Valuation>{zero} : std::vector<Valuation>{};
            case Kind::top: return {zero};
            case Kind::bot: return {};
            case Kind::conj: {
                std::vector<Valuation> acc{zero};
                for (auto& k : n->kids) {
                    acc = join(acc, go(k));
                    if (acc.empty()) break;
                }
                return acc;
            }
            case Kind::disj: {
                std::vector<Valuation> acc;
                for (auto& k : n->kids) {
                    auto r = go(k);
                    acc.insert(acc.end(), r.begin(), r.end());
                }
                minimize(acc);
                return acc;
            }
            case Kind::exists:
            case Kind::forall: {
                bool ex = n->kind == Kind::exists;
                int saved = env[n->var];
                std::vector<Valuation> acc;
                if (!ex) acc.push_back(zero);
                for (int d = 0; d < domain; ++d) {
                    env[n->var] = d;
                    auto r = go(n->kids[0]);
                    if (ex) {
                        acc.insert(acc.end(), r.begin(), r.end());
                    } else {
                        acc = join(acc, r);
                        if (acc.empty()) break;
                    }
                }
                env[n->var] = saved;
                if (ex) minimize(acc);
                return acc;
            }
            case Kind::exists_inf: return {};
            case Kind::forall_inf: return {zero};
            case Kind::w: {
                auto f = mk_forall(n);
                return go(f);
            }
        }
        return {};
    }

    static NodeP mk_forall(const NodeP& w) { return quant(Kind::forall, w->var, disj2(w->kids[0], w->kids[1])); }
};

}  // namespace

std::vector<Valuation> minimal_valuations(const NodeP& n, int domain) {
    if (!is_positive(n)) fail("minimal valuations need a positive formula");
    Mve m{domain, std::vector<int>(max_var(n) + 1, -1)};
    return m.go(n);
}

}  // namespace wb::onestep
