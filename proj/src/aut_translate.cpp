#include <algorithm>
#include <functional>
#include <map>

#include "wb/aut.hpp"

namespace wb::aut {

namespace os = wb::onestep;

// ---------------------------------------------------------------- automaton to formula

namespace {

struct ToFormula {
    const Automaton& a;
    std::vector<std::string> letter;  // bound letter per state
    std::vector<mu::NodeP> tr;        // finished translations

    mu::NodeP chi(int c) const {
        std::vector<mu::NodeP> parts;
        for (std::size_t i = 0; i < a.props.size(); ++i)
            parts.push_back((c >> i) & 1 ? mu::prop(a.props[i]) : mu::neg_prop(a.props[i]));
        return mu::conj(parts);
    }

    // <alpha>(...) where state t becomes its letter when in `open`, else tr[t].
    mu::NodeP modal_of(const os::NodeP& alpha, const std::vector<bool>& open) const {
        if (alpha->kind == os::Kind::top) return mu::top();
        if (alpha->kind == os::Kind::bot) return mu::bot();
        os::Type used = os::preds_of(alpha);
        std::vector<int> map(a.size(), -1);
        std::vector<mu::NodeP> args;
        for (int t = 0; t < a.size(); ++t)
            if ((used >> t) & 1u) {
                map[t] = static_cast<int>(args.size());
                args.push_back(open[t] ? mu::prop(letter[t]) : tr[t]);
            }
        return mu::modal(os::rename_preds(alpha, map), args);
    }

    mu::NodeP step0(int b, const std::vector<bool>& open) const {
        bool uniform = true;
        for (int c = 1; c < a.colours(); ++c)
            if (!os::same(a.delta[b][c], a.delta[b][0])) uniform = false;
        if (uniform) return modal_of(a.delta[b][0], open);
        std::vector<mu::NodeP> parts;
        for (int c = 0; c < a.colours(); ++c) {
            if (a.delta[b][c]->kind == os::Kind::bot) continue;
            parts.push_back(mu::conj2(chi(c), modal_of(a.delta[b][c], open)));
        }
        return mu::disj(parts);
    }
};

}  // namespace

mu::NodeP to_formula(const Automaton& a) {
    auto rep = classify_automaton(a);
    ToFormula t{a, {}, std::vector<mu::NodeP>(a.size())};
    for (int i = 0; i < a.size(); ++i) {
        std::string l = "q" + std::to_string(i);
        while (std::find(a.props.begin(), a.props.end(), l) != a.props.end()) l = "_" + l;
        t.letter.push_back(l);
    }
    // Lowest clusters first, so that every state below the current cluster is done.
    for (int ci = static_cast<int>(rep.clusters.size()) - 1; ci >= 0; --ci) {
        auto cl = rep.clusters[ci];
        std::vector<bool> open(a.size(), false);
        for (int b : cl) open[b] = true;
        if (rep.degenerate[ci]) {
            t.tr[cl[0]] = t.step0(cl[0], open);
            continue;
        }
        std::stable_sort(cl.begin(), cl.end(), [&](int x, int y) { return a.omega[x] < a.omega[y]; });
        std::map<int, mu::NodeP> cur;
        for (int b : cl) cur[b] = mu::prop(t.letter[b]);
        for (std::size_t k = 0; k < cl.size(); ++k) {
            int b = cl[k];
            std::map<std::string, mu::NodeP> sigma;
            for (std::size_t i = 0; i < k; ++i) sigma[t.letter[cl[i]]] = cur[cl[i]];
            mu::NodeP body = mu::substitute(t.step0(b, open), sigma);
            mu::NodeP f = mu::fix(a.omega[b] % 2 == 1 ? mu::Kind::mu : mu::Kind::nu, t.letter[b], body);
            for (std::size_t i = 0; i < cl.size(); ++i)
                if (i != k) cur[cl[i]] = mu::substitute(cur[cl[i]], {{t.letter[b], f}});
            cur[b] = f;
        }
        for (int b : cl) t.tr[b] = mu::rename_apart(cur[b]);
    }
    return t.tr[a.init];
}

// ---------------------------------------------------------------- formula to automaton

namespace {

struct FromFormula {
    std::vector<std::string> props;
    std::map<std::string, std::pair<mu::NodeP, bool>> binder;  // body, least
    std::map<std::string, int> prio;
    bool weak_mode = true;

    std::map<std::pair<const mu::Node*, int>, int> index;
    std::vector<mu::NodeP> formula;
    std::vector<int> level;  // accumulated priority of the state (general mode)
    std::vector<std::map<int, int>> edges;  // weak mode: target -> mask of unfolded kinds

    int state(const mu::NodeP& n, int k) {
        auto key = std::make_pair(n.get(), weak_mode ? 0 : k);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(formula.size());
        if (id >= max_states) fail_limit("formula needs more than " + std::to_string(max_states) + " automaton states");
        index[key] = id;
        formula.push_back(n);
        level.push_back(weak_mode ? 0 : k);
        edges.emplace_back();
        return id;
    }

    // acc: highest priority unfolded so far (general) or mask of kinds (weak).
    os::NodeP expand(const mu::NodeP& n, int acc, int c, int src) {
        switch (n->kind) {
            case mu::Kind::prop:
            case mu::Kind::neg_prop: {
                auto b = binder.find(n->name);
                if (b != binder.end()) {
                    int next = weak_mode ? (acc | (b->second.second ? 1 : 2)) : std::max(acc, prio[n->name]);
                    return expand(b->second.first, next, c, src);
                }
                auto it = std::find(props.begin(), props.end(), n->name);
                bool on = it != props.end() && ((c >> (it - props.begin())) & 1);
                return on == (n->kind == mu::Kind::prop) ? os::top() : os::bot();
            }
            case mu::Kind::conj:
            case mu::Kind::disj: {
                std::vector<os::NodeP> parts;
                for (auto& k : n->kids) parts.push_back(expand(k, acc, c, src));
                return n->kind == mu::Kind::conj ? os::conj(parts) : os::disj(parts);
            }
            case mu::Kind::mu:
            case mu::Kind::nu: return expand(n->kids[0], acc, c, src);
            case mu::Kind::modal: {
                std::vector<int> map;
                for (auto& k : n->kids) {
                    int t = state(k, acc);
                    map.push_back(t);
                    if (weak_mode) edges[src][t] |= acc;
                    else edges[src][t] |= 0;
                }
                if (map.empty()) map.push_back(0);
                return os::rename_preds(n->alpha, map);
            }
        }
        return os::bot();
    }
};

int top_kind_priority(const mu::NodeP& n) {
    if (n->kind == mu::Kind::mu) return 1;
    return 0;
}

}  // namespace

Automaton from_formula(const mu::NodeP& f0, const std::vector<std::string>& props_in) {
    mu::NodeP f = mu::guard_transform(f0);
    if (!mu::is_guarded(f)) fail("formula is unguarded after the guarded transform");
    auto free = mu::free_letters(f);
    std::vector<std::string> props = props_in;
    if (props.empty()) props.assign(free.begin(), free.end());
    for (auto& q : free)
        if (std::find(props.begin(), props.end(), q) == props.end()) fail("free letter " + q + " is not in the alphabet");
    if (props.size() > static_cast<std::size_t>(lts::max_props)) fail_limit("too many propositions");

    FromFormula b;
    b.props = props;
    int depth_max = 0;
    std::map<std::string, int> depth;
    std::function<void(const mu::NodeP&, int)> scan = [&](const mu::NodeP& m, int d) {
        if (mu::is_fix(m)) {
            b.binder[m->name] = {m->kids[0], m->kind == mu::Kind::mu};
            depth[m->name] = d;
            depth_max = std::max(depth_max, d + 1);
            ++d;
        }
        for (auto& k : m->kids) scan(k, d);
    };
    scan(f, 0);
    for (auto& [v, d] : depth) b.prio[v] = 2 * (depth_max - d) + (b.binder[v].second ? 1 : 0);

    Automaton a;
    a.props = props;
    a.dialect = mu::dialect_of(f);
    auto build = [&](bool weak) {
        b.weak_mode = weak;
        b.index.clear();
        b.formula.clear();
        b.level.clear();
        b.edges.clear();
        a.delta.clear();
        b.state(f, 0);
        for (int s = 0; s < static_cast<int>(b.formula.size()); ++s) {
            std::vector<os::NodeP> row;
            mu::NodeP fs = b.formula[s];
            for (int c = 0; c < a.colours(); ++c) row.push_back(b.expand(fs, 0, c, s));
            a.delta.push_back(row);
        }
    };
    build(true);
    int n = static_cast<int>(b.formula.size());
    // Clusters of the state graph and the fixpoint kinds unfolded inside them.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s) {
        std::vector<int> st{s};
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            for (auto& [v, m] : b.edges[u])
                if (!reach[s][v]) {
                    reach[s][v] = true;
                    st.push_back(v);
                }
        }
    }
    std::vector<int> mask(n, 0);
    bool mixed = false;
    for (int s = 0; s < n; ++s)
        for (auto& [v, m] : b.edges[s])
            if (reach[v][s]) {
                mask[s] |= m;
                mask[v] |= m;
            }
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (reach[s][t] && reach[t][s]) mask[s] |= mask[t];
    for (int s = 0; s < n; ++s)
        if (mask[s] == 3) mixed = true;
    if (!mixed) {
        a.omega.resize(n);
        for (int s = 0; s < n; ++s) {
            bool cyclic = reach[s][s];
            if (!cyclic) a.omega[s] = top_kind_priority(b.formula[s]);
            else a.omega[s] = mask[s] == 1 ? 1 : 0;
        }
    } else {
        build(false);
        n = static_cast<int>(b.formula.size());
        a.omega = b.level;
    }
    a.init = 0;
    validate(a);
    return a;
}

// ---------------------------------------------------------------- diamond automaton

Automaton diamond_automaton(const Automaton& a) {
    auto rep = classify_automaton(a);
    Automaton d = a;
    d.dialect = os::Dialect::fo1;
    auto names = state_names(a.size());
    for (int s = 0; s < a.size(); ++s) {
        int ci = rep.cluster_of[s];
        os::Type m = 0;
        for (int t : rep.clusters[ci]) m |= os::Type(1) << t;
        for (int c = 0; c < a.colours(); ++c) {
            const auto& alpha = a.delta[s][c];
            os::Formula f{a.dialect, names, alpha};
            os::NodeP out;
            bool touches = (os::preds_of(alpha) & m) != 0;
            if (!rep.degenerate[ci] && touches && a.dialect != os::Dialect::fo1) {
                try {
                    if (a.omega[s] % 2 == 1 && os::in_cont(alpha, m)) {
                        out = os::diamond_translate(os::to_continuous_basic_form(f, m)).root;
                    } else if (a.omega[s] % 2 == 0 && os::in_cocont(alpha, m)) {
                        out = os::dual_node(os::diamond_translate(os::to_continuous_basic_form(os::dual(f), m)).root);
                    }
                } catch (const Error&) {
                    out = nullptr;
                }
            }
            if (!out) out = a.dialect == os::Dialect::fo1 ? alpha : os::diamond_translate(os::to_basic_form(f)).root;
            d.delta[s][c] = out;
        }
    }
    return d;
}

}  // namespace wb::aut
