#include <algorithm>
#include <functional>

#include "wb/random.hpp"

namespace wb::rnd {

namespace os = wb::onestep;

namespace {

int pick(Rng& g, int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
bool coin(Rng& g, double p) { return std::bernoulli_distribution(p)(g); }

std::vector<std::vector<std::string>> random_colours(Rng& g, int n, const std::vector<std::string>& props) {
    std::vector<std::vector<std::string>> cols(n);
    for (int s = 0; s < n; ++s)
        for (auto& p : props)
            if (coin(g, 0.5)) cols[s].push_back(p);
    return cols;
}

}  // namespace

lts::Lts random_lts(Rng& g, int max_states, const std::vector<std::string>& props, double edge_p) {
    int n = 1 + pick(g, max_states);
    std::vector<std::pair<int, int>> edges;
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (coin(g, edge_p)) edges.emplace_back(s, t);
    return lts::make(props, n, edges, random_colours(g, n, props), 0);
}

lts::Lts random_tree(Rng& g, int max_states, const std::vector<std::string>& props) {
    int n = 1 + pick(g, max_states);
    std::vector<std::pair<int, int>> edges;
    for (int s = 1; s < n; ++s) edges.emplace_back(pick(g, s), s);
    return lts::make(props, n, edges, random_colours(g, n, props), 0);
}

game::Game random_game(Rng& g, int positions, int max_priority) {
    game::Game gm;
    for (int v = 0; v < positions; ++v) gm.add(coin(g, 0.5) ? game::Player::exists : game::Player::forall, pick(g, max_priority + 1));
    for (int v = 0; v < positions; ++v) {
        int k = pick(g, 3);
        for (int i = 0; i < k; ++i) {
            int t = pick(g, positions);
            if (std::find(gm.moves[v].begin(), gm.moves[v].end(), t) == gm.moves[v].end()) gm.edge(v, t);
        }
    }
    return gm;
}

namespace {

struct OneStepGen {
    Rng& g;
    int preds;
    os::Dialect d;

    os::NodeP open(int depth, int vars) {
        if (vars == 0) return closed(depth, 0);
        int r = pick(g, 10);
        if (depth == 0 || r < 4) {
            if (d != os::Dialect::fo1 && vars >= 2 && coin(g, 0.3)) {
                int x = pick(g, vars), y = pick(g, vars);
                return coin(g, 0.5) ? os::eq(x, y) : os::neq(x, y);
            }
            return os::atom(pick(g, preds), pick(g, vars));
        }
        if (r < 7) {
            auto a = open(depth - 1, vars), b = open(depth - 1, vars);
            return coin(g, 0.5) ? os::conj2(a, b) : os::disj2(a, b);
        }
        return closed(depth, vars);
    }

    os::NodeP closed(int depth, int vars) {
        if (depth == 0) return coin(g, 0.5) ? os::top() : os::bot();
        int r = pick(g, 10);
        if (r < 2) {
            auto a = closed(depth - 1, vars), b = closed(depth - 1, vars);
            return coin(g, 0.5) ? os::conj2(a, b) : os::disj2(a, b);
        }
        os::Kind k = coin(g, 0.5) ? os::Kind::exists : os::Kind::forall;
        if (d == os::Dialect::foe1inf && coin(g, 0.25)) k = coin(g, 0.5) ? os::Kind::exists_inf : os::Kind::forall_inf;
        return os::quant(k, vars, open(depth - 1, vars + 1));
    }
};

struct MuGen {
    Rng& g;
    const std::vector<std::string>& props;
    bool standard;
    int fresh = 0;

    mu::NodeP leaf(const std::vector<std::string>& bound) {
        int r = pick(g, 10);
        if (!bound.empty() && r < 4) return mu::prop(bound[pick(g, static_cast<int>(bound.size()))]);
        if (r < 5) return coin(g, 0.5) ? mu::top() : mu::bot();
        if (props.empty()) return mu::top();
        const auto& p = props[pick(g, static_cast<int>(props.size()))];
        return coin(g, 0.5) ? mu::prop(p) : mu::neg_prop(p);
    }

    mu::NodeP go(int depth, std::vector<std::string>& bound) {
        if (depth == 0) return leaf(bound);
        int r = pick(g, 12);
        if (r < 2) return leaf(bound);
        if (r < 5) {
            auto a = go(depth - 1, bound), b = go(depth - 1, bound);
            return coin(g, 0.5) ? mu::conj2(a, b) : mu::disj2(a, b);
        }
        if (r < 9) {
            if (standard || coin(g, 0.5)) {
                auto a = go(depth - 1, bound);
                return coin(g, 0.5) ? mu::dia(a) : mu::box(a);
            }
            int k = 1 + pick(g, 2);
            OneStepGen og{g, k, os::Dialect::foe1inf};
            std::vector<mu::NodeP> args;
            for (int i = 0; i < k; ++i) args.push_back(go(depth - 1, bound));
            auto alpha = og.closed(2, 0);
            return mu::modal(alpha, args);
        }
        std::string v = "x" + std::to_string(fresh++);
        bound.push_back(v);
        auto body = go(depth - 1, bound);
        bound.pop_back();
        return mu::fix(coin(g, 0.5) ? mu::Kind::mu : mu::Kind::nu, v, body);
    }
};

}  // namespace

os::NodeP random_onestep(Rng& g, int preds, os::Dialect d, int depth) {
    OneStepGen og{g, preds, d};
    return og.closed(depth, 0);
}

mu::NodeP random_mu(Rng& g, const std::vector<std::string>& props, int depth, bool standard) {
    MuGen mg{g, props, standard};
    std::vector<std::string> bound;
    return mu::rename_apart(mg.go(depth, bound));
}

mu::NodeP random_positive_body(Rng& g, const std::vector<std::string>& props, const std::string& var, int depth) {
    std::function<mu::NodeP(int)> go = [&](int d) -> mu::NodeP {
        int r = pick(g, d == 0 ? 3 : 8);
        if (r == 0) return mu::prop(var);
        if (r == 1 || r == 2) {
            if (props.empty()) return mu::prop(var);
            const auto& p = props[pick(g, static_cast<int>(props.size()))];
            return coin(g, 0.7) ? mu::prop(p) : mu::neg_prop(p);
        }
        if (r < 5) return coin(g, 0.5) ? mu::dia(go(d - 1)) : mu::box(go(d - 1));
        auto a = go(d - 1), b = go(d - 1);
        return r < 7 ? mu::disj2(a, b) : mu::conj2(a, b);
    };
    return go(depth);
}

mso::NodeP random_mso(Rng& g, const std::vector<std::string>& props, int depth, mso::Mode m) {
    int fresh = 0;
    std::function<mso::NodeP(int, std::vector<std::string>&)> go = [&](int d, std::vector<std::string>& scope) {
        auto letter = [&]() { return scope[pick(g, static_cast<int>(scope.size()))]; };
        if (d == 0 || pick(g, 4) == 0) {
            int r = pick(g, 3);
            if (r == 0) return mso::down(letter());
            if (r == 1) return mso::sub(letter(), letter());
            return mso::rel_set(letter(), letter());
        }
        int r = pick(g, 5);
        if (r == 0) return mso::neg(go(d - 1, scope));
        if (r == 1) {
            auto a = go(d - 1, scope);
            return mso::disj(a, go(d - 1, scope));
        }
        if (r == 2) {
            auto a = go(d - 1, scope);
            return mso::conj(a, go(d - 1, scope));
        }
        std::string p = "r" + std::to_string(fresh++);
        scope.push_back(p);
        auto body = go(d - 1, scope);
        scope.pop_back();
        return r == 3 ? mso::exists_set(p, m, body) : mso::forall_set(p, m, body);
    };
    std::vector<std::string> scope = props;
    if (scope.empty()) scope.push_back("p");
    return go(depth, scope);
}

aut::Automaton random_automaton(Rng& g, int states, const std::vector<std::string>& props, os::Dialect d,
                                int max_priority) {
    aut::Automaton a;
    a.dialect = d;
    a.props = props;
    a.init = 0;
    OneStepGen og{g, states, d};
    for (int s = 0; s < states; ++s) {
        a.omega.push_back(pick(g, max_priority + 1));
        std::vector<os::NodeP> row;
        for (int c = 0; c < a.colours(); ++c) row.push_back(og.closed(2, 0));
        a.delta.push_back(row);
    }
    return a;
}

}  // namespace wb::rnd
