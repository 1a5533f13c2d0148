#include <algorithm>
#include <functional>
#include <random>

#include "wb/fixpoint.hpp"

namespace wb::fix {

namespace {

bool subset(const StateSet& a, const StateSet& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

StateSet of_mask(int n, std::uint32_t m) {
    StateSet x(n, false);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u;
    return x;
}

std::uint32_t to_mask(const StateSet& x) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) m |= 1u << i;
    return m;
}

std::string show(const StateSet& x) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) {
            if (!first) out += ",";
            out += std::to_string(i);
            first = false;
        }
    return out + "}";
}

StateSet checked_apply(const Functional& f, const StateSet& x) {
    StateSet y = f.apply(x);
    if (static_cast<int>(y.size()) != f.n) fail("functional returned a set over the wrong carrier");
    return y;
}

bool occurs_negated(const mu::NodeP& n, const std::string& p) {
    if (n->kind == mu::Kind::neg_prop && n->name == p) return true;
    if (mu::is_fix(n) && n->name == p) return false;
    for (auto& k : n->kids)
        if (occurs_negated(k, p)) return true;
    return false;
}

}  // namespace

Functional from_formula(const mu::NodeP& phi, const std::string& p, const lts::Lts& s) {
    if (occurs_negated(phi, p)) fail("letter " + p + " occurs negatively, the functional need not be monotone");
    for (auto& q : mu::free_letters(phi))
        if (q != p && s.prop_index(q) < 0) fail("free letter " + q + " is not in the LTS");
    return Functional{s.n, [phi, p, s](const StateSet& x) { return mu::semantics_eval(phi, lts::p_variant(s, p, x)); }};
}

Functional restrict(const Functional& f, const StateSet& x) {
    if (static_cast<int>(x.size()) != f.n) fail("restriction set has the wrong size");
    return Functional{f.n, [f, x](const StateSet& y) {
                          StateSet z = checked_apply(f, y);
                          for (int i = 0; i < f.n; ++i) z[i] = z[i] && x[i];
                          return z;
                      }};
}

bool monotone(const Functional& f, int samples) {
    if (f.n <= 6) {
        std::uint32_t full = (1u << f.n) - 1;
        std::vector<StateSet> img(full + 1);
        for (std::uint32_t x = 0; x <= full; ++x) img[x] = checked_apply(f, of_mask(f.n, x));
        for (std::uint32_t y = 0; y <= full; ++y)
            for (std::uint32_t x = y;; x = (x - 1) & y) {
                if (!subset(img[x], img[y])) return false;
                if (x == 0) break;
            }
        return true;
    }
    std::mt19937_64 g(0x5eed);
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < samples; ++k) {
        StateSet x(f.n), y(f.n);
        for (int i = 0; i < f.n; ++i) {
            x[i] = coin(g);
            y[i] = x[i] || coin(g);
        }
        if (!subset(checked_apply(f, x), checked_apply(f, y))) return false;
    }
    return true;
}

Trace lfp(const Functional& f) {
    if (!monotone(f, 16)) fail("monotonicity violation detected");
    Trace t;
    t.stages.push_back(StateSet(f.n, false));
    for (int i = 0; i <= f.n; ++i) {
        StateSet next = checked_apply(f, t.stages.back());
        if (!subset(t.stages.back(), next)) fail("monotonicity violation detected: approximants decrease");
        if (next == t.stages.back()) break;
        t.stages.push_back(next);
    }
    t.lfp = t.stages.back();
    if (checked_apply(f, t.lfp) != t.lfp) fail("approximation did not stabilize within the carrier size");
    return t;
}

int stage_of(const Trace& t, int s) {
    for (std::size_t k = 0; k < t.stages.size(); ++k)
        if (t.stages[k][s]) return static_cast<int>(k);
    return -1;
}

// ---------------------------------------------------------------- unfolding game

UnfoldingGame unfolding_game(const Functional& f) {
    if (f.n > 12) fail_limit("unfolding game supports carriers of at most 12 elements");
    std::uint32_t full = f.n == 0 ? 0 : (1u << f.n) - 1;
    std::vector<std::uint32_t> img(full + 1);
    for (std::uint32_t x = 0; x <= full; ++x) img[x] = to_mask(checked_apply(f, of_mask(f.n, x)));

    // Candidate moves of Exists per element: all sets, or only the minimal ones on large carriers.
    std::vector<std::vector<std::uint32_t>> options(f.n);
    for (int s = 0; s < f.n; ++s)
        for (std::uint32_t x = 0; x <= full; ++x) {
            if (!((img[x] >> s) & 1u)) continue;
            if (f.n > 8) {
                bool minimal = true;
                for (int i = 0; i < f.n && minimal; ++i)
                    if (((x >> i) & 1u) && ((img[x & ~(1u << i)] >> s) & 1u)) minimal = false;
                if (!minimal) continue;
            }
            options[s].push_back(x);
        }

    UnfoldingGame u;
    // Odd priority everywhere: every infinite play is won by Forall.
    for (int s = 0; s < f.n; ++s) {
        u.state_pos.push_back(u.game.add(game::Player::exists, 1));
        u.subset_of.emplace_back(f.n, false);
        u.labels.push_back(std::to_string(s));
    }
    std::vector<int> pos_of(full + 1, -1);
    auto subset_pos = [&](std::uint32_t x) {
        if (pos_of[x] < 0) {
            pos_of[x] = u.game.add(game::Player::forall, 1);
            u.subset_of.push_back(of_mask(f.n, x));
            u.labels.push_back(show(of_mask(f.n, x)));
        }
        return pos_of[x];
    };
    if (f.n <= 8)
        for (std::uint32_t x = 0; x <= full; ++x) subset_pos(x);
    for (int s = 0; s < f.n; ++s)
        for (auto x : options[s]) u.game.edge(u.state_pos[s], subset_pos(x));
    for (std::uint32_t x = 0; x <= full; ++x)
        if (pos_of[x] >= 0)
            for (int i = 0; i < f.n; ++i)
                if ((x >> i) & 1u) u.game.edge(pos_of[x], u.state_pos[i]);
    return u;
}

StateSet unfolding_winners(const UnfoldingGame& u, int n) {
    auto sol = game::solve(u.game);
    StateSet w(n, false);
    for (int s = 0; s < n; ++s) w[s] = sol.win_exists[u.state_pos[s]];
    return w;
}

// ---------------------------------------------------------------- strategies

Strategy descending_strategy(const Functional& f) {
    Trace t = lfp(f);
    Strategy sigma(f.n);
    for (int s = 0; s < f.n; ++s) {
        int k = stage_of(t, s);
        if (k > 0) sigma[s] = t.stages[k - 1];
    }
    return sigma;
}

bool is_descending(const Functional& f, const Strategy& sigma) {
    Trace t = lfp(f);
    for (int s = 0; s < f.n; ++s) {
        if (!sigma[s]) continue;
        int k = stage_of(t, s);
        if (k <= 0) return false;
        if (!subset(*sigma[s], t.stages[k - 1])) return false;
        if (!checked_apply(f, *sigma[s])[s]) return false;
    }
    return true;
}

bool is_winning(const Functional& f, const Strategy& sigma) {
    // Legal moves, closure of the domain, and no cycle through sigma.
    for (int s = 0; s < f.n; ++s) {
        if (!sigma[s]) continue;
        if (!checked_apply(f, *sigma[s])[s]) return false;
        for (int t = 0; t < f.n; ++t)
            if ((*sigma[s])[t] && !sigma[t]) return false;
    }
    std::vector<int> colour(f.n, 0);
    std::function<bool(int)> acyclic = [&](int s) {
        colour[s] = 1;
        for (int t = 0; t < f.n; ++t)
            if ((*sigma[s])[t]) {
                if (colour[t] == 1) return false;
                if (colour[t] == 0 && !acyclic(t)) return false;
            }
        colour[s] = 2;
        return true;
    };
    for (int s = 0; s < f.n; ++s)
        if (sigma[s] && colour[s] == 0 && !acyclic(s)) return false;
    return true;
}

StrategyTree strategy_tree(const Functional& f, const Strategy& sigma, int r) {
    if (r < 0 || r >= f.n) fail("root outside the carrier");
    if (!sigma[r]) fail("root " + std::to_string(r) + " is not winning for the strategy");
    StrategyTree tr;
    tr.root = r;
    tr.nodes.assign(f.n, false);
    tr.children.assign(f.n, {});
    std::vector<int> stack{r};
    tr.nodes[r] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        if (!sigma[s]) fail("strategy leaves its domain at " + std::to_string(s));
        for (int t = 0; t < f.n; ++t)
            if ((*sigma[s])[t]) {
                tr.children[s].push_back(t);
                if (!tr.nodes[t]) {
                    tr.nodes[t] = true;
                    stack.push_back(t);
                }
            }
    }
    return tr;
}

// ---------------------------------------------------------------- witnesses

std::optional<StateSet> finite_witness(const Functional& f, int s) {
    Trace t = lfp(f);
    int k = stage_of(t, s);
    if (k < 0) return std::nullopt;
    StateSet all(f.n, false);
    StateSet level(f.n, false);
    level[s] = true;
    for (int i = k; i > 0; --i) {
        StateSet below(f.n, false);
        for (int u = 0; u < f.n; ++u) {
            if (!level[u]) continue;
            all[u] = true;
            // Shrink the previous stage to an inclusion-minimal support of u.
            StateSet x = t.stages[i - 1];
            for (int j = 0; j < f.n; ++j) {
                if (!x[j]) continue;
                x[j] = false;
                if (!checked_apply(f, x)[u]) x[j] = true;
            }
            for (int j = 0; j < f.n; ++j)
                if (x[j]) below[j] = true;
        }
        level = below;
    }
    return all;
}

std::optional<StateSet> brute_force_witness(const Functional& f, int s, const lts::Lts* noetherian_in) {
    if (f.n > 12) fail_limit("witness search supports carriers of at most 12 elements");
    if (noetherian_in && noetherian_in->n != f.n) fail("LTS and carrier sizes differ");
    std::vector<std::uint32_t> order;
    for (std::uint32_t x = 0; x < (1u << f.n); ++x) order.push_back(x);
    std::stable_sort(order.begin(), order.end(),
                     [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });
    for (auto m : order) {
        if (!((m >> s) & 1u)) continue;
        StateSet x = of_mask(f.n, m);
        if (noetherian_in && !lts::noetherian_subset(*noetherian_in, x)) continue;
        Functional g = restrict(f, x);
        StateSet cur(f.n, false);
        while (true) {
            StateSet next = checked_apply(g, cur);
            if (next == cur) break;
            cur = next;
        }
        if (cur[s]) return x;
    }
    return std::nullopt;
}

}  // namespace wb::fix
