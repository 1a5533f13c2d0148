#include <optional>
#include <functional>
#include <map>

#include "wb/mu.hpp"

namespace wb::mu {

namespace os = wb::onestep;

namespace {

os::Model successor_model(const lts::Lts& s, int state, const std::vector<lts::StateSet>& args) {
    os::Model m;
    for (int t : s.succ[state]) {
        os::Type ty = 0;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (args[i][t]) ty |= os::Type(1) << i;
        m.elems.push_back(ty);
    }
    return m;
}

struct SemEval {
    const lts::Lts& s;
    std::map<std::string, lts::StateSet> env;

    lts::StateSet go(const NodeP& n) {
        switch (n->kind) {
            case Kind::prop:
            case Kind::neg_prop: {
                lts::StateSet out(s.n, false);
                auto it = env.find(n->name);
                if (it != env.end()) {
                    if (n->kind == Kind::neg_prop) fail("negated bound letter " + n->name);
                    return it->second;
                }
                int p = s.prop_index(n->name);
                bool neg = n->kind == Kind::neg_prop;
                for (int v = 0; v < s.n; ++v) out[v] = (p >= 0 && s.has(v, p)) != neg;
                return out;
            }
            case Kind::conj:
            case Kind::disj: {
                bool c = n->kind == Kind::conj;
                lts::StateSet out(s.n, c);
                for (auto& k : n->kids) {
                    auto r = go(k);
                    for (int v = 0; v < s.n; ++v) out[v] = c ? (out[v] && r[v]) : (out[v] || r[v]);
                }
                return out;
            }
            case Kind::modal: {
                std::vector<lts::StateSet> args;
                for (auto& k : n->kids) args.push_back(go(k));
                lts::StateSet out(s.n, false);
                for (int v = 0; v < s.n; ++v) out[v] = os::eval_node_finite(n->alpha, successor_model(s, v, args));
                return out;
            }
            case Kind::mu:
            case Kind::nu: {
                lts::StateSet x(s.n, n->kind == Kind::nu);
                auto saved = env.find(n->name) == env.end() ? std::optional<lts::StateSet>{} : env[n->name];
                for (;;) {
                    env[n->name] = x;
                    auto y = go(n->kids[0]);
                    if (y == x) break;
                    x = std::move(y);
                }
                if (saved)
                    env[n->name] = *saved;
                else
                    env.erase(n->name);
                return x;
            }
        }
        return {};
    }
};

}  // namespace

lts::StateSet semantics_eval(const NodeP& n, const lts::Lts& s) {
    SemEval e{s, {}};
    return e.go(n);
}

bool holds(const NodeP& n, const lts::Lts& s) { return semantics_eval(n, s)[s.init]; }

EvalGame build_eval_game(const NodeP& n0, const lts::Lts& s) {
    NodeP n = rename_apart(n0);
    // Binder depth and body per bound letter; outer binders get higher priorities.
    std::map<std::string, std::pair<int, NodeP>> binders;
    std::map<std::string, bool> least;
    int depth_max = 0;
    std::function<void(const NodeP&, int)> scan = [&](const NodeP& m, int d) {
        if (is_fix(m)) {
            binders[m->name] = {d, m->kids[0]};
            least[m->name] = m->kind == Kind::mu;
            depth_max = std::max(depth_max, d + 1);
            ++d;
        }
        for (auto& k : m->kids) scan(k, d);
    };
    scan(n, 0);
    auto prio = [&](const std::string& v) { return 2 * (depth_max - binders[v].first) + (least[v] ? 1 : 0); };

    EvalGame eg;
    std::map<std::pair<const Node*, int>, int> index;
    std::map<std::pair<const os::Node*, int>, std::vector<os::Valuation>> mv_cache;
    std::vector<std::pair<NodeP, int>> work;
    auto pos = [&](const NodeP& m, int st, game::Player who, int pr) {
        auto key = std::make_pair(m.get(), st);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = eg.game.add(who, pr);
        eg.labels.push_back(to_string(m) + " @ " + std::to_string(st));
        index[key] = id;
        work.emplace_back(m, st);
        return id;
    };
    auto node_pos = [&](const NodeP& m, int st) {
        game::Player who = game::Player::exists;
        int pr = 0;
        switch (m->kind) {
            case Kind::prop:
                if (binders.count(m->name)) {
                    pr = prio(m->name);
                } else {
                    int p = s.prop_index(m->name);
                    who = (p >= 0 && s.has(st, p)) ? game::Player::forall : game::Player::exists;
                }
                break;
            case Kind::neg_prop: {
                int p = s.prop_index(m->name);
                who = (p >= 0 && s.has(st, p)) ? game::Player::exists : game::Player::forall;
                break;
            }
            case Kind::conj: who = game::Player::forall; break;
            default: break;
        }
        return pos(m, st, who, pr);
    };
    eg.root = node_pos(n, s.init);
    while (!work.empty()) {
        auto [m, st] = work.back();
        work.pop_back();
        int id = index[{m.get(), st}];
        switch (m->kind) {
            case Kind::prop:
                if (binders.count(m->name)) eg.game.edge(id, node_pos(binders[m->name].second, st));
                break;
            case Kind::neg_prop: break;
            case Kind::conj:
            case Kind::disj:
                for (auto& k : m->kids) eg.game.edge(id, node_pos(k, st));
                break;
            case Kind::mu:
            case Kind::nu: eg.game.edge(id, node_pos(m->kids[0], st)); break;
            case Kind::modal: {
                const auto& succ = s.succ[st];
                auto key = std::make_pair(m->alpha.get(), static_cast<int>(succ.size()));
                auto it = mv_cache.find(key);
                if (it == mv_cache.end()) it = mv_cache.emplace(key, os::minimal_valuations(m->alpha, static_cast<int>(succ.size()))).first;
                for (const auto& val : it->second) {
                    int z = eg.game.add(game::Player::forall, 0);
                    std::string lab = "{";
                    for (std::size_t d = 0; d < val.size(); ++d)
                        for (std::size_t i = 0; i < m->kids.size(); ++i)
                            if ((val[d] >> i) & 1u) lab += " a" + std::to_string(i + 1) + ":" + std::to_string(succ[d]);
                    eg.labels.push_back(lab + " }");
                    eg.game.edge(id, z);
                    for (std::size_t d = 0; d < val.size(); ++d)
                        for (std::size_t i = 0; i < m->kids.size(); ++i)
                            if ((val[d] >> i) & 1u) eg.game.edge(z, node_pos(m->kids[i], succ[d]));
                }
                break;
            }
        }
    }
    return eg;
}

bool game_holds(const NodeP& n, const lts::Lts& s) {
    auto eg = build_eval_game(n, s);
    return game::solve(eg.game).win_exists[eg.root];
}

}  // namespace wb::mu
