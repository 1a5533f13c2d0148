#include "wb/game.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include <json.hpp>

namespace wb::game {

namespace {

struct Solver {
    const Game& g;
    std::vector<std::vector<int>> pred;
    std::vector<int> strat;

    explicit Solver(const Game& game) : g(game), pred(game.size()), strat(game.size(), -1) {
        for (int v = 0; v < g.size(); ++v)
            for (int t : g.moves[v]) pred[t].push_back(v);
    }

    // Attractor for `who` to `target` inside `mask`; records attracting moves.
    std::vector<char> attract(Player who, const std::vector<char>& target, const std::vector<char>& mask) {
        std::vector<char> in = target;
        std::vector<int> count(g.size(), 0);
        std::deque<int> q;
        for (int v = 0; v < g.size(); ++v) {
            if (!mask[v]) continue;
            for (int t : g.moves[v])
                if (mask[t]) ++count[v];
            if (in[v]) q.push_back(v);
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : pred[v]) {
                if (!mask[u] || in[u]) continue;
                if (g.owner[u] == who) {
                    in[u] = 1;
                    strat[u] = v;
                    q.push_back(u);
                } else if (--count[u] == 0) {
                    in[u] = 1;
                    q.push_back(u);
                }
            }
        }
        return in;
    }

    // Returns Exists's winning region inside the trap `mask`.
    std::vector<char> zielonka(const std::vector<char>& mask) {
        const int n = g.size();
        int d = -1;
        for (int v = 0; v < n; ++v)
            if (mask[v]) d = std::max(d, g.priority[v]);
        std::vector<char> win_e(n, 0);
        if (d < 0) return win_e;
        Player i = d % 2 == 0 ? Player::exists : Player::forall;
        std::vector<char> top(n, 0);
        for (int v = 0; v < n; ++v)
            if (mask[v] && g.priority[v] == d) top[v] = 1;
        auto a = attract(i, top, mask);
        std::vector<char> rest(n, 0);
        bool rest_empty = true;
        for (int v = 0; v < n; ++v)
            if (mask[v] && !a[v]) rest[v] = 1, rest_empty = false;
        std::vector<char> sub_e = rest_empty ? std::vector<char>(n, 0) : zielonka(rest);
        std::vector<char> opp_sub(n, 0);
        bool opp_empty = true;
        for (int v = 0; v < n; ++v) {
            if (!rest[v]) continue;
            bool e = sub_e[v];
            bool opp = (i == Player::exists) ? !e : e;
            if (opp) opp_sub[v] = 1, opp_empty = false;
        }
        if (opp_empty) {
            for (int v = 0; v < n; ++v) {
                if (!mask[v]) continue;
                win_e[v] = i == Player::exists;
                if (top[v] && g.owner[v] == i)
                    for (int t : g.moves[v])
                        if (mask[t]) {
                            strat[v] = t;
                            break;
                        }
            }
            return win_e;
        }
        Player o = opponent(i);
        auto b = attract(o, opp_sub, mask);
        std::vector<char> rest2(n, 0);
        bool rest2_empty = true;
        for (int v = 0; v < n; ++v)
            if (mask[v] && !b[v]) rest2[v] = 1, rest2_empty = false;
        std::vector<char> sub2 = rest2_empty ? std::vector<char>(n, 0) : zielonka(rest2);
        for (int v = 0; v < n; ++v) {
            if (!mask[v]) continue;
            if (b[v])
                win_e[v] = o == Player::exists;
            else
                win_e[v] = sub2[v];
        }
        return win_e;
    }
};

}  // namespace

Solution solve(const Game& g) {
    // Dead ends become edges to sinks won by the stuck player's opponent.
    Game h = g;
    const int n = g.size();
    int sink_e = -1, sink_a = -1;
    for (int v = 0; v < n; ++v) {
        if (!h.moves[v].empty()) continue;
        if (g.owner[v] == Player::exists) {
            if (sink_a < 0) {
                sink_a = h.add(Player::exists, 1);
                h.edge(sink_a, sink_a);
            }
            h.edge(v, sink_a);
        } else {
            if (sink_e < 0) {
                sink_e = h.add(Player::exists, 0);
                h.edge(sink_e, sink_e);
            }
            h.edge(v, sink_e);
        }
    }
    Solver s(h);
    auto win = s.zielonka(std::vector<char>(h.size(), 1));
    Solution sol;
    sol.win_exists.resize(n);
    sol.strategy.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        sol.win_exists[v] = win[v];
        bool owner_wins = (g.owner[v] == Player::exists) == static_cast<bool>(win[v]);
        int t = s.strat[v];
        if (owner_wins && t >= 0 && t < n) sol.strategy[v] = t;
    }
    return sol;
}

bool check_strategy(const Game& g, const Solution& s) {
    const int n = g.size();
    if (static_cast<int>(s.win_exists.size()) != n || static_cast<int>(s.strategy.size()) != n) return false;
    for (int side = 0; side < 2; ++side) {
        Player p = side == 0 ? Player::exists : Player::forall;
        auto in = [&](int v) { return s.win_exists[v] == (p == Player::exists); };
        std::vector<std::vector<int>> adj(n);
        for (int v = 0; v < n; ++v) {
            if (!in(v)) continue;
            if (g.owner[v] == p) {
                if (g.moves[v].empty()) return false;
                int t = s.strategy[v];
                if (t < 0 || t >= n || !in(t)) return false;
                if (std::find(g.moves[v].begin(), g.moves[v].end(), t) == g.moves[v].end()) return false;
                adj[v].push_back(t);
            } else {
                for (int t : g.moves[v]) {
                    if (!in(t)) return false;
                    adj[v].push_back(t);
                }
            }
        }
        // No cycle whose top priority has the opponent's parity.
        int maxp = 0;
        for (int v = 0; v < n; ++v) maxp = std::max(maxp, g.priority[v]);
        for (int d = (side == 0 ? 1 : 0); d <= maxp; d += 2) {
            std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
            std::vector<char> on(n, 0);
            std::vector<int> stack;
            int counter = 0, ncomp = 0;
            auto ok = [&](int v) { return in(v) && g.priority[v] <= d; };
            std::function<void(int)> tarjan = [&](int v) {
                idx[v] = low[v] = counter++;
                stack.push_back(v);
                on[v] = 1;
                for (int t : adj[v]) {
                    if (!ok(t)) continue;
                    if (idx[t] < 0) {
                        tarjan(t);
                        low[v] = std::min(low[v], low[t]);
                    } else if (on[t]) {
                        low[v] = std::min(low[v], idx[t]);
                    }
                }
                if (low[v] == idx[v]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on[w] = 0;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
            };
            for (int v = 0; v < n; ++v)
                if (ok(v) && idx[v] < 0) tarjan(v);
            std::vector<int> size(ncomp, 0);
            for (int v = 0; v < n; ++v)
                if (ok(v)) ++size[comp[v]];
            for (int v = 0; v < n; ++v) {
                if (!ok(v) || g.priority[v] != d) continue;
                bool cyclic = size[comp[v]] > 1;
                for (int t : adj[v])
                    if (t == v) cyclic = true;
                if (cyclic) return false;
            }
        }
    }
    return true;
}

Game from_json_text(const std::string& text) {
    using nlohmann::json;
    Game g;
    try {
        json j = json::parse(text);
        auto owners = j.at("owner");
        auto prios = j.at("priority").get<std::vector<int>>();
        auto moves = j.at("moves").get<std::vector<std::vector<int>>>();
        if (owners.size() != prios.size() || prios.size() != moves.size())
            fail("game JSON: owner, priority and moves must have equal length");
        for (std::size_t v = 0; v < prios.size(); ++v) {
            std::string o = owners[v].get<std::string>();
            if (o != "E" && o != "A") fail("game JSON: owner must be \"E\" or \"A\"");
            if (prios[v] < 0) fail("game JSON: negative priority");
            g.add(o == "E" ? Player::exists : Player::forall, prios[v]);
        }
        for (std::size_t v = 0; v < moves.size(); ++v)
            for (int t : moves[v]) {
                if (t < 0 || t >= g.size()) fail("game JSON: move out of range");
                g.edge(static_cast<int>(v), t);
            }
    } catch (const json::exception& e) {
        fail_parse(std::string("game JSON: ") + e.what());
    }
    return g;
}

std::string to_json_text(const Game& g) {
    using nlohmann::json;
    json j;
    std::vector<std::string> owners;
    for (auto o : g.owner) owners.push_back(o == Player::exists ? "E" : "A");
    j["owner"] = owners;
    j["priority"] = g.priority;
    j["moves"] = g.moves;
    return j.dump();
}

std::string solution_to_json_text(const Game& g, const Solution& s) {
    using nlohmann::json;
    json j;
    std::vector<int> we, wa;
    json se = json::object(), sa = json::object();
    for (int v = 0; v < g.size(); ++v) {
        (s.win_exists[v] ? we : wa).push_back(v);
        if (s.strategy[v] >= 0) (g.owner[v] == Player::exists ? se : sa)[std::to_string(v)] = s.strategy[v];
    }
    j["win_exists"] = we;
    j["win_forall"] = wa;
    j["strategy_exists"] = se;
    j["strategy_forall"] = sa;
    return j.dump();
}

}  // namespace wb::game
