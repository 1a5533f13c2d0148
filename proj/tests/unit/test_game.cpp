#include <doctest.h>

#include <functional>

#include "support.hpp"
#include "wb/game.hpp"

using namespace wb;
using game::Player;
using rnd::Rng;

namespace {

// Winner of the play from `v` when both players follow fixed positional choices.
bool play_winner(const game::Game& g, const std::vector<int>& choice, int v) {
    std::vector<int> seen(g.size(), -1);
    std::vector<int> path;
    while (seen[v] < 0) {
        if (g.moves[v].empty()) return g.owner[v] == Player::forall;
        seen[v] = static_cast<int>(path.size());
        path.push_back(v);
        v = choice[v];
    }
    int best = -1;
    for (std::size_t i = seen[v]; i < path.size(); ++i) best = std::max(best, g.priority[path[i]]);
    return best % 2 == 0;
}

// Exists wins from v iff some Exists strategy beats every Forall strategy.
std::vector<bool> brute_force(const game::Game& g) {
    const int n = g.size();
    std::vector<int> ex, fa;
    for (int v = 0; v < n; ++v)
        if (!g.moves[v].empty()) (g.owner[v] == Player::exists ? ex : fa).push_back(v);
    std::vector<bool> win(n, false);
    std::vector<int> choice(n, -1);
    std::function<bool(std::size_t, int)> forall_all = [&](std::size_t i, int v) {
        if (i == fa.size()) return play_winner(g, choice, v);
        for (int m : g.moves[fa[i]]) {
            choice[fa[i]] = m;
            if (!forall_all(i + 1, v)) return false;
        }
        return true;
    };
    std::function<void(std::size_t)> exists_any = [&](std::size_t i) {
        if (i == ex.size()) {
            for (int v = 0; v < n; ++v)
                if (!win[v] && forall_all(0, v)) win[v] = true;
            return;
        }
        for (int m : g.moves[ex[i]]) {
            choice[ex[i]] = m;
            exists_any(i + 1);
        }
    };
    exists_any(0);
    return win;
}

}  // namespace

TEST_SUITE("game") {
    TEST_CASE("stuck player loses") {
        game::Game g;
        g.add(Player::exists, 0);
        g.add(Player::forall, 0);
        auto s = game::solve(g);
        CHECK_FALSE(s.win_exists[0]);
        CHECK(s.win_exists[1]);
    }

    TEST_CASE("single cycles") {
        for (int p = 0; p < 4; ++p) {
            game::Game g;
            g.add(Player::exists, p);
            g.edge(0, 0);
            CHECK(game::solve(g).win_exists[0] == (p % 2 == 0));
        }
    }

    TEST_CASE("max-even convention") {
        game::Game g;
        int a = g.add(Player::forall, 1);
        int b = g.add(Player::forall, 2);
        g.edge(a, b);
        g.edge(b, a);
        CHECK(game::solve(g).win_exists[a]);
    }

    TEST_CASE("agrees with strategy enumeration on small games") {
        Rng g(8);
        for (int k = 0; k < 150; ++k) {
            auto gm = rnd::random_game(g, 1 + static_cast<int>(g() % 6), 4);
            auto s = game::solve(gm);
            auto w = brute_force(gm);
            for (int v = 0; v < gm.size(); ++v) CHECK(s.win_exists[v] == w[v]);
        }
    }

    TEST_CASE("check_strategy") {
        Rng g(12);
        for (int k = 0; k < 50; ++k) {
            auto gm = rnd::random_game(g, 1 + static_cast<int>(g() % 12), 5);
            auto s = game::solve(gm);
            CHECK(game::check_strategy(gm, s));
        }
        CHECK(game::check_strategy(game::Game{}, game::solve(game::Game{})));

        // Exists at 0 must move to the even loop at 1, not the odd loop at 2.
        game::Game gm;
        gm.add(Player::exists, 0);
        gm.add(Player::exists, 0);
        gm.add(Player::exists, 1);
        gm.edge(0, 1);
        gm.edge(0, 2);
        gm.edge(1, 1);
        gm.edge(2, 2);
        auto s = game::solve(gm);
        CHECK(s.win_exists[0]);
        CHECK(s.strategy[0] == 1);
        CHECK(game::check_strategy(gm, s));
        s.strategy[0] = 2;
        CHECK_FALSE(game::check_strategy(gm, s));
    }

    TEST_CASE("json") {
        game::Game gm;
        gm.add(Player::exists, 2);
        gm.add(Player::forall, 1);
        gm.edge(0, 1);
        gm.edge(1, 0);
        auto back = game::from_json_text(game::to_json_text(gm));
        CHECK(back.owner == gm.owner);
        CHECK(back.priority == gm.priority);
        CHECK(back.moves == gm.moves);
        CHECK_THROWS(game::from_json_text(R"({"owner":["E"],"priority":[0],"moves":[[3]]})"));
    }
}
