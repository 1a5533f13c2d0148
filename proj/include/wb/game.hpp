#pragma once

#include <string>
#include <vector>

#include "wb/common.hpp"

namespace wb::game {

enum class Player : std::uint8_t { exists = 0, forall = 1 };

inline Player opponent(Player p) { return p == Player::exists ? Player::forall : Player::exists; }

// Max-parity convention: Exists wins an infinite play iff the largest
// priority seen infinitely often is even. A stuck player loses.
struct Game {
    std::vector<Player> owner;
    std::vector<int> priority;
    std::vector<std::vector<int>> moves;

    int add(Player who, int prio) {
        owner.push_back(who);
        priority.push_back(prio);
        moves.emplace_back();
        return static_cast<int>(owner.size()) - 1;
    }
    void edge(int from, int to) { moves[from].push_back(to); }
    int size() const { return static_cast<int>(owner.size()); }
};

struct Solution {
    std::vector<bool> win_exists;  // complement is Forall's region
    std::vector<int> strategy;     // owner's move at positions the owner wins, else -1

    bool winner_is_exists(int v) const { return win_exists[v]; }
};

Solution solve(const Game& g);

// Independent certificate check of a solution (closure plus cycle parity).
bool check_strategy(const Game& g, const Solution& s);

Game from_json_text(const std::string& text);
std::string to_json_text(const Game& g);
std::string solution_to_json_text(const Game& g, const Solution& s);

}  // namespace wb::game
