#pragma once

#include <string>
#include <vector>

#include "wb/lts.hpp"
#include "wb/random.hpp"

namespace wb::test {

using lts::Lts;
using rnd::Rng;

// 0 -> 1 -> ... -> n-1 with the given colours.
inline Lts chain(int n, const std::vector<std::vector<std::string>>& colours = {},
                 const std::vector<std::string>& props = {"p", "q"}) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    auto c = colours;
    c.resize(n);
    return lts::make(props, n, e, c, 0);
}

// Single state with a self-loop.
inline Lts loop(const std::vector<std::string>& colour = {}, const std::vector<std::string>& props = {"p", "q"}) {
    return lts::make(props, 1, {{0, 0}}, {colour}, 0);
}

inline lts::StateSet set_of(int n, const std::vector<int>& xs) {
    lts::StateSet s(n, false);
    for (int x : xs) s[x] = true;
    return s;
}

inline lts::StateSet subset_from_mask(int n, unsigned m) {
    lts::StateSet s(n, false);
    for (int i = 0; i < n; ++i) s[i] = (m >> i) & 1u;
    return s;
}

inline const std::vector<std::string>& letters() {
    static const std::vector<std::string> l{"p", "q"};
    return l;
}

}  // namespace wb::test
