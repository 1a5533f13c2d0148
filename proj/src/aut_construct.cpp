#include <algorithm>
#include <deque>
#include <map>

#include "wb/aut.hpp"

namespace wb::aut {

namespace os = wb::onestep;

namespace {

// Shared skeleton of the two simulation constructs: ordinary states keep their
// transitions, macro-states run the lifted normal form of the conjunction.
struct Construct {
    const Automaton& a;
    bool finitary;
    Automaton out;
    std::map<os::Type, int> macro;  // member set -> state index
    std::deque<os::Type> pending;

    int macro_state(os::Type q) {
        auto it = macro.find(q);
        if (it != macro.end()) return it->second;
        int id = a.size() + static_cast<int>(macro.size());
        if (id >= max_states) fail_limit("construct exceeds " + std::to_string(max_states) + " states");
        macro[q] = id;
        pending.push_back(q);
        return id;
    }

    os::Type lift(os::Type s) { return s == 0 ? 0 : os::Type(1) << macro_state(s); }

    std::vector<os::Type> lift_all(const std::vector<os::Type>& v) {
        std::vector<os::Type> out;
        for (os::Type s : v) out.push_back(lift(s));
        return out;
    }

    os::NodeP conjunction(os::Type q, int c) const {
        std::vector<os::NodeP> parts;
        for (int s = 0; s < a.size(); ++s)
            if ((q >> s) & 1u) parts.push_back(a.delta[s][c]);
        return os::conj(parts);
    }

    os::NodeP macro_delta(os::Type q, int c) {
        os::NodeP conj = conjunction(q, c);
        os::Formula f{finitary ? os::Dialect::foe1inf : os::Dialect::foe1, state_names(a.size()), conj};
        os::BasicForm bf = os::to_basic_form(f);
        std::vector<os::NodeP> lifted;
        for (const auto& r : bf.disjuncts) {
            os::Nabla l;
            l.wit = lift_all(r.wit);
            l.pi = lift_all(r.pi);
            if (finitary) {
                auto ls = lift_all(r.sigma);
                l.pi.insert(l.pi.end(), ls.begin(), ls.end());
                l.sigma = r.sigma;
                lifted.push_back(os::nabla_node(os::Dialect::foe1inf, l));
            } else {
                lifted.push_back(os::nabla_node(os::Dialect::foe1, l));
            }
        }
        return os::disj2(os::disj(lifted), conj);
    }

    Automaton run() {
        out.dialect = finitary ? os::Dialect::foe1inf : os::Dialect::foe1;
        out.props = a.props;
        out.omega = a.omega;
        out.delta = a.delta;
        out.sort.assign(a.size(), 0);
        out.members.assign(a.size(), 0);
        // Small automata get every macro-state; larger ones only the reachable ones.
        if (a.size() <= 4)
            for (os::Type q = 0; q < (os::Type(1) << a.size()); ++q) macro_state(q);
        out.init = macro_state(os::Type(1) << a.init);
        std::map<int, std::vector<os::NodeP>> rows;
        while (!pending.empty()) {
            os::Type q = pending.front();
            pending.pop_front();
            std::vector<os::NodeP> row;
            for (int c = 0; c < a.colours(); ++c) row.push_back(macro_delta(q, c));
            rows[macro[q]] = row;
        }
        std::vector<std::pair<int, os::Type>> order;
        for (auto& [q, id] : macro) order.emplace_back(id, q);
        std::sort(order.begin(), order.end());
        for (auto& [id, q] : order) {
            out.omega.push_back(1);
            out.delta.push_back(rows[id]);
            out.sort.push_back(1);
            out.members.push_back(q);
        }
        validate(out);
        return out;
    }
};

}  // namespace

Automaton finitary_construct(const Automaton& a) {
    auto rep = classify_automaton(a);
    if (!rep.continuous_weak) fail("finitary construct needs a continuous-weak automaton");
    Construct c{a, true, {}, {}, {}};
    return c.run();
}

Automaton noetherian_construct(const Automaton& a) {
    auto rep = classify_automaton(a);
    if (!rep.weak) fail("noetherian construct needs a weak automaton");
    for (auto& row : a.delta)
        for (auto& f : row)
            if (os::min_dialect(f) == os::Dialect::foe1inf) fail("noetherian construct needs FOE1 transitions");
    Construct c{a, false, {}, {}, {}};
    return c.run();
}

}  // namespace wb::aut
