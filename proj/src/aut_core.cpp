#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

#include "wb/aut.hpp"

namespace wb::aut {

namespace os = wb::onestep;
using nlohmann::json;

std::vector<std::string> state_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < std::max(n, 1); ++i) out.push_back("a" + std::to_string(i));
    return out;
}

std::string colour_name(const Automaton& a, int c) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < a.props.size(); ++i)
        if ((c >> i) & 1) {
            if (!first) s += ",";
            s += a.props[i];
            first = false;
        }
    return s + "}";
}

void validate(const Automaton& a) {
    int n = a.size();
    if (n == 0) fail("automaton without states");
    if (n > max_states) fail_limit("automaton exceeds " + std::to_string(max_states) + " states");
    if (a.props.size() > static_cast<std::size_t>(lts::max_props)) fail_limit("too many propositions");
    if (a.init < 0 || a.init >= n) fail("initial state out of range");
    if (static_cast<int>(a.delta.size()) != n) fail("transition table has the wrong number of states");
    for (int s = 0; s < n; ++s) {
        if (a.omega[s] < 0) fail("negative priority");
        if (static_cast<int>(a.delta[s].size()) != a.colours()) fail("transition table is not total over colours");
        for (auto& f : a.delta[s]) {
            if (!f) fail("missing transition");
            if (!os::is_positive(f)) fail("transition formula is not positive");
            if (!os::free_vars(f).empty()) fail("transition formula has free variables");
            if (n < 64 && (os::preds_of(f) >> n) != 0) fail("transition mentions an unknown state");
            if (os::min_dialect(f) > a.dialect) fail("transition formula exceeds the automaton's dialect");
        }
    }
    if (a.two_sorted() && (static_cast<int>(a.sort.size()) != n || static_cast<int>(a.members.size()) != n))
        fail("sort table has the wrong size");
}

// ---------------------------------------------------------------- JSON

namespace {

int parse_colour(const std::string& t, const std::vector<std::string>& props) {
    if (!t.empty() && t.front() == '{') {
        if (t.back() != '}') fail_parse("bad colour " + t);
        int c = 0;
        std::string cur;
        auto flush = [&] {
            if (cur.empty()) return;
            auto it = std::find(props.begin(), props.end(), cur);
            if (it == props.end()) fail_parse("unknown proposition " + cur + " in colour");
            c |= 1 << (it - props.begin());
            cur.clear();
        };
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            char ch = t[i];
            if (ch == ',' || ch == ' ')
                flush();
            else
                cur += ch;
        }
        flush();
        return c;
    }
    try {
        std::size_t used = 0;
        int c = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return c;
    } catch (const std::exception&) {
        fail_parse("bad colour " + t);
    }
}

}  // namespace

Automaton from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail_parse(std::string("automaton JSON: ") + e.what());
    }
    try {
        Automaton a;
        a.dialect = os::dialect_from_name(j.value("dialect", std::string("FOE1INF")));
        a.props = j.at("props").get<std::vector<std::string>>();
        if (a.props.size() > static_cast<std::size_t>(lts::max_props)) fail_limit("too many propositions");
        int n = j.at("states").get<int>();
        if (n <= 0 || n > max_states) fail("state count out of range");
        a.init = j.value("init", 0);
        a.omega = j.at("omega").get<std::vector<int>>();
        if (static_cast<int>(a.omega.size()) != n) fail("omega length differs from the state count");
        a.delta.assign(n, std::vector<os::NodeP>(a.colours()));
        auto names = state_names(n);
        for (auto& [key, val] : j.at("delta").items()) {
            auto comma = key.find(',');
            if (comma == std::string::npos) fail_parse("delta key must be \"state,colour\": " + key);
            int s = std::stoi(key.substr(0, comma));
            std::string ct = key.substr(comma + 1);
            while (!ct.empty() && ct.front() == ' ') ct.erase(ct.begin());
            if (s < 0 || s >= n) fail("delta key names an unknown state: " + key);
            auto f = os::parse(val.get<std::string>(), a.dialect, names).root;
            if (ct == "*") {
                for (auto& slot : a.delta[s])
                    if (!slot) slot = f;
            } else {
                int c = parse_colour(ct, a.props);
                if (c < 0 || c >= a.colours()) fail("delta key names an unknown colour: " + key);
                a.delta[s][c] = f;
            }
        }
        for (int s = 0; s < n; ++s)
            for (int c = 0; c < a.colours(); ++c)
                if (!a.delta[s][c]) fail("delta is not total: missing " + std::to_string(s) + "," + std::to_string(c));
        if (j.contains("sort")) {
            a.sort = j.at("sort").get<std::vector<int>>();
            for (auto& m : j.at("members")) {
                os::Type t = 0;
                for (int x : m) t |= os::Type(1) << x;
                a.members.push_back(t);
            }
        }
        validate(a);
        return a;
    } catch (const json::exception& e) {
        fail_parse(std::string("automaton JSON: ") + e.what());
    }
}

std::string to_json_text(const Automaton& a) {
    json j;
    j["dialect"] = os::dialect_name(a.dialect);
    j["props"] = a.props;
    j["states"] = a.size();
    j["init"] = a.init;
    j["omega"] = a.omega;
    json d = json::object();
    auto names = state_names(a.size());
    for (int s = 0; s < a.size(); ++s)
        for (int c = 0; c < a.colours(); ++c)
            d[std::to_string(s) + "," + std::to_string(c)] = os::node_to_string(a.delta[s][c], names);
    j["delta"] = d;
    if (a.two_sorted()) {
        j["sort"] = a.sort;
        json m = json::array();
        for (os::Type t : a.members) {
            json l = json::array();
            for (int i = 0; i < 64; ++i)
                if ((t >> i) & 1u) l.push_back(i);
            m.push_back(l);
        }
        j["members"] = m;
    }
    return j.dump(2);
}

// ---------------------------------------------------------------- acceptance

int colour_of(const Automaton& a, const lts::Lts& s, int state) {
    int c = 0;
    for (std::size_t i = 0; i < a.props.size(); ++i) {
        int p = s.prop_index(a.props[i]);
        if (p >= 0 && s.has(state, p)) c |= 1 << i;
    }
    return c;
}

AcceptanceGame acceptance_game(const Automaton& a, const lts::Lts& s) {
    validate(a);
    for (auto& p : a.props)
        if (s.prop_index(p) < 0) fail("alphabet mismatch: the LTS lacks proposition " + p);
    AcceptanceGame ag;
    const int n = a.size();
    std::vector<int> basic(static_cast<std::size_t>(n) * s.n, -1);
    std::map<std::tuple<int, int, int>, std::vector<os::Valuation>> cache;
    std::vector<std::pair<int, int>> work;
    auto basic_pos = [&](int q, int st) {
        int& slot = basic[static_cast<std::size_t>(q) * s.n + st];
        if (slot < 0) {
            slot = ag.game.add(game::Player::exists, a.omega[q]);
            ag.labels.push_back("(a" + std::to_string(q) + ", " + std::to_string(st) + ")");
            work.emplace_back(q, st);
        }
        return slot;
    };
    ag.root = basic_pos(a.init, s.init);
    while (!work.empty()) {
        auto [q, st] = work.back();
        work.pop_back();
        int id = basic[static_cast<std::size_t>(q) * s.n + st];
        int c = colour_of(a, s, st);
        const auto& succ = s.succ[st];
        auto key = std::make_tuple(q, c, static_cast<int>(succ.size()));
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, os::minimal_valuations(a.delta[q][c], static_cast<int>(succ.size()))).first;
        for (const auto& val : it->second) {
            int z = ag.game.add(game::Player::forall, 0);
            std::string lab = "{";
            for (std::size_t d = 0; d < val.size(); ++d)
                for (int b = 0; b < n; ++b)
                    if ((val[d] >> b) & 1u) lab += " a" + std::to_string(b) + ":" + std::to_string(succ[d]);
            ag.labels.push_back(lab + " }");
            ag.game.edge(id, z);
            for (std::size_t d = 0; d < val.size(); ++d)
                for (int b = 0; b < n; ++b)
                    if ((val[d] >> b) & 1u) ag.game.edge(z, basic_pos(b, succ[d]));
        }
    }
    return ag;
}

bool accepts_by_game(const Automaton& a, const lts::Lts& s) {
    auto ag = acceptance_game(a, s);
    return game::solve(ag.game).win_exists[ag.root];
}

// Transition formulas are monotone, so at (q, t) Exists can do no better than
// the largest valuation inside the target set: the controllable predecessor is
// a single one-step evaluation. The parity condition is the nested fixpoint
// with the highest priority outermost, greatest for even and least for odd.
bool accepts(const Automaton& a, const lts::Lts& s) {
    validate(a);
    for (auto& p : a.props)
        if (s.prop_index(p) < 0) fail("alphabet mismatch: the LTS lacks proposition " + p);
    const int n = a.size();
    std::vector<int> colour(s.n);
    for (int t = 0; t < s.n; ++t) colour[t] = colour_of(a, s, t);
    // Positions reachable from the root under the most generous valuations.
    std::vector<int> id(static_cast<std::size_t>(n) * s.n, -1);
    std::vector<std::pair<int, int>> pos;
    auto visit = [&](int q, int t) {
        int& slot = id[static_cast<std::size_t>(q) * s.n + t];
        if (slot < 0) {
            slot = static_cast<int>(pos.size());
            pos.emplace_back(q, t);
        }
    };
    visit(a.init, s.init);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        auto [q, t] = pos[i];
        os::Type used = os::preds_of(a.delta[q][colour[t]]);
        for (int b = 0; b < n; ++b)
            if ((used >> b) & 1u)
                for (int u : s.succ[t]) visit(b, u);
    }
    const int top = *std::max_element(a.omega.begin(), a.omega.end());
    std::vector<std::vector<bool>> z(top + 1);
    auto one_step = [&](int i) {
        auto [q, t] = pos[i];
        const auto& succ = s.succ[t];
        const auto& target = z[a.omega[q]];
        os::Model m;
        m.elems.assign(succ.size(), 0);
        for (std::size_t k = 0; k < succ.size(); ++k)
            for (int b = 0; b < n; ++b) {
                int j = id[static_cast<std::size_t>(b) * s.n + succ[k]];
                if (j >= 0 && target[j]) m.elems[k] |= os::Type(1) << b;
            }
        return os::eval_node_finite(a.delta[q][colour[t]], m);
    };
    std::function<std::vector<bool>(int)> level = [&](int i) -> std::vector<bool> {
        if (i < 0) {
            std::vector<bool> out(pos.size());
            for (std::size_t k = 0; k < pos.size(); ++k) out[k] = one_step(static_cast<int>(k));
            return out;
        }
        z[i].assign(pos.size(), i % 2 == 0);
        for (;;) {
            auto next = level(i - 1);
            if (next == z[i]) return next;
            z[i] = std::move(next);
        }
    };
    return level(top)[0];
}

// ---------------------------------------------------------------- boolean structure

Automaton complement(const Automaton& a) {
    validate(a);
    Automaton b = a;
    for (auto& o : b.omega) o += 1;
    for (auto& row : b.delta)
        for (auto& f : row) f = os::dual_node(f);
    return b;
}

Automaton union_automaton(const Automaton& a0, const Automaton& a1) {
    validate(a0);
    validate(a1);
    if (a0.props != a1.props) fail("union of automata over different alphabets");
    int n0 = a0.size(), n1 = a1.size();
    if (n0 + n1 + 1 > max_states) fail_limit("union exceeds " + std::to_string(max_states) + " states");
    Automaton u;
    u.dialect = std::max(a0.dialect, a1.dialect);
    u.props = a0.props;
    u.init = n0 + n1;
    std::vector<int> shift0(n0), shift1(n1);
    for (int i = 0; i < n0; ++i) shift0[i] = i;
    for (int i = 0; i < n1; ++i) shift1[i] = n0 + i;
    bool sorted = a0.two_sorted() || a1.two_sorted();
    for (int i = 0; i < n0; ++i) {
        u.omega.push_back(a0.omega[i]);
        u.delta.push_back(a0.delta[i]);
        if (sorted) {
            u.sort.push_back(a0.two_sorted() ? a0.sort[i] : 0);
            u.members.push_back(a0.two_sorted() ? a0.members[i] : 0);
        }
    }
    for (int i = 0; i < n1; ++i) {
        u.omega.push_back(a1.omega[i]);
        std::vector<os::NodeP> row;
        for (auto& f : a1.delta[i]) row.push_back(os::rename_preds(f, shift1));
        u.delta.push_back(row);
        if (sorted) {
            u.sort.push_back(a1.two_sorted() ? a1.sort[i] : 0);
            u.members.push_back(a1.two_sorted() ? a1.members[i] : 0);
        }
    }
    u.omega.push_back(1);
    std::vector<os::NodeP> row;
    for (int c = 0; c < u.colours(); ++c)
        row.push_back(os::disj2(a0.delta[a0.init][c], os::rename_preds(a1.delta[a1.init][c], shift1)));
    u.delta.push_back(row);
    if (sorted) {
        u.sort.push_back(0);
        u.members.push_back(0);
    }
    return u;
}

Automaton top_automaton(const std::vector<std::string>& props, os::Dialect d) {
    Automaton a;
    a.dialect = d;
    a.props = props;
    a.omega = {0};
    a.delta = {std::vector<os::NodeP>(a.colours(), os::top())};
    return a;
}

Automaton bot_automaton(const std::vector<std::string>& props, os::Dialect d) {
    Automaton a = top_automaton(props, d);
    a.omega = {1};
    a.delta = {std::vector<os::NodeP>(a.colours(), os::bot())};
    return a;
}

// ---------------------------------------------------------------- clusters

namespace {

std::vector<std::vector<bool>> occurrence(const Automaton& a) {
    int n = a.size();
    std::vector<std::vector<bool>> occ(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s)
        for (auto& f : a.delta[s]) {
            os::Type t = os::preds_of(f);
            for (int b = 0; b < n; ++b)
                if ((t >> b) & 1u) occ[s][b] = true;
        }
    return occ;
}

}  // namespace

ClusterReport classify_automaton(const Automaton& a) {
    validate(a);
    int n = a.size();
    auto occ = occurrence(a);
    // Reflexive-transitive reachability.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (occ[u][v] && !reach[s][v]) {
                    reach[s][v] = true;
                    stack.push_back(v);
                }
        }
    }
    ClusterReport r;
    r.cluster_of.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (r.cluster_of[s] >= 0) continue;
        std::vector<int> cl;
        for (int t = 0; t < n; ++t)
            if (reach[s][t] && reach[t][s]) cl.push_back(t);
        for (int t : cl) r.cluster_of[t] = static_cast<int>(r.clusters.size());
        r.clusters.push_back(cl);
    }
    // Order clusters so that higher ones come first.
    int k = static_cast<int>(r.clusters.size());
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    auto below = [&](int i) {
        int cnt = 0;
        for (int t = 0; t < n; ++t)
            if (reach[r.clusters[i][0]][t]) ++cnt;
        return cnt;
    };
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return below(x) > below(y); });
    std::vector<std::vector<int>> sorted;
    for (int i : order) sorted.push_back(r.clusters[i]);
    r.clusters = sorted;
    for (int i = 0; i < k; ++i)
        for (int t : r.clusters[i]) r.cluster_of[t] = i;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && reach[r.clusters[i][0]][r.clusters[j][0]]) r.higher.emplace_back(i, j);
    r.weak = true;
    r.continuous_weak = true;
    for (int i = 0; i < k; ++i) {
        const auto& cl = r.clusters[i];
        bool degenerate = cl.size() == 1 && !occ[cl[0]][cl[0]];
        r.degenerate.push_back(degenerate);
        os::Type m = 0;
        for (int t : cl) m |= os::Type(1) << t;
        for (int t : cl)
            if (a.omega[t] != a.omega[cl[0]]) r.weak = false;
        for (int t : cl)
            for (auto& f : a.delta[t]) {
                bool ok = a.omega[t] % 2 == 1 ? os::in_cont(f, m) : os::in_cocont(f, m);
                if (!ok) r.continuous_weak = false;
            }
    }
    if (!r.weak) r.continuous_weak = false;
    return r;
}

Automaton normalize_weak_priorities(const Automaton& a) {
    if (!classify_automaton(a).weak) fail("automaton is not weak");
    Automaton b = a;
    for (auto& o : b.omega) o %= 2;
    return b;
}

Automaton trim(const Automaton& a) {
    validate(a);
    auto occ = occurrence(a);
    int n = a.size();
    std::vector<bool> seen(n, false);
    std::vector<int> stack{a.init};
    seen[a.init] = true;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n; ++v)
            if (occ[u][v] && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    std::vector<int> map(n, -1);
    int m = 0;
    for (int i = 0; i < n; ++i)
        if (seen[i]) map[i] = m++;
    if (m == n) return a;
    Automaton b;
    b.dialect = a.dialect;
    b.props = a.props;
    b.init = map[a.init];
    for (int i = 0; i < n; ++i) {
        if (!seen[i]) continue;
        b.omega.push_back(a.omega[i]);
        std::vector<os::NodeP> row;
        for (auto& f : a.delta[i]) row.push_back(os::rename_preds(f, map));
        b.delta.push_back(row);
        if (a.two_sorted()) {
            b.sort.push_back(a.sort[i]);
            b.members.push_back(a.members[i]);
        }
    }
    return b;
}

// ---------------------------------------------------------------- alphabets

Automaton extend_alphabet(const Automaton& a, const std::vector<std::string>& props) {
    validate(a);
    std::vector<int> pos;
    for (auto& p : a.props) {
        auto it = std::find(props.begin(), props.end(), p);
        if (it == props.end()) fail("extended alphabet drops proposition " + p);
        pos.push_back(static_cast<int>(it - props.begin()));
    }
    if (props.size() > static_cast<std::size_t>(lts::max_props)) fail_limit("too many propositions");
    Automaton b = a;
    b.props = props;
    for (int s = 0; s < a.size(); ++s) {
        std::vector<os::NodeP> row(b.colours());
        for (int c = 0; c < b.colours(); ++c) {
            int old = 0;
            for (std::size_t i = 0; i < pos.size(); ++i)
                if ((c >> pos[i]) & 1) old |= 1 << i;
            row[c] = a.delta[s][old];
        }
        b.delta[s] = row;
    }
    return b;
}

Automaton project(const Automaton& a, const std::string& p) {
    validate(a);
    auto it = std::find(a.props.begin(), a.props.end(), p);
    if (it == a.props.end()) fail("projected letter " + p + " is not in the alphabet");
    if (!a.two_sorted()) fail("projection needs a two-sorted construct");
    int k = static_cast<int>(it - a.props.begin());
    Automaton b = a;
    b.props.erase(b.props.begin() + k);
    auto widen = [&](int c) {
        int low = c & ((1 << k) - 1);
        int high = (c >> k) << (k + 1);
        return low | high;
    };
    for (int s = 0; s < a.size(); ++s) {
        std::vector<os::NodeP> row(b.colours());
        for (int c = 0; c < b.colours(); ++c) {
            int old = widen(c);
            row[c] = a.sort[s] == 1 ? os::disj2(a.delta[s][old], a.delta[s][old | (1 << k)]) : a.delta[s][old];
        }
        b.delta[s] = row;
    }
    return b;
}

// ---------------------------------------------------------------- base automata

namespace {

int letter_bit(const std::vector<std::string>& props, const std::string& p) {
    auto it = std::find(props.begin(), props.end(), p);
    if (it == props.end()) fail("letter " + p + " is not in the alphabet");
    return 1 << (it - props.begin());
}

os::NodeP all_succ(int state) { return os::quant(os::Kind::forall, 0, os::atom(state, 0)); }

}  // namespace

Automaton root_only(const std::vector<std::string>& props, const std::string& p, os::Dialect d) {
    int bp = letter_bit(props, p);
    Automaton a;
    a.dialect = d;
    a.props = props;
    a.omega = {0, 0};
    a.delta.assign(2, std::vector<os::NodeP>(a.colours()));
    for (int c = 0; c < a.colours(); ++c) {
        a.delta[0][c] = (c & bp) ? all_succ(1) : os::bot();
        a.delta[1][c] = (c & bp) ? os::bot() : all_succ(1);
    }
    return a;
}

Automaton included(const std::vector<std::string>& props, const std::string& p, const std::string& q, os::Dialect d) {
    int bp = letter_bit(props, p), bq = letter_bit(props, q);
    Automaton a;
    a.dialect = d;
    a.props = props;
    a.omega = {0};
    a.delta.assign(1, std::vector<os::NodeP>(a.colours()));
    for (int c = 0; c < a.colours(); ++c) a.delta[0][c] = (!(c & bp) || (c & bq)) ? all_succ(0) : os::bot();
    return a;
}

Automaton successor(const std::vector<std::string>& props, const std::string& p, const std::string& q, os::Dialect d) {
    int bp = letter_bit(props, p), bq = letter_bit(props, q);
    Automaton a;
    a.dialect = d;
    a.props = props;
    a.omega = {0, 1};
    a.delta.assign(2, std::vector<os::NodeP>(a.colours()));
    for (int c = 0; c < a.colours(); ++c) {
        a.delta[0][c] = (c & bp) ? os::conj2(os::quant(os::Kind::exists, 0, os::atom(1, 0)), all_succ(0)) : all_succ(0);
        a.delta[1][c] = (c & bq) ? os::top() : os::bot();
    }
    return a;
}

}  // namespace wb::aut
