#include "wb/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <json.hpp>

namespace wb::lts {

using nlohmann::json;

int Lts::prop_index(const std::string& p) const {
    for (std::size_t i = 0; i < props.size(); ++i)
        if (props[i] == p) return static_cast<int>(i);
    return -1;
}

namespace {

struct Raw {
    std::vector<std::string> props;
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, std::vector<std::string>>> colours;
    int init = 0;
};

std::vector<std::string> check_raw(const Raw& r) {
    std::vector<std::string> errs;
    std::set<std::string> seen;
    for (const auto& p : r.props)
        if (!seen.insert(p).second) errs.push_back("duplicate proposition " + p);
    if (static_cast<int>(r.props.size()) > max_props)
        errs.push_back("more than " + std::to_string(max_props) + " propositions");
    if (r.n < 1) errs.push_back("an LTS needs at least one state");
    for (auto [i, j] : r.edges) {
        if (i < 0 || i >= r.n) errs.push_back("dangling source " + std::to_string(i));
        if (j < 0 || j >= r.n) errs.push_back("dangling target " + std::to_string(j));
    }
    for (const auto& [st, ps] : r.colours) {
        if (st < 0 || st >= r.n) errs.push_back("colour for unknown state " + std::to_string(st));
        for (const auto& p : ps)
            if (!seen.count(p)) errs.push_back("unknown proposition " + p + " at state " + std::to_string(st));
    }
    if (r.init < 0 || r.init >= r.n) errs.push_back("initial state out of range");
    return errs;
}

Lts build(const Raw& r) {
    Lts s;
    s.props = r.props;
    s.n = r.n;
    s.succ.assign(r.n, {});
    s.colour.assign(r.n, 0);
    for (auto [i, j] : r.edges) s.succ[i].push_back(j);
    for (auto& v : s.succ) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (const auto& [st, ps] : r.colours)
        for (const auto& p : ps) s.colour[st] |= 1u << s.prop_index(p);
    s.init = r.init;
    return s;
}

Raw parse_raw(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_parse(std::string("LTS JSON: ") + e.what());
    }
    Raw r;
    try {
        if (j.contains("props")) r.props = j.at("props").get<std::vector<std::string>>();
        r.n = j.at("states").get<int>();
        if (j.contains("edges"))
            for (const auto& e : j.at("edges")) r.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        if (j.contains("colors"))
            for (auto it = j.at("colors").begin(); it != j.at("colors").end(); ++it)
                r.colours.emplace_back(std::stoi(it.key()), it.value().get<std::vector<std::string>>());
        r.init = j.value("init", 0);
    } catch (const json::exception& e) {
        fail_parse(std::string("LTS JSON: ") + e.what());
    } catch (const std::invalid_argument&) {
        fail_parse("LTS JSON: colour keys must be state numbers");
    }
    return r;
}

}  // namespace

Lts make(std::vector<std::string> props, int n, const std::vector<std::pair<int, int>>& edges,
         const std::vector<std::vector<std::string>>& colours, int init) {
    Raw r;
    r.props = std::move(props);
    r.n = n;
    r.edges = edges;
    for (std::size_t i = 0; i < colours.size(); ++i) r.colours.emplace_back(static_cast<int>(i), colours[i]);
    r.init = init;
    auto errs = check_raw(r);
    if (!errs.empty()) fail(errs.front());
    return build(r);
}

Lts from_json_text(const std::string& text) {
    Raw r = parse_raw(text);
    auto errs = check_raw(r);
    if (!errs.empty()) fail(errs.front());
    return build(r);
}

std::string to_json_text(const Lts& s) {
    json j;
    j["props"] = s.props;
    j["states"] = s.n;
    json edges = json::array();
    for (int i = 0; i < s.n; ++i)
        for (int t : s.succ[i]) edges.push_back({i, t});
    j["edges"] = edges;
    json cols = json::object();
    for (int i = 0; i < s.n; ++i) {
        if (!s.colour[i]) continue;
        std::vector<std::string> ps;
        for (std::size_t p = 0; p < s.props.size(); ++p)
            if (s.has(i, static_cast<int>(p))) ps.push_back(s.props[p]);
        cols[std::to_string(i)] = ps;
    }
    j["colors"] = cols;
    j["init"] = s.init;
    return j.dump();
}

std::vector<bool> reachable_from(const Lts& s, int from) {
    std::vector<bool> seen(s.n, false);
    std::deque<int> q{from};
    seen[from] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : s.succ[u])
            if (!seen[v]) {
                seen[v] = true;
                q.push_back(v);
            }
    }
    return seen;
}

ValidationReport validate(const Lts& s) {
    ValidationReport rep;
    rep.ok = true;
    rep.reachable = reachable_from(s, s.init);
    std::vector<int> indeg(s.n, 0);
    rep.parent.assign(s.n, -1);
    for (int i = 0; i < s.n; ++i)
        for (int t : s.succ[i]) {
            ++indeg[t];
            rep.parent[t] = i;
        }
    bool tree = indeg[s.init] == 0;
    for (int i = 0; i < s.n && tree; ++i) {
        if (!rep.reachable[i]) tree = false;
        if (i != s.init && indeg[i] != 1) tree = false;
    }
    rep.is_tree = tree;
    if (!tree) rep.parent.clear();
    return rep;
}

ValidationReport validate_json_text(const std::string& text) {
    Raw r = parse_raw(text);
    auto errs = check_raw(r);
    if (!errs.empty()) {
        ValidationReport rep;
        rep.errors = errs;
        return rep;
    }
    return validate(build(r));
}

bool is_tree(const Lts& s) { return validate(s).is_tree; }

Lts p_variant(const Lts& s, const std::string& p, const StateSet& x) {
    if (static_cast<int>(x.size()) != s.n) fail("p_variant: state set has wrong size");
    Lts out = s;
    int idx = out.prop_index(p);
    if (idx < 0) {
        if (static_cast<int>(out.props.size()) >= max_props) fail("p_variant: too many propositions");
        out.props.push_back(p);
        idx = static_cast<int>(out.props.size()) - 1;
    }
    for (int i = 0; i < out.n; ++i) {
        out.colour[i] &= ~(1u << idx);
        if (x[i]) out.colour[i] |= 1u << idx;
    }
    return out;
}

BisimResult bisimilar(const Lts& a, const Lts& b) {
    if (a.props != b.props) fail("bisimilar: proposition sets differ");
    const int n = a.n + b.n;
    auto succ = [&](int u) -> const std::vector<int>& { return u < a.n ? a.succ[u] : b.succ[u - a.n]; };
    auto off = [&](int u) { return u < a.n ? 0 : a.n; };
    std::vector<int> block(n);
    for (int u = 0; u < n; ++u) block[u] = static_cast<int>(u < a.n ? a.colour[u] : b.colour[u - a.n]);
    // Refine by successor-block signatures until the number of blocks is stable.
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<int> next(n);
        for (int u = 0; u < n; ++u) {
            std::vector<int> sig;
            for (int v : succ(u)) sig.push_back(block[v + off(u)]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto key = std::make_pair(block[u], std::move(sig));
            auto it = ids.find(key);
            if (it == ids.end()) it = ids.emplace(std::move(key), static_cast<int>(ids.size())).first;
            next[u] = it->second;
        }
        std::set<int> before(block.begin(), block.end());
        block = next;
        if (ids.size() == before.size()) break;
    }
    BisimResult r;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j)
            if (block[i] == block[a.n + j]) r.relation.emplace_back(i, j);
    r.bisimilar = block[a.init] == block[a.n + b.init];
    return r;
}

Lts unravel_to_depth(const Lts& s, int d) {
    if (d < 0) fail("unravel_to_depth: negative depth");
    Lts out;
    out.props = s.props;
    std::vector<int> origin{s.init};
    std::vector<int> depth{0};
    out.succ.push_back({});
    for (std::size_t k = 0; k < origin.size(); ++k) {
        if (depth[k] == d) continue;
        for (int t : s.succ[origin[k]]) {
            int id = static_cast<int>(origin.size());
            origin.push_back(t);
            depth.push_back(depth[k] + 1);
            out.succ.push_back({});
            out.succ[k].push_back(id);
        }
    }
    out.n = static_cast<int>(origin.size());
    out.colour.resize(out.n);
    for (int i = 0; i < out.n; ++i) out.colour[i] = s.colour[origin[i]];
    out.init = 0;
    return out;
}

bool noetherian_subset(const Lts& s, const StateSet& x) {
    if (static_cast<int>(x.size()) != s.n) fail("noetherian_subset: state set has wrong size");
    if (std::none_of(x.begin(), x.end(), [](bool b) { return b; })) return true;
    for (int r = 0; r < s.n; ++r) {
        auto reach = reachable_from(s, r);
        bool all = true;
        for (int i = 0; i < s.n && all; ++i)
            if (x[i] && !reach[i]) all = false;
        if (all) return true;
    }
    return false;
}

StateSet empty_set(const Lts& s) { return StateSet(s.n, false); }
StateSet full_set(const Lts& s) { return StateSet(s.n, true); }

std::vector<int> members(const StateSet& x) {
    std::vector<int> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace wb::lts
