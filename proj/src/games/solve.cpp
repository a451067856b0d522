#include "rsyn/errors.hpp"
#include "rsyn/games.hpp"

#include <algorithm>

namespace rsyn {

MoveSet all_moves(const Dfa& a) {
    MoveSet m(a.num_y());
    for (std::size_t y = 0; y < m.size(); ++y)
        m[y] = Letter(y);
    return m;
}

std::size_t WinningRegion::size() const {
    return std::size_t(std::count_if(member_layer.begin(), member_layer.end(), [](int j) { return j >= 0; }));
}

namespace {

bool all_in(const Dfa& a, int q, Letter x, const MoveSet& ys, const StateSet& set) {
    for (Letter y : ys) {
        int t = a.next(q, a.props.join(x, y));
        if (t < 0 || !set[t])
            return false;
    }
    return true;
}

bool some_in(const Dfa& a, int q, Letter x, const MoveSet& ys, const StateSet& set) {
    for (Letter y : ys) {
        int t = a.next(q, a.props.join(x, y));
        if (t >= 0 && set[t])
            return true;
    }
    return false;
}

// Distinct predecessors of each state, ascending.
std::vector<std::vector<int>> predecessors(const Dfa& a) {
    std::vector<std::vector<int>> pred(a.num_states);
    for (int q = 0; q < a.num_states; ++q)
        for (std::size_t l = 0; l < a.alphabet(); ++l) {
            int t = a.next(q, Letter(l));
            if (t >= 0 && (pred[t].empty() || pred[t].back() != q))
                pred[t].push_back(q);
        }
    for (auto& p : pred) {
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    return pred;
}

} // namespace

StateSet solve_env_safety(const Dfa& a) {
    const MoveSet ys = all_moves(a);
    StateSet env = a.safe;
    bool changed = true;
    while (changed) {
        changed = false;
        StateSet next = env;
        for (int q = 0; q < a.num_states; ++q) {
            if (!env[q])
                continue;
            bool keep = false;
            for (Letter x = 0; x < a.num_x() && !keep; ++x)
                keep = all_in(a, q, x, ys, env);
            if (!keep) {
                next[q] = false;
                changed = true;
            }
        }
        env.swap(next);
    }
    return env;
}

Restricted restrict_arena(const Dfa& a, const StateSet& env) {
    if (!env[a.initial])
        throw EnvUnrealizable();
    const MoveSet ys = all_moves(a);
    Dfa r = a;
    for (int q = 0; q < a.num_states; ++q)
        for (Letter x = 0; x < a.num_x(); ++x) {
            bool keep = env[q] && all_in(a, q, x, ys, env);
            for (Letter y : ys)
                if (!keep)
                    r.at(q, a.props.join(x, y)) = -1;
        }
    Pruned p = prune(r);
    p.dfa.kind = AccKind::Safe;
    p.dfa.safe.assign(p.dfa.num_states, true);
    return {std::move(p.dfa), std::move(p.origin)};
}

WinningRegion solve_reach(const Dfa& a, const StateSet& goal, const MoveSet& moves) {
    const int n = a.num_states;
    for (int q = 0; q < n; ++q) {
        if (goal[q])
            continue;
        bool any = false;
        for (Letter x = 0; x < a.num_x() && !any; ++x)
            any = a.defined(q, x);
        if (!any)
            throw MalformedArena("state " + std::to_string(q) + " has no environment move");
    }

    WinningRegion w;
    w.member_layer.assign(n, -1);
    StateSet cur = goal;
    std::vector<int> fresh;
    for (int q = 0; q < n; ++q)
        if (goal[q]) {
            w.member_layer[q] = 0;
            fresh.push_back(q);
        }
    w.layers.push_back(cur);
    if (fresh.empty())
        return w;

    const auto pred = predecessors(a);
    std::vector<char> queued(n, 0);
    for (int layer = 1;; ++layer) {
        std::vector<int> cand;
        for (int t : fresh)
            for (int q : pred[t])
                if (!cur[q] && !queued[q]) {
                    queued[q] = 1;
                    cand.push_back(q);
                }
        std::sort(cand.begin(), cand.end());
        std::vector<int> added;
        for (int q : cand) {
            queued[q] = 0;
            bool wins = true;
            for (Letter x = 0; x < a.num_x() && wins; ++x)
                if (a.defined(q, x))
                    wins = some_in(a, q, x, moves, cur);
            if (wins)
                added.push_back(q);
        }
        if (added.empty())
            break;
        for (int q : added) {
            cur[q] = true;
            w.member_layer[q] = layer;
        }
        w.layers.push_back(cur);
        fresh.swap(added);
    }
    return w;
}

WinningRegion solve_reach(const Dfa& a) { return solve_reach(a, a.reach, all_moves(a)); }

Dfa reduce_reach_safe(const Dfa& a, const StateSet& reach, const StateSet& safe) {
    Dfa r = a;
    r.kind = AccKind::Reach;
    for (int q = 0; q < a.num_states; ++q) {
        r.reach[q] = reach[q] && safe[q];
        if (!safe[q])
            for (std::size_t l = 0; l < a.alphabet(); ++l)
                r.at(q, Letter(l)) = q;
    }
    return r;
}

StateSet solve_env_dual(const Dfa& a, const StateSet& goal, const MoveSet& moves) {
    StateSet avoid(a.num_states);
    for (int q = 0; q < a.num_states; ++q)
        avoid[q] = !goal[q];
    bool changed = true;
    while (changed) {
        changed = false;
        StateSet next = avoid;
        for (int q = 0; q < a.num_states; ++q) {
            if (!avoid[q])
                continue;
            bool keep = false;
            for (Letter x = 0; x < a.num_x() && !keep; ++x)
                keep = a.defined(q, x) && all_in(a, q, x, moves, avoid);
            if (!keep) {
                next[q] = false;
                changed = true;
            }
        }
        avoid.swap(next);
    }
    return avoid;
}

nlohmann::json to_json(const WinningRegion& w) {
    nlohmann::json layers = nlohmann::json::array();
    for (const StateSet& s : w.layers) {
        nlohmann::json l = nlohmann::json::array();
        for (std::size_t q = 0; q < s.size(); ++q)
            if (s[q])
                l.push_back(q);
        layers.push_back(l);
    }
    nlohmann::json member = nlohmann::json::object();
    for (std::size_t q = 0; q < w.member_layer.size(); ++q)
        if (w.member_layer[q] >= 0)
            member[std::to_string(q)] = w.member_layer[q];
    return {{"layers", layers}, {"member_layer", member}};
}

} // namespace rsyn
