#include "rsyn/automata.hpp"
#include "rsyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace rsyn {

namespace {

int label(const Dfa& d, int q) {
    switch (d.kind) {
    case AccKind::Reach: return d.reach[q] ? 1 : 0;
    case AccKind::Safe: return d.safe[q] ? 1 : 0;
    case AccKind::ReachSafe: return (d.reach[q] ? 2 : 0) | (d.safe[q] ? 1 : 0);
    }
    return 0;
}

Dfa with_states(const Dfa& d, int n) {
    Dfa out;
    out.props = d.props;
    out.kind = d.kind;
    out.num_states = n;
    out.delta.assign(std::size_t(n) * d.alphabet(), -1);
    out.reach.assign(n, false);
    out.safe.assign(n, false);
    return out;
}

} // namespace

StateSet Product::lift(std::size_t i, const StateSet& component) const {
    StateSet out(dfa.num_states, false);
    for (int q = 0; q < dfa.num_states; ++q)
        out[q] = component[proj[i][q]];
    return out;
}

Product product(const std::vector<const Dfa*>& parts) {
    if (parts.empty())
        throw Error("product of no automata");
    for (const Dfa* p : parts)
        if (p->props != parts[0]->props)
            throw Error("product of automata over different proposition sets");

    struct Hash {
        std::size_t operator()(const std::vector<int>& v) const {
            std::size_t h = 0;
            for (int x : v)
                h = h * 1000003u + std::size_t(x);
            return h;
        }
    };

    const std::size_t k = parts[0]->alphabet();
    const std::size_t m = parts.size();
    Product out;
    out.dfa.props = parts[0]->props;
    out.proj.assign(m, {});
    std::unordered_map<std::vector<int>, int, Hash> ids;
    std::vector<std::vector<int>> tuples;

    auto intern = [&](const std::vector<int>& t) {
        auto it = ids.find(t);
        if (it != ids.end())
            return it->second;
        int id = int(tuples.size());
        tuples.push_back(t);
        ids.emplace(t, id);
        out.dfa.delta.resize(tuples.size() * k, -1);
        return id;
    };

    std::vector<int> init(m);
    for (std::size_t i = 0; i < m; ++i)
        init[i] = parts[i]->initial;
    out.dfa.initial = intern(init);

    std::vector<int> next(m);
    for (std::size_t q = 0; q < tuples.size(); ++q) {
        const std::vector<int> cur = tuples[q];
        for (std::size_t l = 0; l < k; ++l) {
            bool defined = true;
            for (std::size_t i = 0; i < m && defined; ++i) {
                next[i] = parts[i]->next(cur[i], Letter(l));
                defined = next[i] >= 0;
            }
            if (defined)
                out.dfa.delta[q * k + l] = intern(next);
        }
    }

    const int n = int(tuples.size());
    out.dfa.num_states = n;
    out.dfa.kind = AccKind::Reach;
    out.dfa.reach.assign(n, true);
    out.dfa.safe.assign(n, true);
    for (std::size_t i = 0; i < m; ++i) {
        out.proj[i].resize(n);
        for (int q = 0; q < n; ++q) {
            int c = tuples[q][i];
            out.proj[i][q] = c;
            const Dfa& p = *parts[i];
            bool acc = p.kind == AccKind::Reach ? bool(p.reach[c])
                     : p.kind == AccKind::Safe  ? bool(p.safe[c])
                                                : p.reach[c] && p.safe[c];
            out.dfa.reach[q] = out.dfa.reach[q] && acc;
        }
    }
    return out;
}

RunResult run_on(const Dfa& d, const History& h) {
    RunResult r;
    r.states_visited.reserve(h.size() + 1);
    int q = d.initial;
    r.states_visited.push_back(q);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] >= d.alphabet())
            throw Error("letter outside the alphabet at step " + std::to_string(i));
        q = d.next(q, h[i]);
        if (q < 0)
            throw UndefinedTransition(i);
        r.states_visited.push_back(q);
    }
    r.landed = q;
    return r;
}

// Hopcroft's algorithm with whole blocks as splitters: popping a block refines
// against its preimage under every letter.
Dfa minimize(const Dfa& d) {
    if (!d.total())
        throw Error("minimize requires a total transition function");
    const int n = d.num_states;
    const std::size_t k = d.alphabet();

    // inverse transitions, CSR per letter
    std::vector<int> inv_start((n + 1) * k, 0), inv(std::size_t(n) * k);
    for (std::size_t l = 0; l < k; ++l) {
        int* start = &inv_start[l * (n + 1)];
        for (int q = 0; q < n; ++q)
            ++start[d.next(q, Letter(l)) + 1];
        for (int t = 0; t < n; ++t)
            start[t + 1] += start[t];
        std::vector<int> fill(start, start + n);
        for (int q = 0; q < n; ++q)
            inv[l * n + fill[d.next(q, Letter(l))]++] = q;
    }

    // Blocks are contiguous ranges of elems.
    std::vector<int> elems(n), loc(n), block(n);
    std::vector<int> first, past, marked;
    {
        std::map<int, std::vector<int>> by_label;
        for (int q = 0; q < n; ++q)
            by_label[label(d, q)].push_back(q);
        int pos = 0;
        for (auto& [lab, qs] : by_label) {
            int b = int(first.size());
            first.push_back(pos);
            for (int q : qs) {
                elems[pos] = q;
                loc[q] = pos++;
                block[q] = b;
            }
            past.push_back(pos);
        }
        marked.assign(first.size(), 0);
    }

    std::deque<int> work;
    std::vector<bool> in_work(first.size(), false);
    for (int b = 0; b < int(first.size()); ++b) {
        work.push_back(b);
        in_work[b] = true;
    }

    std::vector<int> touched;
    while (!work.empty()) {
        int splitter = work.front();
        work.pop_front();
        in_work[splitter] = false;
        std::vector<int> members(elems.begin() + first[splitter], elems.begin() + past[splitter]);
        for (std::size_t l = 0; l < k; ++l) {
            const int* start = &inv_start[l * (n + 1)];
            touched.clear();
            for (int t : members)
                for (int i = start[t]; i < start[t + 1]; ++i) {
                    int q = inv[l * n + i];
                    int b = block[q];
                    int p = first[b] + marked[b];
                    if (loc[q] < p)
                        continue; // already marked
                    int other = elems[p];
                    std::swap(elems[loc[q]], elems[p]);
                    loc[other] = loc[q];
                    loc[q] = p;
                    if (marked[b]++ == 0)
                        touched.push_back(b);
                }
            for (int b : touched) {
                int size = past[b] - first[b];
                int cnt = marked[b];
                marked[b] = 0;
                if (cnt == size)
                    continue;
                // marked prefix becomes a new block
                int nb = int(first.size());
                first.push_back(first[b]);
                past.push_back(first[b] + cnt);
                marked.push_back(0);
                in_work.push_back(false);
                first[b] += cnt;
                for (int i = first[nb]; i < past[nb]; ++i)
                    block[elems[i]] = nb;
                if (in_work[b] || cnt <= size - cnt) {
                    work.push_back(nb);
                    in_work[nb] = true;
                } else {
                    work.push_back(b);
                    in_work[b] = true;
                }
                if (in_work[b] && !in_work[nb]) {
                    work.push_back(nb);
                    in_work[nb] = true;
                }
            }
        }
    }

    Dfa out = with_states(d, int(first.size()));
    out.initial = block[d.initial];
    for (int q = 0; q < n; ++q) {
        int b = block[q];
        out.reach[b] = d.reach[q];
        out.safe[b] = d.safe[q];
        for (std::size_t l = 0; l < k; ++l)
            out.at(b, Letter(l)) = block[d.next(q, Letter(l))];
    }
    return canonical(out);
}

Pruned prune(const Dfa& d, int root) {
    if (root < 0)
        root = d.initial;
    const std::size_t k = d.alphabet();
    std::vector<bool> seen(d.num_states, false);
    std::vector<int> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (std::size_t l = 0; l < k; ++l) {
            int t = d.next(q, Letter(l));
            if (t >= 0 && !seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    Pruned p;
    std::vector<int> id(d.num_states, -1);
    for (int q = 0; q < d.num_states; ++q)
        if (seen[q]) {
            id[q] = int(p.origin.size());
            p.origin.push_back(q);
        }
    p.dfa = with_states(d, int(p.origin.size()));
    p.dfa.initial = id[root];
    for (int nq = 0; nq < p.dfa.num_states; ++nq) {
        int q = p.origin[nq];
        p.dfa.reach[nq] = d.reach[q];
        p.dfa.safe[nq] = d.safe[q];
        for (std::size_t l = 0; l < k; ++l) {
            int t = d.next(q, Letter(l));
            p.dfa.at(nq, Letter(l)) = t < 0 ? -1 : id[t];
        }
    }
    return p;
}

Dfa canonical(const Dfa& d) {
    const std::size_t k = d.alphabet();
    std::vector<int> id(d.num_states, -1), order;
    id[d.initial] = 0;
    order.push_back(d.initial);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t l = 0; l < k; ++l) {
            int t = d.next(order[i], Letter(l));
            if (t >= 0 && id[t] < 0) {
                id[t] = int(order.size());
                order.push_back(t);
            }
        }
    Dfa out = with_states(d, int(order.size()));
    out.initial = 0;
    for (int nq = 0; nq < out.num_states; ++nq) {
        int q = order[nq];
        out.reach[nq] = d.reach[q];
        out.safe[nq] = d.safe[q];
        for (std::size_t l = 0; l < k; ++l) {
            int t = d.next(q, Letter(l));
            out.at(nq, Letter(l)) = t < 0 ? -1 : id[t];
        }
    }
    return out;
}

namespace {

// Shannon expansion over propositions in index order.
Formula guard_rec(const std::vector<Letter>& set, std::size_t v, std::size_t n, const PropSet& props) {
    if (set.empty())
        return ltl::ff();
    if (set.size() == (std::size_t(1) << (n - v)))
        return ltl::tt();
    std::vector<Letter> hi, lo;
    for (Letter l : set)
        ((l >> v) & 1 ? hi : lo).push_back(l & ~(Letter(1) << v));
    if (hi == lo)
        return guard_rec(lo, v + 1, n, props);
    Formula var = ltl::atom(props.name(v), int(v));
    Formula g1 = guard_rec(hi, v + 1, n, props);
    Formula g0 = guard_rec(lo, v + 1, n, props);
    Formula pos = g1.op() == Op::True ? var : ltl::conj(var, g1);
    Formula neg = g0.op() == Op::True ? ltl::neg(var) : ltl::conj(ltl::neg(var), g0);
    if (hi.empty())
        return neg;
    if (lo.empty())
        return pos;
    return ltl::disj(pos, neg);
}

std::map<std::pair<int, int>, std::vector<bool>> edge_sets(const Dfa& d) {
    std::map<std::pair<int, int>, std::vector<bool>> edges;
    for (int q = 0; q < d.num_states; ++q)
        for (std::size_t l = 0; l < d.alphabet(); ++l) {
            int t = d.next(q, Letter(l));
            if (t < 0)
                continue;
            auto& set = edges[{q, t}];
            if (set.empty())
                set.assign(d.alphabet(), false);
            set[l] = true;
        }
    return edges;
}

const char* kind_name(AccKind k) {
    switch (k) {
    case AccKind::Reach: return "reach";
    case AccKind::Safe: return "safe";
    case AccKind::ReachSafe: return "reach-safe";
    }
    return "";
}

bool marked(const Dfa& d, int q) {
    switch (d.kind) {
    case AccKind::Reach: return d.reach[q];
    case AccKind::Safe: return d.safe[q];
    case AccKind::ReachSafe: return d.reach[q] && d.safe[q];
    }
    return false;
}

} // namespace

Formula guard_formula(const std::vector<bool>& letters, const PropSet& props) {
    std::vector<Letter> set;
    for (std::size_t l = 0; l < letters.size(); ++l)
        if (letters[l])
            set.push_back(Letter(l));
    return guard_rec(set, 0, props.size(), props);
}

std::string to_dot(const Dfa& d, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n  init [shape=point];\n";
    for (int q = 0; q < d.num_states; ++q)
        os << "  " << q << " [shape=" << (marked(d, q) ? "doublecircle" : "circle") << "];\n";
    os << "  init -> " << d.initial << ";\n";
    for (const auto& [e, set] : edge_sets(d))
        os << "  " << e.first << " -> " << e.second << " [label=\""
           << print(guard_formula(set, d.props)) << "\"];\n";
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const Dfa& d) {
    using nlohmann::json;
    json acc = {{"kind", kind_name(d.kind)}};
    auto members = [&](const StateSet& s) {
        json a = json::array();
        for (int q = 0; q < d.num_states; ++q)
            if (s[q])
                a.push_back(q);
        return a;
    };
    if (d.kind != AccKind::Safe)
        acc["reach"] = members(d.reach);
    if (d.kind != AccKind::Reach)
        acc["safe"] = members(d.safe);
    json edges = json::array();
    for (const auto& [e, set] : edge_sets(d))
        edges.push_back({{"from", e.first}, {"guard", print(guard_formula(set, d.props))}, {"to", e.second}});
    return {{"props", {{"env", d.props.env}, {"agent", d.props.agent}}},
            {"states", d.num_states},
            {"initial", d.initial},
            {"acceptance", acc},
            {"edges", edges}};
}

} // namespace rsyn
