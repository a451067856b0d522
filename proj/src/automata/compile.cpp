// LTLf -> DFA via expansion laws.
//
// Formulas are put in negation normal form and hash-consed. An NFA state is a
// conjunction of pending obligations, each "X psi" (strong: a next instant
// must exist) or "N psi" (weak). Reading a letter expands every obligation
// into a DNF of new obligations; each cube is a successor. A state accepts at
// the end of the word iff all of its obligations are weak. Determinization is
// the usual subset construction, subsets kept as sorted index vectors.

#include "rsyn/automata.hpp"
#include "rsyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

namespace rsyn {

namespace {

using Cube = std::vector<int>; // sorted obligations, ob = psi * 2 + strong
using Dnf = std::vector<Cube>; // {} is false, {{}} is true

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v)
            h ^= std::size_t(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct Node {
    Op op; // Atom, Not (negated atom), True, False, And, Or, Next, WeakNext, Until, Release
    int a = -1, b = -1, atom = -1;
    Letter mask = 0;
};

class Table {
public:
    int intern(const Formula& f) {
        switch (f.op()) {
        case Op::Atom:
            return add({Op::Atom, -1, -1, f.atom(), Letter(1) << f.atom()});
        case Op::Not: // NNF: only over atoms
            return add({Op::Not, -1, -1, f.child().atom(), Letter(1) << f.child().atom()});
        case Op::True:
            return add({Op::True});
        case Op::False:
            return add({Op::False});
        case Op::Next:
        case Op::WeakNext: {
            int c = intern(f.child());
            return add({f.op(), c, -1, -1, nodes[c].mask});
        }
        default: {
            int l = intern(f.lhs());
            int r = intern(f.rhs());
            return add({f.op(), l, r, -1, nodes[l].mask | nodes[r].mask});
        }
        }
    }

    std::vector<Node> nodes;

private:
    int add(Node n) {
        auto key = std::make_tuple(int(n.op), n.a, n.b, n.atom);
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        int id = int(nodes.size());
        nodes.push_back(n);
        ids_.emplace(key, id);
        return id;
    }

    std::map<std::tuple<int, int, int, int>, int> ids_;
};

void normalize(Cube& c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    // X psi implies N psi; drop the weak copy.
    Cube out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if ((c[i] & 1) == 0 && i + 1 < c.size() && c[i + 1] == (c[i] | 1))
            continue;
        out.push_back(c[i]);
    }
    c.swap(out);
}

void minimize_dnf(Dnf& d) {
    for (Cube& c : d)
        normalize(c);
    std::sort(d.begin(), d.end(), [](const Cube& x, const Cube& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    d.erase(std::unique(d.begin(), d.end()), d.end());
    Dnf kept;
    for (Cube& c : d) {
        bool subsumed = false;
        for (const Cube& k : kept)
            if (std::includes(c.begin(), c.end(), k.begin(), k.end())) {
                subsumed = true;
                break;
            }
        if (!subsumed)
            kept.push_back(std::move(c));
    }
    d.swap(kept);
}

Dnf dnf_or(Dnf a, const Dnf& b) {
    a.insert(a.end(), b.begin(), b.end());
    minimize_dnf(a);
    return a;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
    Dnf out;
    for (const Cube& x : a)
        for (const Cube& y : b) {
            Cube c = x;
            c.insert(c.end(), y.begin(), y.end());
            out.push_back(std::move(c));
        }
    minimize_dnf(out);
    return out;
}

class Expander {
public:
    explicit Expander(Table& t) : t_(t) {}

    const Dnf& expand(int id, Letter l) {
        l &= t_.nodes[id].mask;
        std::uint64_t key = (std::uint64_t(id) << 32) | l;
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        Dnf d = compute(id, l);
        return memo_.emplace(key, std::move(d)).first->second;
    }

private:
    Dnf compute(int id, Letter l) {
        const Node n = t_.nodes[id];
        switch (n.op) {
        case Op::True:
            return {{}};
        case Op::False:
            return {};
        case Op::Atom:
            return (l >> n.atom & 1) ? Dnf{{}} : Dnf{};
        case Op::Not:
            return (l >> n.atom & 1) ? Dnf{} : Dnf{{}};
        case Op::And:
            return dnf_and(expand(n.a, l), expand(n.b, l));
        case Op::Or:
            return dnf_or(expand(n.a, l), expand(n.b, l));
        case Op::Next:
            return {{n.a * 2 + 1}};
        case Op::WeakNext:
            return {{n.a * 2}};
        case Op::Until:
            return dnf_or(expand(n.b, l), dnf_and(expand(n.a, l), Dnf{{id * 2 + 1}}));
        case Op::Release:
            return dnf_and(expand(n.b, l), dnf_or(expand(n.a, l), Dnf{{id * 2}}));
        default:
            throw Error("formula not in negation normal form");
        }
    }

    Table& t_;
    std::unordered_map<std::uint64_t, Dnf> memo_;
};

class Nfa {
public:
    Nfa(Table& t, Expander& e) : t_(t), e_(e) {}

    int intern(const Cube& c) {
        auto it = ids_.find(c);
        if (it != ids_.end())
            return it->second;
        int id = int(states_.size());
        states_.push_back(c);
        Letter m = 0;
        bool acc = true;
        for (int ob : c) {
            m |= t_.nodes[ob >> 1].mask;
            acc = acc && (ob & 1) == 0;
        }
        masks_.push_back(m);
        accepting_.push_back(acc);
        ids_.emplace(c, id);
        return id;
    }

    bool accepting(int s) const { return accepting_[s]; }
    Letter mask(int s) const { return masks_[s]; }

    const std::vector<int>& succ(int s, Letter l) {
        l &= masks_[s];
        std::uint64_t key = (std::uint64_t(s) << 32) | l;
        auto it = succ_.find(key);
        if (it != succ_.end())
            return it->second;
        Dnf d{{}};
        Cube obligations = states_[s]; // copy: states_ may grow below
        for (int ob : obligations) {
            d = dnf_and(d, e_.expand(ob >> 1, l));
            if (d.empty())
                break;
        }
        std::vector<int> out;
        for (const Cube& c : d)
            out.push_back(intern(c));
        std::sort(out.begin(), out.end());
        return succ_.emplace(key, std::move(out)).first->second;
    }

private:
    Table& t_;
    Expander& e_;
    std::vector<Cube> states_;
    std::vector<Letter> masks_;
    std::vector<bool> accepting_;
    std::unordered_map<Cube, int, VecHash> ids_;
    std::unordered_map<std::uint64_t, std::vector<int>> succ_;
};

enum class Mode { Language, Reach, Safety };

// Subset construction. For Reach, accepting subsets are left absorbing; for
// Safety, every transition into a non-accepting subset goes to one sink.
Dfa determinize(const Formula& f, const PropSet& props, Mode mode, const CompileOptions& opt) {
    props.validate(opt.prop_cap);
    Table table;
    int root = table.intern(to_nnf(f));
    Expander exp(table);
    Nfa nfa(table, exp);

    Dfa d;
    d.props = props;
    const std::size_t k = d.alphabet();

    std::unordered_map<std::vector<int>, int, VecHash> ids;
    std::vector<std::vector<int>> subsets;
    std::vector<bool> accepting;
    auto intern = [&](std::vector<int> s) {
        auto it = ids.find(s);
        if (it != ids.end())
            return it->second;
        if (subsets.size() >= opt.state_cap)
            throw ResourceError("automaton exceeds " + std::to_string(opt.state_cap) + " states");
        int id = int(subsets.size());
        bool acc = false;
        for (int q : s)
            acc = acc || nfa.accepting(q);
        accepting.push_back(acc);
        subsets.push_back(s);
        ids.emplace(std::move(s), id);
        d.delta.resize(subsets.size() * k, -1);
        return id;
    };

    d.initial = intern({nfa.intern(Cube{root * 2 + 1})});
    // Reach collapses every accepting subset into one absorbing state and
    // Safety sends every rejecting one to a sink. Both use a reserved subset
    // key no real subset can collide with.
    int special = -1;
    if (mode != Mode::Language) {
        special = intern({-1});
        accepting[special] = mode == Mode::Reach;
        for (std::size_t l = 0; l < k; ++l)
            d.at(special, Letter(l)) = special;
    }

    std::vector<int> by_proj(k, -1);
    std::vector<Letter> touched;
    for (std::size_t q = 0; q < subsets.size(); ++q) {
        if (int(q) == special)
            continue;
        const std::vector<int> members = subsets[q]; // copy: subsets grows below
        Letter mask = 0;
        for (int s : members)
            mask |= nfa.mask(s);
        touched.clear();
        for (std::size_t l = 0; l < k; ++l) {
            Letter p = Letter(l) & mask;
            if (by_proj[p] < 0) {
                std::vector<int> next;
                bool acc = false;
                for (int s : members) {
                    const std::vector<int>& succ = nfa.succ(s, p);
                    next.insert(next.end(), succ.begin(), succ.end());
                }
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                for (int s : next)
                    acc = acc || nfa.accepting(s);
                int t;
                if (mode == Mode::Reach && acc)
                    t = special;
                else if (mode == Mode::Safety && !acc)
                    t = special;
                else
                    t = intern(std::move(next));
                by_proj[p] = t;
                touched.push_back(p);
            }
            d.at(int(q), Letter(l)) = by_proj[p];
        }
        for (Letter p : touched)
            by_proj[p] = -1;
    }

    d.num_states = int(subsets.size());
    d.reach.assign(d.num_states, false);
    d.safe.assign(d.num_states, true);
    if (mode == Mode::Safety) {
        d.kind = AccKind::Safe;
        d.safe[special] = false;
    } else {
        d.kind = AccKind::Reach;
        for (int q = 0; q < d.num_states; ++q)
            d.reach[q] = accepting[q];
    }
    return d;
}

} // namespace

bool Dfa::total() const {
    return std::find(delta.begin(), delta.end(), -1) == delta.end();
}

Dfa compile_language_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt) {
    return determinize(f, props, Mode::Language, opt);
}

Dfa compile_reach_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt) {
    Dfa d = determinize(f, props, Mode::Reach, opt);
    // The empty word is not a trace, so membership of I in R is free. Put it
    // in R exactly when every first letter already satisfies f.
    bool all = true;
    for (std::size_t l = 0; l < d.alphabet() && all; ++l)
        all = d.reach[d.next(d.initial, Letter(l))];
    if (all) {
        d.reach[d.initial] = true;
        for (std::size_t l = 0; l < d.alphabet(); ++l)
            d.at(d.initial, Letter(l)) = d.initial;
    }
    return canonical(minimize(prune(d).dfa));
}

Dfa compile_prefix_safety_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt) {
    Dfa d = determinize(f, props, Mode::Safety, opt);
    return canonical(minimize(prune(d).dfa));
}

} // namespace rsyn
