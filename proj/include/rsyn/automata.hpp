#pragma once

#include "rsyn/ltlf.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace rsyn {

using StateSet = std::vector<bool>;

enum class AccKind { Reach, Safe, ReachSafe };

// Deterministic automaton over 2^(X u Y). delta is a dense table indexed by
// state * alphabet + letter; -1 marks an undefined (restricted) transition.
struct Dfa {
    PropSet props;
    int num_states = 0;
    int initial = 0;
    std::vector<int> delta;
    AccKind kind = AccKind::Reach;
    StateSet reach; // R, meaningful for Reach and ReachSafe
    StateSet safe;  // S, meaningful for Safe and ReachSafe

    std::size_t alphabet() const { return std::size_t(1) << props.size(); }
    std::size_t num_x() const { return std::size_t(1) << props.num_env(); }
    std::size_t num_y() const { return std::size_t(1) << props.num_agent(); }
    int next(int q, Letter l) const { return delta[std::size_t(q) * alphabet() + l]; }
    int& at(int q, Letter l) { return delta[std::size_t(q) * alphabet() + l]; }
    bool defined(int q, Letter x) const { return next(q, props.join(x, 0)) >= 0; }
    bool total() const;
};

struct CompileOptions {
    std::size_t state_cap = 200000;
    std::size_t prop_cap = PropSet::kDefaultCap;
};

// Reach(R): the run visits R on t iff some nonempty prefix of t satisfies f.
// R is absorbing.
Dfa compile_reach_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt = {});

// Safe(S): the run stays in S on t iff every nonempty prefix satisfies f.
Dfa compile_prefix_safety_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt = {});

// Classical finite-word automaton of f, accepting set stored in `reach`.
// Exposed for testing; the two compilers above are built on it.
Dfa compile_language_dfa(const Formula& f, const PropSet& props, const CompileOptions& opt = {});

struct Product {
    Dfa dfa;
    std::vector<std::vector<int>> proj; // proj[i][q] = state of component i
    // Lifts a set of component-i states to product states.
    StateSet lift(std::size_t i, const StateSet& component) const;
};

// Synchronous product over the reachable part. The product Dfa carries
// Reach(conjunction of the component acceptance sets); callers normally
// build their own sets with lift().
Product product(const std::vector<const Dfa*>& parts);

struct RunResult {
    std::vector<int> states_visited;
    int landed = 0;
};

RunResult run_on(const Dfa& d, const History& h);

// Partition refinement on the acceptance labels. Requires a total delta.
Dfa minimize(const Dfa& d);

struct Pruned {
    Dfa dfa;
    std::vector<int> origin; // origin[new] = old state
};

// Keeps states reachable from `root` (default: the initial state), in their
// original relative order, and makes `root` initial.
Pruned prune(const Dfa& d, int root = -1);

// Renumbers states breadth-first from the initial state, letters ascending.
Dfa canonical(const Dfa& d);

// Guard over letters in the formula grammar; letters[l] selects l.
Formula guard_formula(const std::vector<bool>& letters, const PropSet& props);

std::string to_dot(const Dfa& d, const std::string& name = "dfa");
nlohmann::json to_json(const Dfa& d);

} // namespace rsyn
