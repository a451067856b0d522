#pragma once

#include "rsyn/automata.hpp"

#include "json.hpp"

#include <vector>

namespace rsyn {

// Agent Y-parts available in a game, ascending.
using MoveSet = std::vector<Letter>;

MoveSet all_moves(const Dfa& a);

struct WinningRegion {
    std::vector<StateSet> layers;  // layers[j] = Agn^j, increasing
    std::vector<int> member_layer; // -1 outside the region

    bool contains(int q) const { return member_layer[q] >= 0; }
    const StateSet& states() const { return layers.back(); }
    std::size_t size() const;
};

// Environment safety game on a.safe: greatest fixpoint of
// Env' = Env n {q | exists X forall Y: delta(q, X u Y) in Env}.
StateSet solve_env_safety(const Dfa& a);

struct Restricted {
    Dfa arena;
    std::vector<int> origin; // origin[new] = state of the unrestricted arena
};

// Keeps Env states reachable from I and, at each of them, only the X-parts
// whose every completion stays in Env. Throws EnvUnrealizable if I is not in Env.
Restricted restrict_arena(const Dfa& a, const StateSet& env);

// Agent reachability game, env moves first: Agn^0 = goal,
// Agn^(l+1) = Agn^l u {q | forall defined X exists Y in moves: delta in Agn^l}.
WinningRegion solve_reach(const Dfa& a, const StateSet& goal, const MoveSet& moves);
WinningRegion solve_reach(const Dfa& a); // goal a.reach, every Y allowed

// Makes states outside `safe` self-looping sinks; the result is a Reach
// arena with goal reach n safe.
Dfa reduce_reach_safe(const Dfa& a, const StateSet& reach, const StateSet& safe);

// Environment's region for "never reach goal"; the complement of solve_reach.
StateSet solve_env_dual(const Dfa& a, const StateSet& goal, const MoveSet& moves);

nlohmann::json to_json(const WinningRegion& w);

} // namespace rsyn
