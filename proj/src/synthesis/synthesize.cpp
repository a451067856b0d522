#include "rsyn/errors.hpp"
#include "rsyn/synthesis.hpp"

namespace rsyn {

namespace {

StateSet meet(StateSet a, const StateSet& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = a[i] && b[i];
    return a;
}

PropSet with_stop(const PropSet& p, bool reserved) {
    PropSet out = p;
    if (!reserved)
        return out;
    std::string name = "stop";
    while (out.index_of(name) >= 0)
        name += "_";
    out.agent.push_back(name);
    return out;
}

// Stop Y-part and the remaining agent moves.
std::pair<Letter, MoveSet> stop_and_moves(const PropSet& props, bool reserved) {
    Letter stop = reserved ? Letter(1) << (props.num_agent() - 1) : 0;
    MoveSet moves;
    for (Letter y = 0; y < (Letter(1) << props.num_agent()); ++y)
        if (reserved ? (y & stop) == 0 : y != stop)
            moves.push_back(y);
    if (moves.empty())
        throw Error("the agent has no move besides stop");
    return {stop, moves};
}

Restricted build_env_arena(const ProblemSpec& p, const PropSet& props, const SynthOptions& opt, Dfa* env_dfa) {
    Dfa e = compile_prefix_safety_dfa(p.env, props, opt.compile);
    Restricted r = restrict_arena(e, solve_env_safety(e));
    if (env_dfa)
        *env_dfa = std::move(e);
    return r;
}

std::shared_ptr<const Transducer> make_transducer(std::shared_ptr<const Dfa> arena, WinningRegion region,
                                                  StateSet goal, const MoveSet& moves, Letter stop,
                                                  StateSet keep) {
    auto t = std::make_shared<Transducer>();
    t->arena = std::move(arena);
    t->region = std::move(region);
    t->goal = std::move(goal);
    t->moves = moves;
    t->stop = stop;
    t->keep = std::move(keep);
    return t;
}

// Transducer reaching `goal` without leaving `keep`: the reach-safe game
// reduced to plain reachability.
std::shared_ptr<const Transducer> reach_within(std::shared_ptr<const Dfa> arena, const StateSet& goal,
                                               const StateSet& keep, const MoveSet& moves, Letter stop) {
    Dfa reduced = reduce_reach_safe(*arena, goal, keep);
    WinningRegion w = solve_reach(reduced, reduced.reach, moves);
    return make_transducer(std::move(arena), std::move(w), goal, moves, stop, keep);
}

// Product shares ownership with the transducers through an aliasing pointer.
std::shared_ptr<const Dfa> arena_of(const std::shared_ptr<const Product>& p) {
    return std::shared_ptr<const Dfa>(p, &p->dfa);
}

} // namespace

MoveSet Transducer::tau(int q, Letter x) const {
    const Dfa& a = *arena;
    MoveSet out;
    if (!a.defined(q, x))
        return out;
    int j = region.member_layer[q];
    if (j >= 1 && !goal[q]) {
        for (Letter y : moves)
            if (region.layers[j - 1][a.next(q, a.props.join(x, y))])
                out.push_back(y);
        return out;
    }
    for (Letter y : moves)
        if (keep[a.next(q, a.props.join(x, y))])
            out.push_back(y);
    return out.empty() ? moves : out;
}

Strategy::Strategy(std::shared_ptr<const Transducer> t, const History& seed) : t_(std::move(t)) {
    state_ = t_->arena->initial;
    visited_goal_ = t_->goal[state_];
    if (!t_->region.contains(state_))
        throw HistoryLeftRegion(0);
    for (std::size_t i = 0; i < seed.size(); ++i) {
        advance(seed[i]);
        if (!t_->region.contains(state_))
            throw HistoryLeftRegion(i + 1);
    }
}

std::optional<Letter> Strategy::peek(Letter x) const {
    if (stopping())
        return std::nullopt;
    MoveSet ys = t_->tau(state_, x);
    if (ys.empty())
        throw UndefinedTransition(rounds_);
    return ys.front();
}

std::optional<Letter> Strategy::respond(Letter x) {
    auto y = peek(x);
    if (y)
        advance(t_->arena->props.join(x, *y));
    return y;
}

void Strategy::advance(Letter l) {
    int next = t_->arena->next(state_, l);
    if (next < 0)
        throw UndefinedTransition(rounds_);
    state_ = next;
    ++rounds_;
    visited_goal_ = visited_goal_ || t_->goal[state_];
}

Strategy instantiate(std::shared_ptr<const Transducer> t, const History& seed) { return Strategy(std::move(t), seed); }

SynthesisResult synthesize(const ProblemSpec& p, const SynthOptions& opt) {
    SynthesisResult res;
    res.spec = p;
    res.options = opt;
    res.props = with_stop(p.props, opt.reserved_stop);
    res.props.validate(opt.compile.prop_cap);
    std::tie(res.stop, res.moves) = stop_and_moves(res.props, opt.reserved_stop);

    res.env_arena = build_env_arena(p, res.props, opt, &res.env_dfa);
    res.duty_dfa = compile_reach_dfa(p.duty, res.props, opt.compile);
    res.right_dfa = compile_reach_dfa(p.right, res.props, opt.compile);
    auto prod = std::make_shared<Product>(product({&res.env_arena.arena, &res.duty_dfa, &res.right_dfa}));
    res.product = prod;
    res.r_d = prod->lift(1, res.duty_dfa.reach);
    res.r_r = prod->lift(2, res.right_dfa.reach);
    res.r_dr = meet(res.r_d, res.r_r);

    const Dfa& a = prod->dfa;
    res.agn_r = solve_reach(a, res.r_dr, res.moves);
    res.realizable = res.agn_r.contains(a.initial);
    if (!res.realizable)
        return res;

    auto arena = arena_of(res.product);
    res.duty_transducer = reach_within(arena, res.r_d, res.agn_r.states(), res.moves, res.stop);
    res.agn = res.duty_transducer->region;
    res.rights_transducer =
        make_transducer(arena, res.agn_r, res.r_dr, res.moves, res.stop, res.agn_r.states());
    return res;
}

std::optional<Strategy> enforce_wrt_history(const ProblemSpec& p, const Formula& target, const History& h,
                                            const SynthOptions& opt) {
    PropSet props = with_stop(p.props, opt.reserved_stop);
    props.validate(opt.compile.prop_cap);
    auto [stop, moves] = stop_and_moves(props, opt.reserved_stop);
    Restricted env = build_env_arena(p, props, opt, nullptr);
    Dfa target_dfa = compile_reach_dfa(target, props, opt.compile);
    auto prod = std::make_shared<Product>(product({&env.arena, &target_dfa}));
    StateSet goal = prod->lift(1, target_dfa.reach);
    WinningRegion w = solve_reach(prod->dfa, goal, moves);
    for (int q : run_on(prod->dfa, h).states_visited)
        if (!w.contains(q))
            return std::nullopt;
    StateSet keep = w.states();
    return Strategy(make_transducer(arena_of(prod), std::move(w), std::move(goal), moves, stop, std::move(keep)), h);
}

Strategy rights_strategy_at(const SynthesisResult& res, const History& h) {
    if (!res.realizable)
        throw BaseUnrealizable();
    return Strategy(res.rights_transducer, h);
}

Restricted env_after_history(const SynthesisResult& res, const History& h) {
    const Dfa& a = res.env_arena.arena;
    Pruned p = prune(a, run_on(a, h).landed);
    Restricted out{std::move(p.dfa), {}};
    for (int q : p.origin)
        out.origin.push_back(res.env_arena.origin[q]);
    return out;
}

Restricted env_after_history(const ProblemSpec& p, const History& h, const SynthOptions& opt) {
    PropSet props = with_stop(p.props, opt.reserved_stop);
    props.validate(opt.compile.prop_cap);
    SynthesisResult res;
    res.env_arena = build_env_arena(p, props, opt, nullptr);
    return env_after_history(res, h);
}

std::shared_ptr<const Transducer> FurtherResult::build(RightsChoice c) const {
    auto a = arena_of(arena);
    StateSet keep = agn_rfr.states();
    StateSet goal = meet(r_d, r_fd);
    switch (c) {
    case RightsChoice::None:
        if (right_committed_)
            goal = meet(goal, r_r);
        break;
    case RightsChoice::Right:
        goal = meet(goal, r_r);
        break;
    case RightsChoice::FurtherRight:
        goal = meet(goal, r_fr);
        break;
    case RightsChoice::Both:
        return make_transducer(a, agn_rfr, meet(meet(goal, r_r), r_fr), moves_, stop_, keep);
    }
    return reach_within(a, goal, keep, moves_, stop_);
}

std::shared_ptr<const Transducer> FurtherResult::transducer(RightsChoice c) const {
    if (!realizable)
        return nullptr;
    // With phi_r committed, "no new right" is the same as keeping phi_r only.
    if (right_committed_ && c == RightsChoice::FurtherRight)
        c = RightsChoice::Both;
    int i = int(c);
    std::call_once(cache_->once[i], [&] { cache_->t[i] = build(c); });
    return cache_->t[i];
}

FurtherResult synthesize_further(const FurtherSpec& fs, const SynthesisResult& base, const SynthOptions& opt) {
    if (!base.realizable)
        throw BaseUnrealizable();
    FurtherResult out;
    out.moves_ = base.moves;
    out.stop_ = base.stop;
    out.right_committed_ = fs.right_committed;

    const Dfa& a = base.product->dfa;
    RunResult run = run_on(a, fs.at_history);
    for (int q : run.states_visited)
        if (!base.agn_r.contains(q)) {
            out.reason = "history left Agn_r";
            return out;
        }

    Pruned rerooted = prune(a, run.landed);
    Dfa fd = compile_reach_dfa(fs.further_duty, base.props, opt.compile);
    Dfa fr = compile_reach_dfa(fs.further_right, base.props, opt.compile);
    auto prod = std::make_shared<Product>(product({&rerooted.dfa, &fd, &fr}));
    out.arena = prod;
    const int n = prod->dfa.num_states;
    out.base_state.resize(n);
    out.r_d.resize(n);
    out.r_r.resize(n);
    for (int q = 0; q < n; ++q) {
        int b = rerooted.origin[prod->proj[0][q]];
        out.base_state[q] = b;
        out.r_d[q] = base.r_d[b];
        out.r_r[q] = base.r_r[b];
    }
    out.r_fd = prod->lift(1, fd.reach);
    out.r_fr = prod->lift(2, fr.reach);

    StateSet goal4 = meet(meet(out.r_d, out.r_r), meet(out.r_fd, out.r_fr));
    out.agn_rfr = solve_reach(prod->dfa, goal4, out.moves_);
    if (!out.agn_rfr.contains(prod->dfa.initial)) {
        out.reason = "goal unreachable";
        return out;
    }
    out.realizable = true;
    if (!opt.lazy_rights)
        for (RightsChoice c : {RightsChoice::None, RightsChoice::Right, RightsChoice::FurtherRight, RightsChoice::Both})
            out.transducer(c);
    return out;
}

FurtherResult synthesize_further(const FurtherSpec& fs, const SynthOptions& opt) {
    SynthesisResult base = synthesize(fs.base, opt);
    if (!base.realizable)
        throw BaseUnrealizable();
    return synthesize_further(fs, base, opt);
}

} // namespace rsyn
