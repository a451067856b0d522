#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "explore.hpp"
#include "hallway.hpp"
#include "rsyn/errors.hpp"
#include "rsyn/runtime.hpp"

using namespace rsyn;

namespace {

ProblemSpec spec(PropSet props, const std::string& env, const std::string& duty, const std::string& right) {
    return {props, parse(env, props), parse(duty, props), parse(right, props)};
}

std::shared_ptr<const SynthesisResult> solve(const ProblemSpec& p) {
    return std::make_shared<const SynthesisResult>(synthesize(p));
}

ScheduledEvent exercise_at(std::size_t k) { return {k, ScheduledEvent::ExerciseRight, "", {}, {}}; }

bool visits(const Dfa& a, const Trace& t, const StateSet& goal) {
    for (int q : run_on(a, t).states_visited)
        if (goal[q])
            return true;
    return false;
}

} // namespace

TEST_CASE("duty true: one move, then stop") {
    PropSet p{{"e"}, {"a"}};
    Session s(solve(spec(p, "true", "true", "true")));
    CHECK(s.status() == SessionStatus::Running);
    CHECK(s.env_moves() == std::vector<Letter>{0, 1});
    auto y = s.step(1);
    REQUIRE(y);
    CHECK(s.round() == 1);
    CHECK_FALSE(s.step(0));
    CHECK(s.status() == SessionStatus::Stopped);
    CHECK(s.env_moves().empty());
    CHECK_THROWS_AS(s.step(0), SessionClosed);
    CHECK_THROWS_AS(s.exercise_right(), SessionClosed);
    PlayRecord r = make_record(s);
    CHECK(r.stop_round == 1);
    CHECK(r.duty_satisfied);
}

TEST_CASE("illegal env move names its round") {
    PropSet p{{"e"}, {"a"}};
    Session s(solve(spec(p, "!e & G (e -> N e)", "F (a & X a)", "true")));
    CHECK_THROWS_AS(s.step(1), IllegalEnvMove);
    s.step(0);
    try {
        s.step(7);
        FAIL("accepted an X-part outside the alphabet");
    } catch (const IllegalEnvMove& e) {
        CHECK(e.round == 1);
    }
    CHECK(s.status() == SessionStatus::Running);
}

TEST_CASE("unrealizable spec gives a rejected session") {
    PropSet p{{"done"}, {"a"}};
    Session s(solve(spec(p, "G !done", "F done", "true")));
    CHECK(s.status() == SessionStatus::Rejected);
    CHECK(s.reject_reason() == "unrealizable");
    CHECK_THROWS_AS(s.step(0), SessionClosed);
}

TEST_CASE("exercising the right") {
    PropSet p{{"e"}, {"a", "b"}};
    auto res = solve(spec(p, "true", "F a", "F b"));
    REQUIRE(res->realizable);

    SUBCASE("at the start it is T_r from scratch") {
        Session s(res);
        s.exercise_right();
        CHECK(s.mode() == SessionMode::RightsCommitted);
        CHECK_THROWS_AS(s.exercise_right(), AlreadyCommitted);
        FirstPolicy env;
        PlayRecord r = run_to_completion(s, env);

        Strategy direct = instantiate(res->rights_transducer);
        Trace expected;
        while (auto y = direct.respond(0))
            expected.push_back(p.join(0, *y));
        CHECK(r.play == expected);
        CHECK(r.duty_satisfied);
        CHECK(r.right_satisfied);
    }
    SUBCASE("left alone it may stay false") {
        Session s(res);
        FirstPolicy env;
        PlayRecord r = run_to_completion(s, env);
        CHECK(r.duty_satisfied);
        CHECK_FALSE(r.right_satisfied);
        CHECK(r.play == Trace{p.join(0, 1)});
    }
    SUBCASE("further right needs a further spec") {
        Session s(res);
        CHECK_THROWS_AS(s.exercise_further_right(), Error);
    }
}

TEST_CASE("random policy follows the fixed stream") {
    PropSet p{{"e0", "e1"}, {"g"}};
    auto res = solve(spec(p, "true", "X X X true", "true"));
    Session s(res);
    RandomPolicy env(7);
    PlayRecord r = run_to_completion(s, env);
    REQUIRE(r.play.size() == 4);
    // (x >> 33) % 4 for the first four draws from seed 7
    const Letter expected[] = {2, 3, 1, 1};
    for (int i = 0; i < 4; ++i)
        CHECK(p.x_part(r.play[i]) == expected[i]);

    Session again(res);
    RandomPolicy env2(7);
    CHECK(to_json(run_to_completion(again, env2), p).dump() == to_json(r, p).dump());
}

TEST_CASE("scripted policy and schedule order") {
    PropSet p{{"e"}, {"a", "b"}};
    auto res = solve(spec(p, "true", "F (a & X a)", "F b"));
    Session s(res);
    ScriptedPolicy env({1, 0}, std::make_unique<FirstPolicy>());
    std::vector<ScheduledEvent> schedule{exercise_at(1),
                                         {1, ScheduledEvent::Inject, "noop", ltl::tt(), ltl::tt()}};
    PlayRecord r = run_to_completion(s, env, schedule);
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].kind == "inject");
    CHECK(r.events[1].kind == "exercise-right");
    CHECK(r.events[0].round == 1);
    CHECK(p.x_part(r.play[0]) == 1);
    CHECK(p.x_part(r.play[1]) == 0);
    CHECK(r.right_satisfied);
    CHECK(r.further);
    CHECK(r.further_at == 1);

    ScriptedPolicy short_script({});
    Session t(res);
    CHECK_THROWS_AS(run_to_completion(t, short_script), Error);
}

TEST_CASE("second injection is refused") {
    PropSet p{{"e"}, {"a"}};
    Session s(solve(spec(p, "true", "F (a & X a)", "true")));
    s.step(0);
    CHECK(s.inject_further(ltl::tt(), ltl::tt()).accepted);
    auto again = s.inject_further(ltl::tt(), ltl::tt());
    CHECK_FALSE(again.accepted);
    CHECK(again.reason == "further-already-active");
    CHECK(s.mode() == SessionMode::Further);
}

TEST_CASE("record JSON") {
    PropSet p{{"e"}, {"a"}};
    Session s(solve(spec(p, "true", "true", "true")));
    s.step(1);
    s.step(0);
    auto j = to_json(make_record(s), p);
    CHECK(j.dump() == R"({"duty_satisfied":true,"events":[],"play":["{e, a}"],"right_satisfied":true,"stop_round":1})");
}

TEST_CASE("property: exhaustive adversaries, random specs") {
    std::mt19937 rng(4242);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 25; ++i) {
        ProblemSpec p = explore::random_spec(rng, 2);
        std::shared_ptr<const SynthesisResult> res;
        try {
            res = solve(p);
        } catch (const EnvUnrealizable&) {
            continue;
        }
        const Dfa& a = res->product->dfa;
        if (!res->realizable || a.num_states > 64)
            continue;
        ++checked;
        const std::size_t n = std::size_t(a.num_states);
        for (std::size_t k = 0; k <= n; ++k) {
            std::vector<ScheduledEvent> schedule;
            if (k < n)
                schedule.push_back(exercise_at(k));
            explore_plays(Session(res), schedule, [&](const Session& s) {
                PlayRecord r = make_record(s);
                CHECK_NOTHROW(validate(s, r));
                CHECK(r.duty_satisfied == visits(a, r.play, res->r_d));
                // each strategy in force runs at most |Q| rounds
                CHECK(r.stop_round <= n + (k < n ? std::min(k, r.stop_round) : 0));
                CHECK(s.replay_state() == s.arena_state());
                for (int q : run_on(a, r.play).states_visited)
                    CHECK(res->agn_r.contains(q));
            });
        }
    }
    CHECK(checked == 25);
}

TEST_CASE("property: random operation sequences keep history and state coherent") {
    std::mt19937 rng(99);
    int sessions = 0;
    for (int i = 0; i < 600 && sessions < 60; ++i) {
        ProblemSpec p = explore::random_spec(rng, 2);
        std::shared_ptr<const SynthesisResult> res;
        try {
            res = solve(p);
        } catch (const EnvUnrealizable&) {
            continue;
        }
        if (!res->realizable)
            continue;
        ++sessions;
        Session s(res);
        RandomPolicy env(rng());
        while (s.status() == SessionStatus::Running) {
            switch (rng() % 6) {
            case 0:
                if (!s.right_committed())
                    s.exercise_right();
                break;
            case 1:
                s.inject_further(gen::formula(rng, p.props, 2), gen::formula(rng, p.props, 2));
                break;
            case 2:
                if (s.further_active() && !s.further_right_committed())
                    s.exercise_further_right();
                break;
            default:
                break;
            }
            CHECK(s.replay_state() == s.arena_state());
            s.step(env.choose(s));
            REQUIRE(s.round() <= 4 * std::size_t(res->product->dfa.num_states));
        }
        CHECK_NOTHROW(validate(s, make_record(s)));
    }
    CHECK(sessions == 60);
}

// Hallway: the simulator in hallway.hpp is the oracle.

namespace {

using hallway::World;

struct Hallway {
    SpecFile spec = load_spec(hallway::spec_path());
    std::shared_ptr<const SynthesisResult> res = solve(spec.problem);
    const PropSet& props() const { return spec.problem.props; }
};

const Hallway& hall() {
    static Hallway h;
    return h;
}

// Worlds along a play, checking each X-part against the simulator.
std::vector<World> replay(const Trace& play, const PropSet& p) {
    std::vector<World> worlds{World{}};
    for (std::size_t i = 0; i < play.size(); ++i) {
        REQUIRE(p.x_part(play[i]) == hallway::x_part(worlds[i], p));
        worlds.push_back(hallway::step(worlds[i], hallway::action_of(p.y_part(play[i]), p)));
    }
    worlds.pop_back(); // the world after the last letter is not part of the play
    return worlds;
}

bool ever(const std::vector<World>& ws, std::size_t from, const std::function<bool(const World&)>& f) {
    for (std::size_t i = from; i < ws.size(); ++i)
        if (f(ws[i]))
            return true;
    return false;
}

const hallway::Goal duty_a = [](const World& w) { return hallway::room_done(w, hallway::RoomA); };
const hallway::Goal duty_b = [](const World& w) { return hallway::room_done(w, hallway::RoomB); };
const hallway::Goal duty_c = [](const World& w) { return hallway::room_done(w, hallway::RoomC); };
const hallway::Goal battery = [](const World& w) { return w.battery_full; };
const hallway::Goal collector = [](const World& w) { return w.collector_empty; };

} // namespace

TEST_CASE("hallway: formula and simulator agree") {
    const PropSet& p = hall().props();
    const Formula& env = hall().spec.problem.env;
    // every action sequence of length <= 5; one flipped env bit at the last
    // instant must break the env formula
    std::vector<hallway::Action> acts;
    std::function<void(World, Trace)> rec = [&](World w, Trace t) {
        for (hallway::Action a : {hallway::Cw, hallway::Ccw, hallway::Act}) {
            Trace u = t;
            u.push_back(p.join(hallway::x_part(w, p), hallway::y_part(a, p)));
            CHECK(evaluate_all_prefixes(env, u));
            for (int bit = 0; bit < p.num_env(); ++bit) {
                Trace bad = u;
                bad.back() ^= Letter(1) << bit;
                CHECK_FALSE(evaluate(env, bad, 0));
            }
            if (u.size() < 5)
                rec(hallway::step(w, a), u);
        }
    };
    rec(World{}, {});
}

TEST_CASE("hallway: base problem, right-aware route") {
    const auto& h = hall();
    const PropSet& p = h.props();
    CHECK(hallway::reachable(World{}, {duty_a, battery}));
    REQUIRE(h.res->realizable);

    std::size_t plays = 0;
    explore_plays(Session(h.res), {}, [&](const Session& s) {
        ++plays;
        PlayRecord r = make_record(s);
        auto ws = replay(r.play, p);
        CHECK(r.duty_satisfied == ever(ws, 0, duty_a));
        CHECK(r.duty_satisfied);
        CHECK(r.right_satisfied == ever(ws, 0, battery));
        // clockwise to A and back: never through B or C
        CHECK_FALSE(ever(ws, 0, [](const World& w) { return w.cell == hallway::RoomB || w.cell == hallway::RoomC; }));
        CHECK(hallway::action_of(p.y_part(r.play[0]), p) == hallway::Cw);
        // charge left at every instant suffices to return to the charger
        for (const World& w : ws)
            CHECK(w.charge >= std::min(w.cell, 4 - w.cell));
    });
    CHECK(plays == 1); // the hallway env is deterministic

    Session s(h.res);
    FirstPolicy env;
    PlayRecord r = run_to_completion(s, env);
    CHECK(r.duty_satisfied);
    CHECK_FALSE(r.right_satisfied);
    CHECK(r.stop_round == 4);
}

TEST_CASE("hallway: exercising the charge right at every round") {
    const auto& h = hall();
    for (std::size_t k = 0; k < 4; ++k) {
        CAPTURE(k);
        Session s(h.res);
        FirstPolicy env;
        PlayRecord r = run_to_completion(s, env, {exercise_at(k)});
        auto ws = replay(r.play, h.props());
        CHECK(r.duty_satisfied);
        CHECK(r.right_satisfied);
        CHECK(ever(ws, 0, battery));
        CHECK(ever(ws, 0, duty_a));
    }
}

TEST_CASE("hallway: room B is refused") {
    const auto& h = hall();
    const PropSet& p = h.props();
    const FurtherBlock* b = h.spec.find_further("room_B");
    REQUIRE(b);
    World w0, w1 = hallway::step(w0, hallway::Cw);
    unsigned seen = duty_a(w0) | (battery(w0) << 1);
    CHECK_FALSE(hallway::reachable(w1, {duty_a, battery, duty_b}, seen));
    // not even without the charge right: the charge cannot cover room B
    CHECK_FALSE(hallway::reachable(w1, {duty_a, duty_b}, seen & 1));

    Session s(h.res);
    REQUIRE(s.step(hallway::x_part(w0, p)));
    REQUIRE(s.history() == b->at);
    auto out = s.inject_further(b->duty, b->right, b->name);
    CHECK_FALSE(out.accepted);
    CHECK(out.reason == "goal unreachable");
    CHECK(s.mode() == SessionMode::DutyOnly);

    FirstPolicy env;
    PlayRecord r = run_to_completion(s, env);
    CHECK(r.duty_satisfied);
    CHECK_FALSE(r.further);
    REQUIRE(r.events.size() == 1);
    CHECK_FALSE(r.events[0].accepted);
}

TEST_CASE("hallway: room C with the collector right is accepted") {
    const auto& h = hall();
    const PropSet& p = h.props();
    const FurtherBlock* c = h.spec.find_further("room_C");
    REQUIRE(c);
    World w0, w1 = hallway::step(w0, hallway::Cw);
    CHECK(hallway::reachable(w1, {duty_a, battery, duty_c, collector}));
    // room C cannot be cleaned and left without charging first
    CHECK(hallway::reachable(w1, {duty_a, duty_c}));
    CHECK_FALSE(hallway::reachable(w1, {duty_a, duty_c}, 0, false));

    struct Case {
        std::vector<ScheduledEvent> events;
        bool right, further_right;
    };
    auto inject = ScheduledEvent{1, ScheduledEvent::Inject, c->name, c->duty, c->right};
    std::vector<Case> cases{
        {{inject}, false, false},
        {{inject, exercise_at(1)}, true, false},
        {{inject, {2, ScheduledEvent::ExerciseFurtherRight, "", {}, {}}}, false, true},
        {{inject, exercise_at(3), {1, ScheduledEvent::ExerciseFurtherRight, "", {}, {}}}, true, true},
        {{exercise_at(0), inject}, true, false},
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CAPTURE(i);
        Session s(h.res);
        FirstPolicy env;
        PlayRecord r = run_to_completion(s, env, cases[i].events);
        REQUIRE(r.further);
        CHECK(r.further_at == 1);
        CHECK(Trace(r.play.begin(), r.play.begin() + 1) == c->at);
        auto ws = replay(r.play, p);
        CHECK(r.duty_satisfied);
        CHECK(r.further_duty_satisfied);
        CHECK(r.further_duty_satisfied == ever(ws, 1, duty_c));
        CHECK(r.right_satisfied == ever(ws, 0, battery));
        CHECK(r.further_right_satisfied == ever(ws, 1, collector));
        if (cases[i].right)
            CHECK(r.right_satisfied);
        if (cases[i].further_right)
            CHECK(r.further_right_satisfied);
        // whatever was exercised, the route to C goes through the charger
        std::size_t first_c = 0;
        while (ws[first_c].cell != hallway::RoomC)
            ++first_c;
        CHECK(ever(std::vector<World>(ws.begin(), ws.begin() + long(first_c)), 1, battery));
    }

    Session s(h.res);
    s.step(hallway::x_part(w0, p));
    REQUIRE(s.inject_further(c->duty, c->right, c->name).accepted);
    CHECK(s.mode() == SessionMode::Further);
    CHECK(s.replay_state() == s.arena_state());
    s.exercise_further_right();
    CHECK_THROWS_AS(s.exercise_further_right(), AlreadyCommitted);
    s.exercise_right();
    CHECK_THROWS_AS(s.exercise_right(), AlreadyCommitted);
}
