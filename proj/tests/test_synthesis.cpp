#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "explore.hpp"
#include "oracles.hpp"
#include "rsyn/errors.hpp"
#include "rsyn/synthesis.hpp"

using namespace rsyn;

namespace {

ProblemSpec spec(PropSet props, const std::string& env, const std::string& duty, const std::string& right) {
    return {props, parse(env, props), parse(duty, props), parse(right, props)};
}

History letters(std::initializer_list<std::string> ls, const PropSet& p) {
    History h;
    for (const auto& s : ls)
        h.push_back(parse_letter(s, p));
    return h;
}

} // namespace

TEST_CASE("trivial duty: one round, then stop") {
    PropSet p{{"e"}, {"a"}};
    auto res = synthesize(spec(p, "true", "true", "true"), {});
    REQUIRE(res.realizable);
    Strategy s = instantiate(res.duty_transducer);
    CHECK_FALSE(s.stopping());
    auto y = s.respond(0);
    REQUIRE(y);
    CHECK(*y == 1); // the only non-stop move
    CHECK_FALSE(s.respond(1));
}

TEST_CASE("unreachable duty is unrealizable") {
    PropSet p{{"goal_reached"}, {"a"}};
    auto res = synthesize(spec(p, "G !goal_reached", "F goal_reached", "true"), {});
    CHECK_FALSE(res.realizable);
    CHECK_FALSE(res.agn_r.contains(res.product->dfa.initial));
    CHECK_FALSE(res.duty_transducer);
}

TEST_CASE("env with no strategy") {
    PropSet p{{"e"}, {"a"}};
    CHECK_THROWS_AS(synthesize(spec(p, "false", "true", "true"), {}), EnvUnrealizable);
    // a safe env move must exist whatever the agent does
    CHECK_THROWS_AS(synthesize(spec(p, "G !a", "true", "true"), {}), EnvUnrealizable);
    CHECK_NOTHROW(synthesize(spec(p, "G (e -> N !e)", "true", "true"), {}));
}

TEST_CASE("agent without a non-stop move") {
    PropSet p{{"e"}, {}};
    CHECK_THROWS(synthesize(spec(p, "true", "true", "true"), {}));
    SynthOptions opt;
    opt.reserved_stop = true;
    auto res = synthesize(spec(p, "true", "F e | !e", "true"), opt);
    CHECK(res.realizable);
    CHECK(res.props.agent == std::vector<std::string>{"stop"});
}

TEST_CASE("instantiate picks the smallest Y-part") {
    PropSet p{{"x"}, {"a", "b"}};
    auto res = synthesize(spec(p, "true", "a | b", "true"), {});
    REQUIRE(res.realizable);
    const Transducer& t = *res.duty_transducer;
    int i = t.arena->initial;
    CHECK(t.tau(i, 0) == MoveSet{1, 2, 3});
    Strategy s = instantiate(res.duty_transducer);
    CHECK(s.respond(1) == Letter(1)); // {a}
    CHECK_FALSE(s.respond(0));
}

TEST_CASE("seeded strategy already past its goal stops at once") {
    PropSet p{{"x"}, {"a"}};
    auto res = synthesize(spec(p, "true", "F a", "true"), {});
    Strategy s = instantiate(res.duty_transducer, letters({"{a}"}, p));
    CHECK(s.stopping());
    CHECK_FALSE(s.respond(0));
}

TEST_CASE("reserved stop keeps the all-false move available") {
    PropSet p{{"x"}, {"a"}};
    SynthOptions opt;
    opt.reserved_stop = true;
    auto res = synthesize(spec(p, "true", "!a", "true"), opt);
    REQUIRE(res.realizable);
    CHECK(res.stop == 2);
    CHECK(res.moves == MoveSet{0, 1});
    Strategy s = instantiate(res.duty_transducer);
    CHECK(s.respond(1) == Letter(0));
    // without the flag "!a" would need the stop move itself
    CHECK_FALSE(synthesize(spec(p, "true", "!a", "true"), {}).realizable);
}

TEST_CASE("enforce with respect to history") {
    PropSet p{{"e"}, {"a"}};
    ProblemSpec ps = spec(p, "true", "true", "true");

    auto s0 = enforce_wrt_history(ps, parse("a", p), {});
    REQUIRE(s0);
    CHECK(s0->respond(1) == Letter(1));

    CHECK_FALSE(enforce_wrt_history(ps, parse("a", p), letters({"{e}"}, p)));
    auto done = enforce_wrt_history(ps, parse("a", p), letters({"{a}"}, p));
    REQUIRE(done);
    CHECK(done->stopping());

    // a must hold at instant 3; after two letters two rounds remain
    Formula xxx = parse("X X X a", p);
    History h = letters({"{e}", "{}"}, p);
    auto s = enforce_wrt_history(ps, xxx, h);
    REQUIRE(s);
    explore::Node start{h, {s->state()}};
    std::size_t max_len = 0;
    auto st = explore::run(*s, start, 10, [&](const explore::Node& n) {
        REQUIRE(evaluate_some_prefix(xxx, n.play, 0));
        max_len = std::max(max_len, n.play.size());
    });
    CHECK(st.plays == 4);
    CHECK(st.overruns == 0);
    CHECK(max_len == 4);

    PropSet q{{"e"}, {"a"}};
    ProblemSpec env_spec = spec(q, "G (e -> N !e)", "true", "true");
    CHECK_THROWS_AS(enforce_wrt_history(env_spec, parse("a", q), letters({"{e}", "{e}"}, q)), UndefinedTransition);
}

TEST_CASE("rights strategy at a history") {
    PropSet p{{"e"}, {"a", "b"}};
    auto res = synthesize(spec(p, "true", "F a", "F b"), {});
    REQUIRE(res.realizable);
    Strategy s = rights_strategy_at(res, {});
    CHECK(s.respond(0) == Letter(3));
    CHECK_FALSE(s.respond(0));

    Strategy done = rights_strategy_at(res, letters({"{a, b}"}, p));
    CHECK(done.stopping());

    // f may rise only after e; once f holds for good, b & !f is lost. T
    // never leaves Agn_r but a history can.
    PropSet q{{"e", "f"}, {"a", "b"}};
    auto res2 = synthesize(spec(q, "!f & G (X f -> e | f)", "F a", "F (b & !f)"), {});
    REQUIRE(res2.realizable);
    CHECK_NOTHROW(rights_strategy_at(res2, letters({"{a}"}, q)));
    CHECK_THROWS_AS(rights_strategy_at(res2, letters({"{e, a}"}, q)), HistoryLeftRegion);
}

TEST_CASE("env after history") {
    PropSet p{{"e"}, {"a"}};
    ProblemSpec ps = spec(p, "G (e -> N !e)", "true", "true");
    auto res = synthesize(ps, {});
    Restricted same = env_after_history(res, {});
    CHECK(same.arena.delta == res.env_arena.arena.delta);
    History h = letters({"{}", "{e}"}, p);
    Restricted after = env_after_history(ps, h);
    CHECK(after.origin[after.arena.initial] ==
          res.env_arena.origin[run_on(res.env_arena.arena, h).landed]);
    CHECK_FALSE(after.arena.defined(after.arena.initial, 1));
    CHECK(after.arena.defined(after.arena.initial, 0));
}

TEST_CASE("further with trivial duty and right follows the base") {
    PropSet p{{"e"}, {"a", "b"}};
    FurtherSpec fs{spec(p, "G (e -> N !e)", "F (a & X b)", "F b"), ltl::tt(), ltl::tt(), {}};
    auto base = synthesize(fs.base, {});
    auto fr = synthesize_further(fs, base);
    REQUIRE(fr.realizable);
    auto collect = [](const Strategy& s) {
        std::vector<History> out;
        explore::run(s, {{}, {s.state()}}, 20, [&](const explore::Node& n) { out.push_back(n.play); });
        return out;
    };
    CHECK(collect(instantiate(fr.transducer(RightsChoice::None))) == collect(instantiate(base.duty_transducer)));
}

TEST_CASE("further rejections") {
    PropSet p{{"e", "f"}, {"a", "b"}};
    ProblemSpec ps = spec(p, "!f & G (X f -> e | f)", "F a", "F (b & !f)");
    auto base = synthesize(ps, {});
    FurtherSpec left{ps, ltl::tt(), ltl::tt(), letters({"{e, a}"}, p)};
    auto r1 = synthesize_further(left, base);
    CHECK_FALSE(r1.realizable);
    CHECK(r1.reason == "history left Agn_r");

    FurtherSpec hard{ps, parse("F e", p), ltl::tt(), letters({"{a}"}, p)};
    auto r2 = synthesize_further(hard, base);
    CHECK_FALSE(r2.realizable);
    CHECK(r2.reason == "goal unreachable");
    CHECK_FALSE(r2.transducer(RightsChoice::None));

    PropSet q{{"e"}, {"a"}};
    CHECK_THROWS_AS(synthesize_further({spec(q, "G !e", "F e", "true"), ltl::tt(), ltl::tt(), {}}),
                    BaseUnrealizable);
}

TEST_CASE("further duty is judged from the injection point") {
    PropSet p{{"e"}, {"a", "b"}};
    ProblemSpec ps = spec(p, "true", "F a", "F b");
    History h = letters({"{a}", "{e, b}"}, p);
    Formula fd = parse("b", p);
    FurtherSpec fs{ps, fd, parse("F a", p), h};
    auto res = synthesize_further(fs);
    REQUIRE(res.realizable);
    for (RightsChoice c : {RightsChoice::None, RightsChoice::Right, RightsChoice::FurtherRight, RightsChoice::Both}) {
        Strategy s = instantiate(res.transducer(c));
        auto st = explore::run(s, {h, {s.state()}}, 20, [&](const explore::Node& n) {
            REQUIRE(n.play.size() > h.size());
            REQUIRE(evaluate(fd, n.play, h.size()));
            REQUIRE(evaluate_some_prefix(ps.duty, n.play, 0));
        });
        CHECK(st.overruns == 0);
    }
}

TEST_CASE("lazy rights build on demand") {
    PropSet p{{"e"}, {"a", "b"}};
    FurtherSpec fs{spec(p, "true", "F a", "F b"), parse("F b", p), parse("F a", p), {}};
    SynthOptions opt;
    opt.lazy_rights = true;
    auto res = synthesize_further(fs, opt);
    REQUIRE(res.realizable);
    auto t1 = res.transducer(RightsChoice::Both);
    auto t2 = res.transducer(RightsChoice::Both);
    CHECK(t1 == t2);
    CHECK(t1->region.size() == res.agn_rfr.size());
}

TEST_CASE("transducer json round trip") {
    PropSet p{{"e"}, {"a", "b"}};
    auto res = synthesize(spec(p, "G (e -> N !e)", "F (a & X b)", "F b"), {});
    REQUIRE(res.realizable);
    auto j = to_json(tabulate(*res.duty_transducer));
    CHECK(j["initial"] == res.product->dfa.initial);
    CHECK(j["tau"].contains("0"));
    CHECK(to_json(transducer_from_json(j)) == j);
    CHECK(to_json(transducer_from_json(nlohmann::json::parse(j.dump()))).dump() == j.dump());
    CHECK_THROWS(transducer_from_json(nlohmann::json::parse(R"({"states": 1})")));

    std::string dot = strategy_dot(*res.duty_transducer);
    CHECK(dot.find("digraph strategy") == 0);
    CHECK(dot.find("doublecircle") != std::string::npos);
}

TEST_CASE("property: realizability, soundness and right-awareness") {
    std::mt19937 rng(31);
    int realizable = 0, total = 0;
    for (int i = 0; i < 400 && realizable < 25; ++i) {
        ProblemSpec ps = explore::random_spec(rng, 3);
        SynthesisResult res;
        try {
            res = synthesize(ps, {});
        } catch (const EnvUnrealizable&) {
            continue;
        }
        const Dfa& a = res.product->dfa;
        if (a.num_states > 64)
            continue;
        ++total;
        auto win = oracle::reach_safe_win(a, res.r_dr, StateSet(a.num_states, true), res.moves);
        REQUIRE(res.realizable == bool(win[a.initial]));
        if (!res.realizable)
            continue;
        ++realizable;
        INFO("env " << print(ps.env) << " duty " << print(ps.duty) << " right " << print(ps.right));
        Strategy s = instantiate(res.duty_transducer);
        const std::size_t horizon = a.num_states;
        auto st = explore::run(
            s, {{}, {a.initial}}, horizon,
            [&](const explore::Node& n) {
                REQUIRE(evaluate(ps.duty, n.play, 0));
                REQUIRE(n.play.size() <= horizon);
            },
            [&](const explore::Node& n, const Strategy&) {
                for (int q : n.states)
                    REQUIRE(res.agn_r.contains(q));
                Strategy r = rights_strategy_at(res, n.play);
                auto rs = explore::run(r, n, n.play.size() + horizon, [&](const explore::Node& m) {
                    REQUIRE(evaluate_some_prefix(ps.duty, m.play, 0));
                    REQUIRE(evaluate_some_prefix(ps.right, m.play, 0));
                });
                REQUIRE(rs.overruns == 0);
            });
        REQUIRE(st.overruns == 0);
        REQUIRE(st.plays > 0);
    }
    MESSAGE("realizable " << realizable << " of " << total);
    CHECK(realizable >= 25);
    CHECK(total > realizable);
}
