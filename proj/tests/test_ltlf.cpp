#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "rsyn/errors.hpp"
#include "rsyn/ltlf.hpp"

using namespace rsyn;

namespace {

PropSet ab() { return PropSet{{"a"}, {"b"}}; }
PropSet abc() { return PropSet{{"a", "c"}, {"b"}}; }

Trace tr(std::initializer_list<std::string> letters, const PropSet& p) {
    Trace t;
    for (const auto& s : letters)
        t.push_back(parse_letter(s, p));
    return t;
}

} // namespace

TEST_CASE("parse builds the expected tree") {
    PropSet p = ab();
    Formula f = parse("F (a & b)", p);
    CHECK(f.op() == Op::Eventually);
    CHECK(f.child().op() == Op::And);
    CHECK(f.child().lhs().name() == "a");
    CHECK(f.child().rhs().atom() == 1);

    Formula g = parse("a U (X b)", p);
    CHECK(g == ltl::until(ltl::atom(p, "a"), ltl::next(ltl::atom(p, "b"))));
}

TEST_CASE("precedence and associativity") {
    PropSet p = abc();
    auto a = ltl::atom(p, "a"), b = ltl::atom(p, "b"), c = ltl::atom(p, "c");
    CHECK(parse("a | b & c", p) == ltl::disj(a, ltl::conj(b, c)));
    CHECK(parse("a -> b -> c", p) == ltl::implies(a, ltl::implies(b, c)));
    CHECK(parse("a & b & c", p) == ltl::conj(ltl::conj(a, b), c));
    CHECK(parse("a U b U c", p) == ltl::until(a, ltl::until(b, c)));
    CHECK(parse("a U b & c", p) == ltl::conj(ltl::until(a, b), c));
    CHECK(parse("!a U b", p) == ltl::until(ltl::neg(a), b));
    CHECK(parse("X !a R G b", p) == ltl::release(ltl::next(ltl::neg(a)), ltl::always(b)));
    CHECK(parse("a <-> b", p) == ltl::conj(ltl::implies(a, b), ltl::implies(b, a)));
    CHECK(parse("true | false", p) == ltl::disj(ltl::tt(), ltl::ff()));
}

TEST_CASE("parse errors") {
    PropSet p = ab();
    CHECK_THROWS_AS(parse("F c", p), UndeclaredAtom);
    try {
        parse("a &\n  ) b", p);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 3);
    }
    CHECK_THROWS_AS(parse("a b", p), ParseError);
    CHECK_THROWS_AS(parse("(a", p), ParseError);
    CHECK_THROWS_AS(parse("a # b", p), ParseError);
    CHECK_THROWS_AS(parse("", p), ParseError);
}

TEST_CASE("prop set validation") {
    CHECK_NOTHROW(ab().validate());
    CHECK_THROWS(PropSet{{"a"}, {"a"}}.validate());
    CHECK_THROWS(PropSet{{"X"}, {}}.validate());
    CHECK_THROWS(PropSet{{}, {}}.validate());
    CHECK_THROWS(PropSet{{"1a"}, {}}.validate());
    CHECK_THROWS(PropSet{{"a", "b", "c"}, {}}.validate(2));
}

TEST_CASE("letters print and parse") {
    PropSet p = abc();
    Letter l = parse_letter("{c, b}", p);
    CHECK(l == 0b110);
    CHECK(letter_to_string(l, p) == "{c, b}");
    CHECK(parse_letter(" {} ", p) == 0);
    CHECK(p.x_part(l) == 0b10);
    CHECK(p.y_part(l) == 1);
    CHECK(p.join(0b10, 1) == l);
    CHECK(part_to_string(1, p, true) == "{b}");
    CHECK_THROWS_AS(parse_letter("{d}", p), UndeclaredAtom);
    CHECK_THROWS(parse_letter("a", p));
}

TEST_CASE("evaluate") {
    PropSet p = ab();
    CHECK(evaluate(parse("F a", p), tr({"{a}", "{}"}, p), 0));
    CHECK_FALSE(evaluate(parse("X a", p), tr({"{a}"}, p), 0));
    CHECK(evaluate(parse("N a", p), tr({"{}"}, p), 0));
    // a holds at 0 and 1, b at 2: the Until is discharged at instant 2
    CHECK(evaluate(parse("a U b", p), tr({"{a}", "{a}", "{b}"}, p), 0));
    CHECK_FALSE(evaluate(parse("a U b", p), tr({"{a}", "{}", "{b}"}, p), 0));
    CHECK(evaluate(parse("a R b", p), tr({"{b}", "{b}"}, p), 0));
    CHECK_THROWS(evaluate(parse("a", p), tr({"{a}"}, p), 1));
}

TEST_CASE("evaluate_all_prefixes") {
    PropSet p{{"crash"}, {"a"}};
    CHECK(evaluate_all_prefixes(parse("G !crash", p), tr({"{}", "{}", "{}"}, p)));
    CHECK_FALSE(evaluate_all_prefixes(parse("G !crash", p), tr({"{}", "{crash}"}, p)));
    // [{}] alone falsifies F a
    CHECK_FALSE(evaluate_all_prefixes(parse("F a", p), tr({"{}", "{a}"}, p)));
    CHECK(evaluate_some_prefix(parse("F a", p), tr({"{}", "{a}"}, p), 0));
    CHECK_FALSE(evaluate_some_prefix(parse("a", p), tr({"{a}", "{}"}, p), 1));
}

TEST_CASE("print") {
    PropSet p = abc();
    CHECK(print(parse("(a | b) & c", p)) == "(a | b) & c");
    CHECK(print(parse("a -> (b -> c)", p)) == "a -> b -> c");
    CHECK(print(parse("(a -> b) -> c", p)) == "(a -> b) -> c");
    CHECK(print(parse("X !(a U b)", p)) == "X !(a U b)");
    CHECK(print(parse("F a", p)) == "F a");
}

TEST_CASE("property: print then parse is the identity") {
    std::mt19937 rng(7);
    PropSet p = abc();
    for (int i = 0; i < 2000; ++i) {
        Formula f = gen::formula(rng, p, 5);
        Formula g = parse(print(f), p);
        INFO(print(f));
        REQUIRE(g == f);
    }
}

TEST_CASE("property: abbreviations and NNF preserve meaning") {
    std::mt19937 rng(11);
    PropSet p = abc();
    auto traces = gen::all_traces(3, 4);
    for (int i = 0; i < 150; ++i) {
        Formula f = gen::formula(rng, p, 4);
        Formula e = expand_abbreviations(f);
        Formula n = to_nnf(f);
        INFO(print(f));
        for (const Trace& t : traces) {
            bool v = evaluate(f, t, 0);
            REQUIRE(evaluate(e, t, 0) == v);
            REQUIRE(evaluate(n, t, 0) == v);
        }
    }
}

TEST_CASE("property: all-prefix satisfaction is the conjunction over prefixes") {
    std::mt19937 rng(13);
    PropSet p = abc();
    auto traces = gen::all_traces(3, 4);
    for (int i = 0; i < 100; ++i) {
        Formula f = gen::formula(rng, p, 4);
        for (const Trace& t : traces) {
            bool all = true, some = false;
            for (std::size_t k = 1; k <= t.size(); ++k) {
                bool v = evaluate(f, Trace(t.begin(), t.begin() + k), 0);
                all = all && v;
                some = some || v;
            }
            REQUIRE(evaluate_all_prefixes(f, t) == all);
            REQUIRE(evaluate_some_prefix(f, t, 0) == some);
        }
    }
}
