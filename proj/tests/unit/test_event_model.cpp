#include <lll/errors.hpp>
#include <lll/event_model.hpp>
#include <lll/generators.hpp>

#include <doctest.h>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

using lll::Assignment;
using lll::EventSystem;
using lll::EventSystemBuilder;
using lll::Rational;

TEST_SUITE("event_model") {
    TEST_CASE("builder computes atomic probabilities and inclusive neighborhoods") {
        EventSystem sys = lll::tiny_a();
        REQUIRE(sys.variable_count() == 2);
        REQUIRE(sys.event_count() == 2);
        CHECK(sys.event_prob(0) == Rational(1, 4));
        CHECK(sys.event_prob(1) == Rational(1, 2));
        CHECK(sys.event(0).scope == std::vector<int>{0, 1});
        CHECK(sys.event(1).scope == std::vector<int>{1});
        CHECK(sys.dependent(0, 0));
        CHECK(sys.dependent(0, 1));
        CHECK(sys.dependent(1, 0));
        CHECK(sys.neighbors(0) == std::vector<int>{0, 1});
        CHECK(sys.neighbors(1) == std::vector<int>{0, 1});
        CHECK(sys.max_degree() == 2);
        CHECK(sys.max_prob() == Rational(1, 2));
        CHECK(sys.all_atomic());
    }

    TEST_CASE("builder rejects bad domains and literals") {
        EventSystemBuilder bad_sum(1);
        CHECK_THROWS_AS(bad_sum.set_domain(0, {{0, Rational(1, 2)}, {1, Rational(1, 3)}}),
                        lll::InvalidModel);
        EventSystemBuilder zero_prob(1);
        CHECK_THROWS_AS(zero_prob.set_domain(0, {{0, Rational(0)}, {1, Rational(1)}}),
                        lll::InvalidModel);
        EventSystemBuilder dup_value(1);
        CHECK_THROWS_AS(dup_value.set_domain(0, {{0, Rational(1, 2)}, {0, Rational(1, 2)}}),
                        lll::InvalidModel);

        EventSystemBuilder b(2);
        b.uniform_boolean();
        CHECK_THROWS_AS(b.add_atomic({{0, 0}, {0, 1}}), lll::InvalidModel);
        CHECK_THROWS_AS(b.add_atomic({{5, 0}}), lll::InvalidModel);
        CHECK_THROWS_AS(b.add_atomic({}), lll::InvalidModel);

        EventSystemBuilder unknown_value(1);
        unknown_value.uniform_boolean();
        unknown_value.add_atomic({{0, 7}});
        CHECK_THROWS_AS(unknown_value.build(), lll::InvalidModel);
    }

    TEST_CASE("zero probability opaque events are dropped at build") {
        EventSystemBuilder b(1);
        b.uniform_boolean();
        b.add_opaque({0}, [](const std::vector<int>&) { return false; }, Rational(0));
        b.add_atomic({{0, 0}});
        EventSystem sys = b.build();
        CHECK(sys.event_count() == 1);
        CHECK(sys.event_prob(0) == Rational(1, 2));
    }

    TEST_CASE("opaque predicates see scope values in scope order") {
        EventSystemBuilder b(3);
        b.uniform_boolean();
        b.add_opaque(
            {2, 0},
            [](const std::vector<int>& v) { return v[0] == 1 && v[1] == 0; },
            Rational(1, 4));
        EventSystem sys = b.build();
        CHECK(sys.event(0).scope == std::vector<int>{0, 2});
        CHECK(sys.evaluate(0, Assignment{{1, 0, 0}}));
        CHECK_FALSE(sys.evaluate(0, Assignment{{0, 0, 1}}));
        CHECK_FALSE(sys.all_atomic());
    }

    TEST_CASE("true_events lists ascending ids") {
        EventSystem sys = lll::tiny_a();
        CHECK(sys.true_events(Assignment{{0, 0}}) == std::vector<int>{0});
        CHECK(sys.true_events(Assignment{{0, 1}}) == std::vector<int>{1});
        CHECK(sys.true_events(Assignment{{1, 0}}).empty());
    }

    TEST_CASE("sampling thresholds split the word space exactly") {
        EventSystemBuilder b(2);
        b.set_domain(0, {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
        b.set_domain(1, {{3, Rational(1, 4)}, {4, Rational(3, 4)}});
        b.add_atomic({{0, 0}});
        EventSystem sys = b.build();
        const std::uint64_t half = 1ull << 63;
        const std::uint64_t quarter = 1ull << 62;
        CHECK(sys.sample_value(0, 0) == 0);
        CHECK(sys.sample_value(0, half - 1) == 0);
        CHECK(sys.sample_value(0, half) == 1);
        CHECK(sys.sample_value(0, std::numeric_limits<std::uint64_t>::max()) == 1);
        CHECK(sys.sample_value(1, quarter - 1) == 3);
        CHECK(sys.sample_value(1, quarter) == 4);
    }

    TEST_CASE("dimacs clauses become their falsifying atomic events") {
        EventSystem sys = lll::parse_dimacs("c sample\np cnf 3 2\n1 -2 0\n-1 3 0\n");
        REQUIRE(sys.event_count() == 2);
        CHECK(sys.variable_count() == 3);
        CHECK(sys.event(0).assignment == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
        CHECK(sys.event(1).assignment == std::vector<std::pair<int, int>>{{0, 1}, {2, 0}});
        CHECK(sys.event_prob(0) == Rational(1, 4));
        CHECK(sys.evaluate(0, Assignment{{0, 1, 0}}));
        CHECK_FALSE(sys.evaluate(0, Assignment{{1, 1, 0}}));
    }

    TEST_CASE("dimacs drops tautologies and duplicate literals") {
        EventSystem sys = lll::parse_dimacs("p cnf 2 2\n1 -1 0\n2 2 0\n");
        REQUIRE(sys.event_count() == 1);
        CHECK(sys.event(0).assignment == std::vector<std::pair<int, int>>{{1, 0}});
    }

    TEST_CASE("dimacs rejects malformed input") {
        CHECK_THROWS_AS(lll::parse_dimacs("p cnf 2 1\n0\n"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_dimacs("1 2 0\n"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_dimacs("p cnf 2 2\n1 0\n"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_dimacs("p cnf 2 1\n3 0\n"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_dimacs("p cnf 2 1\n1 junk 0\n"), lll::ParseError);
    }

    TEST_CASE("native json round-trips") {
        EventSystem sys = lll::tiny_a();
        std::string text = lll::serialize_native(sys);
        EventSystem back = lll::parse_native(text);
        CHECK(back.variable_count() == 2);
        CHECK(back.event_count() == 2);
        CHECK(back.event_prob(0) == Rational(1, 4));
        CHECK(back.event(0).assignment == sys.event(0).assignment);
        CHECK(lll::serialize_native(back) == text);
    }

    TEST_CASE("native json rejects malformed models") {
        CHECK_THROWS_AS(lll::parse_native("not json"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_native("{}"), lll::ParseError);
        EventSystem empty = lll::parse_native(R"({"variables": [], "events": []})");
        CHECK(empty.variable_count() == 0);
        CHECK(empty.event_count() == 0);
        const char* dup_event = R"({
            "variables": [{"id": 1, "values": [{"v": 0, "prob": "1/2"}, {"v": 1, "prob": "1/2"}]}],
            "events": [{"id": 1, "kind": "atomic", "assignment": [[1, 0]]},
                       {"id": 1, "kind": "atomic", "assignment": [[1, 1]]}]})";
        CHECK_THROWS_AS(lll::parse_native(dup_event), lll::InvalidModel);
        const char* bad_kind = R"({
            "variables": [{"id": 1, "values": [{"v": 0, "prob": "1/2"}, {"v": 1, "prob": "1/2"}]}],
            "events": [{"id": 1, "kind": "opaque", "assignment": []}]})";
        CHECK_THROWS_AS(lll::parse_native(bad_kind), lll::InvalidModel);
    }

    TEST_CASE("opaque systems cannot be serialized") {
        EventSystemBuilder b(1);
        b.uniform_boolean();
        b.add_opaque({0}, [](const std::vector<int>& v) { return v[0] == 0; }, Rational(1, 2));
        EventSystem sys = b.build();
        CHECK_THROWS_AS(lll::serialize_native(sys), lll::InvalidModel);
    }
}
