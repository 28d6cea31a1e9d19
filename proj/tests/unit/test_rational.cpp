#include <lll/errors.hpp>
#include <lll/prf.hpp>
#include <lll/rational.hpp>

#include <doctest.h>

TEST_SUITE("rational") {
    TEST_CASE("parse accepts integers and fractions in canonical form") {
        CHECK(lll::parse_rational("3/4") == lll::Rational(3, 4));
        CHECK(lll::parse_rational("5") == lll::Rational(5));
        CHECK(lll::parse_rational("-2/6") == lll::Rational(-1, 3));
        CHECK(lll::parse_rational("0/7") == lll::Rational(0));
    }

    TEST_CASE("parse rejects malformed input") {
        CHECK_THROWS_AS(lll::parse_rational(""), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_rational("1/0"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_rational("x"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_rational("1/2/3"), lll::ParseError);
        CHECK_THROWS_AS(lll::parse_rational("1.5"), lll::ParseError);
    }

    TEST_CASE("rendering round-trips") {
        CHECK(lll::rational_str(lll::Rational(1, 3)) == "1/3");
        CHECK(lll::rational_str(lll::Rational(7)) == "7");
        CHECK(lll::rational_str(lll::Rational(-1, 2)) == "-1/2");
        for (const char* text : {"341/1024", "-5", "0", "2719/1000"}) {
            CHECK(lll::rational_str(lll::parse_rational(text)) == text);
        }
    }

    TEST_CASE("exact powers") {
        CHECK(lll::rational_pow(lll::Rational(3, 2), 3) == lll::Rational(27, 8));
        CHECK(lll::rational_pow(lll::Rational(5, 7), 0) == lll::Rational(1));
        CHECK(lll::rational_pow(lll::Rational(0), 4) == lll::Rational(0));
    }

    TEST_CASE("euler brackets") {
        CHECK(lll::euler_lower_bound() < lll::euler_upper_bound());
        CHECK(lll::euler_lower_bound() == lll::Rational(2718, 1000));
        CHECK(lll::euler_upper_bound() == lll::Rational(2719, 1000));
    }
}

TEST_SUITE("prf") {
    TEST_CASE("mix64 matches the published splitmix64 stream") {
        CHECK(lll::mix64(0) == 0xe220a8397b1dcdafull);
        CHECK(lll::mix64(0x9e3779b97f4a7c15ull) == 0x6e789e6aa1b965f4ull);
    }

    TEST_CASE("prf values are pure functions of their inputs") {
        CHECK(lll::prf2(1, 2) == lll::prf2(1, 2));
        CHECK(lll::prf3(1, 2, 3) == lll::prf3(1, 2, 3));
        CHECK(lll::prf2(1, 2) != lll::prf2(2, 1));
        CHECK(lll::prf3(1, 2, 3) != lll::prf3(1, 3, 2));
    }
}
