#include <lll/errors.hpp>
#include <lll/generators.hpp>
#include <lll/resampling_table.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using lll::EventSystem;
using lll::Rational;

TEST_SUITE("resampling_table") {
    TEST_CASE("column cap heuristic") {
        CHECK(lll::default_column_cap(2, Rational(1, 4)) == 512);
        CHECK(lll::default_column_cap(2, Rational(1, 2)) == 256);
        CHECK(lll::default_column_cap(62, Rational(1, 2)) == 768);
    }

    TEST_CASE("seeded cells are pure functions of seed and position") {
        EventSystem sys = lll::tiny_a();
        lll::SeededTable a(sys, 42, 16);
        lll::SeededTable b(sys, 42, 16);
        bool any_diff = false;
        for (int var = 0; var < 2; ++var) {
            for (int t = 1; t <= 16; ++t) {
                CHECK(a.cell(var, t) == b.cell(var, t));
                lll::SeededTable c(sys, 43, 16);
                any_diff = any_diff || c.cell(var, t) != a.cell(var, t);
            }
        }
        CHECK(any_diff);
        CHECK(a.seed() == 42);
    }

    TEST_CASE("initial assignment is column one") {
        EventSystem sys = lll::tiny_a();
        lll::SeededTable table(sys, 7, 8);
        lll::Assignment x = table.initial_assignment();
        REQUIRE(x.size() == 2);
        CHECK(x[0] == table.cell(0, 1));
        CHECK(x[1] == table.cell(1, 1));
    }

    TEST_CASE("index validation") {
        EventSystem sys = lll::tiny_a();
        lll::SeededTable table(sys, 7, 4);
        CHECK_THROWS_AS(table.cell(0, 0), lll::InvalidModel);
        CHECK_THROWS_AS(table.cell(-1, 1), lll::InvalidModel);
        CHECK_THROWS_AS(table.cell(2, 1), lll::InvalidModel);
        CHECK_THROWS_AS(table.cell(0, 5), lll::CapExceeded);
        CHECK(table.column_cap() == 4);
    }

    TEST_CASE("explicit tables serve only listed cells") {
        lll::ExplicitTable table(2, 9, 4);
        table.set(0, 1, 1).set(1, 1, 0).set(0, 2, 0);
        CHECK(table.cell(0, 1) == 1);
        CHECK(table.cell(1, 1) == 0);
        CHECK(table.cell(0, 2) == 0);
        CHECK(table.seed() == 9);
        CHECK_THROWS_AS(table.cell(1, 2), lll::CapExceeded);
    }

    TEST_CASE("dump and load round-trip") {
        EventSystem sys = lll::tiny_a();
        lll::SeededTable table(sys, 5, 8);
        std::string text = lll::dump_table_json(table, 6);
        lll::ExplicitTable back = lll::load_table_json(sys, text);
        for (int var = 0; var < 2; ++var) {
            for (int t = 1; t <= 6; ++t) CHECK(back.cell(var, t) == table.cell(var, t));
        }
        CHECK(back.seed() == 5);
    }

    TEST_CASE("load validates values against the domains") {
        EventSystem sys = lll::tiny_a();
        CHECK_THROWS_AS(lll::load_table_json(sys, R"({"seed":1,"n":2,"cells":[[1,1,7]]})"),
                        lll::InvalidModel);
        CHECK_THROWS_AS(lll::load_table_json(sys, R"({"seed":1,"n":3,"cells":[]})"),
                        lll::InvalidModel);
        CHECK_THROWS_AS(lll::load_table_json(sys, "nope"), lll::ParseError);
    }

    TEST_CASE("seeded draws follow the declared distribution") {
        lll::EventSystemBuilder b(1);
        b.set_domain(0, {{0, Rational(1, 4)}, {1, Rational(3, 4)}});
        b.add_atomic({{0, 0}});
        EventSystem sys = b.build();
        const int draws = 4096;
        lll::SeededTable table(sys, 2024, draws);
        double counts[2] = {0, 0};
        for (int t = 1; t <= draws; ++t) ++counts[table.cell(0, t)];
        double expected[2] = {draws * 0.25, draws * 0.75};
        double stat = 0;
        for (int j = 0; j < 2; ++j) {
            double diff = counts[j] - expected[j];
            stat += diff * diff / expected[j];
        }
        CHECK(stat < lll::testing::chi2_critical(1, 1.0 - 1e-9));
    }
}
