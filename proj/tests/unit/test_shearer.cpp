#include <lll/errors.hpp>
#include <lll/generators.hpp>
#include <lll/shearer.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using lll::EventSystem;
using lll::EventSystemBuilder;
using lll::Rational;

namespace {

std::vector<Rational> event_probs(const EventSystem& sys) {
    std::vector<Rational> p;
    for (int b = 0; b < sys.event_count(); ++b) p.push_back(sys.event_prob(b));
    return p;
}

EventSystem two_block_events() {
    // B1 on {0,1,2}, B2 on {2,3,4}: p = 1/8 each, max inclusive degree 2.
    EventSystemBuilder b(5);
    b.uniform_boolean();
    b.add_atomic({{0, 0}, {1, 0}, {2, 0}});
    b.add_atomic({{2, 0}, {3, 0}, {4, 0}});
    return b.build();
}

}  // namespace

TEST_SUITE("shearer") {
    TEST_CASE("fixture values are exact") {
        EventSystem sys = lll::tiny_a();
        std::vector<Rational> p = event_probs(sys);
        CHECK(lll::q_polynomial(sys, p, {}) == Rational(1, 4));
        CHECK(lll::q_polynomial(sys, p, {0}) == Rational(1, 4));
        CHECK(lll::q_polynomial(sys, p, {1}) == Rational(1, 2));
        CHECK(lll::q_polynomial(sys, p, {0, 1}) == Rational(0));

        CHECK(lll::measure_vector(sys) == std::vector<Rational>{Rational(1), Rational(2)});
        lll::WorkParams wp = lll::work_params(sys);
        CHECK(wp.W == Rational(3));
        CHECK(wp.w_prime_bound == Rational(8));

        auto slack = lll::max_slack(sys);
        REQUIRE(slack.has_value());
        CHECK(*slack == Rational(341, 1024));
        CHECK(*slack >= Rational(332, 1000));
        CHECK(*slack < Rational(334, 1000));
    }

    TEST_CASE("criterion thresholds around the fixture slack") {
        EventSystem sys = lll::tiny_a();
        CHECK(lll::check_shearer(sys, Rational(1)));
        CHECK(lll::check_shearer(sys, Rational(4, 3) - Rational(1, 1024)));
        CHECK_FALSE(lll::check_shearer(sys, Rational(4, 3)));
        CHECK_FALSE(lll::check_shearer(sys, Rational(2)));
    }

    TEST_CASE("brute force oracle agrees on the fixture and on random models") {
        EventSystem tiny = lll::tiny_a();
        CHECK(lll::testing::oracle_q(tiny, event_probs(tiny), 0) == Rational(1, 4));
        CHECK(lll::testing::oracle_mu(tiny) ==
              std::vector<Rational>{Rational(1), Rational(2)});

        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            lll::RandomModelOptions opt;
            opt.variables = 5;
            opt.events = 6;
            opt.uniform = seed % 2 == 0;
            EventSystem sys = lll::random_model(seed, opt);
            std::vector<Rational> p = event_probs(sys);
            CHECK(lll::q_polynomial(sys, p, {}) == lll::testing::oracle_q(sys, p, 0));
            for (int b = 0; b < sys.event_count(); ++b) {
                CHECK(lll::q_polynomial(sys, p, {b}) ==
                      lll::testing::oracle_q(sys, p, 1u << b));
            }
            CHECK(lll::check_shearer(sys, Rational(1)) ==
                  lll::testing::oracle_shearer(sys, Rational(1)));
        }
    }

    TEST_CASE("q_polynomial validates its inputs") {
        EventSystem sys = lll::tiny_a();
        std::vector<Rational> p = event_probs(sys);
        CHECK_THROWS_AS(lll::q_polynomial(sys, {Rational(1, 2)}, {}), lll::InvalidModel);
        CHECK_THROWS_AS(lll::q_polynomial(sys, p, {5}), lll::InvalidModel);
        CHECK_THROWS_AS(lll::q_polynomial(sys, p, {0, 0}), lll::InvalidModel);
        CHECK_THROWS_AS(lll::q_polynomial(sys, p, {}, 1), lll::CapExceeded);
    }

    TEST_CASE("symmetric criterion in plain and power form") {
        EventSystem tiny = lll::tiny_a();
        CHECK_FALSE(lll::check_symmetric(tiny, Rational(0)));
        CHECK_FALSE(lll::check_symmetric_power(tiny, Rational(0)));

        EventSystem blocks = two_block_events();
        CHECK(lll::check_symmetric(blocks, Rational(0)));
        CHECK(lll::check_symmetric(blocks, Rational(3, 10)));
        CHECK_FALSE(lll::check_symmetric(blocks, Rational(1)));
        CHECK(lll::check_symmetric_power(blocks, Rational(1, 2)));
        CHECK_FALSE(lll::check_symmetric_power(blocks, Rational(3, 5)));
    }

    TEST_CASE("asymmetric criterion") {
        EventSystemBuilder b(2);
        b.uniform_boolean();
        b.add_atomic({{0, 0}});
        b.add_atomic({{1, 0}});
        EventSystem indep = b.build();
        std::vector<Rational> x{Rational(3, 4), Rational(3, 4)};
        CHECK(lll::check_asymmetric(indep, x, Rational(0)));
        CHECK(lll::check_asymmetric(indep, x, Rational(1, 2)));
        CHECK_FALSE(lll::check_asymmetric(indep, x, Rational(2)));

        CHECK_THROWS_AS(lll::check_asymmetric(indep, {Rational(1, 2)}, Rational(0)),
                        lll::InvalidModel);
        CHECK_THROWS_AS(
            lll::check_asymmetric(indep, {Rational(1), Rational(1, 2)}, Rational(0)),
            lll::InvalidModel);
    }

    TEST_CASE("cluster expansion criterion is tight at the fixture measures") {
        EventSystem sys = lll::tiny_a();
        std::vector<Rational> mu{Rational(1), Rational(2)};
        CHECK(lll::check_cluster_expansion(sys, mu, Rational(0)));
        CHECK_FALSE(lll::check_cluster_expansion(sys, mu, Rational(1, 100)));
        CHECK_THROWS_AS(lll::check_cluster_expansion(sys, {Rational(1)}, Rational(0)),
                        lll::InvalidModel);
    }

    TEST_CASE("report carries the exact fixture fields") {
        EventSystem sys = lll::tiny_a();
        lll::ReportOptions opts;
        opts.x = std::vector<Rational>{Rational(1, 2), Rational(2, 3)};
        opts.mu_tilde = std::vector<Rational>{Rational(1), Rational(2)};
        lll::ShearerReport rep = lll::shearer_report(sys, opts);
        CHECK(rep.variable_count == 2);
        CHECK(rep.event_count == 2);
        CHECK(rep.exact);
        CHECK(rep.shearer_satisfied);
        CHECK(rep.satisfied_at_one);
        CHECK(rep.q_empty == Rational(1, 4));
        CHECK(rep.W == Rational(3));
        CHECK(rep.w_prime_bound == Rational(8));
        REQUIRE(rep.slack.has_value());
        CHECK(*rep.slack == Rational(341, 1024));
        CHECK_FALSE(rep.symmetric_satisfied);
        REQUIRE(rep.asymmetric_satisfied.has_value());
        CHECK_FALSE(*rep.asymmetric_satisfied);
        REQUIRE(rep.cluster_satisfied.has_value());
        CHECK(*rep.cluster_satisfied);

        std::string text = lll::report_json(rep);
        CHECK(text.find("341/1024") != std::string::npos);
        CHECK(text.find("\"W\"") != std::string::npos);
    }

    TEST_CASE("event cap guards the exponential routines") {
        EventSystemBuilder b(21);
        b.uniform_boolean();
        for (int v = 0; v < 21; ++v) b.add_atomic({{v, 0}});
        EventSystem sys = b.build();
        CHECK_THROWS_AS(lll::check_shearer(sys, Rational(1)), lll::CapExceeded);
        CHECK_THROWS_AS(lll::measure_vector(sys), lll::CapExceeded);
        CHECK(lll::check_shearer(lll::tiny_a(), Rational(1), 25));
    }
}
