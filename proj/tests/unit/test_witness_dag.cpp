#include <lll/errors.hpp>
#include <lll/generators.hpp>
#include <lll/prf.hpp>
#include <lll/resampling_table.hpp>
#include <lll/witness_dag.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using lll::EventSystem;
using lll::EventSystemBuilder;
using lll::Rational;
using lll::WitnessDag;

namespace {

// B1 = {v0=0}, B2 = {v1=0}, B3 = {v0=0, v1=0}: B1 and B2 are independent,
// both depend on B3.
EventSystem wedge_model() {
    EventSystemBuilder b(2);
    b.uniform_boolean();
    b.add_atomic({{0, 0}});
    b.add_atomic({{1, 0}});
    b.add_atomic({{0, 0}, {1, 0}});
    return b.build();
}

std::vector<int> random_sequence(const EventSystem& sys, std::uint64_t seed, int len) {
    std::vector<int> seq;
    for (int j = 0; j < len; ++j) {
        seq.push_back(static_cast<int>(lll::prf3(seed, 77, static_cast<std::uint64_t>(j)) %
                                       static_cast<std::uint64_t>(sys.event_count())));
    }
    return seq;
}

}  // namespace

TEST_SUITE("witness_dag") {
    TEST_CASE("label sequences span the dependency edges") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        REQUIRE(dag.size() == 3);
        // Sorted by extended label: 0 = (B1,1), 1 = (B1,2), 2 = (B2,1).
        CHECK(dag.node(0).event == 0);
        CHECK(dag.node(0).occ == 1);
        CHECK(dag.node(1).event == 0);
        CHECK(dag.node(1).occ == 2);
        CHECK(dag.node(2).event == 1);
        CHECK(dag.node(2).occ == 1);
        CHECK(dag.edge(0, 2));
        CHECK(dag.edge(0, 1));
        CHECK(dag.edge(2, 1));
        CHECK_FALSE(dag.edge(1, 0));
        CHECK_FALSE(dag.edge(2, 0));
        CHECK(dag.sinks() == std::vector<int>{1});
        CHECK_FALSE(lll::validate(sys, dag).has_value());
    }

    TEST_CASE("independent labels stay unordered") {
        EventSystem sys = wedge_model();
        WitnessDag ab = WitnessDag::from_label_sequence(sys, {0, 1});
        WitnessDag ba = WitnessDag::from_label_sequence(sys, {1, 0});
        CHECK(ab == ba);
        CHECK(ab.canonical_key() == ba.canonical_key());
        CHECK_FALSE(ab.edge(0, 1));
        CHECK_FALSE(ab.edge(1, 0));
        CHECK(ab.sinks() == std::vector<int>{0, 1});
    }

    TEST_CASE("variable paths list nodes in precedence order") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        CHECK(dag.variable_path(0) == std::vector<int>{0, 1});
        CHECK(dag.variable_path(1) == std::vector<int>{0, 2, 1});
        CHECK(dag.path_length(0) == 2);
        CHECK(dag.path_length(1) == 3);
        CHECK(dag.path_events(1) == std::vector<int>{0, 1, 0});
        CHECK(dag.touched_variables() == std::vector<int>{0, 1});

        WitnessDag lone = WitnessDag::from_label_sequence(sys, {1});
        CHECK(lone.variable_path(0).empty());
        CHECK(lone.path_length(0) == 0);
        CHECK(lone.touched_variables() == std::vector<int>{1});
    }

    TEST_CASE("from_parts accepts valid input and derives occurrences") {
        EventSystem sys = lll::tiny_a();
        std::vector<WitnessDag::Node> nodes{{0, 0}, {1, 0}, {0, 0}};
        std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {0, 2}};
        WitnessDag dag = WitnessDag::from_parts(sys, nodes, edges);
        CHECK(dag == WitnessDag::from_label_sequence(sys, {0, 1, 0}));

        std::vector<WitnessDag::Node> declared{{0, 1}, {1, 1}, {0, 2}};
        CHECK(WitnessDag::from_parts(sys, declared, edges) == dag);
    }

    TEST_CASE("from_parts rejects structural violations") {
        EventSystem sys = lll::tiny_a();
        using Node = WitnessDag::Node;
        // Missing comparability edge between dependent labels.
        CHECK_THROWS_AS(WitnessDag::from_parts(sys, {Node{0, 0}, Node{1, 0}}, {}),
                        lll::InvalidModel);
        // Cycle.
        CHECK_THROWS_AS(
            WitnessDag::from_parts(sys, {Node{0, 0}, Node{1, 0}}, {{0, 1}, {1, 0}}),
            lll::InvalidModel);
        // Self loop.
        CHECK_THROWS_AS(WitnessDag::from_parts(sys, {Node{0, 0}}, {{0, 0}}), lll::InvalidModel);
        // Unknown event.
        CHECK_THROWS_AS(WitnessDag::from_parts(sys, {Node{9, 0}}, {}), lll::InvalidModel);
        // Edge endpoint out of range.
        CHECK_THROWS_AS(WitnessDag::from_parts(sys, {Node{0, 0}}, {{0, 3}}), lll::InvalidModel);
        // Wrong declared occurrence.
        CHECK_THROWS_AS(
            WitnessDag::from_parts(sys, {Node{0, 2}, Node{0, 1}}, {{0, 1}}),
            lll::InvalidModel);
    }

    TEST_CASE("prefix keeps extended labels") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        // Ancestors of (B2,1), which sits at sorted index 2.
        WitnessDag front = dag.prefix(sys, {2});
        CHECK(front == WitnessDag::from_label_sequence(sys, {0, 1}));
        WitnessDag whole = dag.prefix(sys, dag.sinks());
        CHECK(whole == dag);
        WitnessDag none = dag.prefix(sys, {});
        CHECK(none.size() == 0);
        // A prefix at the later B1 node keeps occ 2 reachable context intact.
        WitnessDag all = dag.prefix(sys, {1});
        CHECK(all == dag);
    }

    TEST_CASE("node configurations read the table at path positions") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        lll::ExplicitTable table(2, 0, 4);
        table.set(0, 1, 0).set(0, 2, 0).set(1, 1, 0).set(1, 2, 1).set(1, 3, 0);
        using Config = std::vector<std::pair<int, int>>;
        CHECK(dag.node_configuration(sys, 0, table) == Config{{0, 0}, {1, 0}});
        CHECK(dag.node_configuration(sys, 2, table) == Config{{1, 1}});
        CHECK(dag.node_configuration(sys, 1, table) == Config{{0, 0}, {1, 0}});
        CHECK(dag.compatible(sys, table));

        lll::ExplicitTable broken(2, 0, 4);
        broken.set(0, 1, 0).set(0, 2, 0).set(1, 1, 0).set(1, 2, 0).set(1, 3, 0);
        CHECK_FALSE(dag.compatible(sys, broken));  // (B2,1) reads v1 = 0
    }

    TEST_CASE("weights multiply probabilities with an optional inflation") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        CHECK(dag.weight(sys) == Rational(1, 32));
        CHECK(dag.weight(sys, Rational(1, 4)) ==
              Rational(1, 32) * lll::rational_pow(Rational(5, 4), 3));
        CHECK(WitnessDag().weight(sys) == Rational(1));
    }

    TEST_CASE("collectible targets intersect the sink neighborhoods") {
        EventSystem tiny = lll::tiny_a();
        WitnessDag one = WitnessDag::from_label_sequence(tiny, {0});
        CHECK(one.collectible_targets(tiny) == std::vector<int>{0, 1});
        WitnessDag chain = WitnessDag::from_label_sequence(tiny, {0, 1});
        CHECK(chain.collectible_targets(tiny) == std::vector<int>{0, 1});

        EventSystem wedge = wedge_model();
        WitnessDag split = WitnessDag::from_label_sequence(wedge, {0, 1});
        CHECK(split.collectible_targets(wedge) == std::vector<int>{2});
        WitnessDag empty;
        CHECK(empty.collectible_targets(wedge) == std::vector<int>{0, 1, 2});
    }

    TEST_CASE("consistency is per-variable nesting") {
        EventSystem sys = lll::tiny_a();
        WitnessDag a = WitnessDag::from_label_sequence(sys, {0});
        WitnessDag ab = WitnessDag::from_label_sequence(sys, {0, 1});
        WitnessDag ba = WitnessDag::from_label_sequence(sys, {1, 0});
        CHECK(lll::consistent(a, ab));
        CHECK(lll::consistent(ab, a));
        CHECK(lll::consistent(a, a));
        CHECK_FALSE(lll::consistent(ab, ba));
        CHECK(lll::consistent(WitnessDag(), ba));
    }

    TEST_CASE("merge is the least common extension") {
        EventSystem sys = lll::tiny_a();
        WitnessDag a = WitnessDag::from_label_sequence(sys, {0});
        WitnessDag ab = WitnessDag::from_label_sequence(sys, {0, 1});
        CHECK(lll::merge(sys, a, ab) == ab);
        CHECK(lll::merge(sys, ab, a) == ab);
        CHECK(lll::merge(sys, a, a) == a);
        CHECK(lll::merge(sys, WitnessDag(), ab) == ab);
        WitnessDag ba = WitnessDag::from_label_sequence(sys, {1, 0});
        CHECK_THROWS_AS(lll::merge(sys, ab, ba), lll::InconsistentMerge);

        EventSystem wedge = wedge_model();
        WitnessDag left = WitnessDag::from_label_sequence(wedge, {0});
        WitnessDag right = WitnessDag::from_label_sequence(wedge, {1});
        CHECK(lll::merge(wedge, left, right) ==
              WitnessDag::from_label_sequence(wedge, {0, 1}));
    }

    TEST_CASE("extension adds one dominated sink") {
        EventSystem sys = lll::tiny_a();
        WitnessDag a = WitnessDag::from_label_sequence(sys, {0});
        CHECK(lll::extend_with_sink(sys, a, 1) == WitnessDag::from_label_sequence(sys, {0, 1}));
        CHECK(lll::extend_with_sink(sys, a, 0) == WitnessDag::from_label_sequence(sys, {0, 0}));
        CHECK(lll::extend_with_sink(sys, WitnessDag(), 1) ==
              WitnessDag::from_label_sequence(sys, {1}));
    }

    TEST_CASE("witness trees attach under the deepest dependent node") {
        EventSystem sys = lll::tiny_a();
        std::vector<int> log{0, 1, 0};
        lll::WitnessTree tree = lll::witness_tree(sys, log, 3);
        CHECK(tree.log_indices == std::vector<int>{0, 1, 2});
        CHECK(tree.parent == std::vector<int>{1, 2, -1});
        CHECK(tree.dag == lll::full_witness_dag(sys, log));

        lll::WitnessTree mid = lll::witness_tree(sys, log, 2);
        CHECK(mid.log_indices == std::vector<int>{0, 1});
        CHECK(mid.parent == std::vector<int>{1, -1});

        EventSystem wedge = wedge_model();
        std::vector<int> wlog{0, 1, 2};
        lll::WitnessTree wtree = lll::witness_tree(wedge, wlog, 3);
        CHECK(wtree.log_indices == std::vector<int>{0, 1, 2});
        CHECK(wtree.parent == std::vector<int>{2, 2, -1});

        lll::WitnessTree skip = lll::witness_tree(wedge, {0, 1}, 2);
        CHECK(skip.log_indices == std::vector<int>{1});
        CHECK(skip.parent == std::vector<int>{-1});
        CHECK(skip.dag == WitnessDag::from_label_sequence(wedge, {1}));

        CHECK_THROWS_AS(lll::witness_tree(sys, log, 0), lll::InvalidModel);
        CHECK_THROWS_AS(lll::witness_tree(sys, log, 4), lll::InvalidModel);
    }

    TEST_CASE("json round-trips and validates") {
        EventSystem sys = lll::tiny_a();
        WitnessDag dag = WitnessDag::from_label_sequence(sys, {0, 1, 0});
        WitnessDag back = lll::dag_from_json(sys, lll::dag_json(dag));
        CHECK(back == dag);
        CHECK(lll::dag_from_json(sys, lll::dag_json(WitnessDag())).size() == 0);

        CHECK_THROWS_AS(lll::dag_from_json(sys, "u-oh"), lll::ParseError);
        CHECK_THROWS_AS(
            lll::dag_from_json(sys, R"({"nodes": [{"id": 0, "event": 1}], "edges": [[0, 0]]})"),
            lll::InvalidModel);
        CHECK_THROWS_AS(
            lll::dag_from_json(
                sys, R"({"nodes": [{"id": 0, "event": 1}, {"id": 0, "event": 2}], "edges": []})"),
            lll::InvalidModel);
        CHECK_THROWS_AS(
            lll::dag_from_json(sys, R"({"nodes": [{"id": 0, "event": 7}], "edges": []})"),
            lll::InvalidModel);
    }

    TEST_CASE("canonical keys and compatibility match the sequence oracle") {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            lll::RandomModelOptions opt;
            opt.variables = 3;
            opt.events = 3;
            opt.max_scope = 2;
            EventSystem sys = lll::random_model(seed, opt);
            if (sys.event_count() == 0) continue;
            int len = 1 + static_cast<int>(seed % 5);
            std::vector<int> seq = random_sequence(sys, seed, len);
            WitnessDag dag = WitnessDag::from_label_sequence(sys, seq);
            CHECK(dag.canonical_key() == lll::testing::oracle_seq_key(sys, seq));
            CHECK_FALSE(lll::validate(sys, dag).has_value());

            lll::SeededTable table(sys, seed * 31 + 1, 16);
            CHECK(dag.compatible(sys, table) ==
                  lll::testing::oracle_seq_compatible(sys, seq, table));
            CHECK((!dag.collectible_targets(sys).empty()) ==
                  lll::testing::oracle_seq_collectible(sys, seq));
            CHECK(dag.weight(sys) == lll::testing::oracle_seq_weight(sys, seq));
        }
    }

    TEST_CASE("merge of table prefixes reproduces the sub-log relation") {
        EventSystem sys = wedge_model();
        std::vector<int> seq{2, 0, 1, 2, 0};
        WitnessDag whole = WitnessDag::from_label_sequence(sys, seq);
        for (int a = 0; a <= static_cast<int>(seq.size()); ++a) {
            std::vector<int> front(seq.begin(), seq.begin() + a);
            WitnessDag part = WitnessDag::from_label_sequence(sys, front);
            CHECK(lll::consistent(part, whole));
            CHECK(lll::merge(sys, part, whole) == whole);
        }
    }
}
