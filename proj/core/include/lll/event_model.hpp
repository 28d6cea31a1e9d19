#pragma once

#include <lll/errors.hpp>
#include <lll/rational.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lll {

struct DomainValue {
    int value = 0;     // small dense value id
    Rational prob;     // exact, in (0, 1]
};

/// Finite distribution of one variable. Probabilities sum to exactly 1.
struct VariableDomain {
    std::vector<DomainValue> values;

    bool has_value(int value) const;
    /// Index into values, or -1 when the id is not part of the domain.
    int index_of(int value) const;
    const Rational& prob_of(int value) const;  // InvalidModel if absent
};

/// Full assignment of every variable, indexed by 0-based variable id.
struct Assignment {
    std::vector<int> values;

    int operator[](int var) const { return values[static_cast<std::size_t>(var)]; }
    int size() const { return static_cast<int>(values.size()); }
    bool operator==(const Assignment&) const = default;
};

enum class EventKind { atomic, opaque };

/// Opaque predicates receive the values of the event's scope variables in
/// scope order, and nothing else, so they cannot read outside their scope.
using OpaquePredicate = std::function<bool(const std::vector<int>&)>;

struct BadEvent {
    EventKind kind = EventKind::atomic;
    std::vector<int> scope;                       // sorted 0-based variable ids, non-empty
    std::vector<std::pair<int, int>> assignment;  // atomic only: (var, value), sorted by var
    OpaquePredicate predicate;                    // opaque only
    Rational prob;                                // P(B) under the product distribution
};

/// Immutable variable/event model. Events whose probability is exactly 0 are
/// dropped at construction; event ids are positions after that drop.
class EventSystem {
public:
    int variable_count() const { return static_cast<int>(domains_.size()); }
    int event_count() const { return static_cast<int>(events_.size()); }

    const VariableDomain& domain(int var) const { return domains_[static_cast<std::size_t>(var)]; }
    const BadEvent& event(int b) const { return events_[static_cast<std::size_t>(b)]; }
    const Rational& event_prob(int b) const { return events_[static_cast<std::size_t>(b)].prob; }

    /// Dependency by shared variables. Every event depends on itself.
    bool dependent(int a, int b) const;
    /// Sorted inclusive neighborhood N(B) (contains b itself).
    const std::vector<int>& neighbors(int b) const { return neighbors_[static_cast<std::size_t>(b)]; }
    /// max |N(B)| over events; 0 for an event-free system.
    int max_degree() const;
    Rational max_prob() const;
    bool all_atomic() const;

    bool evaluate(int b, const Assignment& x) const;

    /// Evaluates event b against an arbitrary value source value_at(var)->int.
    template <typename Getter>
    bool evaluate_with(int b, Getter&& value_at) const {
        const BadEvent& ev = event(b);
        if (ev.kind == EventKind::atomic) {
            for (const auto& [var, val] : ev.assignment) {
                if (value_at(var) != val) return false;
            }
            return true;
        }
        std::vector<int> scoped;
        scoped.reserve(ev.scope.size());
        for (int var : ev.scope) scoped.push_back(value_at(var));
        return ev.predicate(scoped);
    }

    /// Ids of all events true under x, ascending.
    std::vector<int> true_events(const Assignment& x) const;

    /// Cumulative 64-bit sampling thresholds for a variable: entry j is the
    /// exclusive upper bound of value j's window in [0, 2^64). The last
    /// value's window is implicit.
    const std::vector<std::uint64_t>& sample_thresholds(int var) const {
        return thresholds_[static_cast<std::size_t>(var)];
    }
    /// Maps a uniform 64-bit word through the cumulative distribution.
    int sample_value(int var, std::uint64_t word) const;

private:
    friend class EventSystemBuilder;
    std::vector<VariableDomain> domains_;
    std::vector<BadEvent> events_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::vector<std::uint64_t>> thresholds_;
};

class EventSystemBuilder {
public:
    explicit EventSystemBuilder(int variable_count);

    EventSystemBuilder& set_domain(int var, std::vector<DomainValue> values);
    /// Gives every variable the uniform {0,1} domain.
    EventSystemBuilder& uniform_boolean();

    /// Conjunction of variable=value literals; probability is the product of
    /// the value probabilities. Duplicate variables are rejected.
    EventSystemBuilder& add_atomic(std::vector<std::pair<int, int>> assignment);
    /// Author-supplied predicate over a scope, with its probability declared
    /// (to be validated by Monte Carlo in the harness, not recomputed here).
    EventSystemBuilder& add_opaque(std::vector<int> scope, OpaquePredicate predicate, Rational prob);

    /// Validates everything and finalizes; zero-probability events are dropped.
    EventSystem build();

private:
    int n_;
    std::vector<VariableDomain> domains_;
    std::vector<bool> domain_set_;
    std::vector<BadEvent> events_;
};

/// DIMACS CNF. Variables become uniform Booleans (0=false, 1=true); each
/// clause becomes the atomic event "every literal false". Tautological
/// clauses can never be false and are dropped; an empty clause is a
/// ParseError since no assignment can avoid it.
EventSystem parse_dimacs(std::string_view text);

/// Native JSON model: variables with exact "num/den" value probabilities and
/// atomic events, 1-based ids on the wire.
EventSystem parse_native(std::string_view json_text);

/// Inverse of parse_native. InvalidModel if the system has opaque events.
std::string serialize_native(const EventSystem& sys);

}  // namespace lll
