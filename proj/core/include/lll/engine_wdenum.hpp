#pragma once

#include <lll/engine.hpp>
#include <lll/witness_dag.hpp>

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lll {

/// Node cap for the enumeration: ceil((c/eps) * ln(n/eps + 1)).
int choose_cap(int n, const Rational& epsilon, const Rational& c = Rational(8));

/// Growing family of collectible witness DAGs, deduplicated by canonical key.
/// Member order is insertion order and is deterministic.
class WdFamily {
public:
    int size() const { return static_cast<int>(members_.size()); }
    const WitnessDag& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
    const std::vector<WitnessDag>& members() const { return members_; }
    bool contains(const std::vector<std::int32_t>& key) const { return index_.count(key) > 0; }
    /// False when an equal member was already present.
    bool insert(WitnessDag dag);

    int generations = 0;  // last completed growth generation
    int max_size = 0;     // largest member's node count

private:
    std::vector<WitnessDag> members_;
    std::unordered_map<std::vector<std::int32_t>, int, CanonicalKeyHash> index_;
};

struct EnumerationResult {
    RunStatus status = RunStatus::ok;
    WdFamily family;         // F_K: every compatible collectible WD of <= cap nodes
    std::vector<int> gamma;  // indices of the single-sink members
};

/// Grow-and-merge enumeration: seed with the single-node DAGs of events true
/// on the initial assignment, then close under consistent collectible merges
/// and sink extensions whose new node reads a configuration making its label
/// true, never exceeding cap_nodes per member. Exceeding s_cap total members
/// reports cap_exceeded with the partial family.
EnumerationResult enumerate_wds(const EventSystem& sys, const ResamplingTable& table, int cap_nodes,
                                long long s_cap);

struct FinalizeResult {
    Assignment assignment;
    int mis_rounds = 0;
};

/// One MIS over the inconsistency graph of gamma, merge of the chosen
/// pairwise-consistent members into G, and the readout X*(i) = R(i, |G[i]|+1).
FinalizeResult final_configuration(const EventSystem& sys, const std::vector<WitnessDag>& gamma,
                                   const ResamplingTable& table, std::uint64_t seed);

struct WdEnumOptions {
    std::uint64_t seed = 0;
    Rational epsilon_hint{1, 4};
    Rational c{8};
    long long s_cap = 1 << 20;
    int cap_override = 0;    // > 0 replaces choose_cap
    int attempt_budget = 6;  // total enumerate+finalize attempts
};

/// Las Vegas wrapper: enumerate on a seeded table, finalize, verify; doubles
/// the node cap on the same table when verification fails, re-seeds after two
/// doublings. Status cap_exceeded when the attempt budget runs out.
RunResult run_wdenum(const EventSystem& sys, const WdEnumOptions& opt);

}  // namespace lll
