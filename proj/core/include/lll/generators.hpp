#pragma once

#include <lll/event_model.hpp>

#include <cstdint>

namespace lll {

/// Two uniform Booleans with B1 = {X1=0, X2=0} and B2 = {X2=1}.
EventSystem tiny_a();

/// tiny_a over probabilities (h/q, (q-h)/q) with h = (q-1)/2, for an odd
/// prime q, so the deterministic engine's field can host it.
EventSystem tiny_a_qadic(std::uint64_t q);

struct RandomModelOptions {
    int variables = 4;
    int events = 4;
    int max_scope = 3;
    bool uniform = true;  // false: random two-valued domains with denominators <= max_den
    int max_den = 6;
};

/// Random atomic-event model for oracle comparisons; not criterion-checked.
EventSystem random_model(std::uint64_t seed, const RandomModelOptions& opt);

struct PairFamilyOptions {
    int variables = 50;    // 5 consumed per clause pair; the remainder stay eventless
    std::uint64_t q = 0;   // 0: uniform Booleans; odd prime: near-half q-adic probs
};

/// 3-SAT built from clause pairs on disjoint 5-variable blocks, the two
/// clauses of a pair sharing exactly one variable. Every clause then has at
/// most one dependent neighbor besides itself, so max |N(B)| = 2 and the
/// symmetric criterion holds with slack beyond 3/10.
EventSystem three_sat_pairs(std::uint64_t seed, const PairFamilyOptions& opt);

}  // namespace lll
