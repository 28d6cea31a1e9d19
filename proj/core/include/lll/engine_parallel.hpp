#pragma once

#include <lll/engine.hpp>

#include <cstdint>

namespace lll {

/// Algorithm 2 with synchronous rounds: each round builds the conflict graph
/// on currently-true events (edge iff dependent), takes luby_mis(seed ^ round)
/// of it, and advances every variable under the selected events together.
/// The log lists selected events in ascending id within each round and the
/// per-round counts in round_sizes.
RunResult run_parallel(const EventSystem& sys, const ResamplingTable& table, std::uint64_t seed,
                       int max_rounds);

}  // namespace lll
