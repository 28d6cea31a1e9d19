#pragma once

#include <lll/engine.hpp>

#include <cstdint>

namespace lll {

/// Algorithm 1 over a resampling table: while some event is true, pick one by
/// the selection rule and advance every variable in its scope to the next
/// table column. `rule_seed` only feeds SelectionRule::random_true.
/// Hitting max_steps or the table's column cap yields status cap_exceeded
/// with the partial log and the last consistent assignment.
RunResult run_sequential(const EventSystem& sys, const ResamplingTable& table, SelectionRule rule,
                         long long max_steps, std::uint64_t rule_seed = 0);

/// Replays a log through the cursor semantics without evaluating any events;
/// returns the resulting assignment (used to check log determinism).
Assignment replay_log(const EventSystem& sys, const ResamplingTable& table,
                      const std::vector<int>& events);

}  // namespace lll
