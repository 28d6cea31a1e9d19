#pragma once

#include <lll/event_model.hpp>
#include <lll/resampling_table.hpp>

#include <string>
#include <vector>

namespace lll {

enum class RunStatus { ok, cap_exceeded };

enum class SelectionRule { first_true, lowest_variable, random_true };

/// Resampled event ids in execution order. Parallel runs also record how many
/// entries each round contributed (consecutive slices of `events`).
struct ExecutionLog {
    std::vector<int> events;
    std::vector<int> round_sizes;
};

struct EngineStats {
    long long resamplings = 0;          // total events resampled
    std::vector<long long> per_event;   // per event id; sums to resamplings
    long long steps = 0;                // selection steps (rounds for parallel)
    double wall_seconds = 0.0;

    int rounds = 0;                     // parallel engine
    long long true_event_sum = 0;       // sum of per-round true-event counts

    long long gamma_size = -1;          // WD-enumeration engine; -1 means n/a
    long long cwd_count = -1;
    int max_wd_size = 0;
    int mis_rounds = 0;
    int mis_invocations = 0;
    int retries = 0;
    int cap_K = 0;                      // final node cap used
};

struct RunResult {
    RunStatus status = RunStatus::ok;
    Assignment assignment;   // avoids all events when status == ok
    ExecutionLog log;
    EngineStats stats;
};

/// JSON list of event ids (1-based on the wire).
std::string log_json(const ExecutionLog& log);

}  // namespace lll
