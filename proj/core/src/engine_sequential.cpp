#include <lll/engine_sequential.hpp>

#include <lll/prf.hpp>

#include <nlohmann/json.hpp>

#include <chrono>

#include "cursor_state.hpp"

namespace lll {

using detail::CursorState;

RunResult run_sequential(const EventSystem& sys, const ResamplingTable& table, SelectionRule rule,
                         long long max_steps, std::uint64_t rule_seed) {
    if (max_steps < 1) throw InvalidModel("max_steps must be at least 1");
    auto start = std::chrono::steady_clock::now();

    RunResult out;
    out.stats.per_event.assign(static_cast<std::size_t>(sys.event_count()), 0);
    CursorState state(sys, table);

    while (true) {
        std::vector<int> bad;
        for (int b = 0; b < sys.event_count(); ++b) {
            if (sys.evaluate_with(b, [&](int var) { return state.value(var); })) bad.push_back(b);
        }
        if (bad.empty()) break;
        if (out.stats.steps >= max_steps) {
            out.status = RunStatus::cap_exceeded;
            break;
        }

        int pick = bad.front();
        switch (rule) {
            case SelectionRule::first_true:
                break;
            case SelectionRule::lowest_variable: {
                int best_var = sys.event(pick).scope.front();
                for (int b : bad) {
                    int v = sys.event(b).scope.front();
                    if (v < best_var) {
                        best_var = v;
                        pick = b;
                    }
                }
                break;
            }
            case SelectionRule::random_true: {
                std::uint64_t word = prf3(rule_seed, static_cast<std::uint64_t>(out.stats.steps),
                                          static_cast<std::uint64_t>(bad.size()));
                pick = bad[static_cast<std::size_t>(word % bad.size())];
                break;
            }
        }

        if (!state.can_advance(sys.event(pick).scope)) {
            out.status = RunStatus::cap_exceeded;
            break;
        }
        state.advance(sys.event(pick).scope);
        out.log.events.push_back(pick);
        ++out.stats.steps;
        ++out.stats.resamplings;
        ++out.stats.per_event[static_cast<std::size_t>(pick)];
    }

    out.assignment = state.assignment();
    out.stats.max_wd_size = 0;
    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Assignment replay_log(const EventSystem& sys, const ResamplingTable& table,
                      const std::vector<int>& events) {
    CursorState state(sys, table);
    for (int b : events) {
        if (b < 0 || b >= sys.event_count()) throw InvalidModel("log event id out of range");
        state.advance(sys.event(b).scope);
    }
    return state.assignment();
}

std::string log_json(const ExecutionLog& log) {
    nlohmann::json ids = nlohmann::json::array();
    for (int b : log.events) ids.push_back(b + 1);
    return ids.dump();
}

}  // namespace lll
