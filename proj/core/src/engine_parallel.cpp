#include <lll/engine_parallel.hpp>

#include <lll/mis.hpp>

#include <algorithm>
#include <chrono>

#include "cursor_state.hpp"

namespace lll {

RunResult run_parallel(const EventSystem& sys, const ResamplingTable& table, std::uint64_t seed,
                       int max_rounds) {
    if (max_rounds < 1) throw InvalidModel("max_rounds must be at least 1");
    auto start = std::chrono::steady_clock::now();

    RunResult out;
    out.stats.per_event.assign(static_cast<std::size_t>(sys.event_count()), 0);
    detail::CursorState state(sys, table);

    while (true) {
        std::vector<int> bad;
        for (int b = 0; b < sys.event_count(); ++b) {
            if (sys.evaluate_with(b, [&](int var) { return state.value(var); })) bad.push_back(b);
        }
        if (bad.empty()) break;
        if (out.stats.rounds >= max_rounds) {
            out.status = RunStatus::cap_exceeded;
            break;
        }
        out.stats.true_event_sum += static_cast<long long>(bad.size());

        UndirectedGraph conflicts(static_cast<int>(bad.size()));
        for (int i = 0; i < static_cast<int>(bad.size()); ++i) {
            for (int j = i + 1; j < static_cast<int>(bad.size()); ++j) {
                if (sys.dependent(bad[static_cast<std::size_t>(i)], bad[static_cast<std::size_t>(j)])) {
                    conflicts.add_edge(i, j);
                }
            }
        }
        std::uint64_t round_no = static_cast<std::uint64_t>(out.stats.rounds) + 1;
        MisResult mis = luby_mis(conflicts, seed ^ round_no);
        out.stats.mis_rounds += mis.rounds;
        ++out.stats.mis_invocations;

        // Selected events are pairwise independent, so their scopes are
        // disjoint and the union below has no duplicates.
        std::vector<int> vars;
        for (int idx : mis.selected) {
            const auto& scope = sys.event(bad[static_cast<std::size_t>(idx)]).scope;
            vars.insert(vars.end(), scope.begin(), scope.end());
        }
        std::sort(vars.begin(), vars.end());
        if (!state.can_advance(vars)) {
            out.status = RunStatus::cap_exceeded;
            break;
        }
        state.advance(vars);

        for (int idx : mis.selected) {
            int b = bad[static_cast<std::size_t>(idx)];
            out.log.events.push_back(b);
            ++out.stats.resamplings;
            ++out.stats.per_event[static_cast<std::size_t>(b)];
        }
        out.log.round_sizes.push_back(static_cast<int>(mis.selected.size()));
        ++out.stats.rounds;
        ++out.stats.steps;
    }

    out.assignment = state.assignment();
    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace lll
