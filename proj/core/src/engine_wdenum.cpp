#include <lll/engine_wdenum.hpp>

#include <lll/mis.hpp>
#include <lll/prf.hpp>

#include <chrono>
#include <cmath>
#include <deque>
#include <map>

namespace lll {

int choose_cap(int n, const Rational& epsilon, const Rational& c) {
    if (epsilon <= 0 || epsilon >= 1) throw InvalidModel("epsilon must lie in (0,1)");
    if (c <= 0) throw InvalidModel("cap constant must be positive");
    double eps = rational_double(epsilon);
    double value = rational_double(c) / eps * std::log(static_cast<double>(n) / eps + 1.0);
    return static_cast<int>(std::ceil(value));
}

bool WdFamily::insert(WitnessDag dag) {
    auto key = dag.canonical_key();
    auto [it, fresh] = index_.emplace(std::move(key), size());
    if (!fresh) return false;
    if (dag.size() > max_size) max_size = dag.size();
    members_.push_back(std::move(dag));
    return true;
}

namespace {

bool sink_reads_true(const EventSystem& sys, const WitnessDag& dag, int sink,
                     const ResamplingTable& table) {
    auto config = dag.node_configuration(sys, sink, table);
    std::size_t at = 0;
    return sys.evaluate_with(dag.node(sink).event, [&](int var) {
        while (config[at].first != var) ++at;  // scope order matches config order
        return config[at].second;
    });
}

}  // namespace

EnumerationResult enumerate_wds(const EventSystem& sys, const ResamplingTable& table, int cap_nodes,
                                long long s_cap) {
    if (cap_nodes < 1) throw InvalidModel("node cap must be at least 1");
    if (s_cap < 1) throw InvalidModel("s_cap must be at least 1");

    EnumerationResult out;
    // Results parked until the generation matching their node count; sizes
    // above cap_nodes are discarded outright.
    std::map<int, std::deque<WitnessDag>> parked;
    long long parked_count = 0;

    Assignment initial = table.initial_assignment();
    for (int b : sys.true_events(initial)) {
        parked[1].push_back(WitnessDag::from_label_sequence(sys, {b}));
        ++parked_count;
    }

    std::deque<int> work;  // member indices not yet pair/extension processed
    auto offer = [&](WitnessDag dag, int generation) {
        int s = dag.size();
        if (s > cap_nodes) return;
        if (out.family.contains(dag.canonical_key())) return;
        if (s <= generation) {
            if (out.family.insert(std::move(dag))) work.push_back(out.family.size() - 1);
        } else {
            parked[s].push_back(std::move(dag));
            ++parked_count;
        }
    };

    for (int k = 1; k <= cap_nodes; ++k) {
        out.family.generations = k;
        if (auto it = parked.find(k); it != parked.end()) {
            for (WitnessDag& dag : it->second) {
                --parked_count;
                if (out.family.insert(std::move(dag))) work.push_back(out.family.size() - 1);
            }
            parked.erase(it);
        }
        if (work.empty() && parked_count == 0) break;  // family is a fixpoint

        while (!work.empty()) {
            if (out.family.size() + parked_count > s_cap) {
                out.status = RunStatus::cap_exceeded;
                return out;
            }
            int i = work.front();
            work.pop_front();
            for (int j = 0; j < out.family.size(); ++j) {
                if (j == i) continue;  // self-merge is an identity
                const WitnessDag& a = out.family.member(i);
                const WitnessDag& b = out.family.member(j);
                if (!consistent(a, b)) continue;
                WitnessDag merged = merge(sys, a, b);
                if (merged.size() > cap_nodes) continue;
                if (merged.collectible_targets(sys).empty()) continue;
                offer(std::move(merged), k);
            }
            for (int target : out.family.member(i).collectible_targets(sys)) {
                WitnessDag grown = extend_with_sink(sys, out.family.member(i), target);
                if (grown.size() > cap_nodes) continue;
                int sink = grown.sinks().front();
                if (!sink_reads_true(sys, grown, sink, table)) continue;
                offer(std::move(grown), k);
            }
            if (out.family.size() + parked_count > s_cap) {
                out.status = RunStatus::cap_exceeded;
                return out;
            }
        }
    }

    for (int i = 0; i < out.family.size(); ++i) {
        if (out.family.member(i).sinks().size() == 1) out.gamma.push_back(i);
    }
    return out;
}

FinalizeResult final_configuration(const EventSystem& sys, const std::vector<WitnessDag>& gamma,
                                   const ResamplingTable& table, std::uint64_t seed) {
    UndirectedGraph inconsistency(static_cast<int>(gamma.size()));
    for (int i = 0; i < static_cast<int>(gamma.size()); ++i) {
        for (int j = i + 1; j < static_cast<int>(gamma.size()); ++j) {
            if (!consistent(gamma[static_cast<std::size_t>(i)], gamma[static_cast<std::size_t>(j)])) {
                inconsistency.add_edge(i, j);
            }
        }
    }
    MisResult mis = luby_mis(inconsistency, seed);

    WitnessDag combined;
    for (int idx : mis.selected) {
        combined = merge(sys, combined, gamma[static_cast<std::size_t>(idx)]);
    }

    FinalizeResult out;
    out.mis_rounds = mis.rounds;
    out.assignment.values.reserve(static_cast<std::size_t>(sys.variable_count()));
    for (int i = 0; i < sys.variable_count(); ++i) {
        out.assignment.values.push_back(table.cell(i, combined.path_length(i) + 1));
    }
    return out;
}

RunResult run_wdenum(const EventSystem& sys, const WdEnumOptions& opt) {
    if (opt.attempt_budget < 1) throw InvalidModel("attempt budget must be at least 1");
    auto start = std::chrono::steady_clock::now();

    RunResult out;
    out.stats.per_event.assign(static_cast<std::size_t>(sys.event_count()), 0);
    out.status = RunStatus::cap_exceeded;

    int base_cap = opt.cap_override > 0 ? opt.cap_override
                                        : choose_cap(sys.variable_count(), opt.epsilon_hint, opt.c);
    std::uint64_t seed = opt.seed;
    int cap = base_cap;
    int doublings = 0;

    for (int attempt = 0; attempt < opt.attempt_budget; ++attempt) {
        out.stats.retries = attempt;
        SeededTable table(sys, seed, cap + 2);
        EnumerationResult enumerated = enumerate_wds(sys, table, cap, opt.s_cap);
        bool verified = false;
        if (enumerated.status == RunStatus::ok) {
            std::vector<WitnessDag> gamma;
            gamma.reserve(enumerated.gamma.size());
            for (int idx : enumerated.gamma) gamma.push_back(enumerated.family.member(idx));
            FinalizeResult fin = final_configuration(sys, gamma, table, seed);
            verified = sys.true_events(fin.assignment).empty();
            if (verified) {
                out.status = RunStatus::ok;
                out.assignment = fin.assignment;
                out.stats.gamma_size = static_cast<long long>(gamma.size());
                out.stats.cwd_count = enumerated.family.size();
                out.stats.max_wd_size = enumerated.family.max_size;
                out.stats.steps = enumerated.family.generations;
                out.stats.mis_rounds = fin.mis_rounds;
                out.stats.mis_invocations = 1;
                out.stats.cap_K = cap;
                break;
            }
        }
        // Too small a cap (unverified) doubles it on the same table; a
        // blown s_cap or exhausted doublings moves to a fresh seed.
        if (enumerated.status == RunStatus::ok && doublings < 2) {
            cap *= 2;
            ++doublings;
        } else {
            seed = prf2(seed, 0x9e3779b97f4a7c15ull);
            cap = base_cap;
            doublings = 0;
        }
    }

    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace lll
