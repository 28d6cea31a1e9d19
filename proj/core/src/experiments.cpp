#include <lll/experiments.hpp>

#include <lll/engine_parallel.hpp>
#include <lll/engine_sequential.hpp>
#include <lll/engine_wdenum.hpp>
#include <lll/shearer.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <thread>

namespace lll {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LLL_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void check_spec(const ExperimentSpec& spec) {
    if (spec.sys == nullptr) throw InvalidModel("experiment needs a model");
    if (spec.trials < 1) throw InvalidModel("trials must be at least 1");
}

/// Runs one_trial(trial) for every trial, possibly on several workers; rows
/// land in trial order regardless of scheduling.
std::vector<ExperimentRow> run_trials(const ExperimentSpec& spec,
                                      const std::function<ExperimentRow(int)>& one_trial) {
    std::vector<ExperimentRow> rows(static_cast<std::size_t>(spec.trials));
    int threads = std::min(resolve_threads(spec.threads), spec.trials);
    if (threads <= 1) {
        for (int t = 0; t < spec.trials; ++t) rows[static_cast<std::size_t>(t)] = one_trial(t);
        return rows;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (int t = w; t < spec.trials; t += threads) {
                rows[static_cast<std::size_t>(t)] = one_trial(t);
            }
        });
    }
    for (std::thread& th : pool) th.join();
    return rows;
}

ExperimentRow base_row(const ExperimentSpec& spec, int trial) {
    ExperimentRow row;
    row.trial = trial;
    row.seed = spec.base_seed ^ static_cast<std::uint64_t>(trial);
    row.n = spec.sys->variable_count();
    row.m = spec.sys->event_count();
    row.eps = spec.eps;
    return row;
}

long long to_micros(double seconds) {
    return static_cast<long long>(seconds * 1e6);
}

void push_quantiles(std::vector<std::pair<std::string, double>>& summary, const char* what,
                    const std::vector<double>& values) {
    summary.emplace_back(std::string(what) + "_p50", percentile(values, 50));
    summary.emplace_back(std::string(what) + "_p90", percentile(values, 90));
    summary.emplace_back(std::string(what) + "_p99", percentile(values, 99));
}

double mean_of(const std::vector<double>& values) {
    double sum = 0;
    for (double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

ExperimentOutput experiment_resamplings(const ExperimentSpec& spec) {
    check_spec(spec);
    const EventSystem& sys = *spec.sys;
    int columns = default_column_cap(sys.variable_count(), spec.eps);

    ExperimentOutput out;
    out.rows = run_trials(spec, [&](int trial) {
        ExperimentRow row = base_row(spec, trial);
        SeededTable table(sys, row.seed, columns);
        RunResult run = run_sequential(sys, table, SelectionRule::first_true, spec.max_steps);
        row.resamplings = run.stats.resamplings;
        row.flagged = run.status != RunStatus::ok;
        if (spec.timings) row.runtime_us = to_micros(run.stats.wall_seconds);
        return row;
    });

    std::vector<double> totals;
    totals.reserve(out.rows.size());
    for (const ExperimentRow& row : out.rows) totals.push_back(static_cast<double>(row.resamplings));
    push_quantiles(out.summary, "resamplings", totals);
    out.summary.emplace_back("mean", mean_of(totals));

    double n = sys.variable_count();
    double eps = rational_double(spec.eps);
    if (sys.event_count() <= kDefaultEventCap && check_shearer(sys, 1)) {
        out.summary.emplace_back("bound_W", rational_double(work_params(sys).W));
    }
    out.summary.emplace_back("bound_n_over_eps", n / eps);
    double lnn = std::log(n + 2.0);
    out.summary.emplace_back("bound_n_plus_d_ln2",
                             n + static_cast<double>(sys.max_degree()) * lnn * lnn);
    return out;
}

ExperimentOutput experiment_rounds(const ExperimentSpec& spec) {
    check_spec(spec);
    const EventSystem& sys = *spec.sys;
    int columns = default_column_cap(sys.variable_count(), spec.eps);

    ExperimentOutput out;
    out.rows = run_trials(spec, [&](int trial) {
        ExperimentRow row = base_row(spec, trial);
        SeededTable table(sys, row.seed, columns);
        RunResult run = run_parallel(sys, table, row.seed, spec.max_rounds);
        row.resamplings = run.stats.resamplings;
        row.rounds = run.stats.rounds;
        row.mis_rounds = run.stats.mis_rounds;
        row.flagged = run.status != RunStatus::ok;
        if (spec.timings) row.runtime_us = to_micros(run.stats.wall_seconds);
        return row;
    });

    std::vector<double> rounds;
    rounds.reserve(out.rows.size());
    for (const ExperimentRow& row : out.rows) rounds.push_back(static_cast<double>(row.rounds));
    push_quantiles(out.summary, "rounds", rounds);
    out.summary.emplace_back("mean", mean_of(rounds));
    double n = sys.variable_count();
    out.summary.emplace_back("bound_8ln_over_eps",
                             8.0 * std::log(n + 2.0) / rational_double(spec.eps));
    return out;
}

ExperimentOutput experiment_wd_counts(const ExperimentSpec& spec) {
    check_spec(spec);
    const EventSystem& sys = *spec.sys;
    int cap = spec.cap_override > 0 ? spec.cap_override
                                    : choose_cap(sys.variable_count(), spec.eps);

    ExperimentOutput out;
    out.rows = run_trials(spec, [&](int trial) {
        ExperimentRow row = base_row(spec, trial);
        SeededTable table(sys, row.seed, cap + 2);
        EnumerationResult enumerated = enumerate_wds(sys, table, cap, spec.s_cap);
        row.gamma = static_cast<long long>(enumerated.gamma.size());
        row.cwds = enumerated.family.size();
        row.max_wd = enumerated.family.max_size;
        row.flagged = enumerated.status != RunStatus::ok;
        return row;
    });

    std::vector<double> gammas, cwds, tails;
    gammas.reserve(out.rows.size());
    cwds.reserve(out.rows.size());
    const int tail_r = 10;
    for (const ExperimentRow& row : out.rows) {
        gammas.push_back(static_cast<double>(row.gamma));
        cwds.push_back(static_cast<double>(row.cwds));
        tails.push_back(row.max_wd > tail_r ? 1.0 : 0.0);
    }
    out.summary.emplace_back("gamma_mean", mean_of(gammas));
    out.summary.emplace_back("cwds_mean", mean_of(cwds));
    out.summary.emplace_back("tail_frac_r10", mean_of(tails));
    if (sys.event_count() <= kDefaultEventCap && check_shearer(sys, 1)) {
        WorkParams wp = work_params(sys);
        out.summary.emplace_back("bound_W", rational_double(wp.W));
        out.summary.emplace_back("bound_w_prime", rational_double(wp.w_prime_bound));
    }
    double eps = rational_double(spec.eps);
    out.summary.emplace_back("bound_tail_r10",
                             std::exp(1.0) * static_cast<double>(sys.variable_count()) * tail_r *
                                 std::pow(1.0 + eps, -tail_r));
    return out;
}

CompatEstimate experiment_compat_prob(const EventSystem& sys, const WitnessDag& dag,
                                      long long trials, std::uint64_t base_seed) {
    if (trials < 1) throw InvalidModel("trials must be at least 1");
    int columns = std::max(2, dag.size() + 1);
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) {
        SeededTable table(sys, base_seed ^ static_cast<std::uint64_t>(t), columns);
        if (dag.compatible(sys, table)) ++hits;
    }
    CompatEstimate est;
    est.trials = trials;
    est.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    est.stderr_est =
        std::sqrt(est.frequency * (1.0 - est.frequency) / static_cast<double>(trials));
    est.exact = rational_double(dag.weight(sys));
    return est;
}

std::string rows_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream csv;
    csv << "trial,seed,n,m,eps,resamplings,rounds,mis_rounds,gamma,cwds,max_wd,retries,flagged,"
           "runtime_us\n";
    for (const ExperimentRow& row : rows) {
        csv << row.trial << ',' << row.seed << ',' << row.n << ',' << row.m << ','
            << rational_str(row.eps) << ',' << row.resamplings << ',' << row.rounds << ','
            << row.mis_rounds << ',' << row.gamma << ',' << row.cwds << ',' << row.max_wd << ','
            << row.retries << ',' << (row.flagged ? 1 : 0) << ',' << row.runtime_us << '\n';
    }
    return csv.str();
}

std::string summary_text(const std::vector<std::pair<std::string, double>>& summary) {
    std::ostringstream text;
    for (const auto& [name, value] : summary) text << name << " = " << value << '\n';
    return text.str();
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidModel("percentile of an empty sample");
    if (q < 0 || q > 100) throw InvalidModel("percentile rank out of range");
    std::sort(values.begin(), values.end());
    if (q == 0) return values.front();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(q / 100.0 * static_cast<double>(values.size())));
    return values[rank - 1];
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidModel("fit needs matched samples");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw InvalidModel("fit is degenerate");
    double b = (n * sxy - sx * sy) / denom;
    double a = (sy - b * sx) / n;
    return {a, b};
}

}  // namespace lll
