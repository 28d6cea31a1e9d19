#pragma once

#include <lll/engine.hpp>
#include <lll/witness_dag.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lll {

struct ExperimentSpec {
    const EventSystem* sys = nullptr;
    Rational eps{3, 10};      // declared slack, used for reference bounds
    int trials = 100;
    std::uint64_t base_seed = 0;
    bool timings = false;     // real runtimes in rows; off keeps bytes deterministic
    int threads = 1;          // <= 0: LLL_THREADS or hardware; never affects rows
    long long max_steps = 1 << 20;
    int max_rounds = 1 << 16;
    long long s_cap = 1 << 20;
    int cap_override = 0;     // wd_counts: node cap; 0 uses choose_cap
};

struct ExperimentRow {
    int trial = 0;
    std::uint64_t seed = 0;   // base_seed xor trial
    int n = 0;
    int m = 0;
    Rational eps;
    long long resamplings = 0;
    int rounds = 0;
    int mis_rounds = 0;
    long long gamma = -1;
    long long cwds = -1;
    int max_wd = 0;
    int retries = 0;
    bool flagged = false;     // cap overflow in this trial
    long long runtime_us = 0;
};

struct ExperimentOutput {
    std::vector<ExperimentRow> rows;                       // sorted by trial
    std::vector<std::pair<std::string, double>> summary;   // named figures
};

/// Sequential engine per trial; summary holds resampling quantiles 50/90/99
/// and the reference bounds W (when exact), n/eps, n + d*ln^2(n).
ExperimentOutput experiment_resamplings(const ExperimentSpec& spec);

/// Parallel engine per trial; summary holds round quantiles and the
/// reference bound 8*ln(n+2)/eps.
ExperimentOutput experiment_rounds(const ExperimentSpec& spec);

/// enumerate_wds per trial; summary holds mean |gamma| and CWD count, the
/// bounds W and w_prime_bound (when exact), and the size tail at r = 10
/// against e*n*r*(1+eps)^-r.
ExperimentOutput experiment_wd_counts(const ExperimentSpec& spec);

struct CompatEstimate {
    double frequency = 0.0;
    double stderr_est = 0.0;
    double exact = 0.0;   // w(G)
    long long trials = 0;
};

/// Monte Carlo frequency of dag.compatible over fresh seeded tables.
CompatEstimate experiment_compat_prob(const EventSystem& sys, const WitnessDag& dag,
                                      long long trials, std::uint64_t base_seed);

/// Header plus one line per row; byte-deterministic when timings are off.
std::string rows_csv(const std::vector<ExperimentRow>& rows);

std::string summary_text(const std::vector<std::pair<std::string, double>>& summary);

/// Nearest-rank percentile (q in [0,100]) of an unsorted sample.
double percentile(std::vector<double> values, double q);

/// Least-squares fit y ~ a + b*x; returns {a, b}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lll
