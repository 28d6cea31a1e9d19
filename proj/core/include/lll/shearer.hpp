#pragma once

#include <lll/event_model.hpp>
#include <lll/rational.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lll {

/// Hard cap on event count for the exact subset-enumeration routines below;
/// they are exponential in m by nature and guarded by CapExceeded.
inline constexpr int kDefaultEventCap = 20;

/// Alternating independent-set sum
///   Q(I, p) = sum over independent J with I <= J <= events of
///             (-1)^{|J|-|I|} * prod_{B in J} p(B),
/// computed exactly. Returns 0 when I itself is not independent.
/// I is a list of distinct event ids; p supplies one probability per event.
Rational q_polynomial(const EventSystem& sys, const std::vector<Rational>& p,
                      const std::vector<int>& I, int cap = kDefaultEventCap);

/// True iff Q(empty, scale*P) > 0 and Q(I, scale*P) >= 0 for every
/// independent I. Monotone: false at some scale stays false at larger scales.
bool check_shearer(const EventSystem& sys, const Rational& scale, int cap = kDefaultEventCap);

/// mu(B) = Q({B}, P) / Q(empty, P) for every event.
/// CriterionUnsatisfied when Q(empty, P) <= 0.
std::vector<Rational> measure_vector(const EventSystem& sys, int cap = kDefaultEventCap);

struct WorkParams {
    Rational W;              // sum of mu(B)
    Rational w_prime_bound;  // sum of mu(B)/P(B), upper bound on the CWD weight W'
};

/// Requires the criterion to hold at scale 1.
WorkParams work_params(const EventSystem& sys, int cap = kDefaultEventCap);

/// Largest eps (within tol) such that the criterion holds for (1+eps)*P.
/// nullopt means unbounded (no events). CriterionUnsatisfied when even
/// eps = 0 fails.
std::optional<Rational> max_slack(const EventSystem& sys, const Rational& tol = Rational(1, 1000),
                                  int cap = kDefaultEventCap);

/// Symmetric criterion with slack: e_bound * p * d * (1+eps) <= 1, where
/// p = max event probability and d = max |N(B)|.
bool check_symmetric(const EventSystem& sys, const Rational& eps,
                     const Rational& e_bound = euler_upper_bound());

/// Power-form symmetric criterion e * p * d^{1+eps} <= 1, checked exactly for
/// rational eps = a/b as (e_bound * p * d)^b * d^a <= 1.
bool check_symmetric_power(const EventSystem& sys, const Rational& eps,
                           const Rational& e_bound = euler_upper_bound());

/// Asymmetric criterion: (1+eps) * P(B) <= x(B) * prod_{A ~ B, A != B} (1 - x(A))
/// for every event, with x(B) in (0,1).
bool check_asymmetric(const EventSystem& sys, const std::vector<Rational>& x, const Rational& eps);

/// Cluster-expansion criterion:
///   mu_tilde(B) >= (1+eps) * P(B) * sum over independent I <= N(B) of
///                  prod_{A in I} mu_tilde(A).
bool check_cluster_expansion(const EventSystem& sys, const std::vector<Rational>& mu_tilde,
                             const Rational& eps, int cap = kDefaultEventCap);

struct ShearerReport {
    int variable_count = 0;
    int event_count = 0;
    /// Exact Q-based fields are only populated when m <= cap.
    bool exact = false;
    bool shearer_satisfied = false;       // at the requested scale; meaningful when exact
    bool satisfied_at_one = false;        // criterion at scale 1; gates mu/W fields
    Rational q_empty;
    std::vector<Rational> mu;
    Rational W;
    Rational w_prime_bound;
    bool slack_unbounded = false;
    std::optional<Rational> slack;        // set when exact && satisfied_at_one && !unbounded
    bool symmetric_satisfied = false;
    std::optional<bool> asymmetric_satisfied;
    std::optional<bool> cluster_satisfied;
};

struct ReportOptions {
    Rational scale{1};
    Rational eps{0};
    Rational slack_tol{1, 1000};
    int cap = kDefaultEventCap;
    std::optional<std::vector<Rational>> x;         // enables the asymmetric check
    std::optional<std::vector<Rational>> mu_tilde;  // enables the cluster-expansion check
};

ShearerReport shearer_report(const EventSystem& sys, const ReportOptions& opts = {});

/// Report as JSON with "num/den" strings; unset optionals become null and an
/// unbounded slack becomes the string "unbounded".
std::string report_json(const ShearerReport& report);

}  // namespace lll
