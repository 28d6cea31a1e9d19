#include <lll/shearer.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace lll {

namespace {

/// Memoized evaluator for the alternating independent-set sums
///   q(T) = sum over independent J <= T of (-1)^{|J|} prod p,
/// via q(T) = q(T \ {v}) - p(v) * q(T \ N[v]) on event-subset bitmasks.
class QEvaluator {
public:
    QEvaluator(const EventSystem& sys, std::vector<Rational> p, int cap) : p_(std::move(p)) {
        int m = sys.event_count();
        if (m > cap) {
            throw CapExceeded("event count " + std::to_string(m) + " exceeds exact-enumeration cap " +
                              std::to_string(cap));
        }
        if (m > 62) throw CapExceeded("exact enumeration supports at most 62 events");
        if (static_cast<int>(p_.size()) != m) throw InvalidModel("probability vector size mismatch");
        neighbor_mask_.resize(static_cast<std::size_t>(m), 0);
        for (int b = 0; b < m; ++b) {
            for (int a : sys.neighbors(b)) neighbor_mask_[static_cast<std::size_t>(b)] |= bit(a);
        }
        full_ = m == 0 ? 0 : (std::uint64_t(1) << m) - 1;
        memo_.emplace(0, Rational(1));
    }

    static std::uint64_t bit(int b) { return std::uint64_t(1) << b; }
    std::uint64_t full_mask() const { return full_; }
    std::uint64_t neighborhood(int b) const { return neighbor_mask_[static_cast<std::size_t>(b)]; }

    const Rational& q_subset(std::uint64_t mask) {
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        int v = std::countr_zero(mask);
        Rational val = q_subset(mask & ~bit(v)) -
                       p_[static_cast<std::size_t>(v)] * q_subset(mask & ~neighborhood(v));
        return memo_.emplace(mask, std::move(val)).first->second;
    }

    bool independent(std::uint64_t mask) const {
        std::uint64_t rest = mask;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            if (neighborhood(v) & mask & ~bit(v)) return false;
        }
        return true;
    }

    const Rational& p(int b) const { return p_[static_cast<std::size_t>(b)]; }

private:
    std::vector<Rational> p_;
    std::vector<std::uint64_t> neighbor_mask_;
    std::uint64_t full_ = 0;
    std::unordered_map<std::uint64_t, Rational> memo_;
};

std::vector<Rational> scaled_probs(const EventSystem& sys, const Rational& scale) {
    std::vector<Rational> p;
    p.reserve(static_cast<std::size_t>(sys.event_count()));
    for (int b = 0; b < sys.event_count(); ++b) p.push_back(scale * sys.event_prob(b));
    return p;
}

/// All Q(I) >= 0 for non-empty independent I, via sign of q(full \ N[I]).
bool nonneg_on_independents(QEvaluator& ev, std::uint64_t rem, int min_next) {
    for (int v = min_next; ; ++v) {
        std::uint64_t candidates = rem >> v;
        if (!candidates) return true;
        v += std::countr_zero(candidates);
        std::uint64_t next_rem = rem & ~ev.neighborhood(v);
        if (ev.q_subset(next_rem) < 0) return false;
        if (!nonneg_on_independents(ev, next_rem, v + 1)) return false;
    }
}

bool shearer_holds(QEvaluator& ev) {
    if (ev.q_subset(ev.full_mask()) <= 0) return false;
    return nonneg_on_independents(ev, ev.full_mask(), 0);
}

}  // namespace

Rational q_polynomial(const EventSystem& sys, const std::vector<Rational>& p,
                      const std::vector<int>& I, int cap) {
    for (const Rational& pb : p) {
        if (pb < 0 || pb > 1) throw InvalidModel("q_polynomial probabilities must lie in [0,1]");
    }
    QEvaluator ev(sys, p, cap);
    std::uint64_t imask = 0;
    Rational prefix = 1;
    for (int b : I) {
        if (b < 0 || b >= sys.event_count()) throw InvalidModel("event id out of range in I");
        if (imask & QEvaluator::bit(b)) throw InvalidModel("duplicate event id in I");
        imask |= QEvaluator::bit(b);
        prefix *= ev.p(b);
    }
    if (!ev.independent(imask)) return 0;
    std::uint64_t rem = ev.full_mask();
    for (int b : I) rem &= ~ev.neighborhood(b);
    return prefix * ev.q_subset(rem);
}

bool check_shearer(const EventSystem& sys, const Rational& scale, int cap) {
    if (scale <= 0) throw InvalidModel("scale must be positive");
    std::vector<Rational> p = scaled_probs(sys, scale);
    // A scaled probability above 1 can never satisfy the criterion
    // (monotonicity + failure at probability exactly 1).
    for (const Rational& pb : p) {
        if (pb > 1) return false;
    }
    QEvaluator ev(sys, std::move(p), cap);
    return shearer_holds(ev);
}

std::vector<Rational> measure_vector(const EventSystem& sys, int cap) {
    QEvaluator ev(sys, scaled_probs(sys, 1), cap);
    Rational q_empty = ev.q_subset(ev.full_mask());
    if (q_empty <= 0) throw CriterionUnsatisfied("Q(empty) <= 0: measure undefined");
    std::vector<Rational> mu;
    mu.reserve(static_cast<std::size_t>(sys.event_count()));
    for (int b = 0; b < sys.event_count(); ++b) {
        mu.push_back(ev.p(b) * ev.q_subset(ev.full_mask() & ~ev.neighborhood(b)) / q_empty);
    }
    return mu;
}

WorkParams work_params(const EventSystem& sys, int cap) {
    if (!check_shearer(sys, 1, cap)) {
        throw CriterionUnsatisfied("work parameters require the criterion at scale 1");
    }
    WorkParams out{Rational(0), Rational(0)};
    std::vector<Rational> mu = measure_vector(sys, cap);
    for (int b = 0; b < sys.event_count(); ++b) {
        out.W += mu[static_cast<std::size_t>(b)];
        out.w_prime_bound += mu[static_cast<std::size_t>(b)] / sys.event_prob(b);
    }
    return out;
}

std::optional<Rational> max_slack(const EventSystem& sys, const Rational& tol, int cap) {
    if (tol <= 0) throw InvalidModel("tolerance must be positive");
    if (sys.event_count() == 0) return std::nullopt;
    if (!check_shearer(sys, 1, cap)) {
        throw CriterionUnsatisfied("max_slack requires the criterion at scale 1");
    }
    Rational lo = 1;
    Rational hi = Rational(1) / sys.max_prob();  // max probability reaches 1: always unsatisfied
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (check_shearer(sys, mid, cap)) lo = mid; else hi = mid;
    }
    return lo - 1;
}

bool check_symmetric(const EventSystem& sys, const Rational& eps, const Rational& e_bound) {
    if (sys.event_count() == 0) return true;
    return e_bound * sys.max_prob() * sys.max_degree() * (1 + eps) <= 1;
}

bool check_symmetric_power(const EventSystem& sys, const Rational& eps, const Rational& e_bound) {
    if (eps < 0) throw InvalidModel("slack must be nonnegative");
    if (sys.event_count() == 0) return true;
    unsigned long a = static_cast<unsigned long>(eps.get_num().get_ui());
    unsigned long b = static_cast<unsigned long>(eps.get_den().get_ui());
    Rational d(sys.max_degree());
    Rational base = e_bound * sys.max_prob() * d;
    return rational_pow(base, b) * rational_pow(d, a) <= 1;
}

bool check_asymmetric(const EventSystem& sys, const std::vector<Rational>& x, const Rational& eps) {
    if (static_cast<int>(x.size()) != sys.event_count()) throw InvalidModel("x vector size mismatch");
    for (const Rational& xb : x) {
        if (xb <= 0 || xb >= 1) throw InvalidModel("asymmetric weights must lie in (0,1)");
    }
    for (int b = 0; b < sys.event_count(); ++b) {
        Rational rhs = x[static_cast<std::size_t>(b)];
        for (int a : sys.neighbors(b)) {
            if (a != b) rhs *= 1 - x[static_cast<std::size_t>(a)];
        }
        if ((1 + eps) * sys.event_prob(b) > rhs) return false;
    }
    return true;
}

namespace {

/// Sum over independent subsets I of the candidate list (indices >= from) of
/// prod mu_tilde, restricted to candidates still allowed by `blocked`.
Rational independent_sum(const EventSystem& sys, const std::vector<int>& candidates,
                         const std::vector<Rational>& mu_tilde, std::size_t from,
                         std::vector<char>& blocked) {
    Rational total = 1;  // the empty set
    for (std::size_t i = from; i < candidates.size(); ++i) {
        if (blocked[i]) continue;
        int a = candidates[i];
        std::vector<std::size_t> newly_blocked;
        for (std::size_t j = i; j < candidates.size(); ++j) {
            if (!blocked[j] && sys.dependent(a, candidates[j])) {
                blocked[j] = 1;
                newly_blocked.push_back(j);
            }
        }
        total += mu_tilde[static_cast<std::size_t>(a)] *
                 independent_sum(sys, candidates, mu_tilde, i + 1, blocked);
        for (std::size_t j : newly_blocked) blocked[j] = 0;
    }
    return total;
}

}  // namespace

bool check_cluster_expansion(const EventSystem& sys, const std::vector<Rational>& mu_tilde,
                             const Rational& eps, int cap) {
    if (static_cast<int>(mu_tilde.size()) != sys.event_count()) {
        throw InvalidModel("mu_tilde vector size mismatch");
    }
    for (const Rational& v : mu_tilde) {
        if (v < 0) throw InvalidModel("mu_tilde entries must be nonnegative");
    }
    for (int b = 0; b < sys.event_count(); ++b) {
        const std::vector<int>& nb = sys.neighbors(b);
        if (static_cast<int>(nb.size()) > cap) {
            throw CapExceeded("neighborhood of event " + std::to_string(b) +
                              " exceeds enumeration cap");
        }
        std::vector<char> blocked(nb.size(), 0);
        Rational sum = independent_sum(sys, nb, mu_tilde, 0, blocked);
        if (mu_tilde[static_cast<std::size_t>(b)] < (1 + eps) * sys.event_prob(b) * sum) return false;
    }
    return true;
}

ShearerReport shearer_report(const EventSystem& sys, const ReportOptions& opts) {
    ShearerReport rep;
    rep.variable_count = sys.variable_count();
    rep.event_count = sys.event_count();
    rep.symmetric_satisfied = check_symmetric(sys, opts.eps);
    if (opts.x) rep.asymmetric_satisfied = check_asymmetric(sys, *opts.x, opts.eps);
    if (opts.mu_tilde) {
        rep.cluster_satisfied = check_cluster_expansion(sys, *opts.mu_tilde, opts.eps, opts.cap);
    }
    rep.exact = sys.event_count() <= opts.cap;
    if (!rep.exact) return rep;

    QEvaluator ev(sys, scaled_probs(sys, 1), opts.cap);
    rep.q_empty = ev.q_subset(ev.full_mask());
    rep.shearer_satisfied = check_shearer(sys, opts.scale, opts.cap);
    rep.satisfied_at_one = opts.scale == 1 ? rep.shearer_satisfied : check_shearer(sys, 1, opts.cap);
    if (!rep.satisfied_at_one) return rep;

    rep.mu = measure_vector(sys, opts.cap);
    rep.W = 0;
    rep.w_prime_bound = 0;
    for (int b = 0; b < sys.event_count(); ++b) {
        rep.W += rep.mu[static_cast<std::size_t>(b)];
        rep.w_prime_bound += rep.mu[static_cast<std::size_t>(b)] / sys.event_prob(b);
    }
    auto slack = max_slack(sys, opts.slack_tol, opts.cap);
    if (slack) {
        rep.slack = *slack;
    } else {
        rep.slack_unbounded = true;
    }
    return rep;
}

std::string report_json(const ShearerReport& rep) {
    using nlohmann::json;
    json satisfied{{"symmetric", rep.symmetric_satisfied}};
    satisfied["shearer"] = rep.exact ? json(rep.shearer_satisfied) : json(nullptr);
    satisfied["asymmetric"] =
        rep.asymmetric_satisfied ? json(*rep.asymmetric_satisfied) : json(nullptr);
    satisfied["cluster_expansion"] =
        rep.cluster_satisfied ? json(*rep.cluster_satisfied) : json(nullptr);

    json doc{{"n", rep.variable_count}, {"m", rep.event_count}, {"exact", rep.exact},
             {"satisfied", std::move(satisfied)}};
    if (rep.exact) {
        doc["q_empty"] = rational_str(rep.q_empty);
    } else {
        doc["q_empty"] = nullptr;
    }
    if (rep.exact && rep.satisfied_at_one) {
        json mu = json::array();
        for (const Rational& v : rep.mu) mu.push_back(rational_str(v));
        doc["mu"] = std::move(mu);
        doc["W"] = rational_str(rep.W);
        doc["w_prime_bound"] = rational_str(rep.w_prime_bound);
        doc["max_slack"] = rep.slack_unbounded ? json("unbounded") : json(rational_str(*rep.slack));
    } else {
        doc["mu"] = nullptr;
        doc["W"] = nullptr;
        doc["w_prime_bound"] = nullptr;
        doc["max_slack"] = nullptr;
    }
    return doc.dump(2);
}

}  // namespace lll
