#include <lll/derandomize.hpp>

#include <lll/engine_wdenum.hpp>
#include <lll/shearer.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <set>
#include <thread>

namespace lll {

bool is_prime(std::uint64_t q) {
    if (q < 2) return false;
    for (std::uint64_t f = 2; f * f <= q; ++f) {
        if (q % f == 0) return false;
    }
    return true;
}

KWiseSpace build_space(std::uint64_t q, int k, std::uint64_t cells) {
    if (!is_prime(q)) throw InvalidModel("field size must be prime");
    if (q >= (std::uint64_t(1) << 31)) throw InvalidModel("field size too large");
    if (k < 1) throw InvalidModel("independence parameter must be at least 1");
    if (cells > q) throw InvalidModel("cells must fit distinct field points");
    return KWiseSpace{q, k, cells};
}

std::uint64_t space_size(const KWiseSpace& space) {
    std::uint64_t total = 1;
    for (int i = 0; i < space.k; ++i) {
        if (total > UINT64_MAX / space.q) throw InvalidModel("support size overflows 64 bits");
        total *= space.q;
    }
    return total;
}

std::vector<std::uint64_t> point_from_index(const KWiseSpace& space, std::uint64_t index) {
    std::vector<std::uint64_t> point(static_cast<std::size_t>(space.k), 0);
    for (int i = space.k - 1; i >= 0; --i) {
        point[static_cast<std::size_t>(i)] = index % space.q;
        index /= space.q;
    }
    if (index != 0) throw InvalidModel("point index outside the support");
    return point;
}

std::uint64_t space_eval(const KWiseSpace& space, const std::vector<std::uint64_t>& point,
                         std::uint64_t cell) {
    if (point.size() != static_cast<std::size_t>(space.k)) {
        throw InvalidModel("point has wrong coefficient count");
    }
    if (cell >= space.q) throw InvalidModel("cell is not a field point");
    std::uint64_t acc = 0;
    for (int i = 0; i < space.k; ++i) {  // Horner over a_0 + x(a_1 + x(...))
        std::uint64_t coeff = point[static_cast<std::size_t>(space.k - 1 - i)] % space.q;
        acc = (acc * cell + coeff) % space.q;
    }
    return acc;
}

int space_cell(const KWiseSpace& space, const std::vector<std::uint64_t>& point,
               std::uint64_t cell_index, const VariableDomain& domain) {
    std::uint64_t residue = space_eval(space, point, cell_index);
    std::uint64_t lower = 0;
    for (const DomainValue& dv : domain.values) {
        Rational width = dv.prob * static_cast<unsigned long>(space.q);
        if (width.get_den() != 1) {
            throw UnsupportedDistribution("probability " + rational_str(dv.prob) + " is not " +
                                          std::to_string(space.q) + "-adic");
        }
        std::uint64_t upper = lower + width.get_num().get_ui();
        if (residue < upper) return dv.value;
        lower = upper;
    }
    throw InvalidModel("q-adic windows do not cover the field");
}

PointTable::PointTable(const EventSystem& sys, KWiseSpace space, std::vector<std::uint64_t> point,
                       int column_cap)
    : ResamplingTable(sys.variable_count(), column_cap),
      sys_(&sys),
      space_(space),
      point_(std::move(point)) {
    if (column_cap < 1) throw InvalidModel("column cap must be at least 1");
    std::uint64_t needed = static_cast<std::uint64_t>(sys.variable_count()) *
                           static_cast<std::uint64_t>(column_cap);
    if (needed > space_.cells) throw InvalidModel("table does not fit the space's cells");
}

int PointTable::cell_value(int var, int t) const {
    std::uint64_t cell = static_cast<std::uint64_t>(var) *
                             static_cast<std::uint64_t>(column_cap()) +
                         static_cast<std::uint64_t>(t - 1);
    return space_cell(space_, point_, cell, sys_->domain(var));
}

namespace {

bool q_adic(const EventSystem& sys, std::uint64_t q) {
    for (int i = 0; i < sys.variable_count(); ++i) {
        for (const DomainValue& dv : sys.domain(i).values) {
            Rational scaled = dv.prob * static_cast<unsigned long>(q);
            if (scaled.get_den() != 1) return false;
        }
    }
    return true;
}

std::uint64_t derive_field(const EventSystem& sys, std::uint64_t cells) {
    std::set<std::uint64_t> dens;
    for (int i = 0; i < sys.variable_count(); ++i) {
        for (const DomainValue& dv : sys.domain(i).values) {
            if (dv.prob.get_den() != 1) {
                if (!dv.prob.get_den().fits_ulong_p()) {
                    throw UnsupportedDistribution("probability denominator too large for a field");
                }
                dens.insert(dv.prob.get_den().get_ui());
            }
        }
    }
    if (dens.empty()) {
        std::uint64_t q = cells < 2 ? 2 : cells;
        while (!is_prime(q)) ++q;
        return q;
    }
    if (dens.size() > 1) {
        throw UnsupportedDistribution("distributions mix denominators; no prime field fits all");
    }
    std::uint64_t q = *dens.begin();
    if (!is_prime(q)) {
        throw UnsupportedDistribution("common probability denominator " + std::to_string(q) +
                                      " is not prime");
    }
    if (q < cells) {
        throw UnsupportedDistribution("field of size " + std::to_string(q) + " cannot host " +
                                      std::to_string(cells) + " cells");
    }
    return q;
}

struct PointOutcome {
    bool verified = false;
    EnumerationResult enumerated;
    FinalizeResult finalized;
};

PointOutcome try_point(const EventSystem& sys, const KWiseSpace& space, std::uint64_t index,
                       int cap_nodes, long long s_cap, int columns) {
    PointOutcome out;
    PointTable table(sys, space, point_from_index(space, index), columns);
    out.enumerated = enumerate_wds(sys, table, cap_nodes, s_cap);
    if (out.enumerated.status != RunStatus::ok) return out;  // blown cap abandons the point
    std::vector<WitnessDag> gamma;
    gamma.reserve(out.enumerated.gamma.size());
    for (int idx : out.enumerated.gamma) gamma.push_back(out.enumerated.family.member(idx));
    out.finalized = final_configuration(sys, gamma, table, 0);
    out.verified = sys.true_events(out.finalized.assignment).empty();
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LLL_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

DetResult solve_deterministic(const EventSystem& sys, const DetOptions& opt) {
    if (!sys.all_atomic()) throw InvalidModel("deterministic search requires atomic events");
    auto start = std::chrono::steady_clock::now();

    int cap_nodes = opt.cap_nodes > 0 ? opt.cap_nodes
                                      : choose_cap(sys.variable_count(), opt.epsilon, opt.c);
    int columns = cap_nodes + 1;
    std::uint64_t cells = static_cast<std::uint64_t>(sys.variable_count()) *
                          static_cast<std::uint64_t>(columns);

    std::uint64_t q = opt.q_override != 0 ? opt.q_override : derive_field(sys, cells);
    if (opt.q_override != 0) {
        if (!is_prime(q)) throw InvalidModel("field size override must be prime");
        if (q < cells) throw InvalidModel("field size override smaller than the cell count");
        if (!q_adic(sys, q)) {
            throw UnsupportedDistribution("distributions are not q-adic for the override field");
        }
    }
    KWiseSpace space = build_space(q, opt.degree, cells);
    std::uint64_t total = space_size(space);

    DetResult out;
    out.criterion_ok = check_symmetric_power(sys, opt.epsilon);
    out.q = q;
    out.degree = opt.degree;

    int threads = resolve_threads(opt.threads);
    std::atomic<std::uint64_t> best{UINT64_MAX};
    std::atomic<std::uint64_t> next_chunk{0};
    const std::uint64_t chunk = 64;

    auto worker = [&]() {
        while (true) {
            std::uint64_t lo = next_chunk.fetch_add(chunk);
            if (lo >= total || lo >= best.load()) return;
            std::uint64_t hi = std::min(total, lo + chunk);
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                if (idx >= best.load()) return;
                if (!try_point(sys, space, idx, cap_nodes, opt.s_cap, columns).verified) continue;
                std::uint64_t seen = best.load();
                while (idx < seen && !best.compare_exchange_weak(seen, idx)) {
                }
                break;  // nothing smaller left in this ascending chunk
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::uint64_t winner = best.load();
    if (winner == UINT64_MAX) {
        throw CriterionUnsatisfied("no point of the sample space yields a verified assignment; "
                                   "raise the node cap or s_cap");
    }

    PointOutcome final = try_point(sys, space, winner, cap_nodes, opt.s_cap, columns);
    out.assignment = final.finalized.assignment;
    out.winner = winner;
    out.points_tried = winner + 1;
    out.stats.per_event.assign(static_cast<std::size_t>(sys.event_count()), 0);
    out.stats.gamma_size = static_cast<long long>(final.enumerated.gamma.size());
    out.stats.cwd_count = final.enumerated.family.size();
    out.stats.max_wd_size = final.enumerated.family.max_size;
    out.stats.steps = final.enumerated.family.generations;
    out.stats.mis_rounds = final.finalized.mis_rounds;
    out.stats.mis_invocations = 1;
    out.stats.cap_K = cap_nodes;
    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace lll
