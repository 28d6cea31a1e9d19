#pragma once

#include <lll/engine.hpp>
#include <lll/resampling_table.hpp>

#include <cstdint>
#include <vector>

namespace lll {

bool is_prime(std::uint64_t q);

/// Exact k-wise independent sample space: points are the q^k coefficient
/// vectors of degree-<k polynomials over F_q; cell j reads the polynomial at
/// the field point j. Any k distinct cells are jointly uniform over F_q^k.
struct KWiseSpace {
    std::uint64_t q = 2;       // prime field size, < 2^31
    int k = 1;                 // independence parameter (coefficient count)
    std::uint64_t cells = 0;   // distinct evaluation points used, <= q
};

KWiseSpace build_space(std::uint64_t q, int k, std::uint64_t cells);

/// Number of support points, q^k. InvalidModel when it overflows 64 bits.
std::uint64_t space_size(const KWiseSpace& space);

/// Coefficient vector (a_0 .. a_{k-1}) of the index-th point in lexicographic
/// order (a_0 most significant).
std::vector<std::uint64_t> point_from_index(const KWiseSpace& space, std::uint64_t index);

/// Polynomial value sum a_i * cell^i mod q.
std::uint64_t space_eval(const KWiseSpace& space, const std::vector<std::uint64_t>& point,
                         std::uint64_t cell);

/// Maps the cell's field value through the cumulative q-adic layout of the
/// domain: value number j occupies q*prob_j consecutive residues, in domain
/// order. UnsupportedDistribution unless every q*prob is an integer.
int space_cell(const KWiseSpace& space, const std::vector<std::uint64_t>& point,
               std::uint64_t cell_index, const VariableDomain& domain);

/// Resampling-table view of one support point; cell (i,t) reads evaluation
/// point i*column_cap + (t-1). Requires n*column_cap <= space.cells.
class PointTable final : public ResamplingTable {
public:
    PointTable(const EventSystem& sys, KWiseSpace space, std::vector<std::uint64_t> point,
               int column_cap);

    std::uint64_t seed() const override { return 0; }

private:
    int cell_value(int var, int t) const override;
    const EventSystem* sys_;
    KWiseSpace space_;
    std::vector<std::uint64_t> point_;
};

struct DetOptions {
    int cap_nodes = 0;             // 0: choose_cap(n, epsilon, c)
    Rational epsilon{2, 5};
    Rational c{8};
    long long s_cap = 4096;
    int degree = 2;                // independence parameter k
    std::uint64_t q_override = 0;  // 0: derive the field size from the model
    int threads = 1;               // worker count; never affects the result
};

struct DetResult {
    Assignment assignment;          // verified: no event true
    bool criterion_ok = false;      // e*p*d^(1+eps) <= 1 sanity check outcome
    std::uint64_t q = 0;
    int degree = 0;
    std::uint64_t winner = 0;       // lexicographic index of the first good point
    std::uint64_t points_tried = 0; // winner + 1
    EngineStats stats;              // enumeration stats of the winning point
};

/// Exhaustive deterministic search: scans support points in lexicographic
/// order, runs the capped WD enumeration on each point's table view (a blown
/// cap abandons the point), and returns the first point whose final
/// configuration verifies. Atomic events only; all variable distributions
/// must be q-adic for the chosen field. Throws CriterionUnsatisfied when no
/// point succeeds. Byte-identical results for any thread count.
DetResult solve_deterministic(const EventSystem& sys, const DetOptions& opt = {});

}  // namespace lll
