#include <lll/generators.hpp>

#include <lll/errors.hpp>
#include <lll/prf.hpp>

#include <algorithm>

namespace lll {

EventSystem tiny_a() {
    EventSystemBuilder builder(2);
    builder.uniform_boolean();
    builder.add_atomic({{0, 0}, {1, 0}});
    builder.add_atomic({{1, 1}});
    return builder.build();
}

EventSystem tiny_a_qadic(std::uint64_t q) {
    if (q < 3 || q % 2 == 0) throw InvalidModel("need an odd field size");
    unsigned long h = static_cast<unsigned long>((q - 1) / 2);
    unsigned long qu = static_cast<unsigned long>(q);
    EventSystemBuilder builder(2);
    for (int i = 0; i < 2; ++i) {
        builder.set_domain(i, {{0, Rational(h, qu)}, {1, Rational(qu - h, qu)}});
    }
    builder.add_atomic({{0, 0}, {1, 0}});
    builder.add_atomic({{1, 1}});
    return builder.build();
}

EventSystem random_model(std::uint64_t seed, const RandomModelOptions& opt) {
    if (opt.variables < 1 || opt.events < 0) throw InvalidModel("bad generator parameters");
    if (opt.max_scope < 1 || opt.max_scope > opt.variables) {
        throw InvalidModel("bad generator scope bound");
    }
    if (!opt.uniform && opt.max_den < 2) throw InvalidModel("need denominators of at least 2");
    EventSystemBuilder builder(opt.variables);
    if (opt.uniform) {
        builder.uniform_boolean();
    } else {
        for (int i = 0; i < opt.variables; ++i) {
            std::uint64_t word = prf3(seed, 0x9a, static_cast<std::uint64_t>(i));
            unsigned long den = 2 + word % static_cast<unsigned long>(opt.max_den - 1);
            unsigned long num = 1 + (word >> 32) % (den - 1);  // both values keep mass
            builder.set_domain(i, {{0, Rational(num, den)}, {1, Rational(den - num, den)}});
        }
    }
    for (int b = 0; b < opt.events; ++b) {
        std::uint64_t word = prf3(seed, 0x5c, static_cast<std::uint64_t>(b));
        int scope_size = 1 + static_cast<int>(word % static_cast<std::uint64_t>(opt.max_scope));
        std::vector<int> vars(static_cast<std::size_t>(opt.variables));
        for (int i = 0; i < opt.variables; ++i) vars[static_cast<std::size_t>(i)] = i;
        // Partial Fisher-Yates with per-step PRF words.
        for (int i = 0; i < scope_size; ++i) {
            std::uint64_t pick = prf3(seed, word, static_cast<std::uint64_t>(i));
            int j = i + static_cast<int>(pick % static_cast<std::uint64_t>(opt.variables - i));
            std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
        }
        std::vector<std::pair<int, int>> assignment;
        for (int i = 0; i < scope_size; ++i) {
            int value = static_cast<int>(prf3(seed, word ^ 0xf00d, static_cast<std::uint64_t>(i)) & 1);
            assignment.emplace_back(vars[static_cast<std::size_t>(i)], value);
        }
        builder.add_atomic(std::move(assignment));
    }
    return builder.build();
}

EventSystem three_sat_pairs(std::uint64_t seed, const PairFamilyOptions& opt) {
    if (opt.variables < 5) throw InvalidModel("need at least one 5-variable block");
    if (opt.q != 0 && (opt.q < 3 || opt.q % 2 == 0)) throw InvalidModel("need an odd field size");
    EventSystemBuilder builder(opt.variables);
    if (opt.q == 0) {
        builder.uniform_boolean();
    } else {
        unsigned long h = static_cast<unsigned long>((opt.q - 1) / 2);
        unsigned long qu = static_cast<unsigned long>(opt.q);
        for (int i = 0; i < opt.variables; ++i) {
            builder.set_domain(i, {{0, Rational(h, qu)}, {1, Rational(qu - h, qu)}});
        }
    }
    int pairs = opt.variables / 5;
    for (int j = 0; j < pairs; ++j) {
        int base = 5 * j;
        // The clause over (v0,v1,v2) and the clause over (v2,v3,v4) share v2.
        for (int side = 0; side < 2; ++side) {
            std::vector<std::pair<int, int>> falsifying;
            for (int slot = 0; slot < 3; ++slot) {
                int var = base + 2 * side + slot;
                int polarity = static_cast<int>(
                    prf3(seed, static_cast<std::uint64_t>(2 * j + side),
                         static_cast<std::uint64_t>(slot)) &
                    1);
                falsifying.emplace_back(var, polarity ^ 1);  // literal false
            }
            builder.add_atomic(std::move(falsifying));
        }
    }
    return builder.build();
}

}  // namespace lll
