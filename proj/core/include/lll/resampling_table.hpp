#pragma once

#include <lll/event_model.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

namespace lll {

/// Column budget heuristic: 64 * ceil(log2(n+2) / eps_hat).
int default_column_cap(int n, const Rational& eps_hat);

/// Infinite-in-principle table R(i,t) of pre-drawn values: column 1 is the
/// initial assignment, column t+1 is the value installed by a variable's t-th
/// resampling. Cells are pure functions of the source, so concurrent reads
/// are safe and nothing needs to be cached.
class ResamplingTable {
public:
    virtual ~ResamplingTable() = default;

    int variable_count() const { return n_; }
    int column_cap() const { return cap_; }
    virtual std::uint64_t seed() const = 0;

    /// R(i,t), t >= 1. Throws CapExceeded past the column cap.
    int cell(int var, int t) const;

    /// R(., 1).
    Assignment initial_assignment() const;

protected:
    ResamplingTable(int n, int cap) : n_(n), cap_(cap) {}
    virtual int cell_value(int var, int t) const = 0;

private:
    int n_ = 0;
    int cap_ = 0;
};

/// Counter-mode PRF table: cell (i,t) maps the word prf3(seed, i, t) through
/// the cumulative distribution of variable i. Deterministic in (seed, i, t).
class SeededTable final : public ResamplingTable {
public:
    SeededTable(const EventSystem& sys, std::uint64_t seed, int column_cap);

    std::uint64_t seed() const override { return seed_; }

private:
    int cell_value(int var, int t) const override;
    const EventSystem* sys_;
    std::uint64_t seed_;
};

/// Table backed by explicitly listed cells, for failing-case reproduction
/// and hand-built fixtures. Reading an unlisted cell is a CapExceeded.
class ExplicitTable final : public ResamplingTable {
public:
    ExplicitTable(int n, std::uint64_t seed_tag, int column_cap);

    ExplicitTable& set(int var, int t, int value);
    std::uint64_t seed() const override { return seed_; }

private:
    int cell_value(int var, int t) const override;
    std::uint64_t seed_;
    std::unordered_map<std::uint64_t, int> cells_;
};

/// { "seed": ..., "n": ..., "cells": [[i, t, value], ...] } with 1-based i.
std::string dump_table_json(const ResamplingTable& table, int t_max);

/// Parses a dump back into an explicit table, validating values against the
/// model's domains.
ExplicitTable load_table_json(const EventSystem& sys, std::string_view text);

}  // namespace lll
