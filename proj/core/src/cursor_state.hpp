#pragma once

#include <lll/event_model.hpp>
#include <lll/resampling_table.hpp>

#include <vector>

namespace lll::detail {

/// Per-variable column cursors over a resampling table; the current
/// assignment is the view R(i, cursor_i).
class CursorState {
public:
    CursorState(const EventSystem& sys, const ResamplingTable& table)
        : table_(table), column_(static_cast<std::size_t>(sys.variable_count()), 1) {
        if (table.variable_count() != sys.variable_count()) {
            throw InvalidModel("table and model disagree on variable count");
        }
        values_.reserve(column_.size());
        for (int i = 0; i < sys.variable_count(); ++i) values_.push_back(table.cell(i, 1));
    }

    Assignment assignment() const { return Assignment{values_}; }
    int value(int var) const { return values_[static_cast<std::size_t>(var)]; }
    int column(int var) const { return column_[static_cast<std::size_t>(var)]; }
    int max_column() const { return max_column_; }

    /// False when any scope variable's next column would pass the table cap;
    /// in that case nothing moves.
    bool can_advance(const std::vector<int>& scope) const {
        for (int var : scope) {
            if (column_[static_cast<std::size_t>(var)] + 1 > table_.column_cap()) return false;
        }
        return true;
    }

    void advance(const std::vector<int>& scope) {
        for (int var : scope) {
            int t = ++column_[static_cast<std::size_t>(var)];
            values_[static_cast<std::size_t>(var)] = table_.cell(var, t);
            if (t > max_column_) max_column_ = t;
        }
    }

private:
    const ResamplingTable& table_;
    std::vector<int> column_;
    std::vector<int> values_;
    int max_column_ = 1;
};

}  // namespace lll::detail
