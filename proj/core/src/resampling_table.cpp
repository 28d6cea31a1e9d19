#include <lll/resampling_table.hpp>

#include <lll/errors.hpp>
#include <lll/prf.hpp>

#include <nlohmann/json.hpp>

#include <cmath>

namespace lll {

namespace {

std::uint64_t cell_key(int var, int t) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(var)) << 32) |
           static_cast<std::uint32_t>(t);
}

}  // namespace

int default_column_cap(int n, const Rational& eps_hat) {
    if (eps_hat <= 0) throw InvalidModel("eps_hat must be positive");
    double ratio = std::log2(static_cast<double>(n) + 2.0) / rational_double(eps_hat);
    return 64 * static_cast<int>(std::ceil(ratio));
}

int ResamplingTable::cell(int var, int t) const {
    if (var < 0 || var >= n_) throw InvalidModel("table variable out of range");
    if (t < 1) throw InvalidModel("table column indices start at 1");
    if (t > cap_) {
        throw CapExceeded("table column " + std::to_string(t) + " beyond cap " + std::to_string(cap_));
    }
    return cell_value(var, t);
}

Assignment ResamplingTable::initial_assignment() const {
    Assignment x;
    x.values.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x.values.push_back(cell(i, 1));
    return x;
}

SeededTable::SeededTable(const EventSystem& sys, std::uint64_t seed, int column_cap)
    : ResamplingTable(sys.variable_count(), column_cap), sys_(&sys), seed_(seed) {
    if (column_cap < 1) throw InvalidModel("column cap must be at least 1");
}

int SeededTable::cell_value(int var, int t) const {
    return sys_->sample_value(var, prf3(seed_, static_cast<std::uint64_t>(var),
                                        static_cast<std::uint64_t>(t)));
}

ExplicitTable::ExplicitTable(int n, std::uint64_t seed_tag, int column_cap)
    : ResamplingTable(n, column_cap), seed_(seed_tag) {}

ExplicitTable& ExplicitTable::set(int var, int t, int value) {
    if (var < 0 || var >= variable_count()) throw InvalidModel("table variable out of range");
    if (t < 1 || t > column_cap()) throw InvalidModel("table column out of range");
    cells_[cell_key(var, t)] = value;
    return *this;
}

int ExplicitTable::cell_value(int var, int t) const {
    auto it = cells_.find(cell_key(var, t));
    if (it == cells_.end()) {
        throw CapExceeded("cell (" + std::to_string(var + 1) + "," + std::to_string(t) +
                          ") is not materialized in this table");
    }
    return it->second;
}

std::string dump_table_json(const ResamplingTable& table, int t_max) {
    using nlohmann::json;
    if (t_max < 1 || t_max > table.column_cap()) throw InvalidModel("dump range out of cap");
    json cells = json::array();
    for (int i = 0; i < table.variable_count(); ++i) {
        for (int t = 1; t <= t_max; ++t) {
            cells.push_back({i + 1, t, table.cell(i, t)});
        }
    }
    return json{{"seed", table.seed()}, {"n", table.variable_count()}, {"cells", std::move(cells)}}
        .dump();
}

ExplicitTable load_table_json(const EventSystem& sys, std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad table JSON: ") + e.what());
    }
    try {
        int n = doc.at("n").get<int>();
        if (n != sys.variable_count()) throw InvalidModel("table variable count does not match model");
        int max_t = 1;
        for (const json& c : doc.at("cells")) max_t = std::max(max_t, c.at(1).get<int>());
        ExplicitTable table(n, doc.at("seed").get<std::uint64_t>(), max_t);
        for (const json& c : doc.at("cells")) {
            if (!c.is_array() || c.size() != 3) throw InvalidModel("table cells are [i,t,value]");
            int var = c.at(0).get<int>() - 1;
            int t = c.at(1).get<int>();
            int value = c.at(2).get<int>();
            if (var < 0 || var >= n) throw InvalidModel("table cell variable out of range");
            if (!sys.domain(var).has_value(value)) {
                throw InvalidModel("table cell value not in the variable's domain");
            }
            table.set(var, t, value);
        }
        return table;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad table JSON: ") + e.what());
    }
}

}  // namespace lll
