#pragma once

// Tabular output: CSV (RFC 4180 quoting, %.17g numbers) and JSON with a
// versioned envelope. Numbers round-trip exactly in both formats.

#include "sweep.hpp"
#include "validate.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace uavh {

inline constexpr int schema_version = 1;

using Cell = std::variant<double, std::string, bool>;

struct Table {
    std::string kind;  // "sweep", "validate", "dist", ...
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::map<std::string, std::string> metadata;
};

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isnan(*d) ? std::string() : format_double(*d);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return csv_field(std::get<std::string>(c));
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << detail::csv_field(t.columns[i]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
        os << "\r\n";
    }
}

inline nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["kind"] = t.kind;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) r[t.columns[i]] = v;
                        else r[t.columns[i]] = nullptr;
                    } else {
                        r[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    return j;
}

inline void write_json(std::ostream& os, const Table& t) { os << to_json(t).dump(2) << "\n"; }

inline Table sweep_table(const SweepResult& r) {
    Table t;
    t.kind = "sweep";
    t.columns.push_back(r.axis_name);
    for (const auto& c : r.series) t.columns.push_back(c.name);
    for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
        std::vector<Cell> row{r.axis_values[i]};
        for (const auto& c : r.series) row.emplace_back(c.values[i]);
        t.rows.push_back(std::move(row));
    }
    t.metadata["axis"] = r.axis_name;
    t.metadata["scenario_hash"] = r.scenario_hash;
    t.metadata["seed"] = std::to_string(r.seed);
    return t;
}

inline Table validation_table(const std::vector<ValidationCheck>& checks, const Scenario& s) {
    Table t;
    t.kind = "validate";
    t.columns = {"check", "measured", "tolerance", "passed", "note"};
    for (const auto& c : checks) t.rows.push_back({c.name, c.measured, c.tolerance, c.passed, c.note});
    t.metadata["scenario_hash"] = hex64(scenario_hash(s));
    t.metadata["seed"] = std::to_string(s.rng.seed);
    t.metadata["all_passed"] = all_passed(checks) ? "true" : "false";
    return t;
}

}  // namespace uavh
