#pragma once

#include "susmine/allocation.hpp"
#include "susmine/annotation.hpp"
#include "susmine/error.hpp"
#include "susmine/ocel.hpp"
#include "susmine/scoping.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace susmine {

enum class SupportLevel { none = 0, half = 1, full = 2 };

inline std::string_view to_string(SupportLevel s)
{
    switch (s) {
    case SupportLevel::none: return "none";
    case SupportLevel::half: return "half";
    case SupportLevel::full: return "full";
    }
    return "none";
}

inline std::optional<SupportLevel> parse_support_level(std::string_view s)
{
    if (s == "none") return SupportLevel::none;
    if (s == "half") return SupportLevel::half;
    if (s == "full") return SupportLevel::full;
    return std::nullopt;
}

inline constexpr std::array<std::string_view, 8> capability_columns{
    "AP1", "AP2-Climate", "AP2-Env", "AP2-Social", "AP3-Climate", "AP3-Env", "AP3-Social", "AP4"};

struct CapabilityRow {
    std::string approach;
    std::array<SupportLevel, 8> cells{};

    SupportLevel at(std::string_view column) const
    {
        for (std::size_t i = 0; i < capability_columns.size(); ++i) {
            if (capability_columns[i] == column) {
                return cells[i];
            }
        }
        throw SchemaError("unknown capability column '" + std::string(column) + "'");
    }

    friend bool operator==(const CapabilityRow&, const CapabilityRow&) = default;
};

struct CapabilityMatrix {
    std::vector<CapabilityRow> rows;

    friend bool operator==(const CapabilityMatrix&, const CapabilityMatrix&) = default;
};

/// Scores one annotated bundle against the four analysis patterns.
///
/// AP1 needs a flow assignment, AP2-X a characterized impact of class X, AP3-X
/// impacts of class X in two or more named scopes (one scope: half), AP4 an
/// allocation ledger entry. Presence counts, not magnitude, so adding annotations
/// never lowers a cell.
inline CapabilityRow pattern_audit(const AnnotatedLog& al, const ScopedImpactMap& characterized,
                                   const AllocationLedger& ledger, std::string name = "bundle")
{
    CapabilityRow row;
    row.approach = std::move(name);
    auto level = [](bool full) { return full ? SupportLevel::full : SupportLevel::none; };
    row.cells[0] = level(!al.assignments().empty());

    std::map<ImpactClass, std::set<std::string>> scopes_by_class;
    std::set<ImpactClass> present;
    for (const auto& [component, vec] : characterized) {
        for (const auto& [key, amount] : vec) {
            ImpactClass cls = al.table().category(key.category).impact_class;
            present.insert(cls);
            if (key.scope != unscoped) {
                scopes_by_class[cls].insert(key.scope);
            }
        }
    }
    const std::array<ImpactClass, 3> order{ImpactClass::climate, ImpactClass::environmental, ImpactClass::social};
    for (std::size_t i = 0; i < order.size(); ++i) {
        row.cells[1 + i] = level(present.count(order[i]) != 0);
        std::size_t n = scopes_by_class[order[i]].size();
        row.cells[4 + i] = n >= 2 ? SupportLevel::full : n == 1 ? SupportLevel::half : SupportLevel::none;
    }
    row.cells[7] = level(!ledger.entries.empty());
    return row;
}

inline nlohmann::json to_json(const CapabilityRow& row)
{
    nlohmann::json cells = nlohmann::json::array();
    for (auto c : row.cells) {
        cells.push_back(std::string(to_string(c)));
    }
    return {{"approach", row.approach}, {"cells", cells}};
}

inline nlohmann::json to_json(const CapabilityMatrix& m)
{
    nlohmann::json j;
    j["schema"] = "susmine-matrix/1";
    j["columns"] = nlohmann::json::array();
    for (auto c : capability_columns) {
        j["columns"].push_back(std::string(c));
    }
    j["rows"] = nlohmann::json::array();
    for (const auto& r : m.rows) {
        j["rows"].push_back(to_json(r));
    }
    return j;
}

inline std::string serialize_matrix(const CapabilityMatrix& m) { return to_json(m).dump(2) + "\n"; }

/// Reads a capability-matrix fixture (`"schema": "susmine-matrix/1"`).
inline CapabilityMatrix load_literature_matrix(std::string_view document)
{
    using detail::json;
    json doc = detail::parse_json(document, "capability matrix");
    if (!doc.is_object() || doc.value("schema", "") != "susmine-matrix/1") {
        throw SchemaError("capability matrix must declare schema susmine-matrix/1");
    }
    const json& cols = detail::require_array(doc, "columns", "matrix");
    if (cols.size() != capability_columns.size()) {
        throw SchemaError("capability matrix must have exactly 8 columns");
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (!cols[i].is_string() || cols[i].get<std::string>() != capability_columns[i]) {
            throw SchemaError("capability matrix column " + std::to_string(i) + " must be " +
                              std::string(capability_columns[i]));
        }
    }
    CapabilityMatrix m;
    const json& rows = detail::require_array(doc, "rows", "matrix");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string w = "rows[" + std::to_string(r) + "]";
        CapabilityRow row;
        row.approach = detail::require_string(rows[r], "approach", w);
        const json& cells = detail::require_array(rows[r], "cells", w);
        if (cells.size() != capability_columns.size()) {
            throw SchemaError(w + " must have 8 cells");
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            auto lvl = cells[c].is_string() ? parse_support_level(cells[c].get<std::string>()) : std::nullopt;
            if (!lvl) {
                throw SchemaError(w + ".cells[" + std::to_string(c) + "] must be full, half or none");
            }
            row.cells[c] = *lvl;
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

/// Fixed-width text table for terminals.
inline std::string render_matrix_table(const CapabilityMatrix& m)
{
    std::size_t width = 8;
    for (const auto& r : m.rows) {
        width = std::max(width, r.approach.size());
    }
    auto pad = [](std::string s, std::size_t n) {
        s.resize(std::max(n, s.size()), ' ');
        return s;
    };
    std::string out = pad("Approach", width);
    for (auto c : capability_columns) {
        out += "  " + pad(std::string(c), 11);
    }
    while (!out.empty() && out.back() == ' ') {
        out.pop_back();
    }
    out += "\n";
    for (const auto& r : m.rows) {
        std::string line = pad(r.approach, width);
        for (auto cell : r.cells) {
            line += "  " + pad(std::string(to_string(cell)), 11);
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace susmine
