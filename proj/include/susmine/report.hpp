#pragma once

#include "susmine/allocation.hpp"
#include "susmine/annotation.hpp"
#include "susmine/audit.hpp"
#include "susmine/dfg.hpp"
#include "susmine/impact.hpp"
#include "susmine/inventory.hpp"
#include "susmine/ocel.hpp"
#include "susmine/scoping.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace susmine {

struct AssessOptions {
    Mode mode = Mode::strict;
    std::optional<FunctionalUnit> functional_unit;
};

struct FunctionalUnitResult {
    FunctionalUnit unit;
    double measured_output = 0.0;
    double factor = 0.0;
    ScaledInventory inventory;  // process level, per functional unit
    ScopedImpactVector impacts; // process level, per functional unit
};

/// Everything the pipeline computes for one annotated log.
struct Assessment {
    std::string log_digest;
    Mode mode = Mode::strict;
    LogSummary summary;
    Inventory inventory;          // concrete components
    Inventory process_inventory;  // rolled up to the process
    ScopedResult characterized;   // before allocation
    AllocationResult allocation;  // after allocation
    AnnotatedDFG dfg;
    CapabilityRow audit;
    std::optional<FunctionalUnitResult> functional_unit;
};

/// Raised when a pipeline stage fails; keeps the original error kind and exit class.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), "stage '" + stage + "': " + cause.message(), cause.error_class()),
          stage_(std::move(stage))
    {
    }

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Inventory, characterization per scope, allocation, DFG annotation and audit,
/// in that order.
inline Assessment run_assessment(const AnnotatedLog& al, const AssessOptions& options = {})
{
    Assessment a;
    std::string stage = "inventory";
    try {
        a.log_digest = al.digest();
        a.mode = options.mode;
        a.summary = log_summary(al.log());
        a.inventory = flat_inventory(al);
        a.process_inventory = rollup_inventory(al, RollupLevel::process);
        stage = "impact";
        a.characterized = characterize_scoped(a.inventory, al.table(), al.registry(), options.mode);
        stage = "allocation";
        a.allocation = apply_allocations(al, a.characterized.impacts, al.rules(), options.mode);
        stage = "dfg";
        a.dfg = annotate_dfg(build_dfg(al.log()), al, a.allocation.impacts);
        stage = "audit";
        a.audit = pattern_audit(al, a.characterized.impacts, a.allocation.ledger);
        if (options.functional_unit) {
            stage = "functional_unit";
            FunctionalUnitResult fu;
            fu.unit = *options.functional_unit;
            fu.measured_output = measured_output(fu.unit, al.log());
            fu.inventory = scale_to_functional_unit(a.process_inventory, fu.unit, al);
            fu.factor = fu.unit.reference_amount.to_double() / fu.measured_output;
            auto scoped = characterize_scoped(fu.inventory, al.table(), al.registry(), Mode::lenient);
            fu.impacts = sum_components(scoped.impacts);
            a.functional_unit = std::move(fu);
        }
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
    return a;
}

namespace detail {

inline json scoped_to_json(const ScopedImpactVector& sv)
{
    json out = json::object();
    for (const auto& [key, amount] : sv) {
        out[key.scope][key.category] = amount;
    }
    return out;
}

inline json inventory_key_json(const InventoryKey& k)
{
    return {{"component", to_json(k.component)},
            {"flow", k.flow},
            {"direction", std::string(to_string(k.direction))},
            {"scope", k.scope},
            {"unit", k.unit}};
}

inline json impacts_to_json(const ScopedImpactMap& impacts)
{
    json arr = json::array();
    for (const auto& [component, vec] : impacts) {
        arr.push_back({{"component", to_json(component)}, {"impacts", scoped_to_json(vec)}});
    }
    return arr;
}

}  // namespace detail

/// Report JSON (`"schema": "susmine-report/1"`). CSV outputs are projections of it.
inline nlohmann::json build_report(const Assessment& a, const AnnotatedLog& al)
{
    using detail::json;
    json r;
    r["schema"] = "susmine-report/1";
    r["log_digest"] = a.log_digest;
    r["mode"] = std::string(to_string(a.mode));
    r["scope_set"] = {{"name", al.scope_set().name}, {"scopes", al.scope_set().scopes}};
    r["summary"] = to_json(a.summary);

    json cats = json::object();
    for (const auto& [name, info] : al.table().categories()) {
        cats[name] = {{"impact_unit", info.impact_unit}, {"class", std::string(to_string(info.impact_class))}};
    }
    r["categories"] = cats;

    json inv = json::array();
    json negatives = json::array();
    for (const auto& [key, amount] : a.inventory) {
        json row = detail::inventory_key_json(key);
        row["amount"] = amount.to_string();
        inv.push_back(row);
        if (amount.is_negative()) {
            negatives.push_back(row);
        }
    }
    r["inventory"] = inv;
    r["negative_amounts"] = negatives;
    json process_inv = json::array();
    for (const auto& [key, amount] : a.process_inventory) {
        json row = detail::inventory_key_json(key);
        row.erase("component");
        row["amount"] = amount.to_string();
        process_inv.push_back(row);
    }
    r["process_inventory"] = process_inv;

    r["impacts"] = {{"before_allocation", detail::impacts_to_json(a.characterized.impacts)},
                    {"after_allocation", detail::impacts_to_json(a.allocation.impacts)}};

    ScopedImpactVector totals = sum_components(a.allocation.impacts);
    ScopedImpactVector residual;
    for (const auto& [component, vec] : a.allocation.impacts) {
        if (!rollup_target(component, RollupLevel::activity_type, al.log())) {
            for (const auto& [key, amount] : vec) {
                residual[key] += amount;
            }
        }
    }
    json unscoped_share = json::object();
    ImpactVector by_category = total_over_scopes(totals);
    for (const auto& [category, total] : by_category) {
        double u = 0.0;
        if (auto it = totals.find({category, std::string(unscoped)}); it != totals.end()) {
            u = it->second;
        }
        unscoped_share[category] = u;
    }
    json by_cat = json::object();
    for (const auto& [category, total] : by_category) {
        by_cat[category] = total;
    }
    r["totals"] = {{"by_scope", detail::scoped_to_json(totals)},
                   {"by_category", by_cat},
                   {"unscoped", unscoped_share},
                   {"non_activity_residual", detail::scoped_to_json(residual)}};

    json nodes = json::array();
    for (const auto& [name, node] : a.dfg.nodes) {
        nodes.push_back(
            {{"activity", name}, {"event_count", node.event_count}, {"impacts", detail::scoped_to_json(node.impacts)}});
    }
    json edges = json::array();
    for (const auto& [edge, freq] : a.dfg.edges) {
        edges.push_back({{"from", edge.first}, {"to", edge.second}, {"frequency", freq}});
    }
    r["dfg"] = {{"nodes", nodes}, {"edges", edges}};

    json ledger = json::array();
    for (const auto& e : a.allocation.ledger.entries) {
        ledger.push_back({{"source", to_json(e.source)},
                          {"target", to_json(e.target)},
                          {"category", e.category},
                          {"scope", e.scope},
                          {"weight", e.weight},
                          {"amount", e.amount}});
    }
    json residuals = json::array();
    for (const auto& e : a.allocation.ledger.residuals) {
        residuals.push_back({{"source", to_json(e.source)},
                             {"category", e.category},
                             {"scope", e.scope},
                             {"source_amount", e.source_amount},
                             {"allocated", e.allocated},
                             {"residual", e.residual}});
    }
    r["allocation"] = {{"ledger", ledger}, {"residuals", residuals}, {"warnings", a.allocation.ledger.warnings}};

    json unchar = json::array();
    for (const auto& u : a.characterized.uncharacterized) {
        unchar.push_back({{"flow", u.flow}, {"direction", std::string(to_string(u.direction))}, {"unit", u.unit}});
    }
    r["uncharacterized"] = unchar;

    if (a.functional_unit) {
        const auto& fu = *a.functional_unit;
        json fu_inv = json::array();
        for (const auto& [key, amount] : fu.inventory) {
            json row = detail::inventory_key_json(key);
            row.erase("component");
            row["amount"] = amount;
            fu_inv.push_back(row);
        }
        r["functional_unit"] = {{"object_type", fu.unit.object_type},
                                {"attribute", fu.unit.attribute.empty() ? "count" : fu.unit.attribute},
                                {"reference_amount", fu.unit.reference_amount.to_string()},
                                {"measured_output", fu.measured_output},
                                {"factor", fu.factor},
                                {"inventory", fu_inv},
                                {"impacts", detail::scoped_to_json(fu.impacts)}};
    } else {
        r["functional_unit"] = nullptr;
    }

    json audit_row = to_json(a.audit);
    json cols = json::array();
    for (auto c : capability_columns) {
        cols.push_back(std::string(c));
    }
    r["audit"] = {{"columns", cols}, {"row", audit_row}};
    return r;
}

/// Structural check of a report document: schema tag and the type of every
/// top-level member. Throws SchemaError naming the first offending member.
inline void validate_report(const nlohmann::json& report)
{
    using detail::json;
    if (!report.is_object()) {
        throw SchemaError("report must be a JSON object");
    }
    if (report.value("schema", "") != "susmine-report/1") {
        throw SchemaError("report: 'schema' must be \"susmine-report/1\"");
    }
    const std::vector<std::pair<const char*, json::value_t>> members{
        {"log_digest", json::value_t::string},   {"mode", json::value_t::string},
        {"scope_set", json::value_t::object},    {"summary", json::value_t::object},
        {"categories", json::value_t::object},   {"inventory", json::value_t::array},
        {"negative_amounts", json::value_t::array}, {"process_inventory", json::value_t::array},
        {"impacts", json::value_t::object},      {"totals", json::value_t::object},
        {"dfg", json::value_t::object},          {"allocation", json::value_t::object},
        {"uncharacterized", json::value_t::array}, {"audit", json::value_t::object}};
    for (const auto& [name, type] : members) {
        if (!report.contains(name)) {
            throw SchemaError(std::string("report: missing '") + name + "'");
        }
        if (report.at(name).type() != type) {
            throw SchemaError(std::string("report: '") + name + "' has the wrong type");
        }
    }
    if (!report.contains("functional_unit") || !(report["functional_unit"].is_null() || report["functional_unit"].is_object())) {
        throw SchemaError("report: 'functional_unit' must be null or an object");
    }
    for (const char* name : {"by_scope", "by_category", "unscoped", "non_activity_residual"}) {
        if (!report["totals"].contains(name) || !report["totals"][name].is_object()) {
            throw SchemaError(std::string("report: 'totals.") + name + "' must be an object");
        }
    }
}

namespace detail {

inline std::string json_number_text(const json& v)
{
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

}  // namespace detail

/// `inventory.csv`: component_kind, component_id, flow, direction, scope, amount, unit.
inline std::string report_inventory_csv(const nlohmann::json& report)
{
    std::string out = "component_kind,component_id,flow,direction,scope,amount,unit\n";
    for (const auto& row : report.at("inventory")) {
        const auto& c = row.at("component");
        out += c.at("kind").get<std::string>() + "," + detail::csv_field(c.value("id", "")) + "," +
               detail::csv_field(row.at("flow").get<std::string>()) + "," + row.at("direction").get<std::string>() +
               "," + detail::csv_field(row.at("scope").get<std::string>()) + "," +
               row.at("amount").get<std::string>() + "," + detail::csv_field(row.at("unit").get<std::string>()) +
               "\n";
    }
    return out;
}

/// `impacts.csv` (scopes collapsed) or `scoped_impacts.csv` (with a scope column),
/// after allocation.
inline std::string report_impacts_csv(const nlohmann::json& report, bool with_scope)
{
    const auto& cats = report.at("categories");
    std::string out = with_scope ? "component_kind,component_id,category,class,scope,amount,impact_unit\n"
                                 : "component_kind,component_id,category,class,amount,impact_unit\n";
    for (const auto& row : report.at("impacts").at("after_allocation")) {
        const auto& c = row.at("component");
        std::string prefix = c.at("kind").get<std::string>() + "," + detail::csv_field(c.value("id", "")) + ",";
        std::map<std::string, double> collapsed;
        for (const auto& [scope, vec] : row.at("impacts").items()) {
            for (const auto& [category, amount] : vec.items()) {
                if (with_scope) {
                    const auto& info = cats.at(category);
                    out += prefix + detail::csv_field(category) + "," + info.at("class").get<std::string>() + "," +
                           detail::csv_field(scope) + "," + detail::json_number_text(amount) + "," +
                           detail::csv_field(info.at("impact_unit").get<std::string>()) + "\n";
                } else {
                    collapsed[category] += amount.get<double>();
                }
            }
        }
        for (const auto& [category, amount] : collapsed) {
            const auto& info = cats.at(category);
            out += prefix + detail::csv_field(category) + "," + info.at("class").get<std::string>() + "," +
                   format_double(amount) + "," + detail::csv_field(info.at("impact_unit").get<std::string>()) + "\n";
        }
    }
    return out;
}

inline std::string report_ledger_csv(const nlohmann::json& report)
{
    std::string out = "source_kind,source_id,target_kind,target_id,category,scope,weight,amount\n";
    for (const auto& e : report.at("allocation").at("ledger")) {
        const auto& s = e.at("source");
        const auto& t = e.at("target");
        out += s.at("kind").get<std::string>() + "," + detail::csv_field(s.value("id", "")) + "," +
               t.at("kind").get<std::string>() + "," + detail::csv_field(t.value("id", "")) + "," +
               detail::csv_field(e.at("category").get<std::string>()) + "," +
               detail::csv_field(e.at("scope").get<std::string>()) + "," + detail::json_number_text(e.at("weight")) +
               "," + detail::json_number_text(e.at("amount")) + "\n";
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes report.json, inventory.csv, impacts.csv, scoped_impacts.csv, ledger.csv
/// and dfg.dot into `dir`, replacing earlier outputs.
inline void write_assessment(const std::filesystem::path& dir, const Assessment& a, const AnnotatedLog& al)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    nlohmann::json report = build_report(a, al);
    write_text_file(dir / "report.json", report.dump(2) + "\n");
    write_text_file(dir / "inventory.csv", report_inventory_csv(report));
    write_text_file(dir / "impacts.csv", report_impacts_csv(report, false));
    write_text_file(dir / "scoped_impacts.csv", report_impacts_csv(report, true));
    write_text_file(dir / "ledger.csv", report_ledger_csv(report));
    write_text_file(dir / "dfg.dot", emit_dot(a.dfg));
}

}  // namespace susmine
