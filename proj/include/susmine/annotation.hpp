#pragma once

#include "susmine/decimal.hpp"
#include "susmine/error.hpp"
#include "susmine/model.hpp"
#include "susmine/ocel.hpp"
#include "susmine/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace susmine {

/// Reserved scope label for assignments that carry no scope tag.
inline constexpr std::string_view unscoped = "unscoped";

enum class Direction { input, output };
enum class Basis { per_instance, absolute };

inline std::string_view to_string(Direction d) { return d == Direction::input ? "input" : "output"; }
inline std::string_view to_string(Basis b) { return b == Basis::per_instance ? "per_instance" : "absolute"; }

/// A quantified input or output flow attached to a process component.
struct FlowAssignment {
    ComponentRef component;
    std::string flow;
    Direction direction = Direction::output;
    Quantity quantity;
    std::optional<std::string> scope;
    Basis basis = Basis::absolute;
    // Instance-level only: suppresses per-instance type expansions of the same
    // flow and direction on this instance.
    bool override_type_level = false;

    std::string scope_label() const { return scope ? *scope : std::string(unscoped); }
};

enum class ImpactClass { climate, environmental, social };

inline std::string_view to_string(ImpactClass c)
{
    switch (c) {
    case ImpactClass::climate: return "climate";
    case ImpactClass::environmental: return "environmental";
    case ImpactClass::social: return "social";
    }
    return "environmental";
}

inline std::optional<ImpactClass> parse_impact_class(std::string_view s)
{
    if (s == "climate") return ImpactClass::climate;
    if (s == "environmental") return ImpactClass::environmental;
    if (s == "social") return ImpactClass::social;
    return std::nullopt;
}

struct CategoryInfo {
    std::string impact_unit;
    ImpactClass impact_class = ImpactClass::environmental;

    friend bool operator==(const CategoryInfo&, const CategoryInfo&) = default;
};

/// Which assignment directions a characterization entry applies to.
enum class DirectionFilter { any, input, output };

inline std::string_view to_string(DirectionFilter d)
{
    switch (d) {
    case DirectionFilter::any: return "any";
    case DirectionFilter::input: return "input";
    case DirectionFilter::output: return "output";
    }
    return "any";
}

inline bool matches(DirectionFilter f, Direction d)
{
    return f == DirectionFilter::any || (f == DirectionFilter::input) == (d == Direction::input);
}

struct CharacterizationEntry {
    std::string flow;
    std::string unit;
    DirectionFilter direction = DirectionFilter::any;
    std::map<std::string, double> factors;  // impact category -> impact unit per flow unit
};

class CharacterizationTable {
public:
    void add_category(const std::string& name, CategoryInfo info)
    {
        if (name.empty() || info.impact_unit.empty()) {
            throw SchemaError("impact category and its unit must be non-empty");
        }
        auto [it, inserted] = categories_.emplace(name, info);
        if (!inserted && !(it->second == info)) {
            throw SchemaError("impact category '" + name + "' declared with conflicting unit or class");
        }
    }

    /// Adds factors for (flow, unit); repeated calls for the same key merge their factors.
    void add_factor(const std::string& flow, const std::string& unit, DirectionFilter direction,
                    const std::string& category, double factor)
    {
        if (categories_.count(category) == 0) {
            throw SchemaError("factor for '" + flow + "' uses undeclared category '" + category + "'");
        }
        if (!std::isfinite(factor)) {
            throw SchemaError("factor for '" + flow + "' -> '" + category + "' is not finite");
        }
        auto key = std::make_pair(flow, unit);
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            it = entries_.emplace(key, CharacterizationEntry{flow, unit, direction, {}}).first;
        } else if (it->second.direction != direction) {
            throw SchemaError("entry (" + flow + ", " + unit + ") declared with conflicting direction filters");
        }
        if (!it->second.factors.emplace(category, factor).second) {
            throw SchemaError("duplicate factor (" + flow + ", " + unit + ") -> " + category);
        }
    }

    const std::map<std::string, CategoryInfo>& categories() const { return categories_; }
    const std::map<std::pair<std::string, std::string>, CharacterizationEntry>& entries() const { return entries_; }

    const CategoryInfo& category(const std::string& name) const
    {
        auto it = categories_.find(name);
        if (it == categories_.end()) {
            throw SchemaError("undeclared impact category '" + name + "'");
        }
        return it->second;
    }

    std::vector<const CharacterizationEntry*> entries_for(const std::string& flow, Direction direction) const
    {
        std::vector<const CharacterizationEntry*> out;
        for (auto it = entries_.lower_bound({flow, std::string()}); it != entries_.end() && it->first.first == flow;
             ++it) {
            if (matches(it->second.direction, direction)) {
                out.push_back(&it->second);
            }
        }
        return out;
    }

    bool empty() const { return entries_.empty() && categories_.empty(); }

private:
    std::map<std::string, CategoryInfo> categories_;
    std::map<std::pair<std::string, std::string>, CharacterizationEntry> entries_;
};

/// Ordered, disjoint scope buckets.
struct ScopeSet {
    std::string name;
    std::vector<std::string> scopes;

    static ScopeSet ghg() { return {"ghg", {"scope1", "scope2", "scope3"}}; }
    static ScopeSet lca() { return {"lca", {"gate_to_gate", "upstream"}}; }

    static std::optional<ScopeSet> preset(std::string_view name)
    {
        if (name == "ghg") return ghg();
        if (name == "lca") return lca();
        return std::nullopt;
    }

    bool contains(const std::string& label) const
    {
        return std::find(scopes.begin(), scopes.end(), label) != scopes.end();
    }

    void validate() const
    {
        if (name.empty()) {
            throw SchemaError("scope set needs a name");
        }
        if (scopes.empty()) {
            throw SchemaError("scope set '" + name + "' has no scopes");
        }
        std::set<std::string> seen;
        for (const auto& s : scopes) {
            if (s.empty() || s == unscoped) {
                throw SchemaError("scope label '" + s + "' is empty or reserved");
            }
            if (!seen.insert(s).second) {
                throw SchemaError("scope label '" + s + "' repeated in set '" + name + "'");
            }
        }
    }

    friend bool operator==(const ScopeSet&, const ScopeSet&) = default;
};

enum class KeyKind { equal, attribute_proportional, mass, economic_value };

struct AllocationKey {
    KeyKind kind = KeyKind::equal;
    std::string attribute;  // only for attribute_proportional

    std::string attribute_name() const
    {
        switch (kind) {
        case KeyKind::mass: return "mass_kg";
        case KeyKind::economic_value: return "economic_value";
        case KeyKind::attribute_proportional: return attribute;
        case KeyKind::equal: break;
        }
        return {};
    }

    std::string describe() const
    {
        switch (kind) {
        case KeyKind::equal: return "equal";
        case KeyKind::mass: return "mass";
        case KeyKind::economic_value: return "economic_value";
        case KeyKind::attribute_proportional: return "attribute:" + attribute;
        }
        return "equal";
    }
};

/// Targets are the events related to the source object, optionally restricted to qualifiers.
struct RelatedEvents {
    std::vector<std::string> qualifiers;
};

using TargetSelector = std::variant<RelatedEvents, std::vector<ComponentRef>>;

struct AllocationRule {
    ComponentRef source;
    TargetSelector targets = RelatedEvents{};
    AllocationKey key;
    Decimal fraction = Decimal::from_integer(1);
};

struct AnnotationBundle {
    UnitRegistry registry = UnitRegistry::with_defaults();
    std::vector<FlowAssignment> assignments;
    CharacterizationTable table;
    ScopeSet scope_set = ScopeSet::ghg();
    std::vector<AllocationRule> rules;
};

inline nlohmann::json to_json(const ComponentRef& ref)
{
    nlohmann::json j{{"kind", std::string(to_string(ref.kind))}};
    if (ref.kind != ComponentKind::process) {
        j["id"] = ref.id;
    }
    return j;
}

/// Rejects a climate category not measured in kg CO2e when the GHG preset is active.
inline void check_table_against_scopes(const CharacterizationTable& table, const ScopeSet& scopes)
{
    if (scopes.name != "ghg") {
        return;
    }
    for (const auto& [name, info] : table.categories()) {
        if (info.impact_class == ImpactClass::climate && info.impact_unit != "kg CO2e") {
            throw SchemaError("climate category '" + name + "' must use 'kg CO2e' under the ghg scope preset");
        }
    }
}

namespace detail {

inline Decimal parse_amount(const json& v, const std::string& where)
{
    try {
        if (v.is_string()) {
            return Decimal::parse(v.get<std::string>());
        }
        if (v.is_number_integer()) {
            return Decimal::from_integer(v.get<std::int64_t>());
        }
        if (v.is_number()) {
            return Decimal::from_double(v.get<double>());
        }
    } catch (const DecimalError& e) {
        throw SchemaError(where + ": " + e.what());
    }
    throw SchemaError(where + " must be a decimal string or number");
}

inline double parse_factor(const json& v, const std::string& where)
{
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        try {
            return Decimal::parse(v.get<std::string>()).to_double();
        } catch (const DecimalError& e) {
            throw SchemaError(where + ": " + e.what());
        }
    }
    throw SchemaError(where + " must be a number");
}

inline ComponentRef parse_component_ref(const json& v, const std::string& where)
{
    std::string kind_name = require_string(v, "kind", where);
    auto kind = parse_component_kind(kind_name);
    if (!kind) {
        throw SchemaError(where + ".kind '" + kind_name + "' is not a component kind");
    }
    ComponentRef ref{*kind, {}};
    if (*kind != ComponentKind::process) {
        ref.id = require_string(v, "id", where);
        if (ref.id.empty()) {
            throw SchemaError(where + ".id must be non-empty");
        }
    } else if (v.contains("id")) {
        throw SchemaError(where + ": a process reference carries no id");
    }
    return ref;
}

inline DirectionFilter parse_direction_filter(const std::string& s, const std::string& where)
{
    if (s.empty() || s == "any") return DirectionFilter::any;
    if (s == "input") return DirectionFilter::input;
    if (s == "output") return DirectionFilter::output;
    throw SchemaError(where + " direction '" + s + "' must be input, output or any");
}

inline ScopeSet parse_scope_set(const json& v, const std::string& where)
{
    ScopeSet set;
    if (v.is_string()) {
        auto preset = ScopeSet::preset(v.get<std::string>());
        if (!preset) {
            throw SchemaError(where + " names unknown preset '" + v.get<std::string>() + "'");
        }
        set = *preset;
    } else {
        set.name = require_string(v, "name", where);
        for (const auto& s : require_array(v, "scopes", where)) {
            if (!s.is_string()) {
                throw SchemaError(where + ".scopes entries must be strings");
            }
            set.scopes.push_back(s.get<std::string>());
        }
    }
    set.validate();
    return set;
}

inline UnitRegistry parse_registry(const json& v)
{
    UnitRegistry reg = UnitRegistry::with_defaults();
    if (const json* units = optional_array(v, "units", "units")) {
        for (const auto& u : *units) {
            if (!u.is_string()) {
                throw SchemaError("units.units entries must be strings");
            }
            reg.add_unit(u.get<std::string>());
        }
    }
    if (const json* convs = optional_array(v, "conversions", "units")) {
        for (std::size_t i = 0; i < convs->size(); ++i) {
            std::string w = "units.conversions[" + std::to_string(i) + "]";
            const json& c = (*convs)[i];
            reg.add_conversion(require_string(c, "from", w), require_string(c, "to", w),
                               parse_factor(require_key(c, "factor", w), w + ".factor"));
        }
    }
    reg.validate();
    return reg;
}

inline AllocationKey parse_key(const json& v, const std::string& where)
{
    AllocationKey key;
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "equal") key.kind = KeyKind::equal;
        else if (s == "mass") key.kind = KeyKind::mass;
        else if (s == "economic_value") key.kind = KeyKind::economic_value;
        else throw SchemaError(where + " '" + s + "' is not an allocation key");
        return key;
    }
    key.kind = KeyKind::attribute_proportional;
    key.attribute = require_string(v, "attribute", where);
    if (key.attribute.empty()) {
        throw SchemaError(where + ".attribute must be non-empty");
    }
    return key;
}

inline AllocationRule parse_rule(const json& v, const std::string& where)
{
    AllocationRule rule;
    rule.source = parse_component_ref(require_key(v, "source", where), where + ".source");
    const json& targets = require_key(v, "targets", where);
    if (targets.is_string()) {
        if (targets.get<std::string>() != "related_events") {
            throw SchemaError(where + ".targets must be \"related_events\" or a list of component references");
        }
        RelatedEvents sel;
        if (const json* q = optional_array(v, "qualifiers", where)) {
            for (const auto& s : *q) {
                if (!s.is_string()) {
                    throw SchemaError(where + ".qualifiers entries must be strings");
                }
                sel.qualifiers.push_back(s.get<std::string>());
            }
        }
        rule.targets = sel;
    } else if (targets.is_array()) {
        std::vector<ComponentRef> refs;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            refs.push_back(parse_component_ref(targets[i], where + ".targets[" + std::to_string(i) + "]"));
        }
        rule.targets = refs;
    } else {
        throw SchemaError(where + ".targets must be \"related_events\" or an array");
    }
    if (auto it = v.find("key"); it != v.end()) {
        rule.key = parse_key(*it, where + ".key");
    }
    if (auto it = v.find("fraction"); it != v.end()) {
        rule.fraction = parse_amount(*it, where + ".fraction");
        if (rule.fraction.is_negative() || rule.fraction > Decimal::from_integer(1)) {
            throw SchemaError(where + ".fraction must lie in [0, 1]");
        }
    }
    return rule;
}

}  // namespace detail

/// Parses an annotation bundle (`"schema": "susmine/1"`).
///
/// `scope_override` replaces the bundle's own scope set (used for the CLI `--scopes` flag).
inline AnnotationBundle parse_annotations(std::string_view document,
                                          const std::optional<ScopeSet>& scope_override = std::nullopt)
{
    using detail::json;
    json doc = detail::parse_json(document, "annotation bundle");
    if (!doc.is_object()) {
        throw SchemaError("annotation bundle must be a JSON object");
    }
    std::string schema = detail::require_string(doc, "schema", "bundle");
    if (schema != "susmine/1") {
        throw SchemaError("unsupported bundle schema '" + schema + "'");
    }

    AnnotationBundle bundle;
    if (auto it = doc.find("units"); it != doc.end()) {
        if (!it->is_object()) {
            throw SchemaError("bundle.units must be an object");
        }
        bundle.registry = detail::parse_registry(*it);
    }
    if (scope_override) {
        scope_override->validate();
        bundle.scope_set = *scope_override;
    } else if (auto it = doc.find("scopes"); it != doc.end()) {
        bundle.scope_set = detail::parse_scope_set(*it, "bundle.scopes");
    }

    if (auto it = doc.find("categories"); it != doc.end()) {
        if (!it->is_object()) {
            throw SchemaError("bundle.categories must be an object");
        }
        for (const auto& [name, info] : it->items()) {
            std::string w = "categories." + name;
            std::string cls_name = detail::require_string(info, "class", w);
            auto cls = parse_impact_class(cls_name);
            if (!cls) {
                throw SchemaError(w + ".class '" + cls_name + "' must be climate, environmental or social");
            }
            bundle.table.add_category(name, {detail::require_string(info, "impact_unit", w), *cls});
        }
    }
    if (const json* factors = detail::optional_array(doc, "factors", "bundle")) {
        for (std::size_t i = 0; i < factors->size(); ++i) {
            std::string w = "factors[" + std::to_string(i) + "]";
            const json& f = (*factors)[i];
            std::string flow = detail::require_string(f, "flow", w);
            std::string unit = detail::require_string(f, "unit", w);
            bundle.registry.require_unit(unit);
            std::string dir = f.contains("direction") ? detail::require_string(f, "direction", w) : "any";
            auto filter = detail::parse_direction_filter(dir, w);
            const json& map = detail::require_key(f, "factors", w);
            if (!map.is_object()) {
                throw SchemaError(w + ".factors must be an object");
            }
            for (const auto& [cat, value] : map.items()) {
                bundle.table.add_factor(flow, unit, filter, cat, detail::parse_factor(value, w + ".factors." + cat));
            }
        }
    }
    check_table_against_scopes(bundle.table, bundle.scope_set);

    if (const json* assigns = detail::optional_array(doc, "assignments", "bundle")) {
        for (std::size_t i = 0; i < assigns->size(); ++i) {
            std::string w = "assignments[" + std::to_string(i) + "]";
            const json& a = (*assigns)[i];
            FlowAssignment fa;
            fa.component = detail::parse_component_ref(detail::require_key(a, "component", w), w + ".component");
            fa.flow = detail::require_string(a, "flow", w);
            if (fa.flow.empty()) {
                throw SchemaError(w + ".flow must be non-empty");
            }
            std::string dir = detail::require_string(a, "direction", w);
            if (dir == "input") fa.direction = Direction::input;
            else if (dir == "output") fa.direction = Direction::output;
            else throw SchemaError(w + ".direction must be input or output");
            fa.quantity.amount = detail::parse_amount(detail::require_key(a, "amount", w), w + ".amount");
            fa.quantity.unit = detail::require_string(a, "unit", w);
            bundle.registry.require_unit(fa.quantity.unit);
            if (auto s = a.find("scope"); s != a.end() && !s->is_null()) {
                if (!s->is_string()) {
                    throw SchemaError(w + ".scope must be a string");
                }
                std::string label = s->get<std::string>();
                if (label != unscoped) {
                    if (!bundle.scope_set.contains(label)) {
                        throw UnknownScope("scope '" + label + "' in " + w + " is not in scope set '" +
                                           bundle.scope_set.name + "'");
                    }
                    fa.scope = label;
                }
            }
            if (auto b = a.find("basis"); b != a.end()) {
                if (*b == "per_instance") fa.basis = Basis::per_instance;
                else if (*b == "absolute") fa.basis = Basis::absolute;
                else throw SchemaError(w + ".basis must be per_instance or absolute");
            }
            if (fa.basis == Basis::per_instance && !is_type_level(fa.component.kind)) {
                throw SchemaError(w + ": basis per_instance is only legal on activity_type or object_type");
            }
            if (auto o = a.find("override"); o != a.end()) {
                if (!o->is_boolean()) {
                    throw SchemaError(w + ".override must be a boolean");
                }
                fa.override_type_level = o->get<bool>();
                if (fa.override_type_level && !is_instance_level(fa.component.kind)) {
                    throw SchemaError(w + ": override is only legal on instance-level components");
                }
            }
            bundle.assignments.push_back(std::move(fa));
        }
    }

    if (const json* rules = detail::optional_array(doc, "allocations", "bundle")) {
        for (std::size_t i = 0; i < rules->size(); ++i) {
            bundle.rules.push_back(detail::parse_rule((*rules)[i], "allocations[" + std::to_string(i) + "]"));
        }
    }
    return bundle;
}

namespace detail {

inline std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field.push_back(c);
            any = true;
        }
    }
    if (quoted) {
        throw SyntaxError("unterminated quoted CSV field");
    }
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    return out + "\"";
}

}  // namespace detail

/// Loads a characterization table from CSV with header
/// `flow,unit,category,factor,impact_unit,class` and an optional `direction` column.
inline CharacterizationTable parse_characterization_csv(std::string_view text, const UnitRegistry& registry)
{
    auto rows = detail::parse_csv(text);
    if (rows.empty()) {
        throw SchemaError("characterization CSV has no header");
    }
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        col[rows[0][i]] = i;
    }
    for (const char* required : {"flow", "unit", "category", "factor", "impact_unit", "class"}) {
        if (col.count(required) == 0) {
            throw SchemaError(std::string("characterization CSV lacks column '") + required + "'");
        }
    }
    CharacterizationTable table;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::string where = "CSV line " + std::to_string(r + 1);
        if (row.size() != rows[0].size()) {
            throw SchemaError(where + " has " + std::to_string(row.size()) + " fields, header has " +
                              std::to_string(rows[0].size()));
        }
        auto cls = parse_impact_class(row[col["class"]]);
        if (!cls) {
            throw SchemaError(where + ": class '" + row[col["class"]] + "' must be climate, environmental or social");
        }
        table.add_category(row[col["category"]], {row[col["impact_unit"]], *cls});
        registry.require_unit(row[col["unit"]]);
        DirectionFilter filter = DirectionFilter::any;
        if (auto it = col.find("direction"); it != col.end()) {
            filter = detail::parse_direction_filter(row[it->second], where);
        }
        double factor = 0.0;
        try {
            factor = Decimal::parse(row[col["factor"]]).to_double();
        } catch (const DecimalError& e) {
            throw SchemaError(where + ": " + e.what());
        }
        table.add_factor(row[col["flow"]], row[col["unit"]], filter, row[col["category"]], factor);
    }
    return table;
}

/// One flow assignment attached to a concrete component after type expansion.
struct ResolvedAssignment {
    ComponentRef component;
    std::string flow;
    Direction direction = Direction::output;
    Quantity quantity;
    std::string scope;            // scope label or "unscoped"
    std::size_t origin = 0;       // index into the bundle's assignments
};

/// Log plus bound annotations. Immutable after construction.
class AnnotatedLog {
public:
    AnnotatedLog(EventLog log, AnnotationBundle bundle, std::vector<ResolvedAssignment> resolved)
        : log_(std::move(log)), bundle_(std::move(bundle)), resolved_(std::move(resolved)), digest_(log_digest(log_))
    {
    }

    const EventLog& log() const { return log_; }
    const AnnotationBundle& bundle() const { return bundle_; }
    const std::vector<FlowAssignment>& assignments() const { return bundle_.assignments; }
    const std::vector<ResolvedAssignment>& resolved() const { return resolved_; }
    const CharacterizationTable& table() const { return bundle_.table; }
    const ScopeSet& scope_set() const { return bundle_.scope_set; }
    const UnitRegistry& registry() const { return bundle_.registry; }
    const std::vector<AllocationRule>& rules() const { return bundle_.rules; }
    const std::string& digest() const { return digest_; }

private:
    EventLog log_;
    AnnotationBundle bundle_;
    std::vector<ResolvedAssignment> resolved_;
    std::string digest_;
};

/// Resolves every reference in `bundle` against `log` and expands per-instance
/// type-level assignments into one assignment per instance of that type.
inline AnnotatedLog bind_annotations(const EventLog& log, AnnotationBundle bundle)
{
    std::set<std::tuple<ComponentRef, std::string, Direction>> overridden;
    for (const auto& a : bundle.assignments) {
        resolve_component(a.component, log);
        if (a.override_type_level) {
            overridden.emplace(a.component, a.flow, a.direction);
        }
    }
    for (const auto& rule : bundle.rules) {
        resolve_component(rule.source, log);
        if (const auto* refs = std::get_if<std::vector<ComponentRef>>(&rule.targets)) {
            for (const auto& t : *refs) {
                resolve_component(t, log);
            }
        }
    }

    std::vector<ResolvedAssignment> resolved;
    for (std::size_t i = 0; i < bundle.assignments.size(); ++i) {
        const auto& a = bundle.assignments[i];
        auto emit = [&](ComponentRef target) {
            resolved.push_back({std::move(target), a.flow, a.direction, a.quantity, a.scope_label(), i});
        };
        if (a.basis == Basis::absolute) {
            emit(a.component);
            continue;
        }
        auto expand = [&](ComponentRef instance) {
            if (overridden.count({instance, a.flow, a.direction}) == 0) {
                emit(std::move(instance));
            }
        };
        if (a.component.kind == ComponentKind::activity_type) {
            for (const auto* e : log.events_of_activity(a.component.id)) {
                expand(ComponentRef::activity_instance(e->event_id));
            }
        } else {
            for (const auto* o : log.objects_of_type(a.component.id)) {
                expand(ComponentRef::object_instance(o->object_id));
            }
        }
    }
    return AnnotatedLog(log, std::move(bundle), std::move(resolved));
}

}  // namespace susmine
