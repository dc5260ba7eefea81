#pragma once

#include "susmine/annotation.hpp"
#include "susmine/decimal.hpp"
#include "susmine/model.hpp"

#include <charconv>
#include <map>
#include <string>
#include <vector>

namespace susmine {

struct InventoryKey {
    ComponentRef component;
    std::string flow;
    Direction direction = Direction::output;
    std::string scope;
    std::string unit;

    friend bool operator==(const InventoryKey&, const InventoryKey&) = default;
    friend auto operator<=>(const InventoryKey&, const InventoryKey&) = default;
};

/// Exact flow amounts per (component, flow, direction, scope, unit).
using Inventory = std::map<InventoryKey, Decimal>;

/// Inventory after functional-unit scaling; amounts leave the exact domain here.
using ScaledInventory = std::map<InventoryKey, double>;

/// Sum of the resolved assignments attached to exactly `ref`, without roll-up.
inline Inventory component_inventory(const AnnotatedLog& al, const ComponentRef& ref)
{
    resolve_component(ref, al.log());
    Inventory inv;
    for (const auto& r : al.resolved()) {
        if (r.component == ref) {
            inv[{r.component, r.flow, r.direction, r.scope, r.quantity.unit}] += r.quantity.amount;
        }
    }
    return inv;
}

/// Every resolved assignment grouped by the concrete component it is attached to.
inline Inventory flat_inventory(const AnnotatedLog& al)
{
    Inventory inv;
    for (const auto& r : al.resolved()) {
        inv[{r.component, r.flow, r.direction, r.scope, r.quantity.unit}] += r.quantity.amount;
    }
    return inv;
}

enum class RollupLevel { activity_type, object_type, process };

/// Maps a concrete component to its aggregate at `level`, or nothing when the
/// component does not roll up to that level. Roll-up never crosses kinds.
inline std::optional<ComponentRef> rollup_target(const ComponentRef& c, RollupLevel level, const EventLog& log)
{
    switch (level) {
    case RollupLevel::process:
        return ComponentRef::process();
    case RollupLevel::activity_type:
        if (c.kind == ComponentKind::activity_type) {
            return c;
        }
        if (c.kind == ComponentKind::activity_instance) {
            if (const auto* e = log.find_event(c.id)) {
                return ComponentRef::activity_type(e->activity);
            }
        }
        return std::nullopt;
    case RollupLevel::object_type:
        if (c.kind == ComponentKind::object_type) {
            return c;
        }
        if (c.kind == ComponentKind::object_instance) {
            if (const auto* o = log.find_object(c.id)) {
                return ComponentRef::object_type(o->object_type);
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

/// Type-level entries are the sum over their instances plus direct type-level
/// assignments; the process entry counts every resolved assignment exactly once.
inline Inventory rollup_inventory(const AnnotatedLog& al, RollupLevel level)
{
    Inventory inv;
    for (const auto& r : al.resolved()) {
        if (auto target = rollup_target(r.component, level, al.log())) {
            inv[{*target, r.flow, r.direction, r.scope, r.quantity.unit}] += r.quantity.amount;
        }
    }
    return inv;
}

/// Output reference: `reference_amount` units of `object_type`, measured by object
/// count or by the sum of a numeric attribute.
struct FunctionalUnit {
    std::string object_type;
    Decimal reference_amount = Decimal::from_integer(1);
    std::string attribute;  // empty: count of objects

    /// Parses `<type>:<amount>` or `<type>:<attribute>:<amount>`.
    static FunctionalUnit parse(const std::string& text)
    {
        FunctionalUnit fu;
        auto first = text.find(':');
        auto last = text.rfind(':');
        if (first == std::string::npos || first == 0) {
            throw SchemaError("functional unit '" + text + "' must look like <type>:<amount>");
        }
        fu.object_type = text.substr(0, first);
        if (last != first) {
            fu.attribute = text.substr(first + 1, last - first - 1);
        }
        try {
            fu.reference_amount = Decimal::parse(text.substr(last + 1));
        } catch (const DecimalError& e) {
            throw SchemaError("functional unit '" + text + "': " + e.what());
        }
        if (!fu.reference_amount.is_positive()) {
            throw SchemaError("functional unit reference amount must be > 0");
        }
        return fu;
    }
};

inline double measured_output(const FunctionalUnit& fu, const EventLog& log)
{
    double total = 0.0;
    for (const auto* o : log.objects_of_type(fu.object_type)) {
        if (fu.attribute.empty()) {
            total += 1.0;
            continue;
        }
        auto it = o->attributes.find(fu.attribute);
        std::optional<double> v = it == o->attributes.end() ? std::nullopt : numeric_value(it->second);
        if (!v) {
            throw MissingAttribute("object '" + o->object_id + "' lacks numeric attribute '" + fu.attribute + "'");
        }
        total += *v;
    }
    return total;
}

/// Multiplies every amount by reference / (total measured output of the FU type).
inline ScaledInventory scale_to_functional_unit(const Inventory& inv, const FunctionalUnit& fu, const AnnotatedLog& al)
{
    if (!fu.reference_amount.is_positive()) {
        throw SchemaError("functional unit reference amount must be > 0");
    }
    double total = measured_output(fu, al.log());
    if (total == 0.0) {
        throw ZeroOutput("no measured output of object type '" + fu.object_type + "' in the log");
    }
    double factor = fu.reference_amount.to_double() / total;
    ScaledInventory out;
    for (const auto& [key, amount] : inv) {
        out[key] = amount.to_double() * factor;
    }
    return out;
}

/// Keys with negative amounts (avoided burdens); surfaced in reports.
inline std::vector<InventoryKey> negative_entries(const Inventory& inv)
{
    std::vector<InventoryKey> out;
    for (const auto& [key, amount] : inv) {
        if (amount.is_negative()) {
            out.push_back(key);
        }
    }
    return out;
}

inline std::string format_double(double v)
{
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string inventory_csv(const Inventory& inv)
{
    std::string out = "component_kind,component_id,flow,direction,scope,amount,unit\n";
    for (const auto& [k, amount] : inv) {
        out += std::string(to_string(k.component.kind)) + "," + detail::csv_field(k.component.id) + "," +
               detail::csv_field(k.flow) + "," + std::string(to_string(k.direction)) + "," +
               detail::csv_field(k.scope) + "," + amount.to_string() + "," + detail::csv_field(k.unit) + "\n";
    }
    return out;
}

inline std::string inventory_csv(const ScaledInventory& inv)
{
    std::string out = "component_kind,component_id,flow,direction,scope,amount,unit\n";
    for (const auto& [k, amount] : inv) {
        out += std::string(to_string(k.component.kind)) + "," + detail::csv_field(k.component.id) + "," +
               detail::csv_field(k.flow) + "," + std::string(to_string(k.direction)) + "," +
               detail::csv_field(k.scope) + "," + format_double(amount) + "," + detail::csv_field(k.unit) + "\n";
    }
    return out;
}

}  // namespace susmine
