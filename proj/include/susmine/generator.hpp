#pragma once

#include "susmine/decimal.hpp"
#include "susmine/model.hpp"
#include "susmine/ocel.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace susmine {

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t events = 50;
};

/// Synthetic log, annotation bundle and the totals they must produce.
struct GeneratedBundle {
    std::string log_json;
    std::string annotations_json;
    nlohmann::json truth;
};

namespace gen {

/// Seed-determined randomness. Only raw `std::mt19937_64` outputs are used (the
/// engine's sequence is fixed by the C++ standard); ranges are mapped by rejection
/// sampling so results do not depend on library distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = 0;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t between(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned percent) { return below(100) < percent; }

    template <class T>
    const T& pick(const std::vector<T>& v)
    {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

struct FlowSpec {
    std::string flow;
    std::string direction;
    std::vector<std::string> units;  // first is the table unit
};

struct Factor {
    std::string category;
    double value;
};

// Characterization data shared by the emitted bundle and the ground truth.
inline const std::vector<FlowSpec>& flows()
{
    static const std::vector<FlowSpec> f{
        {"CO2", "output", {"kg", "g"}},
        {"CH4", "output", {"kg"}},
        {"electricity", "input", {"kWh", "Wh"}},
        {"CFC-11", "output", {"kg"}},
        {"accident", "output", {"count"}},
        {"diesel", "input", {"kg"}},
    };
    return f;
}

inline std::vector<Factor> factors_of(const std::string& flow)
{
    if (flow == "CO2") return {{"climate_change", 1.0}};
    if (flow == "CH4") return {{"climate_change", 28.0}};
    if (flow == "electricity") return {{"climate_change", 0.4}};
    if (flow == "CFC-11") return {{"climate_change", 4660.0}, {"ozone_depletion", 1.0}};
    if (flow == "accident") return {{"work_accidents", 1.0}};
    if (flow == "diesel") return {{"climate_change", 3.2}};
    return {};
}

inline double conversion_to_table_unit(const std::string& unit)
{
    return (unit == "g" || unit == "Wh") ? 0.001 : 1.0;
}

struct Record {
    std::string kind;
    std::string id;
    std::string flow;
    std::string direction;
    Decimal amount;
    std::string unit;
    std::string scope;  // "" = unscoped
    bool per_instance = false;
    bool override_flag = false;
};

inline std::string pad_id(const char* prefix, std::size_t i, std::size_t total)
{
    std::string n = std::to_string(i);
    std::size_t width = std::to_string(total).size();
    return prefix + std::string(width > n.size() ? width - n.size() : 0, '0') + n;
}

}  // namespace gen

/// Generates a log and bundle from `config.seed`, with ground truth computed by
/// direct summation over the generated records.
inline GeneratedBundle generate_bundle(const GeneratorConfig& config)
{
    using nlohmann::json;
    gen::Rng rng(config.seed);
    const std::size_t n_events = config.events;

    const std::vector<std::string> activities{"register", "pick", "pack", "ship", "invoice", "deliver"};
    std::set<std::string> activity_types;
    std::set<std::string> object_types;
    std::vector<ObjectInstance> objects;
    std::vector<Event> events;
    std::vector<Relation> relations;

    std::vector<std::string> orders, items, machines, trucks;
    if (n_events > 0) {
        activity_types.insert(activities.begin(), activities.end());
        object_types = {"order", "item", "machine", "truck"};
        std::size_t n_orders = std::max<std::size_t>(1, n_events / 4);
        std::size_t n_items = std::max<std::size_t>(1, n_events / 3);
        std::size_t n_trucks = 1 + n_events / 25;
        for (std::size_t i = 1; i <= n_orders; ++i) {
            ObjectInstance o{gen::pad_id("o", i, n_orders), "order", {}};
            o.attributes["economic_value"] = static_cast<std::int64_t>(rng.between(10, 500));
            o.attributes["mass_kg"] = static_cast<double>(rng.between(1, 400)) / 8.0;
            orders.push_back(o.object_id);
            objects.push_back(std::move(o));
        }
        for (std::size_t i = 1; i <= n_items; ++i) {
            ObjectInstance o{gen::pad_id("i", i, n_items), "item", {}};
            o.attributes["mass_kg"] = static_cast<double>(rng.between(1, 80)) / 4.0;
            items.push_back(o.object_id);
            objects.push_back(std::move(o));
        }
        for (std::size_t i = 1; i <= 2; ++i) {
            machines.push_back("machine" + std::to_string(i));
            objects.push_back({machines.back(), "machine", {}});
        }
        for (std::size_t i = 1; i <= n_trucks; ++i) {
            trucks.push_back(gen::pad_id("t", i, n_trucks));
            objects.push_back({trucks.back(), "truck", {}});
        }
    }

    auto base = parse_timestamp("2024-03-01T08:00:00Z").value();
    auto t = base;
    for (std::size_t i = 1; i <= n_events; ++i) {
        Event e;
        e.event_id = gen::pad_id("e", i, n_events);
        e.activity = rng.pick(activities);
        // zero increments produce timestamp ties on purpose
        t += std::chrono::minutes(rng.between(0, 90));
        e.timestamp = t;
        e.attributes["duration_h"] = static_cast<double>(rng.between(1, 40)) / 4.0;
        e.attributes["operator"] = std::string(rng.chance(50) ? "alice" : "bob");
        relations.push_back({e.event_id, rng.pick(orders), "order"});
        for (std::int64_t k = rng.between(0, 2); k > 0; --k) {
            relations.push_back({e.event_id, rng.pick(items), "item"});
        }
        if (rng.chance(50)) {
            relations.push_back({e.event_id, rng.pick(machines), "uses"});
        }
        if ((e.activity == "ship" || e.activity == "deliver") && rng.chance(80)) {
            relations.push_back({e.event_id, rng.pick(trucks), "transport"});
        }
        events.push_back(std::move(e));
    }
    EventLog log(activity_types, object_types, events, objects, relations);

    // --- annotations -------------------------------------------------------------
    const std::vector<std::string> scopes{"scope1", "scope2", "scope3", ""};
    std::vector<gen::Record> records;
    auto random_amount = [&](bool allow_negative) {
        std::int64_t milli = rng.between(1, 50000);
        if (allow_negative && rng.chance(4)) {
            milli = -rng.between(1, 500);
        }
        return Decimal::parse(std::to_string(milli) + "e-3");
    };
    auto random_flow_record = [&](std::string kind, std::string id, bool per_instance) {
        const auto& spec = rng.pick(gen::flows());
        gen::Record r;
        r.kind = std::move(kind);
        r.id = std::move(id);
        r.flow = spec.flow;
        r.direction = spec.direction;
        r.unit = rng.pick(spec.units);
        r.amount = random_amount(true);
        r.scope = rng.pick(scopes);
        r.per_instance = per_instance;
        return r;
    };
    if (n_events > 0) {
        for (const auto& e : log.events()) {
            if (rng.chance(60)) {
                for (std::int64_t k = rng.between(1, 2); k > 0; --k) {
                    records.push_back(random_flow_record("activity_instance", e.event_id, false));
                }
            }
        }
        for (const auto& a : activities) {
            if (rng.chance(50)) {
                records.push_back(random_flow_record("activity_type", a, true));
            }
            if (rng.chance(30)) {
                records.push_back(random_flow_record("activity_type", a, false));
            }
        }
        // An instance override of some per-instance type assignment.
        for (const auto& r : std::vector<gen::Record>(records)) {
            if (r.kind == "activity_type" && r.per_instance && rng.chance(50)) {
                auto instances = log.events_of_activity(r.id);
                if (!instances.empty()) {
                    gen::Record o = r;
                    o.kind = "activity_instance";
                    o.id = instances[rng.below(instances.size())]->event_id;
                    o.per_instance = false;
                    o.override_flag = true;
                    o.amount = random_amount(false);
                    records.push_back(o);
                }
            }
        }
        for (const auto& m : machines) {
            for (std::int64_t k = rng.between(1, 3); k > 0; --k) {
                auto r = random_flow_record("object_instance", m, false);
                r.amount = random_amount(false);
                r.scope = "scope3";
                records.push_back(r);
            }
        }
        for (const auto& tr : trucks) {
            gen::Record r{"object_instance", tr, "diesel", "input", random_amount(false), "kg", "scope1"};
            records.push_back(r);
        }
        if (rng.chance(50)) {
            records.push_back(random_flow_record("object_type", "item", true));
        }
        if (rng.chance(30)) {
            records.push_back(random_flow_record("object_type", "order", false));
        }
        records.push_back({"process", "", "electricity", "input", random_amount(false), "kWh", "scope2"});
    }

    struct RuleRecord {
        std::string kind;
        std::string id;
        std::string key;
        std::string fraction;
        std::vector<std::string> explicit_targets;  // activity_instance ids
    };
    std::vector<RuleRecord> rules;
    const std::vector<std::string> fractions{"1", "0.5", "0.25", "0.75", "0", "1"};
    const std::vector<std::string> keys{"equal", "duration_h"};
    for (const auto& m : machines) {
        if (!log.relations_of_object(m).empty()) {
            rules.push_back({"object_instance", m, rng.pick(keys), rng.pick(fractions), {}});
        }
    }
    for (const auto& tr : trucks) {
        if (log.relations_of_object(tr).empty() || log.events().empty()) {
            continue;
        }
        if (rng.chance(50)) {
            rules.push_back({"object_instance", tr, "equal", rng.pick(fractions), {}});
        } else {
            RuleRecord r{"object_instance", tr, rng.pick(keys), rng.pick(fractions), {}};
            for (std::int64_t k = rng.between(1, 3); k > 0; --k) {
                r.explicit_targets.push_back(log.events()[rng.below(log.events().size())].event_id);
            }
            rules.push_back(r);
        }
    }

    // --- bundle JSON ---------------------------------------------------------------
    json bundle;
    bundle["schema"] = "susmine/1";
    bundle["scopes"] = "ghg";
    bundle["units"] = {{"units", json::array()},
                       {"conversions",
                        {{{"from", "Wh"}, {"to", "kWh"}, {"factor", 0.001}},
                         {{"from", "g"}, {"to", "kg"}, {"factor", 0.001}}}}};
    bundle["categories"] = {
        {"climate_change", {{"impact_unit", "kg CO2e"}, {"class", "climate"}}},
        {"ozone_depletion", {{"impact_unit", "kg CFCe"}, {"class", "environmental"}}},
        {"work_accidents", {{"impact_unit", "count"}, {"class", "social"}}},
    };
    bundle["factors"] = json::array();
    for (const auto& spec : gen::flows()) {
        json fmap = json::object();
        for (const auto& f : gen::factors_of(spec.flow)) {
            fmap[f.category] = f.value;
        }
        bundle["factors"].push_back(
            {{"flow", spec.flow}, {"unit", spec.units.front()}, {"direction", spec.direction}, {"factors", fmap}});
    }
    bundle["assignments"] = json::array();
    for (const auto& r : records) {
        json comp{{"kind", r.kind}};
        if (r.kind != "process") {
            comp["id"] = r.id;
        }
        json a{{"component", comp},
               {"flow", r.flow},
               {"direction", r.direction},
               {"amount", r.amount.to_string()},
               {"unit", r.unit},
               {"basis", r.per_instance ? "per_instance" : "absolute"}};
        if (!r.scope.empty()) {
            a["scope"] = r.scope;
        }
        if (r.override_flag) {
            a["override"] = true;
        }
        bundle["assignments"].push_back(a);
    }
    bundle["allocations"] = json::array();
    for (const auto& r : rules) {
        json rule{{"source", {{"kind", r.kind}, {"id", r.id}}}, {"fraction", r.fraction}};
        if (r.key == "equal") {
            rule["key"] = "equal";
        } else {
            rule["key"] = {{"attribute", r.key}};
        }
        if (r.explicit_targets.empty()) {
            rule["targets"] = "related_events";
        } else {
            json targets = json::array();
            for (const auto& id : r.explicit_targets) {
                targets.push_back({{"kind", "activity_instance"}, {"id", id}});
            }
            rule["targets"] = targets;
        }
        bundle["allocations"].push_back(rule);
    }

    // --- ground truth by direct summation ------------------------------------------
    std::set<std::tuple<std::string, std::string, std::string>> overridden;  // (event, flow, direction)
    for (const auto& r : records) {
        if (r.override_flag) {
            overridden.emplace(r.id, r.flow, r.direction);
        }
    }
    std::map<std::string, std::int64_t> activity_counts;
    std::map<std::string, std::int64_t> type_counts;
    for (const auto& e : events) {
        ++activity_counts[e.activity];
    }
    for (const auto& o : objects) {
        ++type_counts[o.object_type];
    }

    std::map<std::tuple<std::string, std::string, std::string, std::string>, Decimal> inventory_totals;
    std::map<std::pair<std::string, std::string>, double> impact_totals;            // (category, scope)
    std::map<std::string, std::map<std::pair<std::string, std::string>, double>> object_impacts;  // by object id
    for (const auto& r : records) {
        std::int64_t multiplicity = 1;
        if (r.per_instance) {
            multiplicity = 0;
            if (r.kind == "activity_type") {
                for (const auto& e : events) {
                    if (e.activity == r.id && overridden.count({e.event_id, r.flow, r.direction}) == 0) {
                        ++multiplicity;
                    }
                }
            } else {
                multiplicity = type_counts[r.id];
            }
        }
        std::string scope = r.scope.empty() ? "unscoped" : r.scope;
        inventory_totals[{r.flow, r.direction, scope, r.unit}] += r.amount * multiplicity;
        for (const auto& f : gen::factors_of(r.flow)) {
            double contribution = r.amount.to_double() * static_cast<double>(multiplicity) *
                                  gen::conversion_to_table_unit(r.unit) * f.value;
            impact_totals[{f.category, scope}] += contribution;
            if (r.kind == "object_instance") {
                object_impacts[r.id][{f.category, scope}] += contribution;
            } else if (r.kind == "object_type" && r.per_instance) {
                for (const auto& o : objects) {
                    if (o.object_type == r.id) {
                        object_impacts[o.object_id][{f.category, scope}] +=
                            r.amount.to_double() * gen::conversion_to_table_unit(r.unit) * f.value;
                    }
                }
            }
        }
    }
    std::map<std::pair<std::string, std::string>, double> allocated_totals;
    for (const auto& r : rules) {
        double fraction = Decimal::parse(r.fraction).to_double();
        for (const auto& [key, amount] : object_impacts[r.id]) {
            allocated_totals[key] += fraction * amount;
        }
    }

    json truth;
    truth["schema"] = "susmine-truth/1";
    truth["seed"] = config.seed;
    truth["events"] = n_events;
    truth["event_count"] = events.size();
    truth["object_count"] = objects.size();
    truth["relation_count"] = relations.size();
    truth["events_per_activity"] = json::object();
    for (const auto& [k, v] : activity_counts) {
        truth["events_per_activity"][k] = v;
    }
    truth["objects_per_type"] = json::object();
    for (const auto& [k, v] : type_counts) {
        truth["objects_per_type"][k] = v;
    }
    truth["assignment_count"] = records.size();
    truth["rule_count"] = rules.size();
    truth["inventory_totals"] = json::array();
    for (const auto& [key, amount] : inventory_totals) {
        const auto& [flow, direction, scope, unit] = key;
        truth["inventory_totals"].push_back({{"flow", flow},
                                             {"direction", direction},
                                             {"scope", scope},
                                             {"unit", unit},
                                             {"amount", amount.to_string()}});
    }
    auto nested = [](const std::map<std::pair<std::string, std::string>, double>& m) {
        json out = json::object();
        for (const auto& [key, amount] : m) {
            out[key.second][key.first] = amount;
        }
        return out;
    };
    truth["impact_totals"] = nested(impact_totals);
    truth["allocated_totals"] = nested(allocated_totals);

    return {serialize_ocel(log), bundle.dump(2) + "\n", truth};
}

}  // namespace susmine
