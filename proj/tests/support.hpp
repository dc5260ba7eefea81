#pragma once

#include "susmine/susmine.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace testing_support {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(SUSMINE_FIXTURE_DIR) / rel; }

inline std::string fixture_text(const std::string& rel) { return susmine::read_text_file(fixture(rel)); }

inline susmine::EventLog fixture_log(const std::string& name)
{
    return susmine::parse_ocel(fixture_text("logs/" + name + ".json")).log;
}

inline susmine::AnnotatedLog fixture_bundle(const std::string& log, const std::string& bundle)
{
    return susmine::bind_annotations(fixture_log(log),
                                     susmine::parse_annotations(fixture_text("annotations/" + bundle + ".json")));
}

/// Small hand-built logs: `events` is a list of {id, type, time, rels: {obj: qualifier}, attrs}.
inline nlohmann::json make_log(const nlohmann::json& events, const nlohmann::json& objects)
{
    nlohmann::json doc;
    std::set<std::string> etypes, otypes;
    doc["events"] = nlohmann::json::array();
    for (const auto& e : events) {
        nlohmann::json ev{{"id", e.at("id")}, {"type", e.at("type")}, {"time", e.value("time", "2024-01-01T00:00:00Z")}};
        ev["relationships"] = nlohmann::json::array();
        // nlohmann reads {{"o1", "q"}} as an object, so accept both shapes
        const nlohmann::json rels = e.value("rels", nlohmann::json::array());
        if (rels.is_object()) {
            for (const auto& [obj, qualifier] : rels.items()) {
                ev["relationships"].push_back({{"objectId", obj}, {"qualifier", qualifier}});
            }
        } else {
            for (const auto& r : rels) {
                ev["relationships"].push_back({{"objectId", r[0]}, {"qualifier", r[1]}});
            }
        }
        ev["attributes"] = nlohmann::json::array();
        const nlohmann::json attrs = e.value("attrs", nlohmann::json::object());
        for (const auto& [k, v] : attrs.items()) {
            ev["attributes"].push_back({{"name", k}, {"value", v}});
        }
        etypes.insert(e.at("type").get<std::string>());
        doc["events"].push_back(ev);
    }
    doc["objects"] = nlohmann::json::array();
    for (const auto& o : objects) {
        nlohmann::json ob{{"id", o.at("id")}, {"type", o.at("type")}, {"attributes", nlohmann::json::array()}};
        const nlohmann::json attrs = o.value("attrs", nlohmann::json::object());
        for (const auto& [k, v] : attrs.items()) {
            ob["attributes"].push_back({{"name", k}, {"time", "2024-01-01T00:00:00Z"}, {"value", v}});
        }
        otypes.insert(o.at("type").get<std::string>());
        doc["objects"].push_back(ob);
    }
    doc["eventTypes"] = nlohmann::json::array();
    for (const auto& t : etypes) doc["eventTypes"].push_back({{"name", t}, {"attributes", nlohmann::json::array()}});
    doc["objectTypes"] = nlohmann::json::array();
    for (const auto& t : otypes) doc["objectTypes"].push_back({{"name", t}, {"attributes", nlohmann::json::array()}});
    return doc;
}

/// Climate-only bundle skeleton under the ghg preset with CO2 = 1 kg CO2e/kg.
inline nlohmann::json climate_bundle()
{
    return nlohmann::json{
        {"schema", "susmine/1"},
        {"scopes", "ghg"},
        {"categories", {{"climate_change", {{"impact_unit", "kg CO2e"}, {"class", "climate"}}}}},
        {"factors", nlohmann::json::array({{{"flow", "CO2"}, {"unit", "kg"}, {"factors", {{"climate_change", 1}}}}})},
        {"assignments", nlohmann::json::array()},
        {"allocations", nlohmann::json::array()},
    };
}

inline nlohmann::json assign(const std::string& kind, const std::string& id, const std::string& flow, const std::string& amount,
                             const std::string& unit, const std::string& scope, const std::string& direction = "output")
{
    nlohmann::json a{{"component", {{"kind", kind}}}, {"flow", flow}, {"direction", direction},
                     {"amount", amount}, {"unit", unit}, {"scope", scope}};
    if (kind != "process") {
        a["component"]["id"] = id;
    }
    return a;
}

inline susmine::AnnotatedLog bind_json(const nlohmann::json& log, const nlohmann::json& bundle)
{
    return susmine::bind_annotations(susmine::parse_ocel(log.dump()).log, susmine::parse_annotations(bundle.dump()));
}

}  // namespace testing_support
