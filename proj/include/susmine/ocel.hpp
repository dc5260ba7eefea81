#pragma once

#include "susmine/digest.hpp"
#include "susmine/error.hpp"
#include "susmine/model.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace susmine {

enum class IngestMode { strict, lenient };

struct IngestResult {
    EventLog log;
    ValidationReport warnings;  // non-empty only in lenient mode
};

namespace detail {

using nlohmann::json;

inline const json& require_key(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object()) {
        throw SchemaError(where + " must be an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(where + " is missing required key '" + key + "'");
    }
    return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& where)
{
    const json& v = require_key(obj, key, where);
    if (!v.is_string()) {
        throw SchemaError(where + "." + key + " must be a string");
    }
    return v.get<std::string>();
}

inline const json& require_array(const json& obj, const char* key, const std::string& where)
{
    const json& v = require_key(obj, key, where);
    if (!v.is_array()) {
        throw SchemaError(where + "." + key + " must be an array");
    }
    return v;
}

inline const json* optional_array(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return nullptr;
    }
    if (!it->is_array()) {
        throw SchemaError(where + "." + key + " must be an array");
    }
    return &*it;
}

inline ScalarValue to_scalar(const json& v, const std::string& where)
{
    if (v.is_boolean()) {
        return v.get<bool>();
    }
    if (v.is_number_unsigned()) {
        auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) {
            return static_cast<double>(u);
        }
        return static_cast<std::int64_t>(u);
    }
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    if (v.is_number_float()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    throw SchemaError(where + " must be a scalar (bool, number or string)");
}

inline json from_scalar(const ScalarValue& v)
{
    return std::visit([](const auto& x) { return json(x); }, v);
}

inline json parse_json(std::string_view document, const char* what)
{
    try {
        return json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

inline std::set<std::string> parse_type_names(const json& arr, const std::string& where)
{
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string w = where + "[" + std::to_string(i) + "]";
        std::string name = require_string(arr[i], "name", w);
        if (name.empty()) {
            throw SchemaError(w + ".name must be non-empty");
        }
        names.insert(name);
    }
    return names;
}

}  // namespace detail

/// Parses the supported OCEL 2.0 JSON subset.
///
/// Strict mode throws IntegrityError when the parsed log violates a structural
/// invariant; lenient mode keeps the log and returns the violations as warnings.
inline IngestResult parse_ocel(std::string_view document, IngestMode mode = IngestMode::strict)
{
    using detail::json;
    json doc = detail::parse_json(document, "OCEL document");
    if (!doc.is_object()) {
        throw SchemaError("OCEL document must be a JSON object");
    }

    auto activity_types = detail::parse_type_names(detail::require_array(doc, "eventTypes", "document"), "eventTypes");
    auto object_types = detail::parse_type_names(detail::require_array(doc, "objectTypes", "document"), "objectTypes");

    std::vector<ObjectInstance> objects;
    const json& objs = detail::require_array(doc, "objects", "document");
    for (std::size_t i = 0; i < objs.size(); ++i) {
        std::string w = "objects[" + std::to_string(i) + "]";
        ObjectInstance o;
        o.object_id = detail::require_string(objs[i], "id", w);
        o.object_type = detail::require_string(objs[i], "type", w);
        // Attribute history collapses to the value with the latest time.
        std::map<std::string, Timestamp> stamp;
        if (const json* attrs = detail::optional_array(objs[i], "attributes", w)) {
            for (std::size_t j = 0; j < attrs->size(); ++j) {
                std::string aw = w + ".attributes[" + std::to_string(j) + "]";
                const json& a = (*attrs)[j];
                std::string name = detail::require_string(a, "name", aw);
                ScalarValue value = detail::to_scalar(detail::require_key(a, "value", aw), aw + ".value");
                Timestamp t{};
                if (auto it = a.find("time"); it != a.end()) {
                    if (!it->is_string()) {
                        throw SchemaError(aw + ".time must be a string");
                    }
                    auto parsed = parse_timestamp(it->get<std::string>());
                    if (!parsed) {
                        throw SchemaError(aw + ".time is not a valid timestamp");
                    }
                    t = *parsed;
                }
                auto prev = stamp.find(name);
                if (prev == stamp.end() || prev->second <= t) {
                    stamp[name] = t;
                    o.attributes[name] = std::move(value);
                }
            }
        }
        objects.push_back(std::move(o));
    }

    std::vector<Event> events;
    std::vector<Relation> relations;
    const json& evs = detail::require_array(doc, "events", "document");
    for (std::size_t i = 0; i < evs.size(); ++i) {
        std::string w = "events[" + std::to_string(i) + "]";
        Event e;
        e.event_id = detail::require_string(evs[i], "id", w);
        e.activity = detail::require_string(evs[i], "type", w);
        std::string time = detail::require_string(evs[i], "time", w);
        auto parsed = parse_timestamp(time);
        if (!parsed) {
            throw SchemaError(w + ".time '" + time + "' is not a valid timestamp");
        }
        e.timestamp = *parsed;
        if (const json* attrs = detail::optional_array(evs[i], "attributes", w)) {
            for (std::size_t j = 0; j < attrs->size(); ++j) {
                std::string aw = w + ".attributes[" + std::to_string(j) + "]";
                std::string name = detail::require_string((*attrs)[j], "name", aw);
                e.attributes[name] = detail::to_scalar(detail::require_key((*attrs)[j], "value", aw), aw + ".value");
            }
        }
        if (const json* rels = detail::optional_array(evs[i], "relationships", w)) {
            for (std::size_t j = 0; j < rels->size(); ++j) {
                std::string rw = w + ".relationships[" + std::to_string(j) + "]";
                Relation r;
                r.event_id = e.event_id;
                r.object_id = detail::require_string((*rels)[j], "objectId", rw);
                r.qualifier = detail::require_string((*rels)[j], "qualifier", rw);
                relations.push_back(std::move(r));
            }
        }
        events.push_back(std::move(e));
    }

    IngestResult result{EventLog(std::move(activity_types), std::move(object_types), std::move(events),
                                 std::move(objects), std::move(relations)),
                        {}};
    auto violations = validate_log(result.log);
    if (!violations.empty()) {
        if (mode == IngestMode::strict) {
            std::string msg = std::to_string(violations.size()) + " violation(s); first: " + violations.front().message;
            throw IntegrityError(msg);
        }
        result.warnings = std::move(violations);
    }
    return result;
}

/// Canonical OCEL JSON for a log. Parsing this text yields an equal log.
inline std::string serialize_ocel(const EventLog& log)
{
    using detail::json;
    json doc = json::object();
    auto types = [](const std::set<std::string>& names) {
        json arr = json::array();
        for (const auto& n : names) {
            arr.push_back({{"name", n}, {"attributes", json::array()}});
        }
        return arr;
    };
    doc["eventTypes"] = types(log.activity_types());
    doc["objectTypes"] = types(log.object_types());

    json objs = json::array();
    for (const auto& o : log.objects()) {
        json attrs = json::array();
        for (const auto& [name, value] : o.attributes) {
            attrs.push_back({{"name", name}, {"time", "1970-01-01T00:00:00Z"}, {"value", detail::from_scalar(value)}});
        }
        objs.push_back({{"id", o.object_id}, {"type", o.object_type}, {"attributes", attrs}});
    }
    doc["objects"] = objs;

    std::map<std::string, std::vector<const Relation*>> rels_by_event;
    for (const auto& r : log.relations()) {
        rels_by_event[r.event_id].push_back(&r);
    }
    json evs = json::array();
    std::set<std::string> emitted;
    for (const auto& e : log.events()) {
        json attrs = json::array();
        for (const auto& [name, value] : e.attributes) {
            attrs.push_back({{"name", name}, {"value", detail::from_scalar(value)}});
        }
        json rels = json::array();
        // Relations are emitted with the first event carrying their id.
        if (emitted.insert(e.event_id).second) {
            for (const auto* r : rels_by_event[e.event_id]) {
                rels.push_back({{"objectId", r->object_id}, {"qualifier", r->qualifier}});
            }
        }
        evs.push_back({{"id", e.event_id},
                       {"type", e.activity},
                       {"time", format_timestamp(e.timestamp)},
                       {"attributes", attrs},
                       {"relationships", rels}});
    }
    doc["events"] = evs;
    return doc.dump(2) + "\n";
}

/// SHA-256 of the canonical serialization; identifies a log across pipeline stages.
inline std::string log_digest(const EventLog& log)
{
    return sha256_hex(serialize_ocel(log));
}

struct LogSummary {
    std::size_t event_count = 0;
    std::size_t object_count = 0;
    std::size_t relation_count = 0;
    std::map<std::string, std::size_t> events_per_activity;
    std::map<std::string, std::size_t> objects_per_type;

    friend bool operator==(const LogSummary&, const LogSummary&) = default;
};

inline LogSummary log_summary(const EventLog& log)
{
    LogSummary s;
    s.event_count = log.events().size();
    s.object_count = log.objects().size();
    s.relation_count = log.relations().size();
    for (const auto& e : log.events()) {
        ++s.events_per_activity[e.activity];
    }
    for (const auto& o : log.objects()) {
        ++s.objects_per_type[o.object_type];
    }
    return s;
}

inline nlohmann::json to_json(const LogSummary& s)
{
    nlohmann::json j;
    j["event_count"] = s.event_count;
    j["object_count"] = s.object_count;
    j["relation_count"] = s.relation_count;
    j["events_per_activity"] = nlohmann::json::object();
    for (const auto& [k, v] : s.events_per_activity) {
        j["events_per_activity"][k] = v;
    }
    j["objects_per_type"] = nlohmann::json::object();
    for (const auto& [k, v] : s.objects_per_type) {
        j["objects_per_type"][k] = v;
    }
    return j;
}

}  // namespace susmine
