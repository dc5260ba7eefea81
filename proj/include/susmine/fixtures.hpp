#pragma once

#include "susmine/digest.hpp"
#include "susmine/error.hpp"
#include "susmine/ocel.hpp"
#include "susmine/report.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace susmine {

struct FixtureEntry {
    std::string path;  // relative to the manifest's directory
    std::string sha256;
    std::string description;
};

struct FixtureManifest {
    std::vector<FixtureEntry> files;
};

struct FixtureCheck {
    std::string path;
    std::string expected;
    std::string actual;
    bool pass = false;
};

inline FixtureManifest parse_manifest(std::string_view document)
{
    using detail::json;
    json doc = detail::parse_json(document, "fixture manifest");
    if (!doc.is_object() || doc.value("schema", "") != "susmine-fixtures/1") {
        throw SchemaError("fixture manifest must declare schema susmine-fixtures/1");
    }
    FixtureManifest m;
    const json& files = detail::require_array(doc, "files", "manifest");
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::string w = "files[" + std::to_string(i) + "]";
        m.files.push_back({detail::require_string(files[i], "path", w), detail::require_string(files[i], "sha256", w),
                           files[i].value("description", "")});
    }
    return m;
}

inline std::string serialize_manifest(const FixtureManifest& m)
{
    nlohmann::json doc;
    doc["schema"] = "susmine-fixtures/1";
    doc["files"] = nlohmann::json::array();
    for (const auto& f : m.files) {
        doc["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"description", f.description}});
    }
    return doc.dump(2) + "\n";
}

/// Compares each listed file's SHA-256 with the manifest. Throws MissingFixture
/// when a listed file does not exist.
inline std::vector<FixtureCheck> verify_fixtures(const FixtureManifest& manifest, const std::filesystem::path& root)
{
    std::vector<FixtureCheck> out;
    for (const auto& f : manifest.files) {
        auto path = root / f.path;
        if (!std::filesystem::is_regular_file(path)) {
            throw MissingFixture("fixture '" + f.path + "' listed in manifest does not exist");
        }
        std::string actual = sha256_hex(read_text_file(path));
        out.push_back({f.path, f.sha256, actual, actual == f.sha256});
    }
    return out;
}

/// Recomputes every digest in place.
inline FixtureManifest refresh_manifest(FixtureManifest manifest, const std::filesystem::path& root)
{
    for (auto& f : manifest.files) {
        auto path = root / f.path;
        if (!std::filesystem::is_regular_file(path)) {
            throw MissingFixture("fixture '" + f.path + "' listed in manifest does not exist");
        }
        f.sha256 = sha256_hex(read_text_file(path));
    }
    return manifest;
}

}  // namespace susmine
