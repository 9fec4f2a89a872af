// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/sbom.hpp"

#include <sodium.h>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"
#include "sbomguard/version.hpp"

namespace sbomguard {

using nlohmann::json;

std::string ecosystem_name(Ecosystem eco) {
    switch (eco) {
        case Ecosystem::python: return "python";
        case Ecosystem::javascript: return "javascript";
        case Ecosystem::c_cpp: return "c_cpp";
        case Ecosystem::csharp: return "csharp";
        case Ecosystem::php: return "php";
        case Ecosystem::java: return "java";
        case Ecosystem::rust: return "rust";
    }
    return "unknown";
}

std::optional<Ecosystem> ecosystem_from_name(const std::string& name) {
    for (auto eco : kAllEcosystems)
        if (ecosystem_name(eco) == name) return eco;
    return std::nullopt;
}

std::string purl_type(Ecosystem eco) {
    switch (eco) {
        case Ecosystem::python: return "pypi";
        case Ecosystem::javascript: return "npm";
        case Ecosystem::c_cpp: return "conan";
        case Ecosystem::csharp: return "nuget";
        case Ecosystem::php: return "composer";
        case Ecosystem::java: return "maven";
        case Ecosystem::rust: return "cargo";
    }
    return "generic";
}

std::string make_purl(Ecosystem eco, const std::string& name, const std::string& version) {
    return "pkg:" + purl_type(eco) + "/" + name + "@" + version;
}

std::string tool_mode_name(ToolMode mode) {
    return mode == ToolMode::naive ? "naive" : "secure";
}

std::optional<ToolMode> tool_mode_from_name(const std::string& name) {
    if (name == "naive") return ToolMode::naive;
    if (name == "secure") return ToolMode::secure;
    return std::nullopt;
}

Component Component::make(Ecosystem eco, std::string name, std::string version,
                          std::optional<Hash256> hash, std::optional<std::string> filename) {
    if (name.empty()) raise(Errc::parse_error, "component name is empty");
    Component c;
    c.ecosystem = eco;
    c.purl = make_purl(eco, name, version);
    c.name = std::move(name);
    c.version = std::move(version);
    c.artifact_hash = hash;
    c.artifact_filename = std::move(filename);
    return c;
}

namespace {

bool component_order(const Component& a, const Component& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.version < b.version;
}

void validate_components(const std::vector<Component>& components, ToolMode mode, bool strict) {
    for (std::size_t i = 0; i + 1 < components.size(); ++i) {
        if (components[i].name == components[i + 1].name &&
            components[i].version == components[i + 1].version)
            raise(Errc::parse_error, "duplicate component " + components[i].name + "@" +
                                         components[i].version);
    }
    for (const auto& c : components) {
        if (c.name.empty()) raise(Errc::parse_error, "component with empty name");
        if (c.purl != make_purl(c.ecosystem, c.name, c.version))
            raise(Errc::parse_error, "purl \"" + c.purl + "\" does not match " + c.name + "@" +
                                         c.version);
        if (strict && mode == ToolMode::secure && !c.artifact_hash)
            raise(Errc::missing_artifact, "secure-mode component " + c.name + " has no hash");
    }
}

}  // namespace

SbomDocument SbomDocument::create(std::string tool_name, ToolMode mode,
                                  std::vector<Component> components, std::uint64_t timestamp_ms,
                                  std::string serial_number) {
    std::sort(components.begin(), components.end(), component_order);
    validate_components(components, mode, /*strict=*/true);
    SbomDocument doc;
    doc.tool_name_ = std::move(tool_name);
    doc.tool_mode_ = mode;
    doc.components_ = std::move(components);
    doc.timestamp_ms_ = timestamp_ms;
    doc.serial_number_ = std::move(serial_number);
    return doc;
}

SbomDocument SbomDocument::create_now(std::string tool_name, ToolMode mode,
                                      std::vector<Component> components) {
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
    return create(std::move(tool_name), mode, std::move(components),
                  static_cast<std::uint64_t>(now), random_serial_number());
}

std::string format_timestamp_ms(std::uint64_t ms) {
    std::time_t secs = static_cast<std::time_t>(ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03uZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<unsigned>(ms % 1000));
    return buf;
}

std::uint64_t parse_timestamp_ms(const std::string& iso) {
    std::tm tm{};
    unsigned millis = 0;
    int consumed = 0;
    if (std::sscanf(iso.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3uZ%n", &tm.tm_year, &tm.tm_mon,
                    &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &millis, &consumed) != 7 ||
        consumed != static_cast<int>(iso.size()))
        raise(Errc::parse_error, "bad timestamp \"" + iso + "\"");
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    std::time_t secs = timegm(&tm);
    if (secs < 0) raise(Errc::parse_error, "timestamp before epoch: \"" + iso + "\"");
    return static_cast<std::uint64_t>(secs) * 1000 + millis;
}

std::string random_serial_number() {
    if (sodium_init() < 0) raise(Errc::key_error, "libsodium initialization failed");
    std::uint8_t b[16];
    randombytes_buf(b, sizeof b);
    b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);  // version 4
    b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);  // variant 1
    char buf[64];
    std::snprintf(buf, sizeof buf,
                  "urn:uuid:%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x",
                  b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12],
                  b[13], b[14], b[15]);
    return buf;
}

namespace {

json component_to_json(const Component& c) {
    json j{
        {"ecosystem", ecosystem_name(c.ecosystem)},
        {"name", c.name},
        {"purl", c.purl},
        {"version", c.version},
    };
    if (c.artifact_filename) j["filename"] = *c.artifact_filename;
    if (c.artifact_hash)
        j["hashes"] = json::array({json{{"alg", "SHA-256"}, {"content", c.artifact_hash->hex()}}});
    return j;
}

Component component_from_json(const json& j) {
    if (!j.is_object()) raise(Errc::parse_error, "component is not an object");
    for (const char* field : {"ecosystem", "name", "purl", "version"})
        if (!j.contains(field) || !j[field].is_string())
            raise(Errc::parse_error, std::string("component missing string field ") + field);
    auto eco = ecosystem_from_name(j["ecosystem"].get<std::string>());
    if (!eco) raise(Errc::parse_error, "unknown ecosystem " + j["ecosystem"].dump());

    Component c;
    c.ecosystem = *eco;
    c.name = j["name"].get<std::string>();
    c.version = j["version"].get<std::string>();
    c.purl = j["purl"].get<std::string>();
    if (j.contains("filename")) {
        if (!j["filename"].is_string()) raise(Errc::parse_error, "component filename not a string");
        c.artifact_filename = j["filename"].get<std::string>();
    }
    if (j.contains("hashes")) {
        const auto& hashes = j["hashes"];
        if (!hashes.is_array() || hashes.size() != 1 || !hashes[0].is_object())
            raise(Errc::parse_error, "component hashes must be a single-entry array");
        const auto& h = hashes[0];
        if (h.value("alg", "") != "SHA-256")
            raise(Errc::parse_error, "unsupported hash algorithm " + h.value("alg", ""));
        auto parsed = Hash256::try_from_hex(h.value("content", ""));
        if (!parsed) raise(Errc::parse_error, "bad SHA-256 content for component " + c.name);
        c.artifact_hash = *parsed;
    }
    return c;
}

}  // namespace

std::string canonical_serialize(const SbomDocument& doc) {
    json components = json::array();
    for (const auto& c : doc.components()) components.push_back(component_to_json(c));
    json j{
        {"components", std::move(components)},
        {"metadata",
         json{{"timestamp", format_timestamp_ms(doc.timestamp_ms())},
              {"tool", json{{"mode", tool_mode_name(doc.tool_mode())},
                            {"name", doc.tool_name()}}}}},
        {"serialNumber", doc.serial_number()},
    };
    // nlohmann's object keys are already sorted; compact dump has no whitespace.
    return j.dump();
}

Hash256 canonical_digest(const SbomDocument& doc) { return sha256(canonical_serialize(doc)); }

SbomDocument parse_sbom(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("metadata") || !j.contains("components") ||
        !j.contains("serialNumber"))
        raise(Errc::parse_error, "missing serialNumber/metadata/components");

    const auto& meta = j["metadata"];
    if (!meta.is_object() || !meta.contains("tool") || !meta.contains("timestamp"))
        raise(Errc::parse_error, "metadata missing tool/timestamp");
    auto mode = tool_mode_from_name(meta["tool"].value("mode", ""));
    if (!mode) raise(Errc::parse_error, "unknown tool mode");

    std::vector<Component> components;
    if (!j["components"].is_array()) raise(Errc::parse_error, "components is not an array");
    for (const auto& cj : j["components"]) components.push_back(component_from_json(cj));
    std::sort(components.begin(), components.end(), component_order);
    // Hash presence is not enforced here: a hostile secure-mode document
    // without hashes must reach the verifier, which flags it.
    validate_components(components, *mode, /*strict=*/false);

    SbomDocument doc;
    doc.tool_name_ = meta["tool"].value("name", "");
    doc.tool_mode_ = *mode;
    doc.components_ = std::move(components);
    doc.timestamp_ms_ = parse_timestamp_ms(meta["timestamp"].get<std::string>());
    doc.serial_number_ = j["serialNumber"].get<std::string>();
    return doc;
}

void write_sbom(const SbomDocument& doc, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out << canonical_serialize(doc);
}

SbomDocument read_sbom(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sbom(buf.str());
}

}  // namespace sbomguard
