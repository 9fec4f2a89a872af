// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/registry.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"

namespace sbomguard::registry {

namespace fs = std::filesystem;
using nlohmann::json;

const char* lookup_status_name(LookupStatus status) {
    switch (status) {
        case LookupStatus::found: return "found";
        case LookupStatus::not_found: return "not_found";
        case LookupStatus::provider_unavailable: return "provider_unavailable";
        case LookupStatus::ambiguous_artifact: return "ambiguous_artifact";
    }
    return "unknown";
}

LocalRegistry LocalRegistry::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) raise(Errc::io_error, "cannot read " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        raise(Errc::schema_error, file.string() + ": " + e.what());
    }
    if (!j.is_array()) raise(Errc::schema_error, file.string() + ": expected an array");

    LocalRegistry reg;
    std::vector<RegistryRecord> records;
    for (const auto& item : j) {
        RegistryRecord r;
        try {
            auto eco = ecosystem_from_name(item.at("ecosystem").get<std::string>());
            if (!eco) raise(Errc::schema_error, file.string() + ": unknown ecosystem");
            r.ecosystem = *eco;
            r.name = item.at("name").get<std::string>();
            r.version = item.at("version").get<std::string>();
            r.artifact_filename = item.at("filename").get<std::string>();
            r.artifact_hash = Hash256::from_hex(item.at("sha256").get<std::string>());
        } catch (const json::exception& e) {
            raise(Errc::schema_error, file.string() + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    reg.import_records(records);
    return reg;
}

void LocalRegistry::save(const fs::path& file) const {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    json j = json::array();
    for (const auto& r : records_)
        j.push_back({{"ecosystem", ecosystem_name(r.ecosystem)},
                     {"name", r.name},
                     {"version", r.version},
                     {"filename", r.artifact_filename},
                     {"sha256", r.artifact_hash.hex()}});
    std::ofstream out(file, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

void LocalRegistry::import_records(const std::vector<RegistryRecord>& records) {
    auto key_equal = [](const RegistryRecord& a, const RegistryRecord& b) {
        return a.ecosystem == b.ecosystem && a.name == b.name && a.version == b.version &&
               a.artifact_filename == b.artifact_filename;
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& incoming = records[i];
        bool dup = std::any_of(records_.begin(), records_.end(), [&](const RegistryRecord& r) {
            return key_equal(r, incoming);
        });
        for (std::size_t k = 0; !dup && k < i; ++k) dup = key_equal(records[k], incoming);
        if (dup)
            raise(Errc::duplicate_record, incoming.name + "@" + incoming.version + " (" +
                                              incoming.artifact_filename + ")");
    }
    records_.insert(records_.end(), records.begin(), records.end());
    std::sort(records_.begin(), records_.end(), [](const RegistryRecord& a, const RegistryRecord& b) {
        return std::tie(a.ecosystem, a.name, a.version, a.artifact_filename) <
               std::tie(b.ecosystem, b.name, b.version, b.artifact_filename);
    });
}

LookupResult LocalRegistry::lookup(Ecosystem eco, const std::string& name,
                                   const std::string& version,
                                   const std::optional<std::string>& filename) const {
    std::vector<const RegistryRecord*> matches;
    for (const auto& r : records_) {
        if (r.ecosystem != eco || r.name != name || r.version != version) continue;
        if (filename && r.artifact_filename != *filename) continue;
        matches.push_back(&r);
    }
    if (matches.empty()) {
        std::string detail = name + "@" + version;
        if (filename) detail += " (" + *filename + ")";
        return {LookupStatus::not_found, std::nullopt, detail};
    }
    if (matches.size() > 1)
        return {LookupStatus::ambiguous_artifact, std::nullopt,
                std::to_string(matches.size()) + " artifacts for " + name + "@" + version};
    return LookupResult::found_record(*matches.front());
}

RegistryRecord parse_index_release_json(std::span<const std::uint8_t> bytes,
                                        const std::optional<std::string>& filename, Ecosystem eco,
                                        const std::string& name, const std::string& version) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        raise(Errc::schema_error, std::string("release document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("urls") || !j["urls"].is_array())
        raise(Errc::schema_error, "release document has no urls array");

    const json* chosen = nullptr;
    for (const auto& url : j["urls"]) {
        if (!url.is_object() || !url.contains("filename") || !url["filename"].is_string())
            raise(Errc::schema_error, "url entry has no filename");
        if (filename) {
            if (url["filename"].get<std::string>() == *filename) {
                chosen = &url;
                break;
            }
        } else {
            if (chosen) raise(Errc::filename_not_in_release,
                              "several artifacts in release; pass a filename");
            chosen = &url;
        }
    }
    if (!chosen) {
        if (filename) raise(Errc::filename_not_in_release, *filename);
        raise(Errc::schema_error, "release document has an empty urls array");
    }

    const auto& url = *chosen;
    if (!url.contains("digests") || !url["digests"].is_object() ||
        !url["digests"].contains("sha256") || !url["digests"]["sha256"].is_string())
        raise(Errc::schema_error, "url entry has no digests.sha256");

    auto hex = url["digests"]["sha256"].get<std::string>();
    auto hash = Hash256::try_from_hex(hex);
    if (!hash) raise(Errc::schema_error, "digests.sha256 is not 64 hex characters");

    return {eco, name, version, url["filename"].get<std::string>(), *hash};
}

}  // namespace sbomguard::registry
