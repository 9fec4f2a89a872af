// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbomguard/hash.hpp"
#include "sbomguard/sbom.hpp"

namespace sbomguard::registry {

struct RegistryRecord {
    Ecosystem ecosystem = Ecosystem::python;
    std::string name;
    std::string version;
    std::string artifact_filename;
    Hash256 artifact_hash;

    bool operator==(const RegistryRecord&) const = default;
};

enum class LookupStatus {
    found,
    not_found,             // the registry answered: no such release/artifact
    provider_unavailable,  // the registry could not answer (network/IO); never conflated with absence
    ambiguous_artifact,    // several artifacts match and no filename was given
};

const char* lookup_status_name(LookupStatus status);

struct LookupResult {
    LookupStatus status = LookupStatus::not_found;
    std::optional<RegistryRecord> record;
    std::string detail;

    static LookupResult found_record(RegistryRecord rec) {
        return {LookupStatus::found, std::move(rec), {}};
    }
};

/// A reference-hash provider: a repository of trusted hash values for
/// software library releases. Lookups are pure.
class ReferenceProvider {
public:
    virtual ~ReferenceProvider() = default;
    virtual LookupResult lookup(Ecosystem eco, const std::string& name, const std::string& version,
                                const std::optional<std::string>& filename = std::nullopt) const = 0;
};

/// File-backed registry: one registry.json array of records.
class LocalRegistry : public ReferenceProvider {
public:
    LocalRegistry() = default;

    static LocalRegistry load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    /// Duplicate (ecosystem, name, version, filename) is rejected.
    void import_records(const std::vector<RegistryRecord>& records);

    const std::vector<RegistryRecord>& records() const noexcept { return records_; }

    LookupResult lookup(Ecosystem eco, const std::string& name, const std::string& version,
                        const std::optional<std::string>& filename = std::nullopt) const override;

private:
    std::vector<RegistryRecord> records_;
};

/// Parse a package-index release document ({"urls": [{"filename", "digests":
/// {"sha256"}}]}) into the record for the named artifact. Empty filename is
/// accepted when the release holds exactly one artifact.
RegistryRecord parse_index_release_json(std::span<const std::uint8_t> bytes,
                                        const std::optional<std::string>& filename, Ecosystem eco,
                                        const std::string& name, const std::string& version);

}  // namespace sbomguard::registry
