// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbomguard/hash.hpp"
#include "sbomguard/manifest.hpp"
#include "sbomguard/sbom.hpp"

namespace sbomguard {

/// Where pinned archives come from: a registry-style provider of distribution
/// artifacts (bytes as distributed, never extracted contents).
class ArtifactSource {
public:
    enum class Status { ok, not_found, unreadable };

    struct Result {
        Status status = Status::not_found;
        std::string filename;
        std::vector<std::uint8_t> bytes;
    };

    virtual ~ArtifactSource() = default;
    virtual Result fetch(const std::string& name, const std::string& version) const = 0;
};

/// Serves archives from a flat directory of `<name>-<version>.<ext>` files.
class DirectoryArtifactSource : public ArtifactSource {
public:
    explicit DirectoryArtifactSource(std::filesystem::path root) : root_(std::move(root)) {}

    Result fetch(const std::string& name, const std::string& version) const override;

private:
    std::filesystem::path root_;
};

struct PinEntry {
    std::string name;
    std::string version;
    std::string filename;
    Hash256 sha256;

    bool operator==(const PinEntry&) const = default;
};

/// The project's pinned artifact directory: `<project>/.pinned/` holding one
/// archive per dependency plus a pins.json index. Treated as immutable after
/// pinning; generation re-hashes from disk and refuses a store whose bytes no
/// longer match the index.
class ArtifactStore {
public:
    static constexpr const char* kDirName = ".pinned";
    static constexpr const char* kIndexName = "pins.json";

    ArtifactStore() = default;
    ArtifactStore(std::filesystem::path dir, std::vector<PinEntry> entries);

    static ArtifactStore load(const std::filesystem::path& store_dir);
    void save_index() const;

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const std::vector<PinEntry>& entries() const noexcept { return entries_; }

    const PinEntry* find(const std::string& name, const std::string& version) const;
    /// Exact (name, version) first; else the single pinned archive for that
    /// name, so a metadata-only version tamper still resolves to the real
    /// on-disk artifact. Null when absent or ambiguous.
    const PinEntry* resolve_for(const std::string& name, const std::string& version) const;

    std::filesystem::path archive_path(const PinEntry& entry) const;

private:
    std::filesystem::path dir_;
    std::vector<PinEntry> entries_;
};

/// Download one archive per dependency into `<root>/.pinned/` and record the
/// SHA-256 of the bytes as distributed.
ArtifactStore pin_artifacts(const manifest::ManifestProject& project, const ArtifactSource& source);

struct GenerationOptions {
    std::string tool_name = "sbomguard";
    std::optional<std::uint64_t> timestamp_ms;     // default: wall clock
    std::optional<std::string> serial_number;      // default: random v4 UUID
};

/// Trusts the manifests: one hash-less Component per DependencySpec, versions
/// verbatim. Models the vulnerable third-party generators.
SbomDocument generate_naive(const manifest::ManifestProject& project,
                            const GenerationOptions& options = {});

/// Pins-backed generation: every component carries the SHA-256 of its pinned
/// archive, re-hashed from disk at generation time.
SbomDocument generate_secure(const manifest::ManifestProject& project, const ArtifactStore& store,
                             const GenerationOptions& options = {});

}  // namespace sbomguard
