// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sbomguard/registry.hpp"
#include "sbomguard/sbom.hpp"
#include "sbomguard/verifier.hpp"

namespace sbomguard::fixtures {

/// One dependency of a fixture project: the installed version plus one
/// alternate release that exists in the registry (so a tamper to it produces
/// a hash mismatch rather than a registry miss).
struct FixtureDep {
    std::string name;
    std::string version;
    std::string alt_version;
};

const std::vector<FixtureDep>& deps_for(Ecosystem eco);

/// Deterministic pseudo-archive bytes for (name, version); archives are
/// opaque blobs, never extracted.
std::vector<std::uint8_t> archive_bytes(const std::string& name, const std::string& version);
std::string archive_filename(Ecosystem eco, const std::string& name, const std::string& version);

/// Materialize one ecosystem's project (manifest files only, nothing pinned).
void write_project(const std::filesystem::path& dir, Ecosystem eco);

/// Layout written by write_all:
///   <root>/projects/<ecosystem>/...   one project per supported ecosystem
///   <root>/dist/                      archive blobs for installed + alternate versions
///   <root>/registry.json              reference hashes for every archive
///   <root>/advisories.json            the demo advisory database
struct FixtureSet {
    std::filesystem::path root;

    std::filesystem::path project_dir(Ecosystem eco) const;
    std::filesystem::path dist_dir() const { return root / "dist"; }
    std::filesystem::path registry_file() const { return root / "registry.json"; }
    std::filesystem::path advisories_file() const { return root / "advisories.json"; }
};

FixtureSet write_all(const std::filesystem::path& root);

std::vector<registry::RegistryRecord> registry_records();
std::vector<verifier::Advisory> advisory_records();

/// Fixed inputs that keep `demo poco` byte-deterministic.
KeyPair demo_keypair();
inline constexpr std::uint64_t kDemoTimestampMs = 1735689600000;  // 2025-01-01T00:00:00.000Z
inline constexpr const char* kDemoSerialNumber =
    "urn:uuid:00000000-0000-4000-8000-000000000001";

}  // namespace sbomguard::fixtures
