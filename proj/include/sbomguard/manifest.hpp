// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbomguard/sbom.hpp"

namespace sbomguard::manifest {

struct DependencySpec {
    std::string name;
    std::string version;      // verbatim manifest string, dotted numeric + optional suffix
    std::string source_file;  // relative path within the project

    bool operator==(const DependencySpec&) const = default;
};

/// A parsed project: raw manifest file images plus the dependency set they
/// declare. deps is always exactly what a re-parse of manifest_files yields.
struct ManifestProject {
    std::filesystem::path root;
    Ecosystem ecosystem = Ecosystem::python;
    std::vector<std::pair<std::string, std::string>> manifest_files;  // rel path -> raw bytes
    std::vector<DependencySpec> deps;
    std::optional<std::filesystem::path> artifact_store_dir;  // <root>/.pinned when present
    std::vector<std::string> warnings;  // e.g. package.json vs lockfile version disagreement

    bool has_dep(const std::string& name) const;
    const std::string* file_bytes(const std::string& rel_path) const;
};

enum class TamperScope { manifest_only, manifest_and_lock, all_locations };

struct TamperabilityEntry {
    std::string language;  // display label (C and C++ share one ecosystem)
    Ecosystem ecosystem;
    bool tamperable;
    std::vector<std::string> files;
};

std::optional<Ecosystem> detect_ecosystem(const std::filesystem::path& root);

ManifestProject parse_project(const std::filesystem::path& root, Ecosystem eco);

/// The manifest-tampering attack: rewrite the named dependency's version string in the
/// files selected by scope, byte-preserving everything else. Pinned archives
/// under .pinned/ are never touched. Returns a fresh parse of the project.
ManifestProject tamper_version(const ManifestProject& project, const std::string& name,
                               const std::string& new_version, TamperScope scope);

/// Pure core of tamper_version, exposed for locality tests: new bytes for one
/// file image, touching only the version substrings of the named dependency.
/// Returns nullopt when the file holds no version occurrence of that name.
std::optional<std::string> tamper_file_bytes(Ecosystem eco, const std::string& rel_path,
                                             const std::string& bytes, const std::string& name,
                                             const std::string& new_version);

/// Which relative file paths of this project a tamper at the given scope
/// rewrites (only those that exist in the project and mention the dep).
std::vector<std::string> tamper_targets(const ManifestProject& project, const std::string& name,
                                        TamperScope scope);

/// Tamperability by language: 8 rows, 6 tamperable.
const std::vector<TamperabilityEntry>& tamperability_table();

bool ecosystem_tamperable(Ecosystem eco);

}  // namespace sbomguard::manifest
