// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbomguard/hash.hpp"

namespace sbomguard {

enum class Ecosystem {
    python,
    javascript,
    c_cpp,
    csharp,
    php,
    java,
    rust,
};

inline constexpr Ecosystem kAllEcosystems[] = {
    Ecosystem::python, Ecosystem::javascript, Ecosystem::c_cpp, Ecosystem::csharp,
    Ecosystem::php,    Ecosystem::java,       Ecosystem::rust,
};

std::string ecosystem_name(Ecosystem eco);
std::optional<Ecosystem> ecosystem_from_name(const std::string& name);

/// purl type for an ecosystem, e.g. python -> "pypi".
std::string purl_type(Ecosystem eco);

/// "pkg:<type>/<name>@<version>"
std::string make_purl(Ecosystem eco, const std::string& name, const std::string& version);

enum class ToolMode { naive, secure };

std::string tool_mode_name(ToolMode mode);
std::optional<ToolMode> tool_mode_from_name(const std::string& name);

/// One dependency in an SBOM. purl is always derived from
/// (ecosystem, name, version); construction keeps them consistent.
struct Component {
    std::string name;
    std::string version;
    Ecosystem ecosystem = Ecosystem::python;
    std::string purl;
    std::optional<Hash256> artifact_hash;
    std::optional<std::string> artifact_filename;

    static Component make(Ecosystem eco, std::string name, std::string version,
                          std::optional<Hash256> hash = std::nullopt,
                          std::optional<std::string> filename = std::nullopt);

    bool operator==(const Component&) const = default;
};

/// Canonical component inventory. Components are kept sorted by
/// (name, version) with no duplicate pairs; timestamp and serial number are
/// fixed at creation so canonical bytes are stable across runs.
class SbomDocument {
public:
    static SbomDocument create(std::string tool_name, ToolMode mode,
                               std::vector<Component> components,
                               std::uint64_t timestamp_ms, std::string serial_number);

    /// Like create() but with wall-clock timestamp and a random v4 UUID serial.
    static SbomDocument create_now(std::string tool_name, ToolMode mode,
                                   std::vector<Component> components);

    const std::string& serial_number() const noexcept { return serial_number_; }
    std::uint64_t timestamp_ms() const noexcept { return timestamp_ms_; }
    const std::string& tool_name() const noexcept { return tool_name_; }
    ToolMode tool_mode() const noexcept { return tool_mode_; }
    const std::vector<Component>& components() const noexcept { return components_; }

    bool operator==(const SbomDocument&) const = default;

private:
    SbomDocument() = default;

    // parse_sbom builds documents without the secure-mode hash requirement so
    // hostile inputs reach the verifier instead of failing at the parser.
    friend SbomDocument parse_sbom(const std::string& json_text);

    std::string serial_number_;
    std::uint64_t timestamp_ms_ = 0;
    std::string tool_name_;
    ToolMode tool_mode_ = ToolMode::naive;
    std::vector<Component> components_;
};

/// Deterministic JSON bytes: sorted object keys, no insignificant whitespace,
/// UTF-8, lowercase hex hashes.
std::string canonical_serialize(const SbomDocument& doc);
Hash256 canonical_digest(const SbomDocument& doc);

/// Inverse of canonical_serialize. Accepts any structurally valid document,
/// including hostile ones whose secure-mode components lack hashes (the
/// verifier flags those); duplicate (name, version) pairs are a parse error.
SbomDocument parse_sbom(const std::string& json_text);

void write_sbom(const SbomDocument& doc, const std::filesystem::path& file);
SbomDocument read_sbom(const std::filesystem::path& file);

std::string format_timestamp_ms(std::uint64_t ms);
std::uint64_t parse_timestamp_ms(const std::string& iso);

/// "urn:uuid:..." v4, from the CSPRNG.
std::string random_serial_number();

}  // namespace sbomguard
