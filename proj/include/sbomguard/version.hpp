// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sbomguard {

/// Dotted numeric version: N[.N[.N]] with an optional suffix after the first
/// '-', carried verbatim. Comparison is by numeric tuple (missing parts count
/// as zero), then suffix lexicographically with the empty suffix first.
struct Version {
    std::vector<std::uint64_t> numbers;
    std::string suffix;
    std::string raw;

    static std::optional<Version> try_parse(const std::string& text);
    static Version parse(const std::string& text);  // throws Errc::version_parse_error

    int compare(const Version& other) const;
    bool operator<(const Version& other) const { return compare(other) < 0; }
    bool operator==(const Version& other) const { return compare(other) == 0; }
};

bool looks_like_version(const std::string& text);

}  // namespace sbomguard
