// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/version.hpp"

#include <cctype>

#include "sbomguard/errors.hpp"

namespace sbomguard {

std::optional<Version> Version::try_parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    Version v;
    v.raw = text;

    std::string numeric = text;
    if (auto dash = text.find('-'); dash != std::string::npos) {
        numeric = text.substr(0, dash);
        v.suffix = text.substr(dash + 1);
        if (v.suffix.empty()) return std::nullopt;
    }
    if (numeric.empty()) return std::nullopt;

    std::size_t pos = 0;
    while (pos < numeric.size()) {
        std::size_t start = pos;
        while (pos < numeric.size() && std::isdigit(static_cast<unsigned char>(numeric[pos]))) ++pos;
        if (pos == start) return std::nullopt;  // empty part
        v.numbers.push_back(std::stoull(numeric.substr(start, pos - start)));
        if (pos == numeric.size()) break;
        if (numeric[pos] != '.') return std::nullopt;
        ++pos;
        if (pos == numeric.size()) return std::nullopt;  // trailing dot
    }
    if (v.numbers.empty() || v.numbers.size() > 3) return std::nullopt;
    return v;
}

Version Version::parse(const std::string& text) {
    auto v = try_parse(text);
    if (!v) raise(Errc::version_parse_error, "\"" + text + "\" is not N[.N[.N]][-suffix]");
    return *v;
}

int Version::compare(const Version& other) const {
    std::size_t n = std::max(numbers.size(), other.numbers.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t a = i < numbers.size() ? numbers[i] : 0;
        std::uint64_t b = i < other.numbers.size() ? other.numbers[i] : 0;
        if (a != b) return a < b ? -1 : 1;
    }
    // Equal numeric base: plain lexicographic suffix order, empty first.
    if (suffix != other.suffix) return suffix < other.suffix ? -1 : 1;
    return 0;
}

bool looks_like_version(const std::string& text) { return Version::try_parse(text).has_value(); }

}  // namespace sbomguard
