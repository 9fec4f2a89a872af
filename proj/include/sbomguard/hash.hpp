// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sbomguard {

/// 32-byte SHA-256 digest. Hex rendering is lowercase, 64 characters.
class Hash256 {
public:
    static constexpr std::size_t kSize = 32;

    Hash256() = default;
    explicit Hash256(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

    static Hash256 from_hex(const std::string& hex);
    static std::optional<Hash256> try_from_hex(const std::string& hex);

    const std::array<std::uint8_t, kSize>& bytes() const noexcept { return bytes_; }
    std::string hex() const;
    bool is_zero() const noexcept;

    auto operator<=>(const Hash256&) const = default;

private:
    std::array<std::uint8_t, kSize> bytes_{};
};

Hash256 sha256(std::span<const std::uint8_t> data);
Hash256 sha256(const std::string& data);
Hash256 sha256_file(const std::filesystem::path& file);

std::string to_hex(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> from_hex(const std::string& hex);

}  // namespace sbomguard
