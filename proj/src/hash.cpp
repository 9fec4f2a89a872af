// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/hash.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>

#include "sbomguard/errors.hpp"

namespace sbomguard {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) raise(Errc::parse_error, "hex string has odd length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) raise(Errc::parse_error, "invalid hex digit in \"" + hex + "\"");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Hash256 Hash256::from_hex(const std::string& hex) {
    auto h = try_from_hex(hex);
    if (!h) raise(Errc::parse_error, "expected 64 hex characters, got \"" + hex + "\"");
    return *h;
}

std::optional<Hash256> Hash256::try_from_hex(const std::string& hex) {
    if (hex.size() != kSize * 2) return std::nullopt;
    std::array<std::uint8_t, kSize> bytes{};
    for (std::size_t i = 0; i < kSize; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return Hash256(bytes);
}

std::string Hash256::hex() const { return to_hex(bytes_); }

bool Hash256::is_zero() const noexcept {
    return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

Hash256 sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, Hash256::kSize> out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return Hash256(out);
}

Hash256 sha256(const std::string& data) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Hash256 sha256_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + file.string());
    crypto_hash_sha256_state state;
    crypto_hash_sha256_init(&state);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        crypto_hash_sha256_update(&state, reinterpret_cast<const std::uint8_t*>(buf),
                                  static_cast<std::size_t>(in.gcount()));
    }
    std::array<std::uint8_t, Hash256::kSize> out{};
    crypto_hash_sha256_final(&state, out.data());
    return Hash256(out);
}

}  // namespace sbomguard
