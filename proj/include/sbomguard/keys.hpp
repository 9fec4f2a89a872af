// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>

#include "sbomguard/hash.hpp"

namespace sbomguard {

/// Ed25519 public key, 32 bytes.
class PublicKey {
public:
    static constexpr std::size_t kSize = 32;

    PublicKey() = default;
    explicit PublicKey(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

    static PublicKey from_hex(const std::string& hex);

    const std::array<std::uint8_t, kSize>& bytes() const noexcept { return bytes_; }
    std::string hex() const;

    auto operator<=>(const PublicKey&) const = default;

private:
    std::array<std::uint8_t, kSize> bytes_{};
};

/// Ed25519 detached signature, 64 bytes.
class Signature {
public:
    static constexpr std::size_t kSize = 64;

    Signature() = default;
    explicit Signature(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

    static Signature from_hex(const std::string& hex);

    const std::array<std::uint8_t, kSize>& bytes() const noexcept { return bytes_; }
    std::string hex() const;

    auto operator<=>(const Signature&) const = default;

private:
    std::array<std::uint8_t, kSize> bytes_{};
};

/// Ed25519 keypair. The secret key is libsodium's 64-byte form
/// (seed || public key); the 32-byte seed alone regenerates it.
class KeyPair {
public:
    static constexpr std::size_t kSeedSize = 32;
    static constexpr std::size_t kSecretSize = 64;

    static KeyPair generate();
    static KeyPair from_seed(const std::array<std::uint8_t, kSeedSize>& seed);
    static KeyPair from_secret_hex(const std::string& hex);

    const PublicKey& public_key() const noexcept { return public_; }
    const std::array<std::uint8_t, kSecretSize>& secret_key() const noexcept { return secret_; }
    std::string secret_hex() const;

    Signature sign(const Hash256& digest) const;

    void save(const std::filesystem::path& file) const;
    static KeyPair load(const std::filesystem::path& file);

private:
    KeyPair() = default;

    PublicKey public_;
    std::array<std::uint8_t, kSecretSize> secret_{};
};

bool verify_signature(const PublicKey& key, const Hash256& digest, const Signature& sig);

}  // namespace sbomguard
