// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sbomguard/keys.hpp"
#include "sbomguard/sbom.hpp"

namespace sbomguard {

/// Detached signature over the canonical digest of an SbomDocument.
/// Sidecar wire form: scheme_id(1) || pubkey(32) || signature(64).
struct SignatureEnvelope {
    static constexpr std::uint8_t kSchemeEd25519 = 0x01;
    static constexpr std::size_t kEncodedSize = 1 + PublicKey::kSize + Signature::kSize;

    std::uint8_t scheme_id = kSchemeEd25519;
    PublicKey signer_pubkey;
    Signature signature;

    bool operator==(const SignatureEnvelope&) const = default;
};

SignatureEnvelope sign_document(const SbomDocument& doc, const KeyPair& key);

enum class SignatureVerdict { valid, invalid };

/// Never throws; a malformed or wrong-scheme envelope is just invalid.
SignatureVerdict verify_document_signature(const SbomDocument& doc, const SignatureEnvelope& env);

std::vector<std::uint8_t> encode_envelope(const SignatureEnvelope& env);
std::optional<SignatureEnvelope> decode_envelope(std::span<const std::uint8_t> bytes);

void write_envelope(const SignatureEnvelope& env, const std::filesystem::path& file);
std::optional<SignatureEnvelope> read_envelope(const std::filesystem::path& file);

}  // namespace sbomguard
