// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/envelope.hpp"

#include <fstream>

#include "sbomguard/errors.hpp"

namespace sbomguard {

SignatureEnvelope sign_document(const SbomDocument& doc, const KeyPair& key) {
    SignatureEnvelope env;
    env.signer_pubkey = key.public_key();
    env.signature = key.sign(canonical_digest(doc));
    return env;
}

SignatureVerdict verify_document_signature(const SbomDocument& doc, const SignatureEnvelope& env) {
    if (env.scheme_id != SignatureEnvelope::kSchemeEd25519) return SignatureVerdict::invalid;
    return verify_signature(env.signer_pubkey, canonical_digest(doc), env.signature)
               ? SignatureVerdict::valid
               : SignatureVerdict::invalid;
}

std::vector<std::uint8_t> encode_envelope(const SignatureEnvelope& env) {
    std::vector<std::uint8_t> out;
    out.reserve(SignatureEnvelope::kEncodedSize);
    out.push_back(env.scheme_id);
    out.insert(out.end(), env.signer_pubkey.bytes().begin(), env.signer_pubkey.bytes().end());
    out.insert(out.end(), env.signature.bytes().begin(), env.signature.bytes().end());
    return out;
}

std::optional<SignatureEnvelope> decode_envelope(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != SignatureEnvelope::kEncodedSize) return std::nullopt;
    SignatureEnvelope env;
    env.scheme_id = bytes[0];
    std::array<std::uint8_t, PublicKey::kSize> pk{};
    std::copy_n(bytes.begin() + 1, PublicKey::kSize, pk.begin());
    env.signer_pubkey = PublicKey(pk);
    std::array<std::uint8_t, Signature::kSize> sig{};
    std::copy_n(bytes.begin() + 1 + PublicKey::kSize, Signature::kSize, sig.begin());
    env.signature = Signature(sig);
    return env;
}

void write_envelope(const SignatureEnvelope& env, const std::filesystem::path& file) {
    auto bytes = encode_envelope(env);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::optional<SignatureEnvelope> read_envelope(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_envelope(bytes);
}

}  // namespace sbomguard
