// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/keys.hpp"

#include <sodium.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"

namespace sbomguard {

namespace {

void ensure_sodium() {
    if (sodium_init() < 0) raise(Errc::key_error, "libsodium initialization failed");
}

template <std::size_t N>
std::array<std::uint8_t, N> array_from_hex(const std::string& hex, const char* what) {
    auto bytes = from_hex(hex);
    if (bytes.size() != N)
        raise(Errc::key_error, std::string(what) + " must be " + std::to_string(N) + " bytes");
    std::array<std::uint8_t, N> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

}  // namespace

PublicKey PublicKey::from_hex(const std::string& hex) {
    return PublicKey(array_from_hex<kSize>(hex, "public key"));
}

std::string PublicKey::hex() const { return to_hex(bytes_); }

Signature Signature::from_hex(const std::string& hex) {
    return Signature(array_from_hex<kSize>(hex, "signature"));
}

std::string Signature::hex() const { return to_hex(bytes_); }

KeyPair KeyPair::generate() {
    ensure_sodium();
    std::array<std::uint8_t, kSeedSize> seed{};
    randombytes_buf(seed.data(), seed.size());
    return from_seed(seed);
}

KeyPair KeyPair::from_seed(const std::array<std::uint8_t, kSeedSize>& seed) {
    ensure_sodium();
    KeyPair kp;
    std::array<std::uint8_t, PublicKey::kSize> pk{};
    if (crypto_sign_seed_keypair(pk.data(), kp.secret_.data(), seed.data()) != 0)
        raise(Errc::key_error, "keypair derivation failed");
    kp.public_ = PublicKey(pk);
    return kp;
}

KeyPair KeyPair::from_secret_hex(const std::string& hex) {
    ensure_sodium();
    KeyPair kp;
    kp.secret_ = array_from_hex<kSecretSize>(hex, "secret key");
    std::array<std::uint8_t, PublicKey::kSize> pk{};
    if (crypto_sign_ed25519_sk_to_pk(pk.data(), kp.secret_.data()) != 0)
        raise(Errc::key_error, "cannot derive public key from secret key");
    kp.public_ = PublicKey(pk);
    // The secret key embeds the public half; a mismatch means a corrupt key file.
    if (!std::equal(pk.begin(), pk.end(), kp.secret_.begin() + kSeedSize))
        raise(Errc::key_error, "secret key is internally inconsistent");
    return kp;
}

std::string KeyPair::secret_hex() const { return to_hex(secret_); }

Signature KeyPair::sign(const Hash256& digest) const {
    std::array<std::uint8_t, Signature::kSize> sig{};
    unsigned long long len = 0;
    if (crypto_sign_detached(sig.data(), &len, digest.bytes().data(), digest.bytes().size(),
                             secret_.data()) != 0 ||
        len != Signature::kSize)
        raise(Errc::key_error, "signing failed");
    return Signature(sig);
}

void KeyPair::save(const std::filesystem::path& file) const {
    nlohmann::json j{
        {"scheme", "ed25519"},
        {"public_key", public_.hex()},
        {"secret_key", secret_hex()},
    };
    std::ofstream out(file, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

KeyPair KeyPair::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) raise(Errc::key_error, "cannot open key file " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::key_error, "malformed key file " + file.string() + ": " + e.what());
    }
    if (j.value("scheme", "") != "ed25519")
        raise(Errc::key_error, "unsupported key scheme in " + file.string());
    auto kp = from_secret_hex(j.value("secret_key", ""));
    if (j.contains("public_key") && j["public_key"].get<std::string>() != kp.public_key().hex())
        raise(Errc::key_error, "public key does not match secret key in " + file.string());
    return kp;
}

bool verify_signature(const PublicKey& key, const Hash256& digest, const Signature& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.bytes().data(), digest.bytes().data(),
                                       digest.bytes().size(), key.bytes().data()) == 0;
}

}  // namespace sbomguard
