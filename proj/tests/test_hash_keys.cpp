// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0
//
// Hashing and signing primitives, checked against independent oracles first:
// published SHA-256 test vectors, the system sha256sum tool, and the RFC 8032
// Ed25519 key-derivation vector.

#include <doctest.h>

#include <fstream>

#include "sbomguard/hash.hpp"
#include "sbomguard/keys.hpp"

#include "support.hpp"

using namespace sbomguard;
using namespace testsupport;

TEST_CASE("sha256 matches published NIST vectors") {
    // FIPS 180-2 appendix vectors, independent of this codebase.
    CHECK(sha256(std::string{}).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256(std::string{"abc"}).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256(std::string{"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"}).hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256_file agrees with the system sha256sum tool") {
    TempDir dir("hash-oracle");
    auto rng = make_rng(0x5eed0001);
    for (int i = 0; i < 5; ++i) {
        auto file = dir.path() / ("blob" + std::to_string(i));
        std::uniform_int_distribution<std::size_t> size_dist(0, 8192);
        std::uniform_int_distribution<int> byte_dist(0, 255);
        std::string bytes(size_dist(rng), '\0');
        for (auto& c : bytes) c = static_cast<char>(byte_dist(rng));
        std::ofstream(file, std::ios::binary).write(bytes.data(), bytes.size());

        auto expected = sha256sum_oracle(file);
        CHECK(sha256_file(file).hex() == expected);
        CHECK(sha256(bytes).hex() == expected);
    }
}

TEST_CASE("hex round trip and validation") {
    auto h = sha256(std::string{"round trip"});
    CHECK(Hash256::from_hex(h.hex()) == h);
    CHECK_FALSE(Hash256::try_from_hex("zz").has_value());
    CHECK_FALSE(Hash256::try_from_hex(h.hex().substr(1)).has_value());
    CHECK_FALSE(Hash256{}.is_zero() == false);
    CHECK_FALSE(h.is_zero());
}

TEST_CASE("ed25519 key derivation matches the RFC 8032 test vector") {
    // RFC 8032 section 7.1 TEST 1: seed -> public key, independent of libsodium.
    auto seed_bytes = from_hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
    std::array<std::uint8_t, KeyPair::kSeedSize> seed{};
    std::copy(seed_bytes.begin(), seed_bytes.end(), seed.begin());
    auto key = KeyPair::from_seed(seed);
    CHECK(key.public_key().hex() ==
          "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
}

TEST_CASE("signature soundness over random digests and keys") {
    auto rng = make_rng(0x5eed0002);
    for (int i = 0; i < 50; ++i) {
        auto key = KeyPair::generate();
        auto other = KeyPair::generate();
        auto digest = sha256(random_name(rng, 64));
        auto sig = key.sign(digest);

        CHECK(verify_signature(key.public_key(), digest, sig));
        CHECK_FALSE(verify_signature(other.public_key(), digest, sig));

        auto wrong_digest = sha256(digest.hex());
        CHECK_FALSE(verify_signature(key.public_key(), wrong_digest, sig));

        auto mutated = sig.bytes();
        mutated[i % mutated.size()] ^= 0x01;
        CHECK_FALSE(verify_signature(key.public_key(), digest,
                                     Signature::from_hex(to_hex(mutated))));
    }
}

TEST_CASE("keypair save and load round trip") {
    TempDir dir("keys");
    auto key = KeyPair::generate();
    auto file = dir.path() / "key.json";
    key.save(file);
    auto loaded = KeyPair::load(file);
    CHECK(loaded.public_key() == key.public_key());

    auto digest = sha256(std::string{"persisted key signs the same"});
    CHECK(verify_signature(key.public_key(), digest, loaded.sign(digest)));
}

TEST_CASE("from_secret_hex rejects malformed input") {
    expect_error(Errc::key_error, [] { KeyPair::from_secret_hex("abcd"); });
}
