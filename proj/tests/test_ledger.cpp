// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0
//
// Dual-ledger reference repository: fixed-width codecs, ownership rules,
// temporal queries, persistence, and bit-flip audit coverage.

#include <doctest.h>

#include <fstream>
#include <map>

#include "sbomguard/ledger.hpp"

#include "support.hpp"

using namespace sbomguard;
using namespace sbomguard::ledger;
using namespace testsupport;

namespace {

PackedVersion random_version(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> part(0, 65535);
    return PackedVersion{static_cast<std::uint16_t>(part(rng)),
                         static_cast<std::uint16_t>(part(rng)),
                         static_cast<std::uint16_t>(part(rng))};
}

IdentityTransaction random_identity_tx(std::mt19937_64& rng, const KeyPair& key) {
    std::uniform_int_distribution<std::uint64_t> ts(0, 1ull << 48);
    std::uniform_int_distribution<int> coin(0, 1);
    bool claim = coin(rng) == 0;
    auto name = random_name(rng, 32);
    auto prev = claim ? Hash256{} : sha256(random_name(rng));
    auto output = claim ? key.public_key() : KeyPair::generate().public_key();
    return make_identity_tx(key, output, claim ? IdentityOp::claim : IdentityOp::transfer, name,
                            prev, ts(rng));
}

LibraryTransaction random_library_tx(std::mt19937_64& rng, const KeyPair& key) {
    std::uniform_int_distribution<std::uint64_t> ts(0, 1ull << 48);
    return make_library_tx(key, random_name(rng, 32), random_version(rng),
                           sha256(random_name(rng)), ts(rng));
}

/// Brute-force ownership oracle: scan every sealed identity tx in chain
/// order, applying those with timestamp <= t.
std::optional<PublicKey> replay_owner(const DualLedger& ledger, const std::string& name,
                                      std::uint64_t t_ms) {
    std::optional<PublicKey> owner;
    for (const auto& block : ledger.identity_chain())
        for (const auto& tx : block.transactions)
            if (tx.content.library_name == name && tx.timestamp_ms <= t_ms)
                owner = tx.output_pubkey;
    return owner;
}

void flip_bit(const std::filesystem::path& file, std::size_t byte_index, int bit) {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(static_cast<std::streamoff>(byte_index));
    char c = 0;
    f.read(&c, 1);
    f.seekp(static_cast<std::streamoff>(byte_index));
    c = static_cast<char>(c ^ (1 << bit));
    f.write(&c, 1);
}

}  // namespace

TEST_CASE("identity and library transactions encode to exactly 296 and 208 bytes") {
    auto rng = make_rng(0x5eed0301);
    auto key = KeyPair::generate();
    for (int i = 0; i < 300; ++i) {
        auto itx = random_identity_tx(rng, key);
        auto ibytes = encode_tx(itx);
        CHECK(ibytes.size() == kIdentityTxWidth);
        CHECK(decode_identity_tx(ibytes) == itx);

        auto ltx = random_library_tx(rng, key);
        auto lbytes = encode_tx(ltx);
        CHECK(lbytes.size() == kLibraryTxWidth);
        CHECK(decode_library_tx(lbytes) == ltx);
    }
}

TEST_CASE("decoding rejects wrong widths and corrupted reserved regions") {
    auto rng = make_rng(0x5eed0302);
    auto key = KeyPair::generate();
    auto tx = random_identity_tx(rng, key);
    auto bytes = encode_tx(tx);

    auto short_bytes = bytes;
    short_bytes.pop_back();
    expect_error(Errc::width_error, [&] { decode_identity_tx(short_bytes); });

    // The 63 reserved content bytes must stay zero.
    auto reserved = bytes;
    reserved[32 + 8 + 32 + 32 + 1 + 32 + 32 + 10] ^= 0x01;
    expect_error(Errc::width_error, [&] { decode_identity_tx(reserved); });
}

TEST_CASE("library names longer than 32 bytes are rejected, never truncated") {
    DualLedger ledger;
    auto key = KeyPair::generate();
    std::string long_name(33, 'a');
    expect_error(Errc::name_too_long, [&] { ledger.claim_ownership(key, long_name, 1000); });
    std::string exact_name(32, 'a');
    CHECK_NOTHROW(ledger.claim_ownership(key, exact_name, 1000));
}

TEST_CASE("packed versions parse, normalize, and reject out-of-range input") {
    CHECK(PackedVersion::parse("1.9") == PackedVersion{1, 9, 0});
    CHECK(PackedVersion::parse("1.9").str() == "1.9.0");
    CHECK(PackedVersion::parse("0.8.2") == PackedVersion{0, 8, 2});
    CHECK(PackedVersion::parse("65535.65535.65535").str() == "65535.65535.65535");

    for (const char* bad : {"", "a.b", "1.2.3.4", "70000", "1..2", "1.2.3-rc1", "1.2."})
        expect_error(Errc::version_parse_error, [&] { PackedVersion::parse(bad); });

    auto rng = make_rng(0x5eed0303);
    for (int i = 0; i < 200; ++i) {
        auto v = random_version(rng);
        CHECK(PackedVersion::parse(v.str()) == v);
    }
}

TEST_CASE("claim, seal, and resolve ownership") {
    DualLedger ledger;
    auto alice = KeyPair::generate();
    auto tx = ledger.claim_ownership(alice, "poco-demo", 1000);
    CHECK(ledger.pending_identity_count() == 1);
    CHECK_FALSE(ledger.current_owner("poco-demo").has_value());  // not sealed yet

    auto sealed = ledger.seal_identity_block();
    CHECK(sealed.rejections.empty());
    CHECK(sealed.block.header.tx_count == 1);
    CHECK(sealed.block.transactions.front() == tx);
    CHECK(ledger.current_owner("poco-demo") == alice.public_key());
    CHECK_FALSE(ledger.owner_at("poco-demo", 999).has_value());
}

TEST_CASE("second claim on an owned name is AlreadyOwned, pending or sealed") {
    DualLedger ledger;
    auto alice = KeyPair::generate();
    auto mallory = KeyPair::generate();
    ledger.claim_ownership(alice, "poco-demo", 1000);
    // Queued but unsealed claims already block rivals.
    expect_error(Errc::already_owned,
                 [&] { ledger.claim_ownership(mallory, "poco-demo", 1001); });
    ledger.seal_identity_block();
    expect_error(Errc::already_owned,
                 [&] { ledger.claim_ownership(mallory, "poco-demo", 1002); });
}

TEST_CASE("transfer chain A -> B -> C resolves per epoch and matches the replay oracle") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto b = KeyPair::generate();
    auto c = KeyPair::generate();

    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    ledger.transfer_ownership(a, b.public_key(), "lib", 2000);
    ledger.seal_identity_block();
    ledger.transfer_ownership(b, c.public_key(), "lib", 3000);
    ledger.seal_identity_block();

    CHECK(ledger.owner_at("lib", 1500) == a.public_key());
    CHECK(ledger.owner_at("lib", 2500) == b.public_key());
    CHECK(ledger.owner_at("lib", 3500) == c.public_key());
    CHECK_FALSE(ledger.owner_at("lib", 999).has_value());

    for (std::uint64_t t : {0ull, 1000ull, 1999ull, 2000ull, 2999ull, 3000ull, 9999ull})
        CHECK(ledger.owner_at("lib", t) == replay_owner(ledger, "lib", t));
}

TEST_CASE("non-owner transfer and transfer of unknown names are rejected") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto mallory = KeyPair::generate();
    expect_error(Errc::unknown_library, [&] {
        ledger.transfer_ownership(mallory, mallory.public_key(), "ghost", 1000);
    });
    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    expect_error(Errc::not_owner, [&] {
        ledger.transfer_ownership(mallory, mallory.public_key(), "lib", 2000);
    });
}

TEST_CASE("registration requires ownership; duplicates are rejected") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto mallory = KeyPair::generate();
    auto hash = sha256(std::string{"archive"});

    expect_error(Errc::not_owner, [&] { ledger.register_library(mallory, "lib", "1.0", hash, 500); });

    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    expect_error(Errc::not_owner,
                 [&] { ledger.register_library(mallory, "lib", "1.0", hash, 1500); });

    ledger.register_library(a, "lib", "1.0", hash, 2000);
    expect_error(Errc::duplicate_version,
                 [&] { ledger.register_library(a, "lib", "1.0", hash, 2100); });
    ledger.seal_library_block();
    expect_error(Errc::duplicate_version,
                 [&] { ledger.register_library(a, "lib", "1.0.0", hash, 2200); });

    auto result = ledger.query_and_verify("lib", "1.0");
    CHECK(result.tx.artifact_hash == hash);
    CHECK(result.owner_proof.output_pubkey == a.public_key());
}

TEST_CASE("forged registrations by random non-owner keys never enter the ledger") {
    DualLedger ledger;
    auto owner = KeyPair::generate();
    ledger.claim_ownership(owner, "lib", 1000);
    ledger.seal_identity_block();

    auto rng = make_rng(0x5eed0304);
    for (int i = 0; i < 50; ++i) {
        auto mallory = KeyPair::generate();
        expect_error(Errc::not_owner, [&] {
            ledger.register_library(mallory, "lib", std::to_string(i) + ".0",
                                    sha256(random_name(rng)), 2000 + i);
        });
    }
    CHECK(ledger.pending_library_count() == 0);
    CHECK(ledger.library_chain().empty());
}

TEST_CASE("seal-time validation rejects txs whose premises vanished, sealing an empty block") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    ledger.claim_ownership(a, "lib", 1000);
    // Registration is queued against the pending claim...
    ledger.register_library(a, "lib", "1.0", sha256(std::string{"x"}), 1500);
    // ...but the library chain seals first, so no sealed owner exists yet.
    auto sealed = ledger.seal_library_block();
    CHECK(sealed.block.transactions.empty());
    CHECK(sealed.block.header.tx_count == 0);
    REQUIRE(sealed.rejections.size() == 1);
    CHECK(sealed.rejections.front().library_name == "lib");
    CHECK(ledger.library_chain().size() == 1);  // the empty block still extends the chain

    // After the identity chain catches up, the registration goes through.
    ledger.seal_identity_block();
    ledger.register_library(a, "lib", "1.0", sha256(std::string{"x"}), 1600);
    auto second = ledger.seal_library_block();
    CHECK(second.rejections.empty());
    CHECK(second.block.header.tx_count == 1);
    CHECK(ledger.query_and_verify("lib", "1.0").tx.timestamp_ms == 1600);
}

TEST_CASE("query verifies against the owner at recording time, across transfers") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto b = KeyPair::generate();
    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    ledger.register_library(a, "lib", "1.0", sha256(std::string{"v1"}), 2000);
    ledger.seal_library_block();
    ledger.transfer_ownership(a, b.public_key(), "lib", 3000);
    ledger.seal_identity_block();

    // Registered by A before the transfer: still verifies against A.
    auto result = ledger.query_and_verify("lib", "1.0");
    CHECK(result.tx.owner_pubkey == a.public_key());
    CHECK(result.owner_proof.output_pubkey == a.public_key());

    // B registers the next version after taking ownership.
    ledger.register_library(b, "lib", "2.0", sha256(std::string{"v2"}), 4000);
    ledger.seal_library_block();
    CHECK(ledger.query_and_verify("lib", "2.0").owner_proof.output_pubkey == b.public_key());
}

TEST_CASE("randomized ownership sequences agree with the brute-force oracle everywhere") {
    auto rng = make_rng(0x5eed0305);
    DualLedger ledger;
    std::vector<KeyPair> keys;
    for (int i = 0; i < 6; ++i) keys.push_back(KeyPair::generate());
    std::vector<std::string> names{"alpha", "beta", "gamma", "delta"};
    // Track current owner per name to drive valid submissions.
    std::map<std::string, std::size_t> owner_index;

    std::uint64_t ts = 1000;
    std::uniform_int_distribution<std::size_t> name_pick(0, names.size() - 1);
    std::uniform_int_distribution<std::size_t> key_pick(0, keys.size() - 1);
    std::uniform_int_distribution<int> step(1, 50);
    std::uniform_int_distribution<int> seal_coin(0, 3);

    for (int i = 0; i < 120; ++i) {
        ts += static_cast<std::uint64_t>(step(rng));
        const auto& name = names[name_pick(rng)];
        auto it = owner_index.find(name);
        if (it == owner_index.end()) {
            auto k = key_pick(rng);
            ledger.claim_ownership(keys[k], name, ts);
            owner_index[name] = k;
        } else {
            auto k = key_pick(rng);
            ledger.transfer_ownership(keys[it->second], keys[k].public_key(), name, ts);
            owner_index[name] = k;
        }
        if (seal_coin(rng) == 0 && ledger.pending_identity_count() > 0)
            ledger.seal_identity_block();
    }
    if (ledger.pending_identity_count() > 0) ledger.seal_identity_block();

    std::uniform_int_distribution<std::uint64_t> t_pick(0, ts + 100);
    for (const auto& name : names) {
        for (int i = 0; i < 200; ++i) {
            auto t = t_pick(rng);
            CAPTURE(name);
            CAPTURE(t);
            CHECK(ledger.owner_at(name, t) == replay_owner(ledger, name, t));
        }
        CHECK(ledger.owner_at(name, ~0ull) == replay_owner(ledger, name, ~0ull));
    }

    auto report = ledger.audit();
    CHECK(report.ok);
    CHECK(report.findings.empty());
}

TEST_CASE("block headers chain and recompute from scratch") {
    DualLedger ledger;
    auto key = KeyPair::generate();
    std::uint64_t ts = 1000;
    for (int b = 0; b < 5; ++b) {
        for (int i = 0; i < 3; ++i)
            ledger.claim_ownership(key, "lib-" + std::to_string(b) + "-" + std::to_string(i),
                                   ts += 10);
        ledger.seal_identity_block();
    }

    const auto& chain = ledger.identity_chain();
    REQUIRE(chain.size() == 5);
    for (std::size_t h = 0; h < chain.size(); ++h) {
        const auto& header = chain[h].header;
        CHECK(header.height == h);
        CHECK(header.tx_count == 3);
        // Full re-hash oracle: recompute linkage and body hash from content.
        if (h == 0)
            CHECK(header.prev_block_hash.is_zero());
        else
            CHECK(header.prev_block_hash == block_hash(chain[h - 1].header));
        std::vector<std::uint8_t> body;
        std::uint64_t max_ts = h == 0 ? 0 : chain[h - 1].header.timestamp_ms;
        for (const auto& tx : chain[h].transactions) {
            auto bytes = encode_tx(tx);
            body.insert(body.end(), bytes.begin(), bytes.end());
            max_ts = std::max(max_ts, tx.timestamp_ms);
        }
        CHECK(header.body_hash == sha256(body));
        CHECK(header.timestamp_ms == max_ts);
    }
}

TEST_CASE("persistence round trip preserves chains and pending queues") {
    TempDir dir("ledger-persist");
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto b = KeyPair::generate();
    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    ledger.register_library(a, "lib", "1.0", sha256(std::string{"v1"}), 2000);
    ledger.seal_library_block();
    ledger.transfer_ownership(a, b.public_key(), "lib", 3000);  // stays pending
    // The queued transfer already makes b the effective owner for submissions.
    ledger.register_library(b, "lib", "1.1", sha256(std::string{"v11"}), 3100);  // stays pending

    ledger.save(dir.path());
    auto loaded = DualLedger::load(dir.path());
    CHECK(loaded.identity_chain() == ledger.identity_chain());
    CHECK(loaded.library_chain() == ledger.library_chain());
    CHECK(loaded.pending_identity_count() == 1);
    CHECK(loaded.pending_library_count() == 1);
    CHECK(loaded.current_owner("lib") == a.public_key());

    // Pending work continues after reload.
    loaded.seal_identity_block();
    CHECK(loaded.current_owner("lib") == b.public_key());
}

TEST_CASE("loading an empty directory yields an empty ledger") {
    TempDir dir("ledger-empty");
    auto ledger = DualLedger::load(dir.path());
    CHECK(ledger.identity_chain().empty());
    CHECK(ledger.library_chain().empty());
}

TEST_CASE("every single-bit flip in persisted chains is caught by the audit") {
    TempDir dir("ledger-bitflip");
    DualLedger ledger;
    auto a = KeyPair::generate();
    auto b = KeyPair::generate();
    ledger.claim_ownership(a, "flip-lib", 1000);
    ledger.seal_identity_block();
    ledger.transfer_ownership(a, b.public_key(), "flip-lib", 2000);
    ledger.seal_identity_block();
    ledger.register_library(b, "flip-lib", "1.0", sha256(std::string{"x"}), 3000);
    ledger.register_library(b, "flip-lib", "1.1", sha256(std::string{"y"}), 3001);
    ledger.seal_library_block();
    ledger.save(dir.path());

    REQUIRE(audit_chain_files(dir.path()).ok);

    auto rng = make_rng(0x5eed0306);
    std::uniform_int_distribution<int> bit_pick(0, 7);
    for (const char* file : {DualLedger::kIdentityChainFile, DualLedger::kLibraryChainFile}) {
        auto path = dir.path() / file;
        auto size = std::filesystem::file_size(path);
        std::uniform_int_distribution<std::size_t> byte_pick(0, size - 1);
        for (int trial = 0; trial < 120; ++trial) {
            auto byte_index = byte_pick(rng);
            auto bit = bit_pick(rng);
            flip_bit(path, byte_index, bit);
            auto report = audit_chain_files(dir.path());
            CAPTURE(file);
            CAPTURE(byte_index);
            CAPTURE(bit);
            CHECK_FALSE(report.ok);
            CHECK_FALSE(report.findings.empty());
            flip_bit(path, byte_index, bit);  // restore
        }
        REQUIRE(audit_chain_files(dir.path()).ok);
    }
}

TEST_CASE("sealing with an empty pending queue raises EmptyPending") {
    DualLedger ledger;
    expect_error(Errc::empty_pending, [&] { ledger.seal_identity_block(); });
    expect_error(Errc::empty_pending, [&] { ledger.seal_library_block(); });
}

TEST_CASE("confirmation delay hides fresh blocks from readers until it elapses") {
    auto clock_now = std::make_shared<std::uint64_t>(1'000'000);
    LedgerConfig config;
    config.confirmation_delay_ms = 2'400'000;  // the modeled 40 minutes
    config.clock = [clock_now] { return *clock_now; };

    DualLedger ledger(config);
    auto a = KeyPair::generate();
    ledger.claim_ownership(a, "lib", *clock_now);
    ledger.seal_identity_block();

    // Sequencer sees it (submission-side duplicate checks), readers do not.
    CHECK_FALSE(ledger.current_owner("lib").has_value());
    expect_error(Errc::already_owned, [&] { ledger.claim_ownership(a, "lib", *clock_now + 1); });

    *clock_now += 2'400'000;
    CHECK(ledger.current_owner("lib") == a.public_key());

    CHECK(LedgerConfig::realistic().confirmation_delay_ms == 2'400'000);
}

TEST_CASE("query_and_verify reports NotFound for unregistered versions") {
    DualLedger ledger;
    auto a = KeyPair::generate();
    ledger.claim_ownership(a, "lib", 1000);
    ledger.seal_identity_block();
    expect_error(Errc::not_found, [&] { ledger.query_and_verify("lib", "1.0"); });
    expect_error(Errc::not_found, [&] { ledger.query_and_verify("ghost", "1.0"); });
}
