// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sbomguard/hash.hpp"
#include "sbomguard/keys.hpp"

namespace sbomguard::ledger {

inline constexpr std::size_t kNameWidth = 32;
inline constexpr std::size_t kIdentityContentWidth = 128;
inline constexpr std::size_t kIdentityTxWidth = 296;
inline constexpr std::size_t kLibraryTxWidth = 208;
inline constexpr std::size_t kBlockHeaderWidth = 84;

enum class IdentityOp : std::uint8_t { claim = 0x01, transfer = 0x02 };

/// The 128-byte payload of an identity transaction:
/// op_type(1) || library_name(32, zero-padded UTF-8) || prev_tx_id(32) || reserved(63).
struct IdentityContent {
    IdentityOp op = IdentityOp::claim;
    std::string library_name;
    Hash256 prev_tx_id;  // all-zero for a claim

    bool operator==(const IdentityContent&) const = default;
};

/// Ownership claim/transfer record. Wire form (big-endian, 296 bytes):
/// id(32) || timestamp(8) || input_pubkey(32) || output_pubkey(32) || content(128) || signature(64).
/// id = SHA-256(timestamp || input_pubkey || output_pubkey || content); the
/// signature covers id under input_pubkey.
struct IdentityTransaction {
    Hash256 id;
    std::uint64_t timestamp_ms = 0;
    PublicKey input_pubkey;
    PublicKey output_pubkey;
    IdentityContent content;
    Signature signature;

    bool operator==(const IdentityTransaction&) const = default;
};

/// Packed version: major u16 || minor u16 || patch u16 || reserved u16, big-endian.
struct PackedVersion {
    std::uint16_t major = 0;
    std::uint16_t minor = 0;
    std::uint16_t patch = 0;

    /// Numeric dotted versions only; components above 65535 or non-numeric
    /// parts are rejected at this boundary (the wire format allots 8 bytes).
    static PackedVersion parse(const std::string& text);
    std::string str() const;

    bool operator==(const PackedVersion&) const = default;
    auto operator<=>(const PackedVersion&) const = default;
};

/// Per-version library hash record. Wire form (big-endian, 208 bytes):
/// id(32) || timestamp(8) || owner_pubkey(32) || library_name(32) || version(8) ||
/// artifact_hash(32) || signature(64).
struct LibraryTransaction {
    Hash256 id;
    std::uint64_t timestamp_ms = 0;
    PublicKey owner_pubkey;
    std::string library_name;
    PackedVersion version;
    Hash256 artifact_hash;
    Signature signature;

    bool operator==(const LibraryTransaction&) const = default;
};

std::vector<std::uint8_t> encode_tx(const IdentityTransaction& tx);
std::vector<std::uint8_t> encode_tx(const LibraryTransaction& tx);
IdentityTransaction decode_identity_tx(std::span<const std::uint8_t> bytes);
LibraryTransaction decode_library_tx(std::span<const std::uint8_t> bytes);

Hash256 compute_tx_id(const IdentityTransaction& tx);
Hash256 compute_tx_id(const LibraryTransaction& tx);

/// Build-and-sign helpers; id and signature are filled in.
IdentityTransaction make_identity_tx(const KeyPair& signer, const PublicKey& output,
                                     IdentityOp op, const std::string& library_name,
                                     const Hash256& prev_tx_id, std::uint64_t timestamp_ms);
LibraryTransaction make_library_tx(const KeyPair& owner, const std::string& library_name,
                                   PackedVersion version, const Hash256& artifact_hash,
                                   std::uint64_t timestamp_ms);

/// 84-byte header: prev_hash(32) || height(8) || timestamp(8) || tx_count(4) || body_hash(32).
/// Every field recomputes from content: height = prev height + 1, timestamp =
/// max(prev block timestamp, tx timestamps), body_hash = SHA-256 of the
/// concatenated transaction encodings. The block hash is SHA-256 of the header.
struct BlockHeader {
    Hash256 prev_block_hash;  // zero for genesis
    std::uint64_t height = 0;
    std::uint64_t timestamp_ms = 0;
    std::uint32_t tx_count = 0;
    Hash256 body_hash;

    bool operator==(const BlockHeader&) const = default;
};

std::array<std::uint8_t, kBlockHeaderWidth> encode_header(const BlockHeader& header);
BlockHeader decode_header(std::span<const std::uint8_t> bytes);
Hash256 block_hash(const BlockHeader& header);

template <typename Tx>
struct Block {
    BlockHeader header;
    std::vector<Tx> transactions;

    bool operator==(const Block&) const = default;
};

using IdentityBlock = Block<IdentityTransaction>;
using LibraryBlock = Block<LibraryTransaction>;

enum class ChainSelector { identity, library };

struct Rejection {
    Hash256 tx_id;
    std::string library_name;
    std::string reason;
};

template <typename Tx>
struct SealResult {
    Block<Tx> block;
    std::vector<Rejection> rejections;
};

struct AuditFinding {
    ChainSelector chain = ChainSelector::identity;
    std::uint64_t block_height = 0;
    std::string problem;
};

struct AuditReport {
    bool ok = true;
    std::vector<AuditFinding> findings;
    std::uint64_t identity_blocks = 0;
    std::uint64_t library_blocks = 0;
};

struct LedgerConfig {
    /// Simulated block confirmation delay. 0 makes sealed blocks visible
    /// immediately; realistic() models the 40-minute median confirmation
    /// time used in the feasibility analysis.
    std::uint64_t confirmation_delay_ms = 0;
    std::function<std::uint64_t()> clock;  // defaults to system wall clock (ms)

    static LedgerConfig realistic();
};

/// The decentralized reference repository: an identities chain (ownership
/// claims and transfers) and a library chain (per-version hash records).
/// Single sequencer: submissions queue as pending, form_block validates and
/// seals them. Readers only ever see sealed blocks.
class DualLedger {
public:
    explicit DualLedger(LedgerConfig config = {});

    // --- submission -------------------------------------------------------
    IdentityTransaction claim_ownership(const KeyPair& owner, const std::string& library_name,
                                        std::optional<std::uint64_t> timestamp_ms = std::nullopt);
    IdentityTransaction transfer_ownership(const KeyPair& current_owner, const PublicKey& new_owner,
                                           const std::string& library_name,
                                           std::optional<std::uint64_t> timestamp_ms = std::nullopt);
    LibraryTransaction register_library(const KeyPair& owner, const std::string& library_name,
                                        const std::string& version, const Hash256& artifact_hash,
                                        std::optional<std::uint64_t> timestamp_ms = std::nullopt);

    // --- block formation ----------------------------------------------------
    SealResult<IdentityTransaction> seal_identity_block();
    SealResult<LibraryTransaction> seal_library_block();

    // --- queries ------------------------------------------------------------
    /// Replay answer: the owner established by identity transactions with
    /// timestamp <= t (sealed blocks only).
    std::optional<PublicKey> owner_at(const std::string& library_name, std::uint64_t t_ms) const;
    std::optional<PublicKey> current_owner(const std::string& library_name) const;

    struct QueryResult {
        LibraryTransaction tx;
        IdentityTransaction owner_proof;  // the identity tx establishing ownership at tx time
    };

    /// Reader-side verification: return the record only if its id recomputes,
    /// its signature verifies under owner_pubkey, and the identity chain
    /// confirms that owner at the recording timestamp.
    QueryResult query_and_verify(const std::string& library_name, const std::string& version,
                                 std::optional<std::uint64_t> as_of_ms = std::nullopt) const;

    const std::vector<IdentityBlock>& identity_chain() const noexcept { return identity_chain_; }
    const std::vector<LibraryBlock>& library_chain() const noexcept { return library_chain_; }
    std::size_t pending_identity_count() const noexcept { return pending_identity_.size(); }
    std::size_t pending_library_count() const noexcept { return pending_library_.size(); }

    // --- integrity ----------------------------------------------------------
    /// Full re-verification of both chains: header linkage, recomputed header
    /// fields, body hashes, transaction ids, signatures, and a semantic replay
    /// of the ownership and uniqueness rules.
    AuditReport audit() const;

    // --- persistence ----------------------------------------------------------
    static constexpr const char* kIdentityChainFile = "identity.chain";
    static constexpr const char* kLibraryChainFile = "library.chain";
    static constexpr const char* kIdentityPendingFile = "identity.pending";
    static constexpr const char* kLibraryPendingFile = "library.pending";

    void save(const std::filesystem::path& dir) const;
    static DualLedger load(const std::filesystem::path& dir, LedgerConfig config = {});

private:
    struct OwnershipEvent {
        std::uint64_t timestamp_ms;
        PublicKey owner;
        IdentityTransaction tx;
    };

    std::uint64_t now_ms() const;
    bool block_confirmed(const BlockHeader& header, std::uint64_t as_of_ms) const;
    const OwnershipEvent* ownership_event_at(const std::string& name, std::uint64_t t_ms) const;
    std::optional<std::string> validate_identity_tx(const IdentityTransaction& tx,
                                                    const std::map<std::string, OwnershipEvent>& view) const;
    std::optional<std::string> validate_library_tx(const LibraryTransaction& tx,
                                                   const std::vector<LibraryTransaction>& block_txs) const;
    void index_identity_block(const IdentityBlock& block);
    void index_library_block(const LibraryBlock& block);

    LedgerConfig config_;
    std::vector<IdentityBlock> identity_chain_;
    std::vector<LibraryBlock> library_chain_;
    std::deque<IdentityTransaction> pending_identity_;
    std::deque<LibraryTransaction> pending_library_;
    // name -> time-ordered ownership events (claims and transfers)
    std::map<std::string, std::vector<OwnershipEvent>> ownership_;
    // (name, packed version) -> sealed library tx
    std::map<std::pair<std::string, PackedVersion>, LibraryTransaction> library_index_;
};

/// Load-and-audit for the CLI: any corruption (including files that no longer
/// parse) is reported with the offending block height instead of thrown.
AuditReport audit_chain_files(const std::filesystem::path& dir);

}  // namespace sbomguard::ledger
