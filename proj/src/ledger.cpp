// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/ledger.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>

#include "sbomguard/errors.hpp"

namespace sbomguard::ledger {

namespace fs = std::filesystem;

namespace {

// --- primitive big-endian writers/readers -----------------------------------

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t pos) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[pos + i];
    return v;
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t pos) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | in[pos + i];
    return v;
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t pos) {
    return static_cast<std::uint16_t>((in[pos] << 8) | in[pos + 1]);
}

template <std::size_t N>
void put_bytes(std::vector<std::uint8_t>& out, const std::array<std::uint8_t, N>& bytes) {
    out.insert(out.end(), bytes.begin(), bytes.end());
}

template <std::size_t N>
std::array<std::uint8_t, N> get_bytes(std::span<const std::uint8_t> in, std::size_t pos) {
    std::array<std::uint8_t, N> out{};
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(pos), N, out.begin());
    return out;
}

// zero-padded fixed-width name field
void put_name(std::vector<std::uint8_t>& out, const std::string& name) {
    if (name.size() > kNameWidth)
        raise(Errc::name_too_long, name + " is " + std::to_string(name.size()) + " bytes (max " +
                                       std::to_string(kNameWidth) + ")");
    if (name.find('\0') != std::string::npos)
        raise(Errc::width_error, "library name contains a NUL byte");
    if (name.empty()) raise(Errc::width_error, "library name is empty");
    out.insert(out.end(), name.begin(), name.end());
    out.insert(out.end(), kNameWidth - name.size(), 0);
}

std::string get_name(std::span<const std::uint8_t> in, std::size_t pos) {
    std::size_t len = 0;
    while (len < kNameWidth && in[pos + len] != 0) ++len;
    for (std::size_t i = len; i < kNameWidth; ++i)
        if (in[pos + i] != 0) raise(Errc::width_error, "library name padding is not zero");
    if (len == 0) raise(Errc::width_error, "library name is empty");
    return std::string(reinterpret_cast<const char*>(in.data() + pos), len);
}

void put_version(std::vector<std::uint8_t>& out, PackedVersion v) {
    put_u16(out, v.major);
    put_u16(out, v.minor);
    put_u16(out, v.patch);
    put_u16(out, 0);  // reserved
}

PackedVersion get_version(std::span<const std::uint8_t> in, std::size_t pos) {
    if (get_u16(in, pos + 6) != 0) raise(Errc::width_error, "version reserved field is not zero");
    return {get_u16(in, pos), get_u16(in, pos + 2), get_u16(in, pos + 4)};
}

// content = op(1) || name(32) || prev_tx_id(32) || reserved(63)
std::vector<std::uint8_t> encode_content(const IdentityContent& content) {
    std::vector<std::uint8_t> out;
    out.reserve(kIdentityContentWidth);
    out.push_back(static_cast<std::uint8_t>(content.op));
    put_name(out, content.library_name);
    put_bytes(out, content.prev_tx_id.bytes());
    out.insert(out.end(), kIdentityContentWidth - out.size(), 0);
    return out;
}

IdentityContent decode_content(std::span<const std::uint8_t> in) {
    auto op = in[0];
    if (op != 0x01 && op != 0x02)
        raise(Errc::width_error, "unknown identity op " + std::to_string(op));
    IdentityContent content;
    content.op = static_cast<IdentityOp>(op);
    content.library_name = get_name(in, 1);
    content.prev_tx_id = Hash256(get_bytes<Hash256::kSize>(in, 1 + kNameWidth));
    for (std::size_t i = 1 + kNameWidth + Hash256::kSize; i < kIdentityContentWidth; ++i)
        if (in[i] != 0) raise(Errc::width_error, "identity content reserved bytes are not zero");
    return content;
}

// the id preimage: every field except id and signature, in wire order
std::vector<std::uint8_t> id_preimage(const IdentityTransaction& tx) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + 2 * PublicKey::kSize + kIdentityContentWidth);
    put_u64(out, tx.timestamp_ms);
    put_bytes(out, tx.input_pubkey.bytes());
    put_bytes(out, tx.output_pubkey.bytes());
    auto content = encode_content(tx.content);
    out.insert(out.end(), content.begin(), content.end());
    return out;
}

std::vector<std::uint8_t> id_preimage(const LibraryTransaction& tx) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + PublicKey::kSize + kNameWidth + 8 + Hash256::kSize);
    put_u64(out, tx.timestamp_ms);
    put_bytes(out, tx.owner_pubkey.bytes());
    put_name(out, tx.library_name);
    put_version(out, tx.version);
    put_bytes(out, tx.artifact_hash.bytes());
    return out;
}

std::uint64_t wall_clock_ms() {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count());
}

const char* chain_name(ChainSelector chain) {
    return chain == ChainSelector::identity ? "identity" : "library";
}

}  // namespace

// --- PackedVersion -------------------------------------------------------------

PackedVersion PackedVersion::parse(const std::string& text) {
    std::array<std::uint32_t, 3> parts{};
    std::size_t part = 0, pos = 0;
    if (text.empty()) raise(Errc::version_parse_error, "empty version");
    while (pos < text.size()) {
        if (part >= 3) raise(Errc::version_parse_error, text + ": more than three components");
        std::size_t digits = 0;
        std::uint64_t value = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
            if (value > 0xffff)
                raise(Errc::version_parse_error, text + ": component above 65535");
            ++digits;
            ++pos;
        }
        if (digits == 0) raise(Errc::version_parse_error, text + ": non-numeric component");
        parts[part++] = static_cast<std::uint32_t>(value);
        if (pos < text.size()) {
            if (text[pos] != '.')
                raise(Errc::version_parse_error,
                      text + ": unexpected character '" + text[pos] + "'");
            ++pos;
            if (pos == text.size()) raise(Errc::version_parse_error, text + ": trailing dot");
        }
    }
    return {static_cast<std::uint16_t>(parts[0]), static_cast<std::uint16_t>(parts[1]),
            static_cast<std::uint16_t>(parts[2])};
}

std::string PackedVersion::str() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

// --- transaction codecs ----------------------------------------------------------

std::vector<std::uint8_t> encode_tx(const IdentityTransaction& tx) {
    std::vector<std::uint8_t> out;
    out.reserve(kIdentityTxWidth);
    put_bytes(out, tx.id.bytes());
    auto rest = id_preimage(tx);
    out.insert(out.end(), rest.begin(), rest.end());
    put_bytes(out, tx.signature.bytes());
    if (out.size() != kIdentityTxWidth)
        raise(Errc::width_error, "identity tx encoded to " + std::to_string(out.size()) + " bytes");
    return out;
}

std::vector<std::uint8_t> encode_tx(const LibraryTransaction& tx) {
    std::vector<std::uint8_t> out;
    out.reserve(kLibraryTxWidth);
    put_bytes(out, tx.id.bytes());
    auto rest = id_preimage(tx);
    out.insert(out.end(), rest.begin(), rest.end());
    put_bytes(out, tx.signature.bytes());
    if (out.size() != kLibraryTxWidth)
        raise(Errc::width_error, "library tx encoded to " + std::to_string(out.size()) + " bytes");
    return out;
}

IdentityTransaction decode_identity_tx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kIdentityTxWidth)
        raise(Errc::width_error, "identity tx is " + std::to_string(bytes.size()) + " bytes, want " +
                                     std::to_string(kIdentityTxWidth));
    IdentityTransaction tx;
    std::size_t pos = 0;
    tx.id = Hash256(get_bytes<Hash256::kSize>(bytes, pos));
    pos += Hash256::kSize;
    tx.timestamp_ms = get_u64(bytes, pos);
    pos += 8;
    tx.input_pubkey = PublicKey(get_bytes<PublicKey::kSize>(bytes, pos));
    pos += PublicKey::kSize;
    tx.output_pubkey = PublicKey(get_bytes<PublicKey::kSize>(bytes, pos));
    pos += PublicKey::kSize;
    tx.content = decode_content(bytes.subspan(pos, kIdentityContentWidth));
    pos += kIdentityContentWidth;
    tx.signature = Signature(get_bytes<Signature::kSize>(bytes, pos));
    return tx;
}

LibraryTransaction decode_library_tx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kLibraryTxWidth)
        raise(Errc::width_error, "library tx is " + std::to_string(bytes.size()) + " bytes, want " +
                                     std::to_string(kLibraryTxWidth));
    LibraryTransaction tx;
    std::size_t pos = 0;
    tx.id = Hash256(get_bytes<Hash256::kSize>(bytes, pos));
    pos += Hash256::kSize;
    tx.timestamp_ms = get_u64(bytes, pos);
    pos += 8;
    tx.owner_pubkey = PublicKey(get_bytes<PublicKey::kSize>(bytes, pos));
    pos += PublicKey::kSize;
    tx.library_name = get_name(bytes, pos);
    pos += kNameWidth;
    tx.version = get_version(bytes, pos);
    pos += 8;
    tx.artifact_hash = Hash256(get_bytes<Hash256::kSize>(bytes, pos));
    pos += Hash256::kSize;
    tx.signature = Signature(get_bytes<Signature::kSize>(bytes, pos));
    return tx;
}

Hash256 compute_tx_id(const IdentityTransaction& tx) { return sha256(id_preimage(tx)); }
Hash256 compute_tx_id(const LibraryTransaction& tx) { return sha256(id_preimage(tx)); }

IdentityTransaction make_identity_tx(const KeyPair& signer, const PublicKey& output, IdentityOp op,
                                     const std::string& library_name, const Hash256& prev_tx_id,
                                     std::uint64_t timestamp_ms) {
    IdentityTransaction tx;
    tx.timestamp_ms = timestamp_ms;
    tx.input_pubkey = signer.public_key();
    tx.output_pubkey = output;
    tx.content = {op, library_name, prev_tx_id};
    tx.id = compute_tx_id(tx);  // validates the name width via encoding
    tx.signature = signer.sign(tx.id);
    return tx;
}

LibraryTransaction make_library_tx(const KeyPair& owner, const std::string& library_name,
                                   PackedVersion version, const Hash256& artifact_hash,
                                   std::uint64_t timestamp_ms) {
    LibraryTransaction tx;
    tx.timestamp_ms = timestamp_ms;
    tx.owner_pubkey = owner.public_key();
    tx.library_name = library_name;
    tx.version = version;
    tx.artifact_hash = artifact_hash;
    tx.id = compute_tx_id(tx);
    tx.signature = owner.sign(tx.id);
    return tx;
}

// --- block codec -------------------------------------------------------------------

std::array<std::uint8_t, kBlockHeaderWidth> encode_header(const BlockHeader& header) {
    std::vector<std::uint8_t> out;
    out.reserve(kBlockHeaderWidth);
    put_bytes(out, header.prev_block_hash.bytes());
    put_u64(out, header.height);
    put_u64(out, header.timestamp_ms);
    put_u32(out, header.tx_count);
    put_bytes(out, header.body_hash.bytes());
    std::array<std::uint8_t, kBlockHeaderWidth> fixed{};
    std::copy(out.begin(), out.end(), fixed.begin());
    return fixed;
}

BlockHeader decode_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kBlockHeaderWidth)
        raise(Errc::width_error, "block header is " + std::to_string(bytes.size()) + " bytes");
    BlockHeader h;
    h.prev_block_hash = Hash256(get_bytes<Hash256::kSize>(bytes, 0));
    h.height = get_u64(bytes, 32);
    h.timestamp_ms = get_u64(bytes, 40);
    h.tx_count = get_u32(bytes, 48);
    h.body_hash = Hash256(get_bytes<Hash256::kSize>(bytes, 52));
    return h;
}

Hash256 block_hash(const BlockHeader& header) {
    auto bytes = encode_header(header);
    return sha256(std::span<const std::uint8_t>(bytes));
}

namespace {

template <typename Tx>
Hash256 compute_body_hash(const std::vector<Tx>& txs) {
    std::vector<std::uint8_t> body;
    for (const auto& tx : txs) {
        auto bytes = encode_tx(tx);
        body.insert(body.end(), bytes.begin(), bytes.end());
    }
    return sha256(body);
}

template <typename Tx>
BlockHeader make_header(const std::vector<Block<Tx>>& chain, const std::vector<Tx>& txs) {
    BlockHeader h;
    if (!chain.empty()) {
        h.prev_block_hash = block_hash(chain.back().header);
        h.height = chain.back().header.height + 1;
        h.timestamp_ms = chain.back().header.timestamp_ms;
    }
    for (const auto& tx : txs) h.timestamp_ms = std::max(h.timestamp_ms, tx.timestamp_ms);
    h.tx_count = static_cast<std::uint32_t>(txs.size());
    h.body_hash = compute_body_hash(txs);
    return h;
}

}  // namespace

// --- DualLedger ------------------------------------------------------------------

LedgerConfig LedgerConfig::realistic() {
    LedgerConfig config;
    config.confirmation_delay_ms = 40ull * 60ull * 1000ull;  // median confirmation time
    return config;
}

DualLedger::DualLedger(LedgerConfig config) : config_(std::move(config)) {}

std::uint64_t DualLedger::now_ms() const {
    return config_.clock ? config_.clock() : wall_clock_ms();
}

bool DualLedger::block_confirmed(const BlockHeader& header, std::uint64_t as_of_ms) const {
    return header.timestamp_ms + config_.confirmation_delay_ms <= as_of_ms;
}

const DualLedger::OwnershipEvent* DualLedger::ownership_event_at(const std::string& name,
                                                                 std::uint64_t t_ms) const {
    auto it = ownership_.find(name);
    if (it == ownership_.end()) return nullptr;
    const OwnershipEvent* found = nullptr;
    for (const auto& event : it->second) {
        if (event.timestamp_ms > t_ms) break;
        found = &event;
    }
    return found;
}

IdentityTransaction DualLedger::claim_ownership(const KeyPair& owner,
                                                const std::string& library_name,
                                                std::optional<std::uint64_t> timestamp_ms) {
    // sequencer view: sealed heads (confirmation-independent) plus queued txs
    std::optional<PublicKey> effective;
    if (const auto* sealed = ownership_event_at(library_name, ~0ull)) effective = sealed->owner;
    for (const auto& pending : pending_identity_) {
        if (pending.content.library_name != library_name) continue;
        effective = pending.output_pubkey;
    }
    if (effective)
        raise(Errc::already_owned, library_name + " is owned by " + effective->hex());

    auto tx = make_identity_tx(owner, owner.public_key(), IdentityOp::claim, library_name,
                               Hash256{}, timestamp_ms.value_or(now_ms()));
    pending_identity_.push_back(tx);
    return tx;
}

IdentityTransaction DualLedger::transfer_ownership(const KeyPair& current,
                                                   const PublicKey& new_owner,
                                                   const std::string& library_name,
                                                   std::optional<std::uint64_t> timestamp_ms) {
    // effective head: last sealed event, then queued txs applied in order
    const auto* sealed = ownership_event_at(library_name, ~0ull);
    std::optional<PublicKey> head_owner;
    Hash256 head_tx_id;
    if (sealed) {
        head_owner = sealed->owner;
        head_tx_id = sealed->tx.id;
    }
    for (const auto& pending : pending_identity_) {
        if (pending.content.library_name != library_name) continue;
        head_owner = pending.output_pubkey;
        head_tx_id = pending.id;
    }
    if (!head_owner) raise(Errc::unknown_library, library_name + " has no owner");
    if (*head_owner != current.public_key())
        raise(Errc::not_owner, library_name + " is owned by " + head_owner->hex());

    auto tx = make_identity_tx(current, new_owner, IdentityOp::transfer, library_name, head_tx_id,
                               timestamp_ms.value_or(now_ms()));
    pending_identity_.push_back(tx);
    return tx;
}

LibraryTransaction DualLedger::register_library(const KeyPair& owner,
                                                const std::string& library_name,
                                                const std::string& version,
                                                const Hash256& artifact_hash,
                                                std::optional<std::uint64_t> timestamp_ms) {
    auto packed = PackedVersion::parse(version);

    std::optional<PublicKey> head_owner;
    if (const auto* sealed = ownership_event_at(library_name, ~0ull)) head_owner = sealed->owner;
    for (const auto& pending : pending_identity_) {
        if (pending.content.library_name != library_name) continue;
        head_owner = pending.output_pubkey;
    }
    if (!head_owner || *head_owner != owner.public_key())
        raise(Errc::not_owner, head_owner ? library_name + " is owned by " + head_owner->hex()
                                          : library_name + " has no registered owner");

    if (library_index_.count({library_name, packed}))
        raise(Errc::duplicate_version, library_name + "@" + packed.str());
    for (const auto& pending : pending_library_)
        if (pending.library_name == library_name && pending.version == packed)
            raise(Errc::duplicate_version, library_name + "@" + packed.str() + " (pending)");

    auto tx = make_library_tx(owner, library_name, packed, artifact_hash,
                              timestamp_ms.value_or(now_ms()));
    pending_library_.push_back(tx);
    return tx;
}

std::optional<std::string> DualLedger::validate_identity_tx(
    const IdentityTransaction& tx, const std::map<std::string, OwnershipEvent>& view) const {
    if (compute_tx_id(tx) != tx.id) return "id does not recompute from fields";
    if (!verify_signature(tx.input_pubkey, tx.id, tx.signature))
        return "signature does not verify under input_pubkey";

    const auto& name = tx.content.library_name;
    auto head = view.find(name);
    if (tx.content.op == IdentityOp::claim) {
        if (tx.input_pubkey != tx.output_pubkey)
            return "claim must have input_pubkey == output_pubkey";
        if (!tx.content.prev_tx_id.is_zero()) return "claim must have a zero prev_tx_id";
        if (head != view.end()) return name + " already has an owner";
        return std::nullopt;
    }
    // transfer
    if (head == view.end()) return name + " has no owner to transfer from";
    if (head->second.owner != tx.input_pubkey) return "transfer signer is not the current owner";
    if (head->second.tx.id != tx.content.prev_tx_id)
        return "prev_tx_id does not reference the current ownership transaction";
    if (tx.timestamp_ms < head->second.timestamp_ms)
        return "transfer timestamp precedes the current ownership event";
    return std::nullopt;
}

std::optional<std::string> DualLedger::validate_library_tx(
    const LibraryTransaction& tx, const std::vector<LibraryTransaction>& block_txs) const {
    if (compute_tx_id(tx) != tx.id) return "id does not recompute from fields";
    if (!verify_signature(tx.owner_pubkey, tx.id, tx.signature))
        return "signature does not verify under owner_pubkey";

    const auto* owner = ownership_event_at(tx.library_name, tx.timestamp_ms);
    if (!owner) return tx.library_name + " has no owner at the recording timestamp";
    if (owner->owner != tx.owner_pubkey)
        return "owner_pubkey is not the library owner at the recording timestamp";

    if (library_index_.count({tx.library_name, tx.version}))
        return tx.library_name + "@" + tx.version.str() + " is already registered";
    for (const auto& accepted : block_txs)
        if (accepted.library_name == tx.library_name && accepted.version == tx.version)
            return tx.library_name + "@" + tx.version.str() + " duplicated within the block";
    return std::nullopt;
}

void DualLedger::index_identity_block(const IdentityBlock& block) {
    for (const auto& tx : block.transactions)
        ownership_[tx.content.library_name].push_back(
            {tx.timestamp_ms, tx.output_pubkey, tx});
}

void DualLedger::index_library_block(const LibraryBlock& block) {
    for (const auto& tx : block.transactions)
        library_index_.emplace(std::make_pair(tx.library_name, tx.version), tx);
}

SealResult<IdentityTransaction> DualLedger::seal_identity_block() {
    if (pending_identity_.empty()) raise(Errc::empty_pending, "no pending identity transactions");

    // working view: current head per name, advanced as txs are accepted
    std::map<std::string, OwnershipEvent> view;
    for (const auto& [name, events] : ownership_)
        if (!events.empty()) view.emplace(name, events.back());

    SealResult<IdentityTransaction> result;
    for (const auto& tx : pending_identity_) {
        if (auto problem = validate_identity_tx(tx, view)) {
            result.rejections.push_back({tx.id, tx.content.library_name, *problem});
            continue;
        }
        view.insert_or_assign(tx.content.library_name,
                              OwnershipEvent{tx.timestamp_ms, tx.output_pubkey, tx});
        result.block.transactions.push_back(tx);
    }
    pending_identity_.clear();

    result.block.header = make_header(identity_chain_, result.block.transactions);
    identity_chain_.push_back(result.block);
    index_identity_block(result.block);
    return result;
}

SealResult<LibraryTransaction> DualLedger::seal_library_block() {
    if (pending_library_.empty()) raise(Errc::empty_pending, "no pending library transactions");

    SealResult<LibraryTransaction> result;
    for (const auto& tx : pending_library_) {
        if (auto problem = validate_library_tx(tx, result.block.transactions)) {
            result.rejections.push_back({tx.id, tx.library_name, *problem});
            continue;
        }
        result.block.transactions.push_back(tx);
    }
    pending_library_.clear();

    result.block.header = make_header(library_chain_, result.block.transactions);
    library_chain_.push_back(result.block);
    index_library_block(result.block);
    return result;
}

std::optional<PublicKey> DualLedger::owner_at(const std::string& library_name,
                                              std::uint64_t t_ms) const {
    // reader view: sealed and confirmed blocks only
    auto now = now_ms();
    std::optional<PublicKey> owner;
    for (const auto& block : identity_chain_) {
        if (!block_confirmed(block.header, now)) break;
        for (const auto& tx : block.transactions) {
            if (tx.content.library_name != library_name) continue;
            if (tx.timestamp_ms > t_ms) continue;
            owner = tx.output_pubkey;
        }
    }
    return owner;
}

std::optional<PublicKey> DualLedger::current_owner(const std::string& library_name) const {
    return owner_at(library_name, ~0ull);
}

DualLedger::QueryResult DualLedger::query_and_verify(const std::string& library_name,
                                                     const std::string& version,
                                                     std::optional<std::uint64_t> as_of_ms) const {
    auto packed = PackedVersion::parse(version);
    auto as_of = as_of_ms.value_or(now_ms());

    const LibraryTransaction* found = nullptr;
    for (const auto& block : library_chain_) {
        if (!block_confirmed(block.header, as_of)) break;
        for (const auto& tx : block.transactions)
            if (tx.library_name == library_name && tx.version == packed) found = &tx;
    }
    if (!found) raise(Errc::not_found, library_name + "@" + packed.str());

    if (compute_tx_id(*found) != found->id)
        raise(Errc::bad_signature, library_name + "@" + packed.str() + ": id does not recompute");
    if (!verify_signature(found->owner_pubkey, found->id, found->signature))
        raise(Errc::bad_signature,
              library_name + "@" + packed.str() + ": signature does not verify");

    // ownership is checked at the recording timestamp, not at query time
    const auto* owner = ownership_event_at(library_name, found->timestamp_ms);
    if (!owner || owner->owner != found->owner_pubkey)
        raise(Errc::ownership_mismatch,
              library_name + "@" + packed.str() + " was recorded by a non-owner key");

    return {*found, owner->tx};
}

// --- audit ------------------------------------------------------------------------

namespace {

template <typename Tx>
bool tx_signature_ok(const Tx& tx);

template <>
bool tx_signature_ok(const IdentityTransaction& tx) {
    return verify_signature(tx.input_pubkey, tx.id, tx.signature);
}

template <>
bool tx_signature_ok(const LibraryTransaction& tx) {
    return verify_signature(tx.owner_pubkey, tx.id, tx.signature);
}

template <typename Tx>
void audit_structure(ChainSelector selector, const std::vector<Block<Tx>>& chain,
                     AuditReport& report) {
    Hash256 prev_hash;
    std::uint64_t prev_ts = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& block = chain[i];
        auto flag = [&](const std::string& problem) {
            report.findings.push_back({selector, block.header.height, problem});
        };

        if (block.header.height != i)
            flag("height " + std::to_string(block.header.height) + " at position " +
                 std::to_string(i));
        if (block.header.prev_block_hash != prev_hash)
            flag("prev_block_hash does not match the previous block");
        if (block.header.tx_count != block.transactions.size())
            flag("tx_count " + std::to_string(block.header.tx_count) + " but " +
                 std::to_string(block.transactions.size()) + " transactions");
        if (block.header.body_hash != compute_body_hash(block.transactions))
            flag("body_hash does not recompute from transactions");

        std::uint64_t expect_ts = prev_ts;
        for (const auto& tx : block.transactions)
            expect_ts = std::max(expect_ts, tx.timestamp_ms);
        if (block.header.timestamp_ms != expect_ts)
            flag("timestamp does not recompute from content");

        for (const auto& tx : block.transactions) {
            if (compute_tx_id(tx) != tx.id)
                flag("transaction id does not recompute");
            else if (!tx_signature_ok(tx))
                flag("transaction signature does not verify");
        }

        prev_hash = block_hash(block.header);
        prev_ts = block.header.timestamp_ms;
    }
}

struct ReplayOwner {
    std::uint64_t timestamp_ms;
    PublicKey owner;
    Hash256 tx_id;
};

void audit_semantics(const std::vector<IdentityBlock>& identity,
                     const std::vector<LibraryBlock>& library, AuditReport& report) {
    // replay the ownership rules over the identity chain
    std::map<std::string, ReplayOwner> owners;
    std::map<std::string, std::vector<ReplayOwner>> history;
    for (const auto& block : identity) {
        for (const auto& tx : block.transactions) {
            const auto& name = tx.content.library_name;
            auto flag = [&](const std::string& problem) {
                report.findings.push_back({ChainSelector::identity, block.header.height,
                                           name + ": " + problem});
            };
            auto head = owners.find(name);
            if (tx.content.op == IdentityOp::claim) {
                if (tx.input_pubkey != tx.output_pubkey) flag("claim keys differ");
                if (!tx.content.prev_tx_id.is_zero()) flag("claim prev_tx_id not zero");
                if (head != owners.end()) flag("claim over an existing owner");
            } else {
                if (head == owners.end()) {
                    flag("transfer without an owner");
                    continue;
                }
                if (head->second.owner != tx.input_pubkey) flag("transfer signed by non-owner");
                if (head->second.tx_id != tx.content.prev_tx_id)
                    flag("transfer prev_tx_id mismatch");
                if (tx.timestamp_ms < head->second.timestamp_ms)
                    flag("transfer timestamp precedes the ownership event");
            }
            ReplayOwner entry{tx.timestamp_ms, tx.output_pubkey, tx.id};
            owners.insert_or_assign(name, entry);
            history[name].push_back(entry);
        }
    }

    // library records must be owner-signed at their timestamp and unique
    std::map<std::pair<std::string, PackedVersion>, int> seen;
    for (const auto& block : library) {
        for (const auto& tx : block.transactions) {
            auto flag = [&](const std::string& problem) {
                report.findings.push_back({ChainSelector::library, block.header.height,
                                           tx.library_name + "@" + tx.version.str() + ": " +
                                               problem});
            };
            const ReplayOwner* at_time = nullptr;
            auto hist = history.find(tx.library_name);
            if (hist != history.end())
                for (const auto& event : hist->second) {
                    if (event.timestamp_ms > tx.timestamp_ms) break;
                    at_time = &event;
                }
            if (!at_time)
                flag("recorded with no owner on the identities chain");
            else if (at_time->owner != tx.owner_pubkey)
                flag("recorded by a key that was not the owner at that time");
            if (++seen[{tx.library_name, tx.version}] > 1) flag("duplicate (name, version)");
        }
    }
}

}  // namespace

AuditReport DualLedger::audit() const {
    AuditReport report;
    report.identity_blocks = identity_chain_.size();
    report.library_blocks = library_chain_.size();
    audit_structure(ChainSelector::identity, identity_chain_, report);
    audit_structure(ChainSelector::library, library_chain_, report);
    audit_semantics(identity_chain_, library_chain_, report);
    report.ok = report.findings.empty();
    return report;
}

// --- persistence -----------------------------------------------------------------

namespace {

template <typename Tx>
void write_chain(const std::vector<Block<Tx>>& chain, const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    for (const auto& block : chain) {
        std::vector<std::uint8_t> bytes;
        auto header = encode_header(block.header);
        bytes.insert(bytes.end(), header.begin(), header.end());
        for (const auto& tx : block.transactions) {
            auto tx_bytes = encode_tx(tx);
            bytes.insert(bytes.end(), tx_bytes.begin(), tx_bytes.end());
        }
        std::vector<std::uint8_t> prefix;
        put_u32(prefix, static_cast<std::uint32_t>(bytes.size()));
        out.write(reinterpret_cast<const char*>(prefix.data()),
                  static_cast<std::streamsize>(prefix.size()));
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
}

template <typename Tx>
void write_pending(const std::deque<Tx>& pending, const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    for (const auto& tx : pending) {
        auto bytes = encode_tx(tx);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
}

std::vector<std::uint8_t> read_all(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot read " + file.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Appends to `chain` as blocks parse, so a corruption mid-file leaves the
// valid prefix in place for the audit to report against.
template <typename Tx>
void parse_chain_into(const std::vector<std::uint8_t>& bytes, std::size_t tx_width,
                      Tx (*decode)(std::span<const std::uint8_t>), std::vector<Block<Tx>>& chain) {
    std::span<const std::uint8_t> rest(bytes);
    while (!rest.empty()) {
        if (rest.size() < 4) raise(Errc::chain_corrupt, "truncated block length prefix");
        auto len = get_u32(rest, 0);
        rest = rest.subspan(4);
        if (rest.size() < len) raise(Errc::chain_corrupt, "truncated block body");
        auto block_bytes = rest.first(len);
        rest = rest.subspan(len);

        if (len < kBlockHeaderWidth) raise(Errc::chain_corrupt, "block shorter than its header");
        Block<Tx> block;
        block.header = decode_header(block_bytes.first(kBlockHeaderWidth));
        auto body = block_bytes.subspan(kBlockHeaderWidth);
        if (body.size() != static_cast<std::size_t>(block.header.tx_count) * tx_width)
            raise(Errc::chain_corrupt, "block body size does not match tx_count");
        for (std::size_t pos = 0; pos < body.size(); pos += tx_width)
            block.transactions.push_back(decode(body.subspan(pos, tx_width)));
        chain.push_back(std::move(block));
    }
}

template <typename Tx>
std::deque<Tx> parse_pending(const std::vector<std::uint8_t>& bytes, std::size_t tx_width,
                             Tx (*decode)(std::span<const std::uint8_t>)) {
    if (bytes.size() % tx_width != 0)
        raise(Errc::chain_corrupt, "pending file size is not a multiple of the tx width");
    std::deque<Tx> pending;
    std::span<const std::uint8_t> rest(bytes);
    for (std::size_t pos = 0; pos < rest.size(); pos += tx_width)
        pending.push_back(decode(rest.subspan(pos, tx_width)));
    return pending;
}

}  // namespace

void DualLedger::save(const fs::path& dir) const {
    fs::create_directories(dir);
    write_chain(identity_chain_, dir / kIdentityChainFile);
    write_chain(library_chain_, dir / kLibraryChainFile);
    write_pending(pending_identity_, dir / kIdentityPendingFile);
    write_pending(pending_library_, dir / kLibraryPendingFile);
}

DualLedger DualLedger::load(const fs::path& dir, LedgerConfig config) {
    DualLedger ledger(std::move(config));
    auto identity_file = dir / kIdentityChainFile;
    auto library_file = dir / kLibraryChainFile;
    if (fs::exists(identity_file))
        parse_chain_into(read_all(identity_file), kIdentityTxWidth, decode_identity_tx,
                         ledger.identity_chain_);
    if (fs::exists(library_file))
        parse_chain_into(read_all(library_file), kLibraryTxWidth, decode_library_tx,
                         ledger.library_chain_);
    auto identity_pending = dir / kIdentityPendingFile;
    auto library_pending = dir / kLibraryPendingFile;
    if (fs::exists(identity_pending))
        ledger.pending_identity_ = parse_pending<IdentityTransaction>(
            read_all(identity_pending), kIdentityTxWidth, decode_identity_tx);
    if (fs::exists(library_pending))
        ledger.pending_library_ = parse_pending<LibraryTransaction>(
            read_all(library_pending), kLibraryTxWidth, decode_library_tx);

    for (const auto& block : ledger.identity_chain_) ledger.index_identity_block(block);
    for (const auto& block : ledger.library_chain_) ledger.index_library_block(block);
    return ledger;
}

AuditReport audit_chain_files(const fs::path& dir) {
    AuditReport report;
    std::vector<IdentityBlock> identity;
    std::vector<LibraryBlock> library;

    auto try_parse = [&](ChainSelector selector, const char* filename, auto& chain, auto decode,
                         std::size_t tx_width) {
        auto file = dir / filename;
        if (!fs::exists(file)) return;
        try {
            parse_chain_into(read_all(file), tx_width, decode, chain);
        } catch (const Error& e) {
            report.findings.push_back(
                {selector, static_cast<std::uint64_t>(chain.size()), e.what()});
        }
    };
    try_parse(ChainSelector::identity, DualLedger::kIdentityChainFile, identity,
              decode_identity_tx, kIdentityTxWidth);
    try_parse(ChainSelector::library, DualLedger::kLibraryChainFile, library, decode_library_tx,
              kLibraryTxWidth);

    report.identity_blocks = identity.size();
    report.library_blocks = library.size();
    audit_structure(ChainSelector::identity, identity, report);
    audit_structure(ChainSelector::library, library, report);
    audit_semantics(identity, library, report);
    report.ok = report.findings.empty();
    return report;
}

}  // namespace sbomguard::ledger
