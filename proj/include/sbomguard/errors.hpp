// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sbomguard {

/// Machine-readable failure class. The CLI maps these onto its exit-code
/// table; library callers can switch on them without string matching.
enum class Errc {
    // generic
    io_error,
    key_error,
    // manifest adapters
    missing_manifest,
    parse_error,
    unknown_dependency,
    unsupported_ecosystem,
    // generator / artifact store
    artifact_not_found,
    hash_unavailable,
    missing_artifact,
    store_tampered,
    // registry
    duplicate_record,
    schema_error,
    filename_not_in_release,
    provider_unavailable,
    // verifier
    version_parse_error,
    // ledger
    name_too_long,
    width_error,
    already_owned,
    not_owner,
    unknown_library,
    duplicate_version,
    not_found,
    bad_signature,
    ownership_mismatch,
    empty_pending,
    chain_corrupt,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

}  // namespace sbomguard
