// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/errors.hpp"

namespace sbomguard {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::io_error: return "IoError";
        case Errc::key_error: return "KeyError";
        case Errc::missing_manifest: return "MissingManifest";
        case Errc::parse_error: return "ParseError";
        case Errc::unknown_dependency: return "UnknownDependency";
        case Errc::unsupported_ecosystem: return "UnsupportedEcosystem";
        case Errc::artifact_not_found: return "ArtifactNotFound";
        case Errc::hash_unavailable: return "HashUnavailable";
        case Errc::missing_artifact: return "MissingArtifact";
        case Errc::store_tampered: return "StoreTampered";
        case Errc::duplicate_record: return "DuplicateRecord";
        case Errc::schema_error: return "SchemaError";
        case Errc::filename_not_in_release: return "FilenameNotInRelease";
        case Errc::provider_unavailable: return "ProviderUnavailable";
        case Errc::version_parse_error: return "VersionParseError";
        case Errc::name_too_long: return "NameTooLong";
        case Errc::width_error: return "WidthError";
        case Errc::already_owned: return "AlreadyOwned";
        case Errc::not_owner: return "NotOwner";
        case Errc::unknown_library: return "UnknownLibrary";
        case Errc::duplicate_version: return "DuplicateVersion";
        case Errc::not_found: return "NotFound";
        case Errc::bad_signature: return "BadSignature";
        case Errc::ownership_mismatch: return "OwnershipMismatch";
        case Errc::empty_pending: return "EmptyPending";
        case Errc::chain_corrupt: return "ChainCorrupt";
    }
    return "UnknownError";
}

}  // namespace sbomguard
