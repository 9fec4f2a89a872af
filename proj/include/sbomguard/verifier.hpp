// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sbomguard/envelope.hpp"
#include "sbomguard/generator.hpp"
#include "sbomguard/keys.hpp"
#include "sbomguard/manifest.hpp"
#include "sbomguard/registry.hpp"
#include "sbomguard/sbom.hpp"

namespace sbomguard::verifier {

enum class ComponentStatus {
    verified,       // both hashes present and equal
    hash_mismatch,
    missing_hash,
    not_in_registry,
    provider_error,
};

const char* component_status_name(ComponentStatus status);

struct ComponentVerdict {
    std::size_t component_index = 0;
    std::string name;
    std::string version;
    ComponentStatus status = ComponentStatus::missing_hash;
    std::optional<Hash256> registry_hash;
    std::optional<Hash256> sbom_hash;
    std::string detail;
};

enum class SignatureStatus { valid, invalid, absent };

const char* signature_status_name(SignatureStatus status);

/// Document-level verdict plus one verdict per component, in SBOM order.
/// pass requires a valid signature from a trusted key and every component
/// verified; any uncertainty (missing hash, unreachable provider, naive-mode
/// input) fails closed.
struct VerificationReport {
    SignatureStatus signature_status = SignatureStatus::absent;
    std::vector<ComponentVerdict> verdicts;
    bool pass = false;
    std::string rejection_reason;  // non-empty when the document was rejected before hash checks

    bool all_verified() const;
};

/// The consumption-side controls: mandatory signature verification first
/// (absent/invalid/untrusted short-circuits to fail), then per-component hash
/// checks against the provider. Never throws on hostile input. Naive-mode
/// documents are rejected outright: hash-less SBOMs cannot be verified.
VerificationReport verify(const SbomDocument& doc, const std::optional<SignatureEnvelope>& env,
                          const std::set<PublicKey>& trusted_pubkeys,
                          const registry::ReferenceProvider& provider);

struct Advisory {
    Ecosystem ecosystem = Ecosystem::python;
    std::string name;
    std::string affected_below;
    std::string advisory_id;
    std::string summary;

    bool operator==(const Advisory&) const = default;
};

std::vector<Advisory> load_advisories(const std::filesystem::path& file);
void save_advisories(const std::vector<Advisory>& advisories, const std::filesystem::path& file);

struct AdvisoryMatch {
    std::size_t component_index = 0;
    std::string component_name;
    std::string component_version;
    Advisory advisory;
};

struct AdvisoryReport {
    std::vector<AdvisoryMatch> matches;
    std::vector<std::string> version_errors;  // per-component parse failures; matching continues
};

/// Version-only matching, exactly what the analyzed consumption tools do:
/// a component hits an advisory when names (and ecosystem) match and
/// component.version < affected_below.
AdvisoryReport match_advisories(const SbomDocument& doc, const std::vector<Advisory>& advisories);

struct TamperSpec {
    std::string dep;
    std::string new_version;
    manifest::TamperScope scope = manifest::TamperScope::all_locations;
};

/// Everything the end-to-end pipeline needs around the project fixture.
struct PipelineContext {
    const ArtifactSource* source = nullptr;
    const registry::ReferenceProvider* provider = nullptr;
    std::vector<Advisory> advisories;
    KeyPair signing_key;
    std::set<PublicKey> trusted_pubkeys;
    GenerationOptions generation;
};

struct AttackDemoResult {
    std::optional<TamperSpec> tamper;
    SbomDocument naive_sbom;
    AdvisoryReport naive_advisories;
    SbomDocument secure_sbom;
    VerificationReport secure_report;
};

/// pin -> (tamper) -> naive generate + advisory match, and secure generate +
/// sign + verify. With a tamper the naive report goes quiet while the secure
/// report flags the mismatch; without one it is the control run.
AttackDemoResult demo_attack_pipeline(const std::filesystem::path& project_root, Ecosystem eco,
                                      const std::optional<TamperSpec>& tamper,
                                      const PipelineContext& ctx);

}  // namespace sbomguard::verifier
