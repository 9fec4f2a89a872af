// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/verifier.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"
#include "sbomguard/version.hpp"

namespace sbomguard::verifier {

namespace fs = std::filesystem;
using nlohmann::json;

const char* component_status_name(ComponentStatus status) {
    switch (status) {
        case ComponentStatus::verified: return "verified";
        case ComponentStatus::hash_mismatch: return "hash_mismatch";
        case ComponentStatus::missing_hash: return "missing_hash";
        case ComponentStatus::not_in_registry: return "not_in_registry";
        case ComponentStatus::provider_error: return "provider_error";
    }
    return "unknown";
}

const char* signature_status_name(SignatureStatus status) {
    switch (status) {
        case SignatureStatus::valid: return "valid";
        case SignatureStatus::invalid: return "invalid";
        case SignatureStatus::absent: return "absent";
    }
    return "unknown";
}

bool VerificationReport::all_verified() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const ComponentVerdict& v) {
        return v.status == ComponentStatus::verified;
    });
}

VerificationReport verify(const SbomDocument& doc, const std::optional<SignatureEnvelope>& env,
                          const std::set<PublicKey>& trusted_pubkeys,
                          const registry::ReferenceProvider& provider) {
    VerificationReport report;

    std::string signature_problem;
    if (!env) {
        report.signature_status = SignatureStatus::absent;
        signature_problem = "unsigned SBOM; a signature from a trusted key is required";
    } else if (verify_document_signature(doc, *env) != SignatureVerdict::valid) {
        report.signature_status = SignatureStatus::invalid;
        signature_problem = "signature does not verify over the canonical digest";
    } else if (trusted_pubkeys.find(env->signer_pubkey) == trusted_pubkeys.end()) {
        report.signature_status = SignatureStatus::invalid;
        signature_problem = "signer key is not in the trusted set";
    } else {
        report.signature_status = SignatureStatus::valid;
    }

    // Hash-less documents have nothing to verify against the registry;
    // accepting them would reintroduce the blind spot this tool closes.
    // Rejected regardless of who signed them.
    if (doc.tool_mode() == ToolMode::naive) {
        report.rejection_reason = "naive-mode SBOM carries no verifiable hashes; rejected";
        return report;
    }

    // Signature gate: nothing below runs without a trusted signer.
    if (report.signature_status != SignatureStatus::valid) {
        report.rejection_reason = signature_problem;
        return report;
    }

    const auto& components = doc.components();
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        ComponentVerdict verdict;
        verdict.component_index = i;
        verdict.name = c.name;
        verdict.version = c.version;
        verdict.sbom_hash = c.artifact_hash;

        if (!c.artifact_hash) {
            verdict.status = ComponentStatus::missing_hash;
            verdict.detail = "component carries no hash";
            report.verdicts.push_back(std::move(verdict));
            continue;
        }

        auto lookup = provider.lookup(c.ecosystem, c.name, c.version, c.artifact_filename);
        // The filename is only a disambiguation hint. When it matches nothing
        // for the claimed version (tampered metadata keeps the old filename),
        // fall back to the version itself so the hash comparison still runs.
        if (lookup.status == registry::LookupStatus::not_found && c.artifact_filename)
            lookup = provider.lookup(c.ecosystem, c.name, c.version, std::nullopt);
        switch (lookup.status) {
            case registry::LookupStatus::found:
                verdict.registry_hash = lookup.record->artifact_hash;
                if (*verdict.registry_hash == *c.artifact_hash) {
                    verdict.status = ComponentStatus::verified;
                } else {
                    verdict.status = ComponentStatus::hash_mismatch;
                    verdict.detail = "registry hash differs from SBOM hash";
                }
                break;
            case registry::LookupStatus::not_found:
                verdict.status = ComponentStatus::not_in_registry;
                verdict.detail = lookup.detail;
                break;
            case registry::LookupStatus::provider_unavailable:
            case registry::LookupStatus::ambiguous_artifact:
                verdict.status = ComponentStatus::provider_error;
                verdict.detail = lookup.detail;
                break;
        }
        report.verdicts.push_back(std::move(verdict));
    }

    report.pass = report.signature_status == SignatureStatus::valid && report.all_verified();
    return report;
}

std::vector<Advisory> load_advisories(const fs::path& file) {
    std::ifstream in(file);
    if (!in) raise(Errc::io_error, "cannot read " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        raise(Errc::schema_error, file.string() + ": " + e.what());
    }
    if (!j.is_array()) raise(Errc::schema_error, file.string() + ": expected an array");

    std::vector<Advisory> advisories;
    for (const auto& item : j) {
        Advisory a;
        try {
            a.ecosystem = ecosystem_from_name(item.at("ecosystem").get<std::string>()).value();
            a.name = item.at("name").get<std::string>();
            a.affected_below = item.at("affected_below").get<std::string>();
            a.advisory_id = item.at("advisory_id").get<std::string>();
            a.summary = item.value("summary", "");
        } catch (const json::exception& e) {
            raise(Errc::schema_error, file.string() + ": " + e.what());
        } catch (const std::bad_optional_access&) {
            raise(Errc::schema_error, file.string() + ": unknown ecosystem");
        }
        if (!looks_like_version(a.affected_below))
            raise(Errc::version_parse_error,
                  a.advisory_id + ": affected_below \"" + a.affected_below + "\"");
        advisories.push_back(std::move(a));
    }
    return advisories;
}

void save_advisories(const std::vector<Advisory>& advisories, const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    json j = json::array();
    for (const auto& a : advisories)
        j.push_back({{"ecosystem", ecosystem_name(a.ecosystem)},
                     {"name", a.name},
                     {"affected_below", a.affected_below},
                     {"advisory_id", a.advisory_id},
                     {"summary", a.summary}});
    std::ofstream out(file, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

AdvisoryReport match_advisories(const SbomDocument& doc, const std::vector<Advisory>& advisories) {
    AdvisoryReport report;
    const auto& components = doc.components();
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        auto component_version = Version::try_parse(c.version);
        if (!component_version) {
            report.version_errors.push_back(c.name + "@" + c.version +
                                            ": version does not parse; component skipped");
            continue;
        }
        for (const auto& a : advisories) {
            if (a.ecosystem != c.ecosystem || a.name != c.name) continue;
            auto threshold = Version::try_parse(a.affected_below);
            if (!threshold) {
                report.version_errors.push_back(a.advisory_id + ": affected_below \"" +
                                                a.affected_below + "\" does not parse");
                continue;
            }
            if (component_version->compare(*threshold) < 0)
                report.matches.push_back({i, c.name, c.version, a});
        }
    }
    return report;
}

AttackDemoResult demo_attack_pipeline(const fs::path& project_root, Ecosystem eco,
                                      const std::optional<TamperSpec>& tamper,
                                      const PipelineContext& ctx) {
    if (!ctx.source || !ctx.provider)
        raise(Errc::io_error, "pipeline context needs an artifact source and a provider");

    auto project = manifest::parse_project(project_root, eco);
    auto store = pin_artifacts(project, *ctx.source);

    if (tamper)
        project = manifest::tamper_version(project, tamper->dep, tamper->new_version,
                                           tamper->scope);

    auto naive = generate_naive(project, ctx.generation);
    auto naive_advisories = match_advisories(naive, ctx.advisories);

    auto secure = generate_secure(project, store, ctx.generation);
    auto envelope = sign_document(secure, ctx.signing_key);
    auto secure_report = verify(secure, envelope, ctx.trusted_pubkeys, *ctx.provider);

    return {tamper, std::move(naive), std::move(naive_advisories), std::move(secure),
            std::move(secure_report)};
}

}  // namespace sbomguard::verifier
