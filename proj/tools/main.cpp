// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0
//
// sbomguard: generate, sign, and verify hash-pinned SBOMs; demonstrate the
// manifest-tampering attack they defend against; and run the dual-ledger
// reference repository.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sbomguard/envelope.hpp"
#include "sbomguard/errors.hpp"
#include "sbomguard/feasibility.hpp"
#include "sbomguard/fixtures.hpp"
#include "sbomguard/generator.hpp"
#include "sbomguard/ledger.hpp"
#include "sbomguard/manifest.hpp"
#include "sbomguard/registry.hpp"
#include "sbomguard/registry_http.hpp"
#include "sbomguard/sbom.hpp"
#include "sbomguard/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sbomguard;

namespace {

// exit-code table: CI branches on the failure class
constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;
constexpr int kSignature = 3;
constexpr int kHashVerification = 4;
constexpr int kLedgerFailure = 5;
constexpr int kProviderUnavailable = 6;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::unknown_dependency:
        case Errc::unsupported_ecosystem:
            return kUsage;
        case Errc::bad_signature:
            return kSignature;
        case Errc::not_found:
        case Errc::store_tampered:
            return kHashVerification;
        case Errc::already_owned:
        case Errc::not_owner:
        case Errc::unknown_library:
        case Errc::duplicate_version:
        case Errc::empty_pending:
        case Errc::chain_corrupt:
        case Errc::ownership_mismatch:
            return kLedgerFailure;
        case Errc::provider_unavailable:
            return kProviderUnavailable;
        default:
            return kInternal;
    }
}

void emit(bool as_json, const json& j, const std::string& text) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

Ecosystem parse_ecosystem_flag(const std::string& value) {
    auto eco = ecosystem_from_name(value);
    if (!eco) raise(Errc::unsupported_ecosystem, value);
    return *eco;
}

Ecosystem resolve_ecosystem(const fs::path& project, const std::string& flag) {
    if (!flag.empty()) return parse_ecosystem_flag(flag);
    auto detected = manifest::detect_ecosystem(project);
    if (!detected)
        raise(Errc::missing_manifest, "no recognizable manifest under " + project.string());
    return *detected;
}

manifest::TamperScope parse_scope(const std::string& value) {
    if (value == "manifest") return manifest::TamperScope::manifest_only;
    if (value == "lock") return manifest::TamperScope::manifest_and_lock;
    if (value == "all") return manifest::TamperScope::all_locations;
    raise(Errc::unsupported_ecosystem, "scope must be manifest, lock, or all");
}

fs::path default_sig_path(const fs::path& sbom_path) {
    auto s = sbom_path.string();
    const std::string suffix = ".sbom.json";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
        return s.substr(0, s.size() - suffix.size()) + ".sbom.sig";
    return s + ".sig";
}

std::set<PublicKey> load_trusted(const std::vector<std::string>& hex_keys,
                                 const std::string& trust_file) {
    std::set<PublicKey> trusted;
    for (const auto& hex : hex_keys) trusted.insert(PublicKey::from_hex(hex));
    if (!trust_file.empty()) {
        std::ifstream in(trust_file);
        if (!in) raise(Errc::io_error, "cannot read " + trust_file);
        std::string line;
        while (std::getline(in, line)) {
            auto hash_pos = line.find('#');
            if (hash_pos != std::string::npos) line.erase(hash_pos);
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
                line.pop_back();
            std::size_t start = 0;
            while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
                ++start;
            line.erase(0, start);
            if (!line.empty()) trusted.insert(PublicKey::from_hex(line));
        }
    }
    return trusted;
}

/// Reference provider backed by the dual ledger: a record counts only if
/// query_and_verify accepts it (id, signature, and ownership all check out).
class LedgerProvider : public registry::ReferenceProvider {
public:
    explicit LedgerProvider(const ledger::DualLedger& ledger) : ledger_(ledger) {}

    registry::LookupResult lookup(Ecosystem eco, const std::string& name,
                                  const std::string& version,
                                  const std::optional<std::string>& filename) const override {
        try {
            auto result = ledger_.query_and_verify(name, version);
            registry::RegistryRecord record{eco, name, version, filename.value_or(""),
                                            result.tx.artifact_hash};
            return registry::LookupResult::found_record(std::move(record));
        } catch (const Error& e) {
            if (e.code() == Errc::not_found || e.code() == Errc::version_parse_error)
                return {registry::LookupStatus::not_found, std::nullopt, e.what()};
            return {registry::LookupStatus::provider_unavailable, std::nullopt, e.what()};
        }
    }

private:
    const ledger::DualLedger& ledger_;
};

struct ProviderChoice {
    std::string registry_file;
    std::string registry_url;
    std::string ledger_dir;

    // owning storage; provider points into these
    std::unique_ptr<registry::LocalRegistry> local;
    std::unique_ptr<registry::HttpRegistryProvider> http;
    std::unique_ptr<ledger::DualLedger> ledger;
    std::unique_ptr<LedgerProvider> ledger_provider;

    const registry::ReferenceProvider* resolve() {
        int given = !registry_file.empty() + !registry_url.empty() + !ledger_dir.empty();
        if (given == 0) {
            if (const char* url = std::getenv("SBOMGUARD_REGISTRY_URL")) registry_url = url;
        }
        given = !registry_file.empty() + !registry_url.empty() + !ledger_dir.empty();
        if (given != 1)
            raise(Errc::io_error,
                  "choose one reference source: --registry FILE, --registry-url URL (or "
                  "SBOMGUARD_REGISTRY_URL), or --ledger DIR");
        if (!registry_file.empty()) {
            local = std::make_unique<registry::LocalRegistry>(
                registry::LocalRegistry::load(registry_file));
            return local.get();
        }
        if (!registry_url.empty()) {
            http = std::make_unique<registry::HttpRegistryProvider>(registry_url,
                                                                    Ecosystem::python);
            return http.get();
        }
        ledger = std::make_unique<ledger::DualLedger>(ledger::DualLedger::load(ledger_dir));
        ledger_provider = std::make_unique<LedgerProvider>(*ledger);
        return ledger_provider.get();
    }
};

json verdict_to_json(const verifier::ComponentVerdict& v) {
    json j{{"index", v.component_index},
           {"name", v.name},
           {"version", v.version},
           {"status", verifier::component_status_name(v.status)}};
    if (v.sbom_hash) j["sbom_sha256"] = v.sbom_hash->hex();
    if (v.registry_hash) j["registry_sha256"] = v.registry_hash->hex();
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

json report_to_json(const verifier::VerificationReport& report) {
    json verdicts = json::array();
    for (const auto& v : report.verdicts) verdicts.push_back(verdict_to_json(v));
    return {{"pass", report.pass},
            {"signature", verifier::signature_status_name(report.signature_status)},
            {"rejection_reason", report.rejection_reason},
            {"verdicts", verdicts}};
}

std::string report_to_text(const verifier::VerificationReport& report) {
    std::ostringstream out;
    out << "signature: " << verifier::signature_status_name(report.signature_status) << "\n";
    if (!report.rejection_reason.empty()) out << "rejected: " << report.rejection_reason << "\n";
    for (const auto& v : report.verdicts) {
        out << "  " << v.name << "@" << v.version << ": "
            << verifier::component_status_name(v.status);
        if (!v.detail.empty()) out << " (" << v.detail << ")";
        out << "\n";
    }
    out << "result: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

int verify_exit_code(const verifier::VerificationReport& report) {
    if (report.pass) return kOk;
    if (!report.rejection_reason.empty()) return kSignature;
    for (const auto& v : report.verdicts)
        if (v.status == verifier::ComponentStatus::provider_error) return kProviderUnavailable;
    return kHashVerification;
}

json advisory_report_to_json(const verifier::AdvisoryReport& report) {
    json matches = json::array();
    for (const auto& m : report.matches)
        matches.push_back({{"name", m.component_name},
                           {"version", m.component_version},
                           {"advisory_id", m.advisory.advisory_id},
                           {"affected_below", m.advisory.affected_below},
                           {"summary", m.advisory.summary}});
    return {{"matches", matches}, {"version_errors", report.version_errors}};
}

std::string advisory_report_to_text(const verifier::AdvisoryReport& report) {
    std::ostringstream out;
    if (report.matches.empty()) out << "no advisories matched\n";
    for (const auto& m : report.matches)
        out << m.advisory.advisory_id << ": " << m.component_name << "@" << m.component_version
            << " is below " << m.advisory.affected_below << " (" << m.advisory.summary << ")\n";
    for (const auto& e : report.version_errors) out << "warning: " << e << "\n";
    return out.str();
}

json audit_to_json(const ledger::AuditReport& report) {
    json findings = json::array();
    for (const auto& f : report.findings)
        findings.push_back({{"chain", f.chain == ledger::ChainSelector::identity ? "identity"
                                                                                 : "library"},
                            {"block_height", f.block_height},
                            {"problem", f.problem}});
    return {{"ok", report.ok},
            {"identity_blocks", report.identity_blocks},
            {"library_blocks", report.library_blocks},
            {"findings", findings}};
}

std::string audit_to_text(const ledger::AuditReport& report) {
    std::ostringstream out;
    out << "identity blocks: " << report.identity_blocks
        << ", library blocks: " << report.library_blocks << "\n";
    for (const auto& f : report.findings)
        out << "  " << (f.chain == ledger::ChainSelector::identity ? "identity" : "library")
            << " block " << f.block_height << ": " << f.problem << "\n";
    out << "audit: " << (report.ok ? "OK" : "FAIL") << "\n";
    return out.str();
}

// --- subcommand bodies -------------------------------------------------------

int cmd_keygen(const std::string& out, const std::string& seed_hex, bool as_json) {
    KeyPair key = [&] {
        if (seed_hex.empty()) return KeyPair::generate();
        auto bytes = from_hex(seed_hex);
        if (bytes.size() != KeyPair::kSeedSize)
            raise(Errc::key_error, "seed must be 32 bytes of hex");
        std::array<std::uint8_t, KeyPair::kSeedSize> seed{};
        std::copy(bytes.begin(), bytes.end(), seed.begin());
        return KeyPair::from_seed(seed);
    }();
    key.save(out);
    emit(as_json, {{"file", out}, {"public_key", key.public_key().hex()}},
         "wrote " + out + "\npublic key: " + key.public_key().hex() + "\n");
    return kOk;
}

int cmd_fixtures(const std::string& out, bool as_json) {
    auto set = fixtures::write_all(out);
    json projects = json::object();
    std::string text = "fixtures written to " + out + "\n";
    for (auto eco : kAllEcosystems) {
        projects[ecosystem_name(eco)] = set.project_dir(eco).string();
        text += "  " + ecosystem_name(eco) + ": " + set.project_dir(eco).string() + "\n";
    }
    emit(as_json,
         {{"root", set.root.string()},
          {"projects", projects},
          {"dist", set.dist_dir().string()},
          {"registry", set.registry_file().string()},
          {"advisories", set.advisories_file().string()}},
         text + "  dist: " + set.dist_dir().string() + "\n  registry: " +
             set.registry_file().string() + "\n  advisories: " + set.advisories_file().string() +
             "\n");
    return kOk;
}

int cmd_parse(const std::string& project, const std::string& eco_flag, bool as_json) {
    auto eco = resolve_ecosystem(project, eco_flag);
    auto parsed = manifest::parse_project(project, eco);
    json deps = json::array();
    std::string text = "ecosystem: " + ecosystem_name(eco) + "\n";
    for (const auto& d : parsed.deps) {
        deps.push_back({{"name", d.name}, {"version", d.version}, {"source", d.source_file}});
        text += "  " + d.name + "@" + d.version + " (" + d.source_file + ")\n";
    }
    for (const auto& w : parsed.warnings) text += "warning: " + w + "\n";
    emit(as_json,
         {{"ecosystem", ecosystem_name(eco)}, {"deps", deps}, {"warnings", parsed.warnings}},
         text);
    return kOk;
}

int cmd_pin(const std::string& project, const std::string& dist, const std::string& eco_flag,
            bool as_json) {
    auto eco = resolve_ecosystem(project, eco_flag);
    auto parsed = manifest::parse_project(project, eco);
    DirectoryArtifactSource source(dist);
    auto store = pin_artifacts(parsed, source);
    json entries = json::array();
    std::string text = "pinned " + std::to_string(store.entries().size()) + " artifacts into " +
                       store.dir().string() + "\n";
    for (const auto& e : store.entries()) {
        entries.push_back({{"name", e.name},
                           {"version", e.version},
                           {"filename", e.filename},
                           {"sha256", e.sha256.hex()}});
        text += "  " + e.filename + " " + e.sha256.hex() + "\n";
    }
    emit(as_json, {{"store", store.dir().string()}, {"entries", entries}}, text);
    return kOk;
}

int cmd_tamper(const std::string& project, const std::string& dep, const std::string& to,
               const std::string& scope_flag, const std::string& eco_flag, bool as_json) {
    auto eco = resolve_ecosystem(project, eco_flag);
    auto parsed = manifest::parse_project(project, eco);
    auto scope = parse_scope(scope_flag);
    auto targets = manifest::tamper_targets(parsed, dep, scope);
    manifest::tamper_version(parsed, dep, to, scope);
    json files = json::array();
    std::string text = "rewrote " + dep + " to " + to + " in:\n";
    for (const auto& f : targets) {
        files.push_back(f);
        text += "  " + f + "\n";
    }
    emit(as_json, {{"dep", dep}, {"version", to}, {"files", files}}, text);
    return kOk;
}

int cmd_generate(const std::string& project, const std::string& mode_flag, std::string out,
                 const std::string& key_file, const std::string& eco_flag,
                 std::optional<std::uint64_t> timestamp_ms, const std::string& serial,
                 const std::string& tool, bool as_json) {
    auto eco = resolve_ecosystem(project, eco_flag);
    auto mode = tool_mode_from_name(mode_flag);
    if (!mode) raise(Errc::io_error, "mode must be naive or secure");
    auto parsed = manifest::parse_project(project, eco);

    GenerationOptions options;
    if (!tool.empty()) options.tool_name = tool;
    options.timestamp_ms = timestamp_ms;
    if (!serial.empty()) options.serial_number = serial;

    SbomDocument doc = [&] {
        if (*mode == ToolMode::naive) return generate_naive(parsed, options);
        if (!parsed.artifact_store_dir)
            raise(Errc::missing_artifact,
                  "no artifact store under " + project + "; run pin first");
        auto store = ArtifactStore::load(*parsed.artifact_store_dir);
        return generate_secure(parsed, store, options);
    }();

    if (out.empty()) out = (fs::path(project) / "bom.sbom.json").string();
    write_sbom(doc, out);
    json j{{"sbom", out},
           {"mode", tool_mode_name(*mode)},
           {"components", doc.components().size()},
           {"digest", canonical_digest(doc).hex()}};
    std::string text = "wrote " + out + " (" + tool_mode_name(*mode) + ", " +
                       std::to_string(doc.components().size()) + " components)\n";
    if (!key_file.empty()) {
        auto key = KeyPair::load(key_file);
        auto envelope = sign_document(doc, key);
        auto sig_path = default_sig_path(out);
        write_envelope(envelope, sig_path);
        j["signature"] = sig_path.string();
        j["signer"] = key.public_key().hex();
        text += "signed with " + key.public_key().hex() + " -> " + sig_path.string() + "\n";
    }
    emit(as_json, j, text);
    return kOk;
}

int cmd_sign(const std::string& sbom_file, const std::string& key_file, std::string out,
             bool as_json) {
    auto doc = read_sbom(sbom_file);
    auto key = KeyPair::load(key_file);
    auto envelope = sign_document(doc, key);
    if (out.empty()) out = default_sig_path(sbom_file).string();
    write_envelope(envelope, out);
    emit(as_json, {{"signature", out}, {"signer", key.public_key().hex()}},
         "signed with " + key.public_key().hex() + " -> " + out + "\n");
    return kOk;
}

int cmd_verify(const std::string& sbom_file, std::string sig_file,
               const std::vector<std::string>& trust_hex, const std::string& trust_file,
               ProviderChoice& choice, bool as_json) {
    auto doc = read_sbom(sbom_file);
    if (sig_file.empty()) sig_file = default_sig_path(sbom_file).string();
    auto envelope = read_envelope(sig_file);
    auto trusted = load_trusted(trust_hex, trust_file);
    const auto* provider = choice.resolve();

    auto report = verifier::verify(doc, envelope, trusted, *provider);
    emit(as_json, report_to_json(report), report_to_text(report));
    return verify_exit_code(report);
}

int cmd_advisories(const std::string& sbom_file, const std::string& db, bool as_json) {
    auto doc = read_sbom(sbom_file);
    auto advisories = verifier::load_advisories(db);
    auto report = verifier::match_advisories(doc, advisories);
    emit(as_json, advisory_report_to_json(report), advisory_report_to_text(report));
    return kOk;
}

fs::path ledger_dir_or_env(std::string dir) {
    if (dir.empty())
        if (const char* env = std::getenv("SBOMGUARD_LEDGER_DIR")) dir = env;
    if (dir.empty())
        raise(Errc::io_error, "pass --dir or set SBOMGUARD_LEDGER_DIR");
    return dir;
}

int cmd_ledger_claim(const std::string& dir, const std::string& key_file, const std::string& name,
                     std::optional<std::uint64_t> timestamp_ms, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto ledger = ledger::DualLedger::load(path);
    auto key = KeyPair::load(key_file);
    auto tx = ledger.claim_ownership(key, name, timestamp_ms);
    ledger.save(path);
    emit(as_json,
         {{"tx_id", tx.id.hex()}, {"library", name}, {"owner", tx.output_pubkey.hex()},
          {"pending", true}},
         "claim queued: " + name + " -> " + tx.output_pubkey.hex() + "\ntx " + tx.id.hex() +
             "\nrun `ledger seal --chain identity` to confirm\n");
    return kOk;
}

int cmd_ledger_transfer(const std::string& dir, const std::string& key_file,
                        const std::string& new_owner_hex, const std::string& name,
                        std::optional<std::uint64_t> timestamp_ms, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto ledger = ledger::DualLedger::load(path);
    auto key = KeyPair::load(key_file);
    auto new_owner = PublicKey::from_hex(new_owner_hex);
    auto tx = ledger.transfer_ownership(key, new_owner, name, timestamp_ms);
    ledger.save(path);
    emit(as_json,
         {{"tx_id", tx.id.hex()}, {"library", name}, {"new_owner", new_owner.hex()},
          {"pending", true}},
         "transfer queued: " + name + " -> " + new_owner.hex() + "\ntx " + tx.id.hex() + "\n");
    return kOk;
}

int cmd_ledger_register(const std::string& dir, const std::string& key_file,
                        const std::string& name, const std::string& version,
                        const std::string& hash_hex, const std::string& artifact,
                        std::optional<std::uint64_t> timestamp_ms, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    if (hash_hex.empty() == artifact.empty())
        raise(Errc::io_error, "pass exactly one of --hash or --artifact");
    auto hash = hash_hex.empty() ? sha256_file(artifact) : Hash256::from_hex(hash_hex);
    auto ledger = ledger::DualLedger::load(path);
    auto key = KeyPair::load(key_file);
    auto tx = ledger.register_library(key, name, version, hash, timestamp_ms);
    ledger.save(path);
    emit(as_json,
         {{"tx_id", tx.id.hex()}, {"library", name}, {"version", tx.version.str()},
          {"sha256", hash.hex()}, {"pending", true}},
         "registration queued: " + name + "@" + tx.version.str() + " " + hash.hex() + "\ntx " +
             tx.id.hex() + "\n");
    return kOk;
}

int cmd_ledger_seal(const std::string& dir, const std::string& chain_flag, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto ledger = ledger::DualLedger::load(path);
    json blocks = json::array();
    std::string text;

    auto record = [&](const char* chain, const auto& result) {
        json rejections = json::array();
        for (const auto& r : result.rejections)
            rejections.push_back(
                {{"tx_id", r.tx_id.hex()}, {"library", r.library_name}, {"reason", r.reason}});
        blocks.push_back({{"chain", chain},
                          {"height", result.block.header.height},
                          {"tx_count", result.block.header.tx_count},
                          {"block_hash", ledger::block_hash(result.block.header).hex()},
                          {"rejections", rejections}});
        text += std::string(chain) + " block " + std::to_string(result.block.header.height) +
                " sealed with " + std::to_string(result.block.header.tx_count) + " tx\n";
        for (const auto& r : result.rejections)
            text += "  rejected " + r.library_name + ": " + r.reason + "\n";
    };

    if (chain_flag == "identity" || chain_flag == "both")
        record("identity", ledger.seal_identity_block());
    if (chain_flag == "library" || chain_flag == "both")
        record("library", ledger.seal_library_block());
    if (chain_flag != "identity" && chain_flag != "library" && chain_flag != "both")
        raise(Errc::io_error, "chain must be identity, library, or both");

    ledger.save(path);
    emit(as_json, {{"blocks", blocks}}, text);
    return kOk;
}

int cmd_ledger_query(const std::string& dir, const std::string& name, const std::string& version,
                     std::optional<std::uint64_t> as_of_ms, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto ledger = ledger::DualLedger::load(path);
    auto result = ledger.query_and_verify(name, version, as_of_ms);
    emit(as_json,
         {{"library", name},
          {"version", result.tx.version.str()},
          {"sha256", result.tx.artifact_hash.hex()},
          {"recorded_at_ms", result.tx.timestamp_ms},
          {"owner", result.tx.owner_pubkey.hex()},
          {"owner_proof_tx", result.owner_proof.id.hex()}},
         name + "@" + result.tx.version.str() + "\n  sha256 " + result.tx.artifact_hash.hex() +
             "\n  owner " + result.tx.owner_pubkey.hex() + "\n  ownership proven by tx " +
             result.owner_proof.id.hex() + "\n");
    return kOk;
}

int cmd_ledger_owner(const std::string& dir, const std::string& name,
                     std::optional<std::uint64_t> at_ms, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto ledger = ledger::DualLedger::load(path);
    auto owner = at_ms ? ledger.owner_at(name, *at_ms) : ledger.current_owner(name);
    if (!owner) raise(Errc::unknown_library, name + " has no owner");
    emit(as_json, {{"library", name}, {"owner", owner->hex()}},
         name + " is owned by " + owner->hex() + "\n");
    return kOk;
}

int cmd_ledger_audit(const std::string& dir, bool as_json) {
    auto path = ledger_dir_or_env(dir);
    auto report = ledger::audit_chain_files(path);
    emit(as_json, audit_to_json(report), audit_to_text(report));
    return report.ok ? kOk : kLedgerFailure;
}

int cmd_estimate(double developers, double repos, double versions, double identity_bytes,
                 double library_bytes, double deps, double identity_ms, double library_ms,
                 bool as_json) {
    feasibility::FeasibilityInputs inputs;
    inputs.developers = developers;
    inputs.repositories = repos;
    inputs.avg_versions_per_library = versions;
    if (identity_bytes > 0) inputs.identity_record_bytes = identity_bytes;
    if (library_bytes > 0) inputs.library_record_bytes = library_bytes;
    inputs.deps_per_app = deps;
    inputs.per_identity_check_ms = identity_ms;
    inputs.per_library_check_ms = library_ms;

    auto storage = feasibility::estimate_storage(inputs);
    auto seconds = feasibility::estimate_verification_time(inputs);
    auto latency = feasibility::registration_latency_note();

    std::ostringstream text;
    text << "identity chain storage: " << storage.identity_gib << " GiB\n"
         << "library chain storage: " << storage.library_gib << " GiB\n"
         << "verification time: " << seconds << " s\n"
         << "registration latency (modeled): " << latency.minutes << " min\n";
    emit(as_json,
         {{"storage_gib", {{"identity", storage.identity_gib}, {"library", storage.library_gib}}},
          {"verification_seconds", seconds},
          {"registration_latency",
           {{"minutes", latency.minutes},
            {"seconds", latency.seconds},
            {"milliseconds", latency.milliseconds}}}},
         text.str());
    return kOk;
}

struct DemoRun {
    verifier::AdvisoryReport naive_advisories;
    verifier::VerificationReport secure_report;
};

int cmd_demo_poco(std::string workdir, bool keep, bool as_json) {
    bool temp = workdir.empty();
    fs::path root = temp ? fs::temp_directory_path() / ("sbomguard-demo-" +
                                                        std::to_string(::getpid()))
                         : fs::path(workdir);
    fs::remove_all(root);
    auto set = fixtures::write_all(root / "fixtures");

    auto key = fixtures::demo_keypair();
    DirectoryArtifactSource source(set.dist_dir());
    auto registry = registry::LocalRegistry::load(set.registry_file());

    verifier::PipelineContext ctx{&source,
                                  &registry,
                                  verifier::load_advisories(set.advisories_file()),
                                  key,
                                  {key.public_key()},
                                  {}};
    ctx.generation.timestamp_ms = fixtures::kDemoTimestampMs;
    ctx.generation.serial_number = fixtures::kDemoSerialNumber;

    auto run = [&](const char* label,
                   const std::optional<verifier::TamperSpec>& tamper) -> verifier::AttackDemoResult {
        auto project = root / label;
        fs::copy(set.project_dir(Ecosystem::c_cpp), project, fs::copy_options::recursive);
        return verifier::demo_attack_pipeline(project, Ecosystem::c_cpp, tamper, ctx);
    };

    auto control = run("control", std::nullopt);
    auto attack = run("attack", verifier::TamperSpec{"poco-demo", "1.13",
                                                     manifest::TamperScope::all_locations});

    if (!keep && temp) fs::remove_all(root);

    std::size_t attack_mismatches = 0;
    for (const auto& v : attack.secure_report.verdicts)
        if (v.status == verifier::ComponentStatus::hash_mismatch) ++attack_mismatches;

    bool narrative_holds = control.naive_advisories.matches.size() == 1 &&
                           control.secure_report.pass &&
                           attack.naive_advisories.matches.empty() &&
                           !attack.secure_report.pass && attack_mismatches == 1;

    json j{{"control",
            {{"naive_advisories", advisory_report_to_json(control.naive_advisories)},
             {"secure_verify", report_to_json(control.secure_report)}}},
           {"attack",
            {{"tampered", "poco-demo 1.9 -> 1.13"},
             {"naive_advisories", advisory_report_to_json(attack.naive_advisories)},
             {"secure_verify", report_to_json(attack.secure_report)}}},
           {"narrative_holds", narrative_holds}};

    std::ostringstream text;
    text << "== control (untampered, poco-demo 1.9) ==\n"
         << "naive SBOM advisory hits: " << control.naive_advisories.matches.size() << "\n"
         << advisory_report_to_text(control.naive_advisories)
         << "secure verify:\n" << report_to_text(control.secure_report)
         << "\n== attack (manifest tampered, poco-demo 1.9 -> 1.13) ==\n"
         << "naive SBOM advisory hits: " << attack.naive_advisories.matches.size()
         << " (the vulnerability is now hidden)\n"
         << "secure verify:\n" << report_to_text(attack.secure_report)
         << "\nnarrative holds: " << (narrative_holds ? "yes" : "NO") << "\n";
    emit(as_json, j, text.str());
    return narrative_holds ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hash-pinned SBOM toolkit: tamper demo, secure generation, verification, "
                 "and the dual-ledger reference repository"};
    app.require_subcommand(1);
    int rc = kOk;

    // keygen
    std::string kg_out, kg_seed;
    bool kg_json = false;
    auto* keygen = app.add_subcommand("keygen", "generate an ed25519 keypair file");
    keygen->add_option("--out", kg_out, "key file to write")->required();
    keygen->add_option("--seed-hex", kg_seed, "32-byte hex seed for a deterministic key");
    keygen->add_flag("--json", kg_json, "machine-readable output");
    keygen->callback([&] { rc = cmd_keygen(kg_out, kg_seed, kg_json); });

    // fixtures
    std::string fx_out;
    bool fx_json = false;
    auto* fixtures_cmd = app.add_subcommand("fixtures", "materialize the bundled demo fixtures");
    fixtures_cmd->add_option("--out", fx_out, "directory to write")->required();
    fixtures_cmd->add_flag("--json", fx_json, "machine-readable output");
    fixtures_cmd->callback([&] { rc = cmd_fixtures(fx_out, fx_json); });

    // parse
    std::string pr_project, pr_eco;
    bool pr_json = false;
    auto* parse = app.add_subcommand("parse", "parse a project's manifests");
    parse->add_option("--project", pr_project, "project root")->required();
    parse->add_option("--ecosystem", pr_eco, "override ecosystem detection");
    parse->add_flag("--json", pr_json, "machine-readable output");
    parse->callback([&] { rc = cmd_parse(pr_project, pr_eco, pr_json); });

    // pin
    std::string pin_project, pin_dist, pin_eco;
    bool pin_json = false;
    auto* pin = app.add_subcommand("pin", "download and hash-pin every dependency archive");
    pin->add_option("--project", pin_project, "project root")->required();
    pin->add_option("--dist", pin_dist, "directory of distribution archives")->required();
    pin->add_option("--ecosystem", pin_eco, "override ecosystem detection");
    pin->add_flag("--json", pin_json, "machine-readable output");
    pin->callback([&] { rc = cmd_pin(pin_project, pin_dist, pin_eco, pin_json); });

    // tamper
    std::string tm_project, tm_dep, tm_to, tm_scope = "all", tm_eco;
    bool tm_json = false;
    auto* tamper = app.add_subcommand("tamper", "rewrite a dependency's version in the manifests");
    tamper->add_option("--project", tm_project, "project root")->required();
    tamper->add_option("--dep", tm_dep, "dependency name")->required();
    tamper->add_option("--to", tm_to, "replacement version")->required();
    tamper->add_option("--scope", tm_scope, "manifest | lock | all (default all)");
    tamper->add_option("--ecosystem", tm_eco, "override ecosystem detection");
    tamper->add_flag("--json", tm_json, "machine-readable output");
    tamper->callback(
        [&] { rc = cmd_tamper(tm_project, tm_dep, tm_to, tm_scope, tm_eco, tm_json); });

    // generate
    std::string gn_project, gn_mode, gn_out, gn_key, gn_eco, gn_serial, gn_tool;
    std::uint64_t gn_ts = 0;
    bool gn_have_ts = false, gn_json = false;
    auto* generate = app.add_subcommand("generate", "emit an SBOM for a project");
    generate->add_option("--project", gn_project, "project root")->required();
    generate->add_option("--mode", gn_mode, "naive | secure")->required();
    generate->add_option("--out", gn_out, "output path (default <project>/bom.sbom.json)");
    generate->add_option("--sign", gn_key, "key file; also write the signature sidecar");
    generate->add_option("--ecosystem", gn_eco, "override ecosystem detection");
    generate->add_option("--timestamp-ms", gn_ts, "fixed timestamp for reproducible output")
        ->each([&](const std::string&) { gn_have_ts = true; });
    generate->add_option("--serial", gn_serial, "fixed serial number for reproducible output");
    generate->add_option("--tool", gn_tool, "tool name recorded in metadata");
    generate->add_flag("--json", gn_json, "machine-readable output");
    generate->callback([&] {
        rc = cmd_generate(gn_project, gn_mode, gn_out, gn_key, gn_eco,
                          gn_have_ts ? std::optional<std::uint64_t>(gn_ts) : std::nullopt,
                          gn_serial, gn_tool, gn_json);
    });

    // sign
    std::string sg_sbom, sg_key, sg_out;
    bool sg_json = false;
    auto* sign = app.add_subcommand("sign", "write a detached signature for an SBOM");
    sign->add_option("--sbom", sg_sbom, "SBOM file")->required();
    sign->add_option("--key", sg_key, "key file")->required();
    sign->add_option("--out", sg_out, "signature path (default sidecar .sbom.sig)");
    sign->add_flag("--json", sg_json, "machine-readable output");
    sign->callback([&] { rc = cmd_sign(sg_sbom, sg_key, sg_out, sg_json); });

    // verify
    std::string vf_sbom, vf_sig, vf_trust_file;
    std::vector<std::string> vf_trust;
    ProviderChoice vf_provider;
    bool vf_json = false;
    auto* verify = app.add_subcommand("verify", "verify a signed SBOM against a reference source");
    verify->add_option("--sbom", vf_sbom, "SBOM file")->required();
    verify->add_option("--sig", vf_sig, "signature sidecar (default <sbom>.sbom.sig)");
    verify->add_option("--trust", vf_trust, "trusted signer pubkey (hex, repeatable)");
    verify->add_option("--trust-file", vf_trust_file, "file of trusted pubkeys, one per line");
    auto* vf_opt_registry =
        verify->add_option("--registry", vf_provider.registry_file, "local registry.json");
    auto* vf_opt_url = verify->add_option("--registry-url", vf_provider.registry_url,
                                          "package-index base URL (or SBOMGUARD_REGISTRY_URL)");
    auto* vf_opt_ledger = verify->add_option("--ledger", vf_provider.ledger_dir,
                                             "ledger directory as reference source");
    vf_opt_registry->excludes(vf_opt_url)->excludes(vf_opt_ledger);
    vf_opt_url->excludes(vf_opt_ledger);
    verify->add_flag("--json", vf_json, "machine-readable output");
    verify->callback(
        [&] { rc = cmd_verify(vf_sbom, vf_sig, vf_trust, vf_trust_file, vf_provider, vf_json); });

    // advisories
    std::string ad_sbom, ad_db;
    bool ad_json = false;
    auto* advisories = app.add_subcommand("advisories", "match SBOM components against advisories");
    advisories->add_option("--sbom", ad_sbom, "SBOM file")->required();
    advisories->add_option("--db", ad_db, "advisories.json")->required();
    advisories->add_flag("--json", ad_json, "machine-readable output");
    advisories->callback([&] { rc = cmd_advisories(ad_sbom, ad_db, ad_json); });

    // ledger
    auto* ledger_cmd = app.add_subcommand("ledger", "dual-ledger reference repository");
    ledger_cmd->require_subcommand(1);
    std::string ld_dir;
    ledger_cmd->add_option("--dir", ld_dir, "ledger directory (or SBOMGUARD_LEDGER_DIR)");

    std::string lc_key, lc_name;
    std::uint64_t lc_ts = 0;
    bool lc_have_ts = false, lc_json = false;
    auto* claim = ledger_cmd->add_subcommand("claim", "claim ownership of a library name");
    claim->add_option("--key", lc_key, "owner key file")->required();
    claim->add_option("--name", lc_name, "library name")->required();
    claim->add_option("--timestamp-ms", lc_ts, "fixed timestamp")
        ->each([&](const std::string&) { lc_have_ts = true; });
    claim->add_flag("--json", lc_json, "machine-readable output");
    claim->callback([&] {
        rc = cmd_ledger_claim(ld_dir, lc_key, lc_name,
                              lc_have_ts ? std::optional<std::uint64_t>(lc_ts) : std::nullopt,
                              lc_json);
    });

    std::string lt_key, lt_new, lt_name;
    std::uint64_t lt_ts = 0;
    bool lt_have_ts = false, lt_json = false;
    auto* transfer = ledger_cmd->add_subcommand("transfer", "transfer ownership to another key");
    transfer->add_option("--key", lt_key, "current owner key file")->required();
    transfer->add_option("--new-owner", lt_new, "new owner pubkey (hex)")->required();
    transfer->add_option("--name", lt_name, "library name")->required();
    transfer->add_option("--timestamp-ms", lt_ts, "fixed timestamp")
        ->each([&](const std::string&) { lt_have_ts = true; });
    transfer->add_flag("--json", lt_json, "machine-readable output");
    transfer->callback([&] {
        rc = cmd_ledger_transfer(ld_dir, lt_key, lt_new, lt_name,
                                 lt_have_ts ? std::optional<std::uint64_t>(lt_ts) : std::nullopt,
                                 lt_json);
    });

    std::string lr_key, lr_name, lr_version, lr_hash, lr_artifact;
    std::uint64_t lr_ts = 0;
    bool lr_have_ts = false, lr_json = false;
    auto* reg = ledger_cmd->add_subcommand("register", "record a library version's hash");
    reg->add_option("--key", lr_key, "owner key file")->required();
    reg->add_option("--name", lr_name, "library name")->required();
    reg->add_option("--version", lr_version, "version (numeric dotted)")->required();
    reg->add_option("--hash", lr_hash, "artifact sha256 (hex)");
    reg->add_option("--artifact", lr_artifact, "artifact file to hash");
    reg->add_option("--timestamp-ms", lr_ts, "fixed timestamp")
        ->each([&](const std::string&) { lr_have_ts = true; });
    reg->add_flag("--json", lr_json, "machine-readable output");
    reg->callback([&] {
        rc = cmd_ledger_register(ld_dir, lr_key, lr_name, lr_version, lr_hash, lr_artifact,
                                 lr_have_ts ? std::optional<std::uint64_t>(lr_ts) : std::nullopt,
                                 lr_json);
    });

    std::string ls_chain = "both";
    bool ls_json = false;
    auto* seal = ledger_cmd->add_subcommand("seal", "validate pending txs and seal a block");
    seal->add_option("--chain", ls_chain, "identity | library | both (default both)");
    seal->add_flag("--json", ls_json, "machine-readable output");
    seal->callback([&] { rc = cmd_ledger_seal(ld_dir, ls_chain, ls_json); });

    std::string lq_name, lq_version;
    std::uint64_t lq_as_of = 0;
    bool lq_have_as_of = false, lq_json = false;
    auto* query = ledger_cmd->add_subcommand("query", "fetch and verify a library record");
    query->add_option("--name", lq_name, "library name")->required();
    query->add_option("--version", lq_version, "version")->required();
    query->add_option("--as-of-ms", lq_as_of, "query time for confirmation visibility")
        ->each([&](const std::string&) { lq_have_as_of = true; });
    query->add_flag("--json", lq_json, "machine-readable output");
    query->callback([&] {
        rc = cmd_ledger_query(ld_dir, lq_name, lq_version,
                              lq_have_as_of ? std::optional<std::uint64_t>(lq_as_of)
                                            : std::nullopt,
                              lq_json);
    });

    std::string lo_name;
    std::uint64_t lo_at = 0;
    bool lo_have_at = false, lo_json = false;
    auto* owner = ledger_cmd->add_subcommand("owner", "resolve a library's owner");
    owner->add_option("--name", lo_name, "library name")->required();
    owner->add_option("--at-ms", lo_at, "timestamp to resolve at (default now)")
        ->each([&](const std::string&) { lo_have_at = true; });
    owner->add_flag("--json", lo_json, "machine-readable output");
    owner->callback([&] {
        rc = cmd_ledger_owner(ld_dir, lo_name,
                              lo_have_at ? std::optional<std::uint64_t>(lo_at) : std::nullopt,
                              lo_json);
    });

    bool la_json = false;
    auto* audit = ledger_cmd->add_subcommand("audit", "re-verify both chains from disk");
    audit->add_flag("--json", la_json, "machine-readable output");
    audit->callback([&] { rc = cmd_ledger_audit(ld_dir, la_json); });

    // estimate; defaults model the public ecosystem at large
    double es_dev = 100e6, es_repos = 284e6, es_versions = 10, es_ibytes = 0, es_lbytes = 0;
    double es_deps = 1000, es_ims = 0.5, es_lms = 1.5;
    bool es_json = false;
    auto* estimate = app.add_subcommand("estimate", "feasibility arithmetic");
    estimate->add_option("--developers", es_dev, "developer count (default 100e6)");
    estimate->add_option("--repos", es_repos, "repository count (default 284e6)");
    estimate->add_option("--versions", es_versions, "average versions per library (default 10)");
    estimate->add_option("--identity-bytes", es_ibytes, "identity record size (default 296)");
    estimate->add_option("--library-bytes", es_lbytes, "library record size (default 208)");
    estimate->add_option("--deps", es_deps, "dependencies per application (default 1000)");
    estimate->add_option("--identity-ms", es_ims, "per-dependency identity check (ms, default 0.5)");
    estimate->add_option("--library-ms", es_lms, "per-dependency library check (ms, default 1.5)");
    estimate->add_flag("--json", es_json, "machine-readable output");
    estimate->callback([&] {
        rc = cmd_estimate(es_dev, es_repos, es_versions, es_ibytes, es_lbytes, es_deps, es_ims,
                          es_lms, es_json);
    });

    // demo
    auto* demo = app.add_subcommand("demo", "end-to-end demonstrations");
    demo->require_subcommand(1);
    std::string dp_workdir;
    bool dp_keep = false, dp_json = false;
    auto* poco = demo->add_subcommand("poco", "the full tamper-and-detect narrative");
    poco->add_option("--workdir", dp_workdir, "working directory (default: temp)");
    poco->add_flag("--keep", dp_keep, "keep the working directory");
    poco->add_flag("--json", dp_json, "machine-readable output");
    poco->callback([&] { rc = cmd_demo_poco(dp_workdir, dp_keep, dp_json); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return rc;
}
