// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0
//
// Black-box tests of the installed binary: exit codes, --json output, and
// determinism of the demo. The binary path is injected by the build.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "support.hpp"

using namespace testsupport;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cli() { return std::string(SBOMGUARD_CLI_PATH); }

CommandResult run(const std::string& args) { return run_command("'" + cli() + "' " + args); }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

/// fixtures + keygen + pin, shared by the pipeline cases.
struct CliPipeline {
    TempDir dir;
    fs::path fx;
    fs::path project;
    fs::path key_file;
    std::string pubkey_hex;

    explicit CliPipeline(const char* tag) : dir(tag) {
        fx = dir.path() / "fx";
        project = fx / "projects" / "python";
        key_file = dir.path() / "key.json";
        REQUIRE(run("fixtures --out " + q(fx)).exit_code == 0);
        auto kg = run("keygen --out " + q(key_file) + " --json");
        REQUIRE(kg.exit_code == 0);
        pubkey_hex = json::parse(kg.output).at("public_key").get<std::string>();
        REQUIRE(run("pin --project " + q(project) + " --dist " + q(fx / "dist")).exit_code == 0);
    }

    std::string verify_args(const fs::path& sbom) const {
        return "verify --sbom " + q(sbom) + " --trust " + pubkey_hex + " --registry " +
               q(fx / "registry.json");
    }
};

}  // namespace

TEST_CASE("--help exits 0; an unknown subcommand is a usage error") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("").exit_code == 2);                    // a subcommand is required
    CHECK(run("keygen").exit_code == 2);              // missing required --out
    CHECK(run("generate --mode secure").exit_code == 2);
}

TEST_CASE("estimate --json reports the headline numbers") {
    auto r = run("estimate --json");
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.output);
    CHECK(std::abs(j["storage_gib"]["identity"].get<double>() - 27.57) < 0.01);
    CHECK(std::abs(j["storage_gib"]["library"].get<double>() - 550.15) < 0.01);
    CHECK(j["verification_seconds"].get<double>() == 2.0);
    CHECK(j["registration_latency"]["minutes"].get<int>() == 40);
}

TEST_CASE("pipeline: generate, sign, verify passes; tampering flips it to exit 4") {
    CliPipeline p("cli-pipeline");
    auto sbom = p.dir.path() / "app.sbom.json";

    auto gen = run("generate --project " + q(p.project) + " --mode secure --out " + q(sbom) +
                   " --sign " + q(p.key_file) + " --json");
    REQUIRE(gen.exit_code == 0);

    auto ok = run(p.verify_args(sbom) + " --json");
    CHECK(ok.exit_code == 0);
    auto okj = json::parse(ok.output);
    CHECK(okj["pass"].get<bool>());
    CHECK(okj["signature"].get<std::string>() == "valid");

    // Tamper the manifests, regenerate, re-sign, verify: hash mismatch.
    REQUIRE(run("tamper --project " + q(p.project) + " --dep urllib3 --to 2.0.4").exit_code == 0);
    REQUIRE(run("generate --project " + q(p.project) + " --mode secure --out " + q(sbom) +
                " --sign " + q(p.key_file))
                .exit_code == 0);
    auto bad = run(p.verify_args(sbom) + " --json");
    CHECK(bad.exit_code == 4);
    auto badj = json::parse(bad.output);
    CHECK_FALSE(badj["pass"].get<bool>());
    int mismatches = 0;
    for (const auto& v : badj["verdicts"])
        if (v["status"].get<std::string>() == "hash_mismatch") ++mismatches;
    CHECK(mismatches == 1);
}

TEST_CASE("verify exit codes: unsigned 3, naive 3, unreachable provider 6, flag conflicts 2") {
    CliPipeline p("cli-codes");
    auto sbom = p.dir.path() / "app.sbom.json";
    REQUIRE(run("generate --project " + q(p.project) + " --mode secure --out " + q(sbom))
                .exit_code == 0);
    CHECK(run(p.verify_args(sbom)).exit_code == 3);  // no signature sidecar

    REQUIRE(run("sign --sbom " + q(sbom) + " --key " + q(p.key_file)).exit_code == 0);
    CHECK(run(p.verify_args(sbom)).exit_code == 0);

    // Trusted set without the signer: still 3.
    auto other = run("keygen --out " + q(p.dir.path() / "other.json") + " --json");
    auto other_hex = json::parse(other.output).at("public_key").get<std::string>();
    CHECK(run("verify --sbom " + q(sbom) + " --trust " + other_hex + " --registry " +
              q(p.fx / "registry.json"))
              .exit_code == 3);

    // Naive SBOM, even signed: 3.
    auto naive = p.dir.path() / "naive.sbom.json";
    REQUIRE(run("generate --project " + q(p.project) + " --mode naive --out " + q(naive) +
                " --sign " + q(p.key_file))
                .exit_code == 0);
    CHECK(run(p.verify_args(naive)).exit_code == 3);

    // Unreachable registry URL: 6.
    CHECK(run("verify --sbom " + q(sbom) + " --trust " + p.pubkey_hex +
              " --registry-url http://127.0.0.1:1")
              .exit_code == 6);

    // Two reference sources at once: usage error.
    CHECK(run(p.verify_args(sbom) + " --ledger " + q(p.dir.path() / "ledger")).exit_code == 2);
}

TEST_CASE("tamper usage errors: unknown dependency and unsupported ecosystems exit 2") {
    CliPipeline p("cli-tamper");
    CHECK(run("tamper --project " + q(p.project) + " --dep ghost --to 9.9").exit_code == 2);
    auto java = p.fx / "projects" / "java";
    CHECK(run("tamper --project " + q(java) + " --dep commons-demo --to 2.0").exit_code == 2);
    auto rust = p.fx / "projects" / "rust";
    CHECK(run("tamper --project " + q(rust) + " --dep serde-demo --to 2.0").exit_code == 2);
}

TEST_CASE("ledger lifecycle through the CLI, and audit catches a flipped bit") {
    TempDir dir("cli-ledger");
    auto ld = dir.path() / "ledger";
    auto key = dir.path() / "owner.json";
    REQUIRE(run("keygen --out " + q(key)).exit_code == 0);
    std::string base = "ledger --dir " + q(ld) + " ";

    CHECK(run(base + "claim --key " + q(key) + " --name poco-demo --timestamp-ms 1000")
              .exit_code == 0);
    CHECK(run(base + "seal --chain identity --json").exit_code == 0);
    CHECK(run(base + "register --key " + q(key) +
              " --name poco-demo --version 1.9 --hash " + std::string(64, 'a') +
              " --timestamp-ms 2000")
              .exit_code == 0);
    CHECK(run(base + "seal --chain library").exit_code == 0);

    auto query = run(base + "query --name poco-demo --version 1.9 --json");
    CHECK(query.exit_code == 0);
    auto qj = json::parse(query.output);
    CHECK(qj["sha256"].get<std::string>() == std::string(64, 'a'));
    CHECK(qj["version"].get<std::string>() == "1.9.0");  // normalized

    // Same version again: duplicate, ledger-integrity class.
    CHECK(run(base + "register --key " + q(key) +
              " --name poco-demo --version 1.9.0 --hash " + std::string(64, 'b'))
              .exit_code == 5);
    // Unknown version: hash-verification class.
    CHECK(run(base + "query --name poco-demo --version 3.3").exit_code == 4);

    CHECK(run(base + "audit").exit_code == 0);

    // Flip one bit on disk; the audit must fail with findings.
    auto chain = ld / "library.chain";
    REQUIRE(fs::exists(chain));
    {
        std::fstream f(chain, std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(120);
        char c = 0;
        f.get(c);
        f.seekp(120);
        f.put(static_cast<char>(c ^ 0x04));
    }
    auto audit = run(base + "audit --json");
    CHECK(audit.exit_code == 5);
    CHECK_FALSE(json::parse(audit.output)["findings"].empty());
}

TEST_CASE("demo poco holds its narrative and is byte-deterministic across runs") {
    TempDir dir("cli-demo");
    auto run_demo = [&](const char* sub) {
        return run("demo poco --workdir " + q(dir.path() / sub) + " --json");
    };
    auto first = run_demo("a");
    auto second = run_demo("b");
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    CHECK(first.output == second.output);

    auto j = json::parse(first.output);
    CHECK(j["narrative_holds"].get<bool>());
    CHECK(j["control"]["naive_advisories"]["matches"].size() == 1);
    CHECK(j["control"]["secure_verify"]["pass"].get<bool>());
    CHECK(j["attack"]["naive_advisories"]["matches"].empty());
    CHECK_FALSE(j["attack"]["secure_verify"]["pass"].get<bool>());
}

TEST_CASE("generate --mode secure without a pinned store asks for pin first") {
    TempDir dir("cli-nopin");
    auto fx = dir.path() / "fx";
    REQUIRE(run("fixtures --out " + q(fx)).exit_code == 0);
    auto r = run("generate --project " + q(fx / "projects" / "python") + " --mode secure --out " +
                 q(dir.path() / "x.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("pin") != std::string::npos);
}
