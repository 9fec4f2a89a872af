// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/fixtures.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"

namespace sbomguard::fixtures {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<FixtureDep>& deps_for(Ecosystem eco) {
    static const std::vector<FixtureDep> kPython{
        {"click", "8.1.3", "8.1.7"},       {"data-kit", "0.8.2", "0.9.1"},
        {"flask", "2.1.0", "2.3.2"},       {"requests", "2.28.1", "2.31.0"},
        {"urllib3", "1.26.9", "2.0.4"},
    };
    static const std::vector<FixtureDep> kJavascript{
        {"express", "4.17.1", "4.18.2"},
        {"left-pad", "1.3.0", "1.4.0"},
        {"lodash", "4.17.20", "4.17.21"},
    };
    static const std::vector<FixtureDep> kCCpp{
        {"poco-demo", "1.9", "1.13"},
        {"zlib-demo", "1.2.11", "1.2.13"},
    };
    static const std::vector<FixtureDep> kCsharp{
        {"newtonsoft-json", "12.0.1", "13.0.3"},
        {"nlog", "4.7.0", "5.2.0"},
    };
    static const std::vector<FixtureDep> kPhp{
        {"guzzle", "7.4.0", "7.8.0"},
        {"monolog", "2.3.5", "3.4.0"},
        {"twig", "3.3.0", "3.7.0"},
    };
    static const std::vector<FixtureDep> kJava{{"commons-text", "1.9", "1.10.0"}};
    static const std::vector<FixtureDep> kRust{{"serde", "1.0.130", "1.0.188"}};

    switch (eco) {
        case Ecosystem::python: return kPython;
        case Ecosystem::javascript: return kJavascript;
        case Ecosystem::c_cpp: return kCCpp;
        case Ecosystem::csharp: return kCsharp;
        case Ecosystem::php: return kPhp;
        case Ecosystem::java: return kJava;
        case Ecosystem::rust: return kRust;
    }
    raise(Errc::unsupported_ecosystem, "unknown ecosystem");
}

std::vector<std::uint8_t> archive_bytes(const std::string& name, const std::string& version) {
    // 1 KiB of SHA-256 keystream seeded by (name, version): stable across
    // runs and machines, different per release.
    std::string banner = "archive " + name + " " + version + "\n";
    std::vector<std::uint8_t> bytes(banner.begin(), banner.end());
    auto block = sha256(banner);
    while (bytes.size() < 1024) {
        bytes.insert(bytes.end(), block.bytes().begin(), block.bytes().end());
        block = sha256(std::span<const std::uint8_t>(block.bytes()));
    }
    bytes.resize(1024);
    return bytes;
}

std::string archive_filename(Ecosystem eco, const std::string& name, const std::string& version) {
    const char* ext = "";
    switch (eco) {
        case Ecosystem::python: ext = "whl"; break;
        case Ecosystem::javascript: ext = "tgz"; break;
        case Ecosystem::c_cpp: ext = "tar.gz"; break;
        case Ecosystem::csharp: ext = "nupkg"; break;
        case Ecosystem::php: ext = "zip"; break;
        case Ecosystem::java: ext = "jar"; break;
        case Ecosystem::rust: ext = "crate"; break;
    }
    return name + "-" + version + "." + std::string(ext);
}

namespace {

void write_text(const fs::path& file, const std::string& text) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + file.string());
    out << text;
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

// The second artifact of the requests release: exercises filename
// disambiguation (a release carrying both a wheel and an sdist).
constexpr const char* kDualArtifactName = "requests";
constexpr const char* kDualArtifactVersion = "2.28.1";

std::string dual_artifact_filename() {
    return std::string(kDualArtifactName) + "-" + kDualArtifactVersion + ".tar.gz";
}

std::vector<std::uint8_t> dual_artifact_bytes() {
    return archive_bytes(std::string(kDualArtifactName) + "+sdist", kDualArtifactVersion);
}

}  // namespace

void write_project(const fs::path& dir, Ecosystem eco) {
    const auto& deps = deps_for(eco);
    switch (eco) {
        case Ecosystem::python: {
            std::string text = "# demo application dependencies\n";
            for (const auto& d : deps) text += d.name + "==" + d.version + "\n";
            write_text(dir / "requirements.txt", text);
            break;
        }
        case Ecosystem::javascript: {
            json manifest_deps = json::object();
            json lock_deps = json::object();
            for (const auto& d : deps) {
                manifest_deps[d.name] = d.version;
                lock_deps[d.name] = {{"version", d.version}};
                write_json(dir / "node_modules" / d.name / "package.json",
                           {{"name", d.name}, {"version", d.version}});
            }
            write_json(dir / "package.json", {{"name", "fixture-app"},
                                              {"version", "1.0.0"},
                                              {"dependencies", manifest_deps}});
            write_json(dir / "package-lock.json", {{"name", "fixture-app"},
                                                   {"version", "1.0.0"},
                                                   {"lockfileVersion", 1},
                                                   {"dependencies", lock_deps}});
            break;
        }
        case Ecosystem::c_cpp: {
            std::string text = "[requires]\n";
            for (const auto& d : deps) text += d.name + "/" + d.version + "\n";
            text += "\n[generators]\ncmake\n";
            write_text(dir / "conanfile.txt", text);
            break;
        }
        case Ecosystem::csharp: {
            std::string text = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<packages>\n";
            for (const auto& d : deps)
                text += "  <package id=\"" + d.name + "\" version=\"" + d.version +
                        "\" targetFramework=\"net48\" />\n";
            text += "</packages>\n";
            write_text(dir / "packages.config", text);
            break;
        }
        case Ecosystem::php: {
            json require = {{"php", "^8.0"}};
            json packages = json::array();
            for (const auto& d : deps) {
                require[d.name] = d.version;
                packages.push_back({{"name", d.name}, {"version", d.version}});
            }
            write_json(dir / "composer.json",
                       {{"name", "fixture/app"}, {"require", require}});
            write_json(dir / "composer.lock",
                       {{"content-hash", "fixture"}, {"packages", packages}});
            write_json(dir / "vendor/composer/installed.json", {{"packages", packages}});
            break;
        }
        case Ecosystem::java: {
            std::string text =
                "<project>\n  <modelVersion>4.0.0</modelVersion>\n"
                "  <groupId>demo</groupId>\n  <artifactId>fixture-app</artifactId>\n"
                "  <version>1.0.0</version>\n  <dependencies>\n";
            for (const auto& d : deps)
                text += "    <dependency>\n      <groupId>demo</groupId>\n      <artifactId>" +
                        d.name + "</artifactId>\n      <version>" + d.version +
                        "</version>\n    </dependency>\n";
            text += "  </dependencies>\n</project>\n";
            write_text(dir / "pom.xml", text);
            break;
        }
        case Ecosystem::rust: {
            std::string text =
                "[package]\nname = \"fixture-app\"\nversion = \"1.0.0\"\nedition = \"2021\"\n\n"
                "[dependencies]\n";
            for (const auto& d : deps) text += d.name + " = \"" + d.version + "\"\n";
            write_text(dir / "Cargo.toml", text);
            break;
        }
    }
}

std::vector<registry::RegistryRecord> registry_records() {
    std::vector<registry::RegistryRecord> records;
    for (auto eco : kAllEcosystems) {
        for (const auto& d : deps_for(eco)) {
            for (const auto& version : {d.version, d.alt_version}) {
                records.push_back({eco, d.name, version,
                                   archive_filename(eco, d.name, version),
                                   sha256(archive_bytes(d.name, version))});
            }
        }
    }
    records.push_back({Ecosystem::python, kDualArtifactName, kDualArtifactVersion,
                       dual_artifact_filename(), sha256(dual_artifact_bytes())});
    return records;
}

std::vector<verifier::Advisory> advisory_records() {
    return {
        {Ecosystem::c_cpp, "poco-demo", "1.13", "DEMO-2024-0001",
         "buffer overflow in versions prior to 1.13"},
        {Ecosystem::python, "data-kit", "0.9.0", "DEMO-2024-0002",
         "path traversal in versions prior to 0.9.0"},
    };
}

FixtureSet write_all(const fs::path& root) {
    FixtureSet set{root};

    for (auto eco : kAllEcosystems) write_project(set.project_dir(eco), eco);

    fs::create_directories(set.dist_dir());
    auto write_archive = [&](const std::string& filename, const std::vector<std::uint8_t>& bytes) {
        std::ofstream out(set.dist_dir() / filename, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_error, "cannot write " + (set.dist_dir() / filename).string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    };
    for (auto eco : kAllEcosystems)
        for (const auto& d : deps_for(eco))
            for (const auto& version : {d.version, d.alt_version})
                write_archive(archive_filename(eco, d.name, version),
                              archive_bytes(d.name, version));
    write_archive(dual_artifact_filename(), dual_artifact_bytes());

    registry::LocalRegistry reg;
    reg.import_records(registry_records());
    reg.save(set.registry_file());

    verifier::save_advisories(advisory_records(), set.advisories_file());
    return set;
}

fs::path FixtureSet::project_dir(Ecosystem eco) const {
    return root / "projects" / ecosystem_name(eco);
}

KeyPair demo_keypair() {
    auto seed = sha256("demo signing key, fixed for reproducible output");
    return KeyPair::from_seed(seed.bytes());
}

}  // namespace sbomguard::fixtures
