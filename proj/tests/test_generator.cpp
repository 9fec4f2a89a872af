// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0
//
// Artifact pinning and the two SBOM generation modes.

#include <doctest.h>

#include <fstream>

#include "sbomguard/fixtures.hpp"
#include "sbomguard/generator.hpp"
#include "sbomguard/manifest.hpp"

#include "support.hpp"

using namespace sbomguard;
using namespace testsupport;

namespace {

struct PinnedFixture {
    TempDir dir;
    fixtures::FixtureSet set;
    manifest::ManifestProject project;
    ArtifactStore store;

    explicit PinnedFixture(Ecosystem eco, const char* tag)
        : dir(tag),
          set(fixtures::write_all(dir.path() / "fx")),
          project(manifest::parse_project(set.project_dir(eco), eco)),
          store([&] {
              DirectoryArtifactSource source(set.dist_dir());
              return pin_artifacts(project, source);
          }()) {}
};

}  // namespace

TEST_CASE("pinned hashes equal an external SHA-256 of the distribution archives") {
    PinnedFixture fx(Ecosystem::python, "pin-oracle");
    REQUIRE(fx.store.entries().size() == fixtures::deps_for(Ecosystem::python).size());
    for (const auto& entry : fx.store.entries()) {
        CAPTURE(entry.filename);
        // Oracle: hash the source archive with the system tool.
        CHECK(entry.sha256.hex() == sha256sum_oracle(fx.set.dist_dir() / entry.filename));
        // The pinned copy holds the same bytes.
        CHECK(entry.sha256.hex() == sha256sum_oracle(fx.store.archive_path(entry)));
    }
}

TEST_CASE("pinning a dependency absent from the source raises ArtifactNotFound") {
    TempDir dir("pin-missing");
    fixtures::write_project(dir.path() / "proj", Ecosystem::python);
    auto project = manifest::parse_project(dir.path() / "proj", Ecosystem::python);
    std::filesystem::create_directories(dir.path() / "empty-dist");
    DirectoryArtifactSource source(dir.path() / "empty-dist");
    expect_error(Errc::artifact_not_found, [&] { pin_artifacts(project, source); });
}

TEST_CASE("store index save and load round trip") {
    PinnedFixture fx(Ecosystem::c_cpp, "store-roundtrip");
    auto reloaded = ArtifactStore::load(fx.store.dir());
    CHECK(reloaded.entries() == fx.store.entries());
}

TEST_CASE("resolve_for prefers exact version and falls back by name when unambiguous") {
    PinnedFixture fx(Ecosystem::c_cpp, "resolve");
    const auto* exact = fx.store.resolve_for("poco-demo", "1.9");
    REQUIRE(exact != nullptr);
    CHECK(exact->version == "1.9");

    // Version tampered in metadata only: the store still holds the 1.9 archive.
    const auto* fallback = fx.store.resolve_for("poco-demo", "1.13");
    REQUIRE(fallback != nullptr);
    CHECK(fallback->version == "1.9");

    CHECK(fx.store.resolve_for("no-such-lib", "1.0") == nullptr);
}

TEST_CASE("naive generation trusts the manifest and records no hashes") {
    PinnedFixture fx(Ecosystem::python, "naive");
    GenerationOptions options;
    options.timestamp_ms = fixtures::kDemoTimestampMs;
    options.serial_number = fixtures::kDemoSerialNumber;
    auto doc = generate_naive(fx.project, options);
    CHECK(doc.tool_mode() == ToolMode::naive);
    CHECK(doc.components().size() == fx.project.deps.size());
    for (const auto& c : doc.components()) {
        CHECK_FALSE(c.artifact_hash.has_value());
        CHECK(c.purl == make_purl(c.ecosystem, c.name, c.version));
    }
}

TEST_CASE("secure generation embeds the pinned archive hash for every component") {
    PinnedFixture fx(Ecosystem::python, "secure");
    auto doc = generate_secure(fx.project, fx.store);
    CHECK(doc.tool_mode() == ToolMode::secure);
    REQUIRE(doc.components().size() == fx.project.deps.size());
    for (const auto& c : doc.components()) {
        CAPTURE(c.name);
        REQUIRE(c.artifact_hash.has_value());
        const auto* entry = fx.store.resolve_for(c.name, c.version);
        REQUIRE(entry != nullptr);
        CHECK(*c.artifact_hash == entry->sha256);
        REQUIRE(c.artifact_filename.has_value());
        CHECK(*c.artifact_filename == entry->filename);
    }
}

TEST_CASE("secure generation re-hashes from disk: mutated archives are refused") {
    PinnedFixture fx(Ecosystem::python, "freshness");
    auto entry = fx.store.entries().front();
    auto path = fx.store.archive_path(entry);

    // Flip one byte of the pinned archive after pinning.
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    char c = 0;
    f.read(&c, 1);
    f.seekp(0);
    c = static_cast<char>(c ^ 0x01);
    f.write(&c, 1);
    f.close();

    expect_error(Errc::store_tampered, [&] { generate_secure(fx.project, fx.store); });
}

TEST_CASE("secure generation refuses deps with no pinned artifact") {
    PinnedFixture fx(Ecosystem::python, "missing-artifact");
    auto entry = fx.store.entries().front();
    std::filesystem::remove(fx.store.archive_path(entry));
    auto store = ArtifactStore::load(fx.store.dir());  // index still lists it
    expect_error(Errc::missing_artifact, [&] { generate_secure(fx.project, store); });
}

TEST_CASE("tampered manifest with untouched store yields the stealthy wrong SBOM") {
    PinnedFixture fx(Ecosystem::c_cpp, "stealthy");
    auto tampered = manifest::tamper_version(fx.project, "poco-demo", "1.13",
                                             manifest::TamperScope::all_locations);

    auto naive = generate_naive(tampered);
    bool saw_tampered = false;
    for (const auto& c : naive.components())
        if (c.name == "poco-demo") {
            saw_tampered = true;
            CHECK(c.version == "1.13");  // the lie, reported as truth
        }
    CHECK(saw_tampered);

    // Secure mode reports the claimed version but carries the real 1.9 hash,
    // which downstream verification must flag.
    auto secure = generate_secure(tampered, fx.store);
    for (const auto& c : secure.components())
        if (c.name == "poco-demo") {
            CHECK(c.version == "1.13");
            REQUIRE(c.artifact_hash.has_value());
            const auto* pinned = fx.store.find("poco-demo", "1.9");
            REQUIRE(pinned != nullptr);
            CHECK(*c.artifact_hash == pinned->sha256);
        }
}

TEST_CASE("empty project produces an SBOM with zero components") {
    TempDir dir("empty-project");
    std::ofstream(dir.path() / "requirements.txt") << "";
    auto project = manifest::parse_project(dir.path(), Ecosystem::python);
    auto doc = generate_naive(project);
    CHECK(doc.components().empty());
}

TEST_CASE("directory source picks deterministically among candidates") {
    TempDir dir("source-det");
    auto dist = dir.path() / "dist";
    std::filesystem::create_directories(dist);
    std::ofstream(dist / "pkg-1.0.whl") << "first";
    std::ofstream(dist / "pkg-1.0.tar.gz") << "second";
    DirectoryArtifactSource source(dist);
    auto a = source.fetch("pkg", "1.0");
    auto b = source.fetch("pkg", "1.0");
    REQUIRE(a.status == ArtifactSource::Status::ok);
    REQUIRE(b.status == ArtifactSource::Status::ok);
    CHECK(a.filename == b.filename);
    CHECK(a.bytes == b.bytes);

    auto missing = source.fetch("ghost", "1.0");
    CHECK(missing.status == ArtifactSource::Status::not_found);
}
