// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/generator.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"

namespace sbomguard {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

ArtifactSource::Result DirectoryArtifactSource::fetch(const std::string& name,
                                                      const std::string& version) const {
    const std::string prefix = name + "-" + version + ".";
    if (!fs::is_directory(root_)) return {Status::not_found, {}, {}};
    std::vector<std::string> candidates;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (!entry.is_regular_file()) continue;
        auto filename = entry.path().filename().string();
        if (filename.rfind(prefix, 0) == 0) candidates.push_back(filename);
    }
    if (candidates.empty()) return {Status::not_found, {}, {}};
    // several artifacts per release are possible; pick deterministically
    std::sort(candidates.begin(), candidates.end());
    std::ifstream in(root_ / candidates.front(), std::ios::binary);
    if (!in) return {Status::unreadable, candidates.front(), {}};
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    return {Status::ok, candidates.front(), std::move(bytes)};
}

ArtifactStore::ArtifactStore(fs::path dir, std::vector<PinEntry> entries)
    : dir_(std::move(dir)), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const PinEntry& a, const PinEntry& b) {
        return std::tie(a.name, a.version) < std::tie(b.name, b.version);
    });
}

ArtifactStore ArtifactStore::load(const fs::path& store_dir) {
    auto index_path = store_dir / kIndexName;
    std::ifstream in(index_path);
    if (!in) raise(Errc::io_error, "no " + std::string(kIndexName) + " in " + store_dir.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        raise(Errc::schema_error, index_path.string() + ": " + e.what());
    }
    if (!j.is_array()) raise(Errc::schema_error, index_path.string() + ": expected an array");
    std::vector<PinEntry> entries;
    for (const auto& item : j) {
        PinEntry e;
        try {
            e.name = item.at("name").get<std::string>();
            e.version = item.at("version").get<std::string>();
            e.filename = item.at("filename").get<std::string>();
            e.sha256 = Hash256::from_hex(item.at("sha256").get<std::string>());
        } catch (const json::exception& ex) {
            raise(Errc::schema_error, index_path.string() + ": " + ex.what());
        }
        entries.push_back(std::move(e));
    }
    return ArtifactStore(store_dir, std::move(entries));
}

void ArtifactStore::save_index() const {
    fs::create_directories(dir_);
    json j = json::array();
    for (const auto& e : entries_)
        j.push_back({{"name", e.name},
                     {"version", e.version},
                     {"filename", e.filename},
                     {"sha256", e.sha256.hex()}});
    std::ofstream out(dir_ / kIndexName, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + (dir_ / kIndexName).string());
    out << j.dump(2) << '\n';
}

const PinEntry* ArtifactStore::find(const std::string& name, const std::string& version) const {
    for (const auto& e : entries_)
        if (e.name == name && e.version == version) return &e;
    return nullptr;
}

const PinEntry* ArtifactStore::resolve_for(const std::string& name,
                                           const std::string& version) const {
    if (const auto* exact = find(name, version)) return exact;
    const PinEntry* only = nullptr;
    for (const auto& e : entries_) {
        if (e.name != name) continue;
        if (only) return nullptr;  // ambiguous: several pinned versions
        only = &e;
    }
    return only;
}

fs::path ArtifactStore::archive_path(const PinEntry& entry) const {
    return dir_ / entry.filename;
}

ArtifactStore pin_artifacts(const manifest::ManifestProject& project,
                            const ArtifactSource& source) {
    auto store_dir = project.root / ArtifactStore::kDirName;
    fs::create_directories(store_dir);

    std::vector<PinEntry> entries;
    for (const auto& dep : project.deps) {
        auto fetched = source.fetch(dep.name, dep.version);
        if (fetched.status == ArtifactSource::Status::not_found)
            raise(Errc::artifact_not_found, dep.name + "@" + dep.version);
        if (fetched.status == ArtifactSource::Status::unreadable)
            raise(Errc::hash_unavailable, dep.name + "@" + dep.version);

        auto archive = store_dir / fetched.filename;
        std::ofstream out(archive, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_error, "cannot write " + archive.string());
        out.write(reinterpret_cast<const char*>(fetched.bytes.data()),
                  static_cast<std::streamsize>(fetched.bytes.size()));
        out.close();

        entries.push_back({dep.name, dep.version, fetched.filename, sha256(fetched.bytes)});
    }

    ArtifactStore store(store_dir, std::move(entries));
    store.save_index();
    return store;
}

namespace {

SbomDocument assemble(std::vector<Component> components, ToolMode mode,
                      const GenerationOptions& options) {
    if (!options.timestamp_ms && !options.serial_number)
        return SbomDocument::create_now(options.tool_name, mode, std::move(components));
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
    auto ts = options.timestamp_ms ? *options.timestamp_ms : static_cast<std::uint64_t>(now);
    auto serial = options.serial_number ? *options.serial_number : random_serial_number();
    return SbomDocument::create(options.tool_name, mode, std::move(components), ts, serial);
}

}  // namespace

SbomDocument generate_naive(const manifest::ManifestProject& project,
                            const GenerationOptions& options) {
    std::vector<Component> components;
    components.reserve(project.deps.size());
    for (const auto& dep : project.deps)
        components.push_back(Component::make(project.ecosystem, dep.name, dep.version));
    return assemble(std::move(components), ToolMode::naive, options);
}

SbomDocument generate_secure(const manifest::ManifestProject& project, const ArtifactStore& store,
                             const GenerationOptions& options) {
    std::vector<Component> components;
    components.reserve(project.deps.size());
    for (const auto& dep : project.deps) {
        const PinEntry* pin = store.resolve_for(dep.name, dep.version);
        if (!pin) raise(Errc::missing_artifact, dep.name + "@" + dep.version);

        // Freshness: hash the bytes present on disk now, never the pin record.
        auto archive = store.archive_path(*pin);
        if (!std::filesystem::exists(archive))
            raise(Errc::missing_artifact, pin->name + " pinned but gone: " + archive.string());
        auto disk_hash = sha256_file(archive);
        if (disk_hash != pin->sha256)
            raise(Errc::store_tampered, pin->name + " (" + pin->filename + ")");

        components.push_back(
            Component::make(project.ecosystem, dep.name, dep.version, disk_hash, pin->filename));
    }
    return assemble(std::move(components), ToolMode::secure, options);
}

}  // namespace sbomguard
