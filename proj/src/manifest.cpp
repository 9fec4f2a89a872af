// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"
#include "sbomguard/version.hpp"

namespace sbomguard::manifest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// --- small scanning utilities ---------------------------------------------

struct Span {
    std::size_t pos = std::string::npos;
    std::size_t len = 0;
    bool valid() const { return pos != std::string::npos; }
};

std::size_t skip_ws(const std::string& text, std::size_t i) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i;
}

// i at the opening quote of a JSON string; returns index just past the
// closing quote, or npos when unterminated.
std::size_t skip_json_string(const std::string& text, std::size_t i) {
    ++i;
    while (i < text.size()) {
        if (text[i] == '\\') {
            i += 2;
            continue;
        }
        if (text[i] == '"') return i + 1;
        ++i;
    }
    return std::string::npos;
}

// Span of the string *content* (between quotes) starting at the opening quote.
Span json_string_content(const std::string& text, std::size_t quote) {
    auto end = skip_json_string(text, quote);
    if (end == std::string::npos) return {};
    return {quote + 1, end - quote - 2};
}

// i at '{' or '['; returns index just past the matching close bracket.
std::size_t skip_json_container(const std::string& text, std::size_t i) {
    char open = text[i];
    char close = open == '{' ? '}' : ']';
    int depth = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '"') {
            i = skip_json_string(text, i);
            if (i == std::string::npos) return std::string::npos;
            continue;
        }
        if (c == open) ++depth;
        if (c == close && --depth == 0) return i + 1;
        ++i;
    }
    return std::string::npos;
}

// Find `"key":` at the top level of the object region [begin, end) and return
// the index of the first character of its value. npos when absent.
std::size_t find_key_value(const std::string& text, std::size_t begin, std::size_t end,
                           const std::string& key) {
    std::size_t i = begin;
    int depth = 0;
    while (i < end) {
        char c = text[i];
        if (c == '"') {
            auto content = json_string_content(text, i);
            if (!content.valid()) return std::string::npos;
            std::size_t after = content.pos + content.len + 1;
            if (depth == 1 && text.compare(content.pos, content.len, key) == 0 &&
                content.len == key.size()) {
                after = skip_ws(text, after);
                if (after < end && text[after] == ':') return skip_ws(text, after + 1);
            }
            i = after;
            continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') --depth;
        ++i;
    }
    return std::string::npos;
}

// Value span of `"key": "..."` inside the object region starting at obj_begin.
Span string_value_span(const std::string& text, std::size_t obj_begin, std::size_t obj_end,
                       const std::string& key) {
    auto v = find_key_value(text, obj_begin, obj_end, key);
    if (v == std::string::npos || v >= text.size() || text[v] != '"') return {};
    return json_string_content(text, v);
}

struct Region {
    std::size_t begin = std::string::npos;
    std::size_t end = 0;
    bool valid() const { return begin != std::string::npos; }
};

// Region of the container value for `"key"` at the top level of the object
// spanning [begin, end).
Region container_region(const std::string& text, std::size_t begin, std::size_t end,
                        const std::string& key) {
    auto v = find_key_value(text, begin, end, key);
    if (v == std::string::npos || v >= text.size() || (text[v] != '{' && text[v] != '['))
        return {};
    auto close = skip_json_container(text, v);
    if (close == std::string::npos) return {};
    return {v, close};
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Line {
    std::size_t offset;
    std::size_t number;  // 1-based
    std::string text;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t pos = 0, number = 1;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::size_t end = nl == std::string::npos ? text.size() : nl;
        lines.push_back({pos, number++, text.substr(pos, end - pos)});
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return lines;
}

void require_version(const std::string& version, const std::string& file, std::size_t line) {
    if (!looks_like_version(version))
        raise(Errc::parse_error,
              file + ":" + std::to_string(line) + ": bad version \"" + version + "\"");
}

// --- python: requirements.txt ----------------------------------------------

std::vector<DependencySpec> parse_requirements(const std::string& file, const std::string& text) {
    std::vector<DependencySpec> deps;
    for (const auto& line : split_lines(text)) {
        auto body = trim(line.text);
        if (body.empty() || body[0] == '#') continue;
        auto eq = body.find("==");
        if (eq == std::string::npos)
            raise(Errc::parse_error,
                  file + ":" + std::to_string(line.number) + ": expected name==version");
        auto name = trim(body.substr(0, eq));
        auto version = trim(body.substr(eq + 2));
        if (name.empty())
            raise(Errc::parse_error, file + ":" + std::to_string(line.number) + ": empty name");
        require_version(version, file, line.number);
        deps.push_back({name, version, file});
    }
    return deps;
}

std::vector<Span> requirements_spans(const std::string& text, const std::string& name) {
    std::vector<Span> spans;
    for (const auto& line : split_lines(text)) {
        auto body = trim(line.text);
        if (body.empty() || body[0] == '#') continue;
        auto eq = body.find("==");
        if (eq == std::string::npos) continue;
        if (trim(body.substr(0, eq)) != name) continue;
        // version span: after '==' plus surrounding whitespace, to end of line
        std::size_t rel = line.text.find("==");
        std::size_t vstart = rel + 2;
        while (vstart < line.text.size() &&
               std::isspace(static_cast<unsigned char>(line.text[vstart])))
            ++vstart;
        std::size_t vend = line.text.size();
        while (vend > vstart && std::isspace(static_cast<unsigned char>(line.text[vend - 1])))
            --vend;
        spans.push_back({line.offset + vstart, vend - vstart});
    }
    return spans;
}

// --- javascript: package.json / package-lock.json / node_modules ------------

std::vector<DependencySpec> parse_package_json(const std::string& file, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, file + ": " + e.what());
    }
    std::vector<DependencySpec> deps;
    if (j.contains("dependencies")) {
        for (const auto& [name, ver] : j["dependencies"].items()) {
            if (!ver.is_string()) raise(Errc::parse_error, file + ": version of " + name);
            require_version(ver.get<std::string>(), file, 0);
            deps.push_back({name, ver.get<std::string>(), file});
        }
    }
    return deps;
}

std::vector<DependencySpec> parse_package_lock(const std::string& file, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, file + ": " + e.what());
    }
    std::vector<DependencySpec> deps;
    if (j.contains("dependencies")) {
        for (const auto& [name, entry] : j["dependencies"].items()) {
            if (!entry.is_object() || !entry.contains("version") || !entry["version"].is_string())
                raise(Errc::parse_error, file + ": lock entry for " + name + " has no version");
            auto ver = entry["version"].get<std::string>();
            require_version(ver, file, 0);
            deps.push_back({name, ver, file});
        }
    }
    return deps;
}

// `"<name>": "<version>"` inside the top-level "dependencies"/"require" object.
std::vector<Span> dep_map_spans(const std::string& text, const std::string& map_key,
                                const std::string& name) {
    auto region = container_region(text, 0, text.size(), map_key);
    if (!region.valid()) return {};
    auto span = string_value_span(text, region.begin, region.end, name);
    if (!span.valid()) return {};
    return {span};
}

// `"<name>": {"version": "..."}` inside the top-level "dependencies" object.
std::vector<Span> lock_entry_spans(const std::string& text, const std::string& name) {
    auto deps = container_region(text, 0, text.size(), "dependencies");
    if (!deps.valid()) return {};
    auto entry = container_region(text, deps.begin, deps.end, name);
    if (!entry.valid()) return {};
    auto span = string_value_span(text, entry.begin, entry.end, "version");
    if (!span.valid()) return {};
    return {span};
}

// top-level "version" of a node_modules/<name>/package.json image
std::vector<Span> module_manifest_spans(const std::string& text) {
    auto span = string_value_span(text, 0, text.size(), "version");
    if (!span.valid()) return {};
    return {span};
}

// --- c/c++: conanfile.txt / conanfile.py ------------------------------------

std::vector<DependencySpec> parse_conanfile_txt(const std::string& file, const std::string& text) {
    std::vector<DependencySpec> deps;
    std::string section;
    for (const auto& line : split_lines(text)) {
        auto body = trim(line.text);
        if (body.empty() || body[0] == '#') continue;
        if (body.front() == '[' && body.back() == ']') {
            section = body.substr(1, body.size() - 2);
            continue;
        }
        if (section != "requires") continue;
        auto slash = body.find('/');
        if (slash == std::string::npos)
            raise(Errc::parse_error,
                  file + ":" + std::to_string(line.number) + ": expected name/version");
        auto name = body.substr(0, slash);
        auto version = body.substr(slash + 1);
        require_version(version, file, line.number);
        deps.push_back({name, version, file});
    }
    return deps;
}

std::vector<Span> conanfile_txt_spans(const std::string& text, const std::string& name) {
    std::vector<Span> spans;
    std::string section;
    for (const auto& line : split_lines(text)) {
        auto body = trim(line.text);
        if (body.empty() || body[0] == '#') continue;
        if (body.front() == '[' && body.back() == ']') {
            section = body.substr(1, body.size() - 2);
            continue;
        }
        if (section != "requires") continue;
        auto slash = body.find('/');
        if (slash == std::string::npos || body.substr(0, slash) != name) continue;
        std::size_t rel = line.text.find('/');
        std::size_t vstart = rel + 1;
        std::size_t vend = line.text.size();
        while (vend > vstart && std::isspace(static_cast<unsigned char>(line.text[vend - 1])))
            --vend;
        spans.push_back({line.offset + vstart, vend - vstart});
    }
    return spans;
}

// Quoted "name/version" references on lines mentioning `requires`.
const std::regex kConanPyRef("[\"']([A-Za-z0-9_.+-]+)/([0-9][A-Za-z0-9_.+-]*)[\"']");

std::vector<DependencySpec> parse_conanfile_py(const std::string& file, const std::string& text) {
    std::vector<DependencySpec> deps;
    for (const auto& line : split_lines(text)) {
        if (line.text.find("requires") == std::string::npos) continue;
        auto begin = std::sregex_iterator(line.text.begin(), line.text.end(), kConanPyRef);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            auto version = (*it)[2].str();
            require_version(version, file, line.number);
            deps.push_back({(*it)[1].str(), version, file});
        }
    }
    return deps;
}

std::vector<Span> conanfile_py_spans(const std::string& text, const std::string& name) {
    std::vector<Span> spans;
    for (const auto& line : split_lines(text)) {
        if (line.text.find("requires") == std::string::npos) continue;
        auto begin = std::sregex_iterator(line.text.begin(), line.text.end(), kConanPyRef);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            if ((*it)[1].str() != name) continue;
            spans.push_back({line.offset + static_cast<std::size_t>(it->position(2)),
                             static_cast<std::size_t>(it->length(2))});
        }
    }
    return spans;
}

// --- c#: packages.config -----------------------------------------------------

struct XmlTag {
    std::size_t offset;
    std::string text;
};

std::vector<XmlTag> package_tags(const std::string& text) {
    static const std::regex kTag("<package\\b[^>]*/?>");
    std::vector<XmlTag> tags;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kTag);
         it != std::sregex_iterator(); ++it)
        tags.push_back({static_cast<std::size_t>(it->position(0)), it->str()});
    return tags;
}

Span xml_attr_span(const std::string& tag, const std::string& attr) {
    std::regex re(attr + "\\s*=\\s*\"([^\"]*)\"");
    std::smatch m;
    if (!std::regex_search(tag, m, re)) return {};
    return {static_cast<std::size_t>(m.position(1)), static_cast<std::size_t>(m.length(1))};
}

std::vector<DependencySpec> parse_packages_config(const std::string& file,
                                                  const std::string& text) {
    std::vector<DependencySpec> deps;
    for (const auto& tag : package_tags(text)) {
        auto id = xml_attr_span(tag.text, "id");
        auto ver = xml_attr_span(tag.text, "version");
        if (!id.valid() || !ver.valid())
            raise(Errc::parse_error, file + ": <package> needs id and version attributes");
        auto version = tag.text.substr(ver.pos, ver.len);
        require_version(version, file, 0);
        deps.push_back({tag.text.substr(id.pos, id.len), version, file});
    }
    return deps;
}

std::vector<Span> packages_config_spans(const std::string& text, const std::string& name) {
    std::vector<Span> spans;
    for (const auto& tag : package_tags(text)) {
        auto id = xml_attr_span(tag.text, "id");
        if (!id.valid() || tag.text.substr(id.pos, id.len) != name) continue;
        auto ver = xml_attr_span(tag.text, "version");
        if (ver.valid()) spans.push_back({tag.offset + ver.pos, ver.len});
    }
    return spans;
}

// --- php: composer.json / composer.lock / installed.json ---------------------

std::vector<DependencySpec> parse_composer_json(const std::string& file, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, file + ": " + e.what());
    }
    std::vector<DependencySpec> deps;
    if (j.contains("require")) {
        for (const auto& [name, ver] : j["require"].items()) {
            if (name == "php") continue;  // platform requirement, not a package
            if (!ver.is_string()) raise(Errc::parse_error, file + ": version of " + name);
            require_version(ver.get<std::string>(), file, 0);
            deps.push_back({name, ver.get<std::string>(), file});
        }
    }
    return deps;
}

std::vector<DependencySpec> parse_composer_packages(const std::string& file,
                                                    const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, file + ": " + e.what());
    }
    std::vector<DependencySpec> deps;
    for (const auto& pkg : j.value("packages", json::array())) {
        if (!pkg.is_object() || !pkg.contains("name") || !pkg.contains("version"))
            raise(Errc::parse_error, file + ": package entry needs name and version");
        auto version = pkg["version"].get<std::string>();
        require_version(version, file, 0);
        deps.push_back({pkg["name"].get<std::string>(), version, file});
    }
    return deps;
}

// version of the entry with matching "name" inside the top-level "packages" array
std::vector<Span> composer_packages_spans(const std::string& text, const std::string& name) {
    auto packages = container_region(text, 0, text.size(), "packages");
    if (!packages.valid()) return {};
    std::vector<Span> spans;
    std::size_t i = skip_ws(text, packages.begin + 1);
    while (i < packages.end && text[i] == '{') {
        auto close = skip_json_container(text, i);
        if (close == std::string::npos) break;
        auto entry_name = string_value_span(text, i, close, "name");
        if (entry_name.valid() && text.compare(entry_name.pos, entry_name.len, name) == 0 &&
            entry_name.len == name.size()) {
            auto ver = string_value_span(text, i, close, "version");
            if (ver.valid()) spans.push_back(ver);
        }
        i = skip_ws(text, close);
        if (i < packages.end && text[i] == ',') i = skip_ws(text, i + 1);
    }
    return spans;
}

// --- java: pom.xml (parse-only) ----------------------------------------------

std::vector<DependencySpec> parse_pom(const std::string& file, const std::string& text) {
    static const std::regex kDep("<dependency>([\\s\\S]*?)</dependency>");
    static const std::regex kArtifact("<artifactId>\\s*([^<\\s]+)\\s*</artifactId>");
    static const std::regex kVersion("<version>\\s*([^<\\s]+)\\s*</version>");
    std::vector<DependencySpec> deps;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kDep);
         it != std::sregex_iterator(); ++it) {
        auto block = (*it)[1].str();
        std::smatch artifact, version;
        if (!std::regex_search(block, artifact, kArtifact) ||
            !std::regex_search(block, version, kVersion))
            raise(Errc::parse_error, file + ": dependency needs artifactId and version");
        require_version(version[1].str(), file, 0);
        deps.push_back({artifact[1].str(), version[1].str(), file});
    }
    return deps;
}

// --- rust: Cargo.toml (parse-only) ---------------------------------------------

std::vector<DependencySpec> parse_cargo_toml(const std::string& file, const std::string& text) {
    static const std::regex kEntry("^\\s*([A-Za-z0-9_-]+)\\s*=\\s*\"([^\"]+)\"\\s*$");
    std::vector<DependencySpec> deps;
    std::string section;
    for (const auto& line : split_lines(text)) {
        auto body = trim(line.text);
        if (body.empty() || body[0] == '#') continue;
        if (body.front() == '[' && body.back() == ']') {
            section = body.substr(1, body.size() - 2);
            continue;
        }
        if (section != "dependencies") continue;
        std::smatch m;
        if (!std::regex_match(line.text, m, kEntry))
            raise(Errc::parse_error,
                  file + ":" + std::to_string(line.number) + ": expected name = \"version\"");
        require_version(m[2].str(), file, line.number);
        deps.push_back({m[1].str(), m[2].str(), file});
    }
    return deps;
}

// --- project assembly ---------------------------------------------------------

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + p.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

const std::string* project_file(const ManifestProject& p, const std::string& rel) {
    for (const auto& [path, bytes] : p.manifest_files)
        if (path == rel) return &bytes;
    return nullptr;
}

void require_file(const fs::path& root, const std::string& rel) {
    if (!fs::exists(root / rel)) raise(Errc::missing_manifest, rel);
}

void load_file(ManifestProject& p, const std::string& rel) {
    p.manifest_files.emplace_back(rel, read_file(p.root / rel));
}

void dedupe_keep_order(std::vector<DependencySpec>& deps) {
    std::vector<DependencySpec> out;
    for (auto& d : deps) {
        bool seen = std::any_of(out.begin(), out.end(), [&](const DependencySpec& o) {
            return o.name == d.name && o.version == d.version;
        });
        if (!seen) out.push_back(std::move(d));
    }
    deps = std::move(out);
}

}  // namespace

bool ManifestProject::has_dep(const std::string& name) const {
    return std::any_of(deps.begin(), deps.end(),
                       [&](const DependencySpec& d) { return d.name == name; });
}

const std::string* ManifestProject::file_bytes(const std::string& rel_path) const {
    return project_file(*this, rel_path);
}

std::optional<Ecosystem> detect_ecosystem(const fs::path& root) {
    if (fs::exists(root / "requirements.txt")) return Ecosystem::python;
    if (fs::exists(root / "package.json")) return Ecosystem::javascript;
    if (fs::exists(root / "conanfile.txt") || fs::exists(root / "conanfile.py"))
        return Ecosystem::c_cpp;
    if (fs::exists(root / "packages.config")) return Ecosystem::csharp;
    if (fs::exists(root / "composer.json")) return Ecosystem::php;
    if (fs::exists(root / "pom.xml")) return Ecosystem::java;
    if (fs::exists(root / "Cargo.toml")) return Ecosystem::rust;
    return std::nullopt;
}

ManifestProject parse_project(const fs::path& root, Ecosystem eco) {
    if (!fs::exists(root)) raise(Errc::io_error, "project root " + root.string() + " not found");

    ManifestProject p;
    p.root = root;
    p.ecosystem = eco;

    switch (eco) {
        case Ecosystem::python: {
            require_file(root, "requirements.txt");
            load_file(p, "requirements.txt");
            p.deps = parse_requirements("requirements.txt", *p.file_bytes("requirements.txt"));
            break;
        }
        case Ecosystem::javascript: {
            require_file(root, "package.json");
            require_file(root, "package-lock.json");
            load_file(p, "package.json");
            load_file(p, "package-lock.json");
            auto manifest_deps = parse_package_json("package.json", *p.file_bytes("package.json"));
            auto lock_deps = parse_package_lock("package-lock.json",
                                                *p.file_bytes("package-lock.json"));
            for (const auto& m : manifest_deps) {
                for (const auto& l : lock_deps) {
                    if (l.name == m.name && l.version != m.version)
                        p.warnings.push_back("version disagreement for " + m.name +
                                             ": package.json has " + m.version +
                                             ", package-lock.json has " + l.version);
                }
            }
            p.deps = manifest_deps;
            p.deps.insert(p.deps.end(), lock_deps.begin(), lock_deps.end());
            dedupe_keep_order(p.deps);
            // every dependency ships its installed manifest
            for (const auto& d : p.deps) {
                std::string rel = "node_modules/" + d.name + "/package.json";
                if (!project_file(p, rel)) {
                    require_file(root, rel);
                    load_file(p, rel);
                }
            }
            break;
        }
        case Ecosystem::c_cpp: {
            bool txt = fs::exists(root / "conanfile.txt");
            bool py = fs::exists(root / "conanfile.py");
            if (!txt && !py) raise(Errc::missing_manifest, "conanfile.txt or conanfile.py");
            if (txt) {
                load_file(p, "conanfile.txt");
                auto d = parse_conanfile_txt("conanfile.txt", *p.file_bytes("conanfile.txt"));
                p.deps.insert(p.deps.end(), d.begin(), d.end());
            }
            if (py) {
                load_file(p, "conanfile.py");
                auto d = parse_conanfile_py("conanfile.py", *p.file_bytes("conanfile.py"));
                p.deps.insert(p.deps.end(), d.begin(), d.end());
            }
            dedupe_keep_order(p.deps);
            break;
        }
        case Ecosystem::csharp: {
            require_file(root, "packages.config");
            load_file(p, "packages.config");
            p.deps = parse_packages_config("packages.config", *p.file_bytes("packages.config"));
            break;
        }
        case Ecosystem::php: {
            for (const char* rel :
                 {"composer.json", "composer.lock", "vendor/composer/installed.json"}) {
                require_file(root, rel);
                load_file(p, rel);
            }
            p.deps = parse_composer_json("composer.json", *p.file_bytes("composer.json"));
            auto lock = parse_composer_packages("composer.lock", *p.file_bytes("composer.lock"));
            for (const auto& m : p.deps)
                for (const auto& l : lock)
                    if (l.name == m.name && l.version != m.version)
                        p.warnings.push_back("version disagreement for " + m.name +
                                             ": composer.json has " + m.version +
                                             ", composer.lock has " + l.version);
            p.deps.insert(p.deps.end(), lock.begin(), lock.end());
            dedupe_keep_order(p.deps);
            break;
        }
        case Ecosystem::java: {
            require_file(root, "pom.xml");
            load_file(p, "pom.xml");
            p.deps = parse_pom("pom.xml", *p.file_bytes("pom.xml"));
            break;
        }
        case Ecosystem::rust: {
            require_file(root, "Cargo.toml");
            load_file(p, "Cargo.toml");
            p.deps = parse_cargo_toml("Cargo.toml", *p.file_bytes("Cargo.toml"));
            break;
        }
    }

    if (fs::exists(root / ".pinned")) p.artifact_store_dir = root / ".pinned";
    return p;
}

const std::vector<TamperabilityEntry>& tamperability_table() {
    static const std::vector<TamperabilityEntry> kTable{
        {"Python", Ecosystem::python, true, {"requirements.txt"}},
        {"C", Ecosystem::c_cpp, true, {"conanfile.txt", "conanfile.py"}},
        {"C++", Ecosystem::c_cpp, true, {"conanfile.txt", "conanfile.py"}},
        {"C#", Ecosystem::csharp, true, {"packages.config"}},
        {"Java", Ecosystem::java, false, {}},
        {"JavaScript",
         Ecosystem::javascript,
         true,
         {"package.json", "package-lock.json", "node_modules/*/package.json"}},
        {"PHP",
         Ecosystem::php,
         true,
         {"composer.json", "composer.lock", "vendor/composer/installed.json"}},
        {"Rust", Ecosystem::rust, false, {}},
    };
    return kTable;
}

bool ecosystem_tamperable(Ecosystem eco) {
    for (const auto& entry : tamperability_table())
        if (entry.ecosystem == eco) return entry.tamperable;
    return false;
}

std::vector<std::string> tamper_targets(const ManifestProject& project, const std::string& name,
                                        TamperScope scope) {
    std::vector<std::string> targets;
    auto add_if_present = [&](const std::string& rel) {
        if (project.file_bytes(rel)) targets.push_back(rel);
    };
    switch (project.ecosystem) {
        case Ecosystem::python:
            add_if_present("requirements.txt");
            break;
        case Ecosystem::javascript:
            add_if_present("package.json");
            if (scope != TamperScope::manifest_only) add_if_present("package-lock.json");
            if (scope == TamperScope::all_locations)
                add_if_present("node_modules/" + name + "/package.json");
            break;
        case Ecosystem::c_cpp:
            add_if_present("conanfile.txt");
            add_if_present("conanfile.py");
            break;
        case Ecosystem::csharp:
            add_if_present("packages.config");
            break;
        case Ecosystem::php:
            add_if_present("composer.json");
            if (scope != TamperScope::manifest_only) add_if_present("composer.lock");
            if (scope == TamperScope::all_locations)
                add_if_present("vendor/composer/installed.json");
            break;
        case Ecosystem::java:
        case Ecosystem::rust:
            break;
    }
    return targets;
}

std::optional<std::string> tamper_file_bytes(Ecosystem eco, const std::string& rel_path,
                                             const std::string& bytes, const std::string& name,
                                             const std::string& new_version) {
    std::vector<Span> spans;
    switch (eco) {
        case Ecosystem::python:
            spans = requirements_spans(bytes, name);
            break;
        case Ecosystem::javascript:
            if (rel_path == "package.json")
                spans = dep_map_spans(bytes, "dependencies", name);
            else if (rel_path == "package-lock.json")
                spans = lock_entry_spans(bytes, name);
            else
                spans = module_manifest_spans(bytes);
            break;
        case Ecosystem::c_cpp:
            spans = rel_path == "conanfile.py" ? conanfile_py_spans(bytes, name)
                                               : conanfile_txt_spans(bytes, name);
            break;
        case Ecosystem::csharp:
            spans = packages_config_spans(bytes, name);
            break;
        case Ecosystem::php:
            spans = rel_path == "composer.json" ? dep_map_spans(bytes, "require", name)
                                                : composer_packages_spans(bytes, name);
            break;
        case Ecosystem::java:
        case Ecosystem::rust:
            return std::nullopt;
    }
    if (spans.empty()) return std::nullopt;

    // splice back-to-front so earlier offsets stay valid
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.pos > b.pos; });
    std::string out = bytes;
    for (const auto& s : spans) out.replace(s.pos, s.len, new_version);
    return out;
}

ManifestProject tamper_version(const ManifestProject& project, const std::string& name,
                               const std::string& new_version, TamperScope scope) {
    if (!ecosystem_tamperable(project.ecosystem))
        raise(Errc::unsupported_ecosystem,
              ecosystem_name(project.ecosystem) + " projects resist version tampering");
    if (!project.has_dep(name)) raise(Errc::unknown_dependency, name);
    if (!looks_like_version(new_version))
        raise(Errc::version_parse_error,
              "replacement version \"" + new_version + "\" is not a version");

    for (const auto& rel : tamper_targets(project, name, scope)) {
        const std::string* bytes = project.file_bytes(rel);
        auto rewritten = tamper_file_bytes(project.ecosystem, rel, *bytes, name, new_version);
        if (rewritten) write_file(project.root / rel, *rewritten);
    }
    return parse_project(project.root, project.ecosystem);
}

}  // namespace sbomguard::manifest
