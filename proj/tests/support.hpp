// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>

#include "sbomguard/errors.hpp"

namespace testsupport {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 1000; ++i) {
            auto candidate = base / ("sbomguard-test-" + tag + "-" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir for " + tag);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    operator const std::filesystem::path&() const noexcept { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

/// Run a shell command, capturing combined output and the exit code.
inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + command);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.output.append(buf.data(), n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

/// External SHA-256 oracle: the system `sha256sum` tool, hex digest only.
inline std::string sha256sum_oracle(const std::filesystem::path& file) {
    auto r = run_command("sha256sum " + file.string());
    if (r.exit_code != 0) throw std::runtime_error("sha256sum failed on " + file.string());
    auto space = r.output.find(' ');
    if (space == std::string::npos) throw std::runtime_error("sha256sum output unparseable");
    return r.output.substr(0, space);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline std::string random_name(std::mt19937_64& rng, std::size_t max_len = 24) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789-_";
    std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
    std::uniform_int_distribution<std::size_t> ch_dist(0, sizeof(alphabet) - 2);
    std::string s(len_dist(rng), '\0');
    for (auto& c : s) c = alphabet[ch_dist(rng)];
    return s;
}

/// Expect an Error with a specific code; returns its message for inspection.
template <typename F>
std::string expect_error(sbomguard::Errc code, F&& fn) {
    try {
        fn();
    } catch (const sbomguard::Error& e) {
        if (e.code() != code)
            throw std::runtime_error(std::string("wrong error code: got ") + e.what());
        return e.what();
    }
    throw std::runtime_error("expected an error, none thrown");
}

}  // namespace testsupport
