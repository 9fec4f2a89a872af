// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "sbomguard/registry.hpp"

namespace sbomguard::registry {

/// Client for package-index JSON endpoints: GET <base>/{name}/{version}/json
/// returning a release document. Times out and retries once; transport
/// failures surface as provider_unavailable, never as not_found.
class HttpRegistryProvider : public ReferenceProvider {
public:
    HttpRegistryProvider(std::string base_url, Ecosystem eco, int timeout_ms = 2000);
    ~HttpRegistryProvider() override;

    LookupResult lookup(Ecosystem eco, const std::string& name, const std::string& version,
                        const std::optional<std::string>& filename = std::nullopt) const override;

private:
    std::string base_url_;
    Ecosystem default_eco_;
    int timeout_ms_;
};

/// In-process HTTP stub replaying a LocalRegistry as release documents, for
/// provider-substitutability tests.
class RegistryHttpServer {
public:
    explicit RegistryHttpServer(LocalRegistry data);
    ~RegistryHttpServer();

    RegistryHttpServer(const RegistryHttpServer&) = delete;
    RegistryHttpServer& operator=(const RegistryHttpServer&) = delete;

    /// Binds 127.0.0.1 on an ephemeral port and serves on a background thread.
    void start();
    void stop();
    int port() const noexcept { return port_; }
    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace sbomguard::registry
