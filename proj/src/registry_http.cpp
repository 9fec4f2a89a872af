// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/registry_http.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sbomguard/errors.hpp"

namespace sbomguard::registry {

using nlohmann::json;

namespace {

struct ParsedUrl {
    std::string host_port;  // scheme://host:port
    std::string path_prefix;
};

ParsedUrl split_base_url(const std::string& base) {
    auto scheme_end = base.find("://");
    std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_begin = base.find('/', host_begin);
    if (path_begin == std::string::npos) return {base, ""};
    auto prefix = base.substr(path_begin);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base.substr(0, path_begin), prefix};
}

}  // namespace

HttpRegistryProvider::HttpRegistryProvider(std::string base_url, Ecosystem eco, int timeout_ms)
    : base_url_(std::move(base_url)), default_eco_(eco), timeout_ms_(timeout_ms) {}

HttpRegistryProvider::~HttpRegistryProvider() = default;

LookupResult HttpRegistryProvider::lookup(Ecosystem eco, const std::string& name,
                                          const std::string& version,
                                          const std::optional<std::string>& filename) const {
    auto url = split_base_url(base_url_);
    httplib::Client client(url.host_port);
    client.set_connection_timeout(0, timeout_ms_ * 1000);
    client.set_read_timeout(0, timeout_ms_ * 1000);

    auto path = url.path_prefix + "/" + name + "/" + version + "/json";

    httplib::Result res;
    for (int attempt = 0; attempt < 2; ++attempt) {  // one retry on transport failure
        res = client.Get(path);
        if (res) break;
    }
    if (!res)
        return {LookupStatus::provider_unavailable, std::nullopt,
                base_url_ + ": " + httplib::to_string(res.error())};
    if (res->status == 404)
        return {LookupStatus::not_found, std::nullopt, name + "@" + version};
    if (res->status != 200)
        return {LookupStatus::provider_unavailable, std::nullopt,
                base_url_ + ": HTTP " + std::to_string(res->status)};

    try {
        std::span<const std::uint8_t> body(
            reinterpret_cast<const std::uint8_t*>(res->body.data()), res->body.size());
        return LookupResult::found_record(
            parse_index_release_json(body, filename, eco, name, version));
    } catch (const Error& e) {
        if (e.code() == Errc::filename_not_in_release)
            return {filename ? LookupStatus::not_found : LookupStatus::ambiguous_artifact,
                    std::nullopt, e.what()};
        return {LookupStatus::provider_unavailable, std::nullopt, e.what()};
    }
}

struct RegistryHttpServer::Impl {
    LocalRegistry data;
    httplib::Server server;
    std::thread worker;
};

RegistryHttpServer::RegistryHttpServer(LocalRegistry data) : impl_(std::make_unique<Impl>()) {
    impl_->data = std::move(data);
}

RegistryHttpServer::~RegistryHttpServer() { stop(); }

void RegistryHttpServer::start() {
    auto& srv = impl_->server;
    srv.Get(R"(/([^/]+)/([^/]+)/json)",
            [this](const httplib::Request& req, httplib::Response& res) {
                const auto& name = req.matches[1];
                const auto& version = req.matches[2];
                json urls = json::array();
                for (const auto& r : impl_->data.records()) {
                    if (r.name != name || r.version != version) continue;
                    urls.push_back({{"filename", r.artifact_filename},
                                    {"digests", {{"sha256", r.artifact_hash.hex()}}}});
                }
                if (urls.empty()) {
                    res.status = 404;
                    return;
                }
                res.set_content(json{{"urls", urls}}.dump(), "application/json");
            });

    port_ = srv.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) raise(Errc::io_error, "cannot bind stub registry server");
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    srv.wait_until_ready();
}

void RegistryHttpServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

std::string RegistryHttpServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

}  // namespace sbomguard::registry
