#include "tdt/assist.hpp"

#include "tdt/project_io.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace tdt::assist {

using nlohmann::json;

namespace {

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("HashFailed", "SHA-256 computation failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

struct Url {
    std::string origin; // scheme://host[:port]
    std::string path;
};

Url split_url(const std::string& url)
{
    auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw Error("InvalidConfig", "endpoint '" + url + "' has no scheme");
    auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos)
        return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

} // namespace

json ChatRequest::to_json() const
{
    json msgs = json::array();
    for (const auto& m : messages)
        msgs.push_back(json{{"role", m.role}, {"content", m.content}});
    return json{{"model", model}, {"temperature", temperature}, {"messages", msgs}};
}

std::string ChatRequest::hash() const
{
    return sha256_hex(to_json().dump());
}

ProviderError::ProviderError(int status, std::string body)
    : Error("ProviderError", "provider returned " + std::to_string(status) + ": " + body), status_(status),
      body_(std::move(body))
{
}

ProviderMode provider_mode_from_string(std::string_view s)
{
    if (s == "live")
        return ProviderMode::Live;
    if (s == "replay")
        return ProviderMode::Replay;
    if (s == "record")
        return ProviderMode::Record;
    throw Error("InvalidEnum", "unknown provider mode '" + std::string(s) + "'");
}

std::string_view to_string(ProviderMode m)
{
    switch (m) {
    case ProviderMode::Live: return "live";
    case ProviderMode::Replay: return "replay";
    case ProviderMode::Record: return "record";
    }
    return "replay";
}

void ProviderConfig::validate() const
{
    if (mode != ProviderMode::Live && fixture.empty())
        throw Error("InvalidConfig", "replay and record modes need a fixture file");
    if (mode == ProviderMode::Replay && !std::filesystem::exists(fixture))
        throw Error("InvalidConfig", "replay fixture not found: " + fixture.string());
}

std::vector<FixtureEntry> load_fixture(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error("InvalidFixture", path.string() + ": " + e.what());
    }
    if (!j.is_array())
        throw Error("InvalidFixture", path.string() + ": expected a JSON array");
    std::vector<FixtureEntry> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("request_hash") || !e.contains("response_text"))
            throw Error("InvalidFixture", path.string() + ": entries need request_hash and response_text");
        out.push_back(FixtureEntry{e.at("request_hash").get<std::string>(), e.at("response_text").get<std::string>()});
    }
    return out;
}

void save_fixture(const std::vector<FixtureEntry>& entries, const std::filesystem::path& path)
{
    json j = json::array();
    for (const auto& e : entries)
        j.push_back(json{{"request_hash", e.request_hash}, {"response_text", e.response_text}});
    write_file_atomic(path, j.dump(2) + "\n");
}

ReplayProvider::ReplayProvider(const std::vector<FixtureEntry>& entries)
{
    for (const auto& e : entries)
        responses_[e.request_hash] = e.response_text;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& fixture) : ReplayProvider(load_fixture(fixture)) {}

std::string ReplayProvider::complete(const ChatRequest& request)
{
    auto h = request.hash();
    auto it = responses_.find(h);
    if (it == responses_.end())
        throw ProviderError(404, "no recorded response for request " + h);
    return it->second;
}

RecordProvider::RecordProvider(std::unique_ptr<Provider> inner, std::filesystem::path fixture)
    : inner_(std::move(inner)), fixture_(std::move(fixture))
{
}

std::string RecordProvider::complete(const ChatRequest& request)
{
    std::string text = inner_->complete(request);
    std::lock_guard lock(mutex_);
    std::vector<FixtureEntry> entries;
    if (std::filesystem::exists(fixture_))
        entries = load_fixture(fixture_);
    auto h = request.hash();
    auto it = std::find_if(entries.begin(), entries.end(), [&](const FixtureEntry& e) { return e.request_hash == h; });
    if (it != entries.end())
        it->response_text = text;
    else
        entries.push_back(FixtureEntry{h, text});
    save_fixture(entries, fixture_);
    return text;
}

LiveProvider::LiveProvider(ProviderConfig config) : config_(std::move(config))
{
    config_.validate();
}

std::string LiveProvider::complete(const ChatRequest& request)
{
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw ProviderError(401, "environment variable " + config_.api_key_env + " is not set");
    auto url = split_url(config_.endpoint);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
    auto res = client.Post(url.path, headers, request.to_json().dump(), "application/json");
    if (!res)
        throw ProviderError(0, "request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError(res->status, res->body);
    try {
        auto j = json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(res->status, std::string("unexpected response body: ") + e.what());
    }
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config)
{
    config.validate();
    switch (config.mode) {
    case ProviderMode::Live: return std::make_unique<LiveProvider>(config);
    case ProviderMode::Replay: return std::make_unique<ReplayProvider>(config.fixture);
    case ProviderMode::Record:
        return std::make_unique<RecordProvider>(std::make_unique<LiveProvider>(config), config.fixture);
    }
    throw Error("InvalidConfig", "unknown provider mode");
}

} // namespace tdt::assist
