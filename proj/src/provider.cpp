#include "agec/provider.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "agec/errors.hpp"

namespace agec {

using nlohmann::json;

MockProvider::MockProvider(std::vector<std::string> replies) : replies_(std::move(replies)) {
    if (replies_.empty()) throw contract_error("mock provider needs at least one reply");
}

MockProvider MockProvider::from_file(const std::filesystem::path& transcript_json) {
    std::ifstream in(transcript_json);
    if (!in) throw parse_error("cannot open transcript file: " + transcript_json.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw parse_error("bad transcript JSON: " + std::string(e.what()));
    }
    std::vector<std::string> replies;
    if (!doc.is_array()) throw parse_error("transcript must be a JSON array of replies");
    for (const auto& r : doc) replies.push_back(r.get<std::string>());
    return MockProvider(std::move(replies));
}

std::string MockProvider::complete(const PromptRequest&) {
    const std::size_t i = std::min(calls_, replies_.size() - 1);
    ++calls_;
    return replies_[i];
}

ProviderConfig ProviderConfig::from_json_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw parse_error("bad provider config JSON: " + std::string(e.what()));
    }
    ProviderConfig cfg;
    cfg.endpoint = doc.value("endpoint", "");
    cfg.model = doc.value("model", "");
    cfg.api_key_env = doc.value("api_key_env", "");
    cfg.max_in_flight = doc.value("max_in_flight", 1u);
    cfg.rpm = doc.value("rpm", 60u);
    if (doc.contains("decoding")) {
        const auto& d = doc.at("decoding");
        cfg.decoding.temperature = d.value("temperature", 0.0);
        cfg.decoding.top_p = d.value("top_p", 1.0);
        if (d.contains("top_k")) cfg.decoding.top_k = d.at("top_k").get<unsigned>();
        if (d.contains("num_beams")) cfg.decoding.num_beams = d.at("num_beams").get<unsigned>();
    }
    if (cfg.endpoint.empty()) throw parse_error("provider config needs an endpoint");
    return cfg;
}

RateLimiter::RateLimiter(unsigned max_in_flight, unsigned rpm)
    : max_in_flight_(max_in_flight ? max_in_flight : 1), rpm_(rpm ? rpm : 1) {}

void RateLimiter::acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    const auto window = std::chrono::minutes(1);
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        while (!starts_.empty() && now - starts_.front() >= window) starts_.pop_front();
        if (in_flight_ < max_in_flight_ && starts_.size() < rpm_) {
            ++in_flight_;
            starts_.push_back(now);
            return;
        }
        if (in_flight_ >= max_in_flight_) {
            cv_.wait(lock);
        } else {
            cv_.wait_until(lock, starts_.front() + window);
        }
    }
}

void RateLimiter::release() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        --in_flight_;
    }
    cv_.notify_all();
}

namespace {

struct SplitUrl {
    std::string host;  // scheme://authority
    std::string path;
};

SplitUrl split_url(const std::string& endpoint) {
    const std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw contract_error("endpoint must include a scheme: '" + endpoint + "'");
    const std::size_t path = endpoint.find('/', scheme + 3);
    if (path == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path), endpoint.substr(path)};
}

}  // namespace

HttpProvider::HttpProvider(ProviderConfig config)
    : config_(std::move(config)),
      limiter_(std::make_unique<RateLimiter>(config_.max_in_flight, config_.rpm)) {}

std::string HttpProvider::complete(const PromptRequest& request) {
    json body;
    body["model"] = config_.model;
    body["temperature"] = request.decoding.temperature;
    body["top_p"] = request.decoding.top_p;
    if (request.decoding.top_k) body["top_k"] = *request.decoding.top_k;
    // num_beams is provider-dependent and chat endpoints ignore it; not sent.
    auto& messages = body["messages"] = json::array();
    for (const Message& m : request.messages)
        messages.push_back({{"role", m.role}, {"content", m.text}});

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (!key)
            throw provider_error("credential variable " + config_.api_key_env + " is not set");
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const SplitUrl url = split_url(config_.endpoint);
    httplib::Client client(url.host);
    client.set_read_timeout(120, 0);

    auto backoff = std::chrono::milliseconds(500);
    std::string last_failure;
    for (int attempt = 0; attempt < 4; ++attempt) {
        limiter_->acquire();
        auto result = client.Post(url.path, headers, body.dump(), "application/json");
        limiter_->release();
        if (!result) {
            last_failure = "transport failure: " + httplib::to_string(result.error());
        } else if (result->status == 429 || result->status >= 500) {
            last_failure = "HTTP " + std::to_string(result->status);
        } else if (result->status != 200) {
            throw provider_error("HTTP " + std::to_string(result->status), result->body);
        } else {
            try {
                json doc = json::parse(result->body);
                return doc.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const json::exception& e) {
                throw provider_error("malformed completion payload: " + std::string(e.what()),
                                     result->body);
            }
        }
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
    }
    throw provider_error("provider unavailable after retries (" + last_failure + ")");
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
    if (config.endpoint.rfind("mock:", 0) == 0)
        return std::make_unique<MockProvider>(
            MockProvider::from_file(config.endpoint.substr(5)));
    return std::make_unique<HttpProvider>(config);
}

Sentence correct_with_provider(const Sentence& source,
                               const std::function<PromptRequest(const Sentence&)>& builder,
                               Provider& provider, const RetryPolicy& policy,
                               std::string* raw_out) {
    const PromptRequest request = builder(source);
    std::string last_raw;
    auto backoff = policy.backoff;
    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        const std::string raw = provider.complete(request);
        try {
            Sentence parsed = parse_response(raw);
            if (raw_out) *raw_out = raw;
            return parsed;
        } catch (const provider_error&) {
            last_raw = raw;
        }
        if (attempt < policy.max_retries) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    throw provider_error("no parseable <output> block after " +
                             std::to_string(policy.max_retries + 1) + " attempts",
                         last_raw);
}

TranscriptCache::TranscriptCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

namespace {

// FNV-1a, printed as 16 hex digits; collisions are harmless (stale cache
// entries just get overwritten).
std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::filesystem::path TranscriptCache::path_for(const std::string& template_version,
                                                const std::string& input) const {
    return dir_ / (template_version + "_" + fnv1a_hex(input) + ".txt");
}

std::optional<std::string> TranscriptCache::get(const std::string& template_version,
                                                const std::string& input) const {
    std::ifstream in(path_for(template_version, input), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void TranscriptCache::put(const std::string& template_version, const std::string& input,
                          const std::string& response) const {
    std::ofstream out(path_for(template_version, input), std::ios::binary);
    out << response;
}

}  // namespace agec
