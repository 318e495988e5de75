#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agec/prompt.hpp"

namespace agec {

// Minimal chat-completion contract: messages in, text out. Any HTTP backend
// or an offline mock satisfies it; transport problems raise provider_error.
class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string complete(const PromptRequest& request) = 0;
};

// Scripted provider for tests and offline runs: replies are consumed in
// order, the last one repeating once the script runs out.
class MockProvider : public Provider {
public:
    explicit MockProvider(std::vector<std::string> replies);
    static MockProvider from_file(const std::filesystem::path& transcript_json);

    std::string complete(const PromptRequest& request) override;

    std::size_t calls() const { return calls_; }

private:
    std::vector<std::string> replies_;
    std::size_t calls_ = 0;
};

struct ProviderConfig {
    std::string endpoint;     // e.g. https://host/v1/chat/completions, or mock:FILE
    std::string model;
    std::string api_key_env;  // environment variable holding the credential
    DecodingParams decoding;
    unsigned max_in_flight = 1;
    unsigned rpm = 60;

    static ProviderConfig from_json_text(const std::string& json_text);
};

// Blocking budget guard: at most max_in_flight concurrent calls and rpm
// request starts per minute.
class RateLimiter {
public:
    RateLimiter(unsigned max_in_flight, unsigned rpm);
    void acquire();
    void release();

private:
    unsigned max_in_flight_;
    unsigned rpm_;
    unsigned in_flight_ = 0;
    std::deque<std::chrono::steady_clock::time_point> starts_;
    std::mutex mutex_;
    std::condition_variable cv_;
};

// OpenAI-style chat completions over HTTP. Retries 429/5xx with bounded
// exponential backoff. Also honors the rate limiter it is given.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig config);
    std::string complete(const PromptRequest& request) override;

private:
    ProviderConfig config_;
    std::unique_ptr<RateLimiter> limiter_;
};

// Builds a provider from config; mock:FILE endpoints give a MockProvider.
std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

struct RetryPolicy {
    int max_retries = 2;  // extra attempts after an unparseable response
    std::chrono::milliseconds backoff{200};
};

// Sends the built prompt, parses the tagged response, and retries on
// unparseable output; after the retries are spent, the provider_error
// carries the raw response text. Never fabricates a correction. When
// raw_out is given it receives the successful raw response.
Sentence correct_with_provider(const Sentence& source,
                               const std::function<PromptRequest(const Sentence&)>& builder,
                               Provider& provider, const RetryPolicy& policy = {},
                               std::string* raw_out = nullptr);

// Raw response cache keyed by (template_version, input hash) so batch runs
// can resume without repeating calls.
class TranscriptCache {
public:
    explicit TranscriptCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& template_version,
                                   const std::string& input) const;
    void put(const std::string& template_version, const std::string& input,
             const std::string& response) const;

private:
    std::filesystem::path dir_;
    std::filesystem::path path_for(const std::string& template_version,
                                   const std::string& input) const;
};

}  // namespace agec
