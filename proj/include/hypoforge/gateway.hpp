#pragma once
// Chat-completion access. One interface, three backends:
//  - ScriptedBackend replays fixture files keyed by a digest of the rendered
//    prompts, so offline runs are bit-deterministic and fixtures break loudly
//    whenever a template drifts;
//  - RecordingBackend wraps any backend and writes digest-named fixtures;
//  - LiveBackend speaks the chat-completions HTTP+JSON protocol with retry,
//    backoff and rate limiting.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "digest.hpp"
#include "errors.hpp"
#include "prompts.hpp"
#include "text.hpp"

namespace hypoforge {

struct ChatRequest {
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.3;
    std::optional<int> seed = 42;
    std::optional<int> max_tokens;

    void validate() const {
        if (system_prompt.empty()) throw InputError("system_prompt empty");
        if (user_prompt.empty()) throw InputError("user_prompt empty");
        if (temperature < 0.0 || temperature > 2.0) throw InputError("temperature outside [0,2]");
    }

    std::string digest() const { return prompt_digest(system_prompt, user_prompt); }
};

struct ChatResponse {
    std::string text;
    long tokens_in = 0;
    long tokens_out = 0;
};

// One rendered prompt and the reply it drew, surfaced so callers can record
// the call in a run trace.
struct AgentExchange {
    RenderedPrompt prompt;
    ChatResponse response;
};

class ChatBackend {
  public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

inline ChatResponse complete(ChatBackend& backend, const ChatRequest& request) {
    request.validate();
    return backend.complete(request);
}

// ---------------------------------------------------------------------------
// Scripted fixtures.
// ---------------------------------------------------------------------------

// Replays canned replies addressed by prompt digest. Token counts are
// whitespace word counts - crude, but additive and deterministic, which is
// all the accounting invariants need.
class ScriptedBackend : public ChatBackend {
  public:
    ScriptedBackend() = default;

    // Loads every "<digest>.txt" file in the directory as a fixture.
    explicit ScriptedBackend(const std::string& fixture_dir) {
        namespace fs = std::filesystem;
        if (!fs::is_directory(fixture_dir))
            throw InputError("fixture directory not found: " + fixture_dir);
        for (const auto& entry : fs::directory_iterator(fixture_dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            fixtures_[entry.path().stem().string()] = buf.str();
        }
    }

    void add_fixture(const std::string& digest, const std::string& reply) {
        fixtures_[digest] = reply;
    }

    void add_reply(const std::string& system_prompt, const std::string& user_prompt,
                   const std::string& reply) {
        fixtures_[prompt_digest(system_prompt, user_prompt)] = reply;
    }

    size_t size() const { return fixtures_.size(); }

    ChatResponse complete(const ChatRequest& request) override {
        std::string key = request.digest();
        auto it = fixtures_.find(key);
        if (it == fixtures_.end())
            throw FixtureMissError("no fixture for prompt digest " + key);
        ChatResponse r;
        r.text = it->second;
        r.tokens_in = static_cast<long>(word_count(request.system_prompt) +
                                        word_count(request.user_prompt));
        r.tokens_out = static_cast<long>(word_count(r.text));
        return r;
    }

  private:
    std::map<std::string, std::string> fixtures_;
};

// Wraps a backend and saves each reply as "<digest>.txt" so a live (or
// rule-driven) session can be turned into a scripted fixture set.
class RecordingBackend : public ChatBackend {
  public:
    RecordingBackend(ChatBackend& inner, const std::string& out_dir)
        : inner_(inner), out_dir_(out_dir) {
        std::filesystem::create_directories(out_dir_);
    }

    ChatResponse complete(const ChatRequest& request) override {
        ChatResponse r = inner_.complete(request);
        std::lock_guard lock(mu_);
        std::ofstream out(std::filesystem::path(out_dir_) / (request.digest() + ".txt"),
                          std::ios::binary);
        out << r.text;
        ++recorded_;
        return r;
    }

    int recorded() const { return recorded_; }

  private:
    ChatBackend& inner_;
    std::string out_dir_;
    std::mutex mu_;
    std::atomic<int> recorded_{0};
};

// Picks replies by substring rules on the rendered prompts: the first rule
// whose system and user needles both occur wins. Useful for authoring
// deterministic sessions by hand (the fixture baker drives one of these
// through a RecordingBackend); unmatched prompts fail loudly like a missing
// fixture would.
class RuleBackend : public ChatBackend {
  public:
    struct Rule {
        std::string system_contains;  // empty matches everything
        std::string user_contains;    // empty matches everything
        std::string reply;
    };

    void add_rule(std::string system_contains, std::string user_contains, std::string reply) {
        rules_.push_back({std::move(system_contains), std::move(user_contains), std::move(reply)});
    }

    ChatResponse complete(const ChatRequest& request) override {
        for (const auto& r : rules_) {
            if (request.system_prompt.find(r.system_contains) == std::string::npos) continue;
            if (request.user_prompt.find(r.user_contains) == std::string::npos) continue;
            ChatResponse resp;
            resp.text = r.reply;
            resp.tokens_in = static_cast<long>(word_count(request.system_prompt) +
                                               word_count(request.user_prompt));
            resp.tokens_out = static_cast<long>(word_count(resp.text));
            return resp;
        }
        throw FixtureMissError("no rule matches prompt digest " + request.digest());
    }

  private:
    std::vector<Rule> rules_;  // fixed after setup; lookup is read-only
};

// ---------------------------------------------------------------------------
// Rate limiting and budgets.
// ---------------------------------------------------------------------------

// Token-bucket request limiter shared across concurrent branches. Clock and
// sleep are injectable so tests can verify pacing without real waits.
class RateLimiter {
  public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleep = std::function<void(std::chrono::milliseconds)>;

    explicit RateLimiter(double requests_per_second,
                         Clock clock = [] { return std::chrono::steady_clock::now(); },
                         Sleep sleep = [](std::chrono::milliseconds d) {
                             std::this_thread::sleep_for(d);
                         })
        : interval_ms_(1000.0 / requests_per_second), clock_(std::move(clock)),
          sleep_(std::move(sleep)) {
        if (requests_per_second <= 0) throw InputError("requests_per_second must be positive");
    }

    // Blocks until the next request slot is available.
    void acquire() {
        std::chrono::milliseconds wait{0};
        {
            std::lock_guard lock(mu_);
            auto now = clock_();
            double now_ms =
                std::chrono::duration<double, std::milli>(now.time_since_epoch()).count();
            if (next_free_ms_ < now_ms) next_free_ms_ = now_ms;
            double delay = next_free_ms_ - now_ms;
            next_free_ms_ += interval_ms_;
            wait = std::chrono::milliseconds(static_cast<long>(delay + 0.5));
        }
        if (wait.count() > 0) sleep_(wait);
    }

  private:
    double interval_ms_;
    Clock clock_;
    Sleep sleep_;
    std::mutex mu_;
    double next_free_ms_ = 0;
};

enum class BudgetDecision { Proceed, Halt };

// Unset limit always proceeds; otherwise halt once usage exceeds the limit.
inline BudgetDecision budget_guard(long used_tokens, std::optional<long> limit) {
    if (!limit) return BudgetDecision::Proceed;
    if (*limit <= 0) throw InputError("token limit must be positive");
    return used_tokens > *limit ? BudgetDecision::Halt : BudgetDecision::Proceed;
}

// Additive token accumulator shared by every agent call in a run.
class TokenBudget {
  public:
    explicit TokenBudget(std::optional<long> limit = std::nullopt) : limit_(limit) {}

    void charge(const ChatResponse& r) { used_ += r.tokens_in + r.tokens_out; }
    long used() const { return used_.load(); }
    BudgetDecision decision() const { return budget_guard(used_.load(), limit_); }

  private:
    std::optional<long> limit_;
    std::atomic<long> used_{0};
};

// ---------------------------------------------------------------------------
// Live HTTP backend.
// ---------------------------------------------------------------------------

struct HttpResult {
    int status = 0;
    std::string body;
};

struct RetryPolicy {
    int max_attempts = 4;
    int backoff_ms = 250;  // doubles per retry
};

// Minimal POST transport; the default implementation uses httplib, tests
// inject fakes. Implementations throw TransportError on connection failure.
class HttpTransport {
  public:
    virtual ~HttpTransport() = default;
    virtual HttpResult post(const std::string& url,
                            const std::vector<std::pair<std::string, std::string>>& headers,
                            const std::string& body) = 0;
};

struct LiveBackendConfig {
    std::string url;      // full chat-completions endpoint URL
    std::string api_key;  // sent as a bearer token when nonempty
    std::string model = "default";
    int max_attempts = 4;
    int backoff_ms = 250;  // doubles per retry

    static LiveBackendConfig from_env() {
        LiveBackendConfig c;
        const char* url = std::getenv("HYPOFORGE_LLM_URL");
        if (!url || !*url) throw InputError("HYPOFORGE_LLM_URL not set");
        c.url = url;
        if (const char* key = std::getenv("HYPOFORGE_LLM_KEY")) c.api_key = key;
        if (const char* model = std::getenv("HYPOFORGE_LLM_MODEL")) c.model = model;
        return c;
    }
};

class LiveBackend : public ChatBackend {
  public:
    LiveBackend(LiveBackendConfig config, HttpTransport& transport,
                RateLimiter* limiter = nullptr,
                RateLimiter::Sleep sleep = [](std::chrono::milliseconds d) {
                    std::this_thread::sleep_for(d);
                })
        : config_(std::move(config)), transport_(transport), limiter_(limiter),
          sleep_(std::move(sleep)) {
        if (config_.max_attempts < 1) throw InputError("max_attempts must be >= 1");
    }

    ChatResponse complete(const ChatRequest& request) override {
        nlohmann::json payload = {
            {"model", config_.model},
            {"messages",
             {{{"role", "system"}, {"content", request.system_prompt}},
              {{"role", "user"}, {"content", request.user_prompt}}}},
            {"temperature", request.temperature},
        };
        if (request.seed) payload["seed"] = *request.seed;
        if (request.max_tokens) payload["max_tokens"] = *request.max_tokens;

        std::vector<std::pair<std::string, std::string>> headers = {
            {"Content-Type", "application/json"}};
        if (!config_.api_key.empty())
            headers.emplace_back("Authorization", "Bearer " + config_.api_key);

        std::string body = payload.dump();
        HttpResult result;
        std::string last_error;
        for (int attempt = 1;; ++attempt) {
            if (limiter_) limiter_->acquire();
            bool transient = false;
            try {
                result = transport_.post(config_.url, headers, body);
                if (result.status == 429 || result.status >= 500) {
                    transient = true;
                    last_error = "HTTP " + std::to_string(result.status);
                }
            } catch (const TransportError& e) {
                transient = true;
                last_error = e.what();
            }
            if (!transient) break;
            if (attempt >= config_.max_attempts)
                throw TransportError("chat completion failed after " +
                                     std::to_string(config_.max_attempts) + " attempts: " +
                                     last_error);
            ++total_retries_;
            sleep_(std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
        }

        if (result.status < 200 || result.status >= 300)
            throw TransportError("chat completion rejected with HTTP " +
                                 std::to_string(result.status));
        return parse_reply(request, result.body);
    }

    long total_retries() const { return total_retries_.load(); }

  private:
    ChatResponse parse_reply(const ChatRequest& request, const std::string& body) const {
        nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded()) throw ProtocolError("provider reply is not valid JSON");
        ChatResponse r;
        try {
            r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw ProtocolError("provider reply lacks choices[0].message.content");
        }
        if (j.contains("usage")) {
            const auto& u = j["usage"];
            r.tokens_in = u.value("prompt_tokens", 0L);
            r.tokens_out = u.value("completion_tokens", 0L);
        }
        if (r.tokens_in <= 0)
            r.tokens_in = static_cast<long>(word_count(request.system_prompt) +
                                            word_count(request.user_prompt));
        if (r.tokens_out <= 0) r.tokens_out = static_cast<long>(word_count(r.text));
        return r;
    }

    LiveBackendConfig config_;
    HttpTransport& transport_;
    RateLimiter* limiter_;
    RateLimiter::Sleep sleep_;
    std::atomic<long> total_retries_{0};
};

// POST with retry on transient failures (connection errors, 429, 5xx),
// exponential backoff, and optional rate limiting. Returns the first
// non-transient result; throws TransportError once attempts are exhausted.
inline HttpResult post_with_retry(HttpTransport& transport, const std::string& url,
                                  const std::vector<std::pair<std::string, std::string>>& headers,
                                  const std::string& body, const RetryPolicy& policy = {},
                                  RateLimiter* limiter = nullptr,
                                  RateLimiter::Sleep sleep = [](std::chrono::milliseconds d) {
                                      std::this_thread::sleep_for(d);
                                  }) {
    if (policy.max_attempts < 1) throw InputError("max_attempts must be >= 1");
    std::string last_error;
    for (int attempt = 1;; ++attempt) {
        if (limiter) limiter->acquire();
        try {
            HttpResult r = transport.post(url, headers, body);
            if (r.status != 429 && r.status < 500) return r;
            last_error = "HTTP " + std::to_string(r.status);
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        if (attempt >= policy.max_attempts)
            throw TransportError("request failed after " + std::to_string(policy.max_attempts) +
                                 " attempts: " + last_error);
        sleep(std::chrono::milliseconds(policy.backoff_ms << (attempt - 1)));
    }
}

// Default transport backed by httplib. Split out of LiveBackend so tests can
// drive the retry logic with a fake transport instead of sockets.
class HttplibTransport : public HttpTransport {
  public:
    HttpResult post(const std::string& url,
                    const std::vector<std::pair<std::string, std::string>>& headers,
                    const std::string& body) override;
};

}  // namespace hypoforge

// The httplib implementation lives behind a macro so the (large) header is
// only compiled into binaries that actually talk HTTP.
#ifdef HYPOFORGE_ENABLE_HTTPLIB
#include <httplib.h>
// httplib pulls in <resolv.h>, which leaks an object-like `_res` macro that
// rewrites that identifier in every header compiled after it. Scrub it.
#ifdef _res
#undef _res
#endif

namespace hypoforge {

inline HttpResult HttplibTransport::post(
    const std::string& url, const std::vector<std::pair<std::string, std::string>>& headers,
    const std::string& body) {
    // Split "scheme://authority/path" into client base and request path.
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InputError("endpoint URL lacks scheme: " + url);
    size_t path_start = url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers hdrs;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
        if (k == "Content-Type")
            content_type = v;
        else
            hdrs.emplace(k, v);
    }
    auto res = client.Post(path, hdrs, body, content_type);
    if (!res) throw TransportError("HTTP POST to " + base + " failed: " +
                                   httplib::to_string(res.error()));
    return HttpResult{res->status, res->body};
}

}  // namespace hypoforge
#endif  // HYPOFORGE_ENABLE_HTTPLIB
