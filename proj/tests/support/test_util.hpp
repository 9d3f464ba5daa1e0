#pragma once
// Shared helpers for the test suite: throwaway directories, canned HTTP
// transports, and a backend wrapper that records every prompt flowing
// through it.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <hypoforge/gateway.hpp>

namespace testutil {

// Creates (and on destruction removes) a unique directory under the system
// temp root.
class TempDir {
  public:
    explicit TempDir(const std::string& hint = "hypoforge-test") {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}() ^
                            static_cast<std::uint64_t>(
                                std::chrono::steady_clock::now().time_since_epoch().count()));
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / (hint + "-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create a temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string sub(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

// Replays a fixed queue of HTTP results and records every request.
class ScriptedTransport : public hypoforge::HttpTransport {
  public:
    struct Sent {
        std::string url;
        std::vector<std::pair<std::string, std::string>> headers;
        std::string body;
    };

    void enqueue(int status, std::string body) { queue_.push_back({status, std::move(body)}); }
    // The next `n` posts throw TransportError (simulating connection drops)
    // before the queued results start being served.
    void fail_next(int n) { failures_ = n; }

    hypoforge::HttpResult post(const std::string& url,
                               const std::vector<std::pair<std::string, std::string>>& headers,
                               const std::string& body) override {
        sent.push_back({url, headers, body});
        if (failures_ > 0) {
            --failures_;
            throw hypoforge::TransportError("connection refused");
        }
        if (queue_.empty()) throw hypoforge::TransportError("scripted transport queue empty");
        hypoforge::HttpResult r = queue_.front();
        queue_.erase(queue_.begin());
        return r;
    }

    std::vector<Sent> sent;

  private:
    std::vector<hypoforge::HttpResult> queue_;
    int failures_ = 0;
};

// Forwards to an inner backend while keeping a copy of every request, so
// tests can scan exactly what reached the model.
class InspectingBackend : public hypoforge::ChatBackend {
  public:
    explicit InspectingBackend(hypoforge::ChatBackend& inner) : inner_(inner) {}

    hypoforge::ChatResponse complete(const hypoforge::ChatRequest& request) override {
        seen.push_back(request);
        return inner_.complete(request);
    }

    std::vector<hypoforge::ChatRequest> seen;

  private:
    hypoforge::ChatBackend& inner_;
};

}  // namespace testutil
