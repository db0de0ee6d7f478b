#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "agentrag/providers/env.hpp"
#include "agentrag/providers/interfaces.hpp"

namespace agentrag::providers {

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

struct HttpOptions {
  std::chrono::milliseconds timeout{60'000};
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
  // Replaced in tests to observe backoff without waiting.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// POSTs JSON with a bearer token, retrying retryable failures with
/// exponential backoff. Thread-safe; concurrent requests are capped at
/// HttpOptions::max_in_flight.
class JsonHttpClient {
 public:
  /// `base_url` is scheme://host[:port][/path]; request paths are appended.
  JsonHttpClient(std::string base_url, std::string api_key, HttpOptions options = {});
  ~JsonHttpClient();
  JsonHttpClient(const JsonHttpClient&) = delete;
  JsonHttpClient& operator=(const JsonHttpClient&) = delete;

  nlohmann::json post(const std::string& path, const nlohmann::json& body);

  /// Total HTTP attempts made, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 private:
  nlohmann::json post_once(const std::string& path, const std::string& body);

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::size_t> attempts_{0};
};

/// Chat-completions endpoint: POST {base}/chat/completions.
class LiveChatModel : public ChatModel {
 public:
  LiveChatModel(std::string api_base, std::string api_key, HttpOptions options = {});

  std::string complete(const ChatRequest& request) override;
  const JsonHttpClient& http() const { return http_; }

 private:
  JsonHttpClient http_;
};

/// Embeddings endpoint: POST {base}/embeddings.
class LiveEmbedder : public Embedder {
 public:
  LiveEmbedder(std::string api_base, std::string api_key, std::string model,
               HttpOptions options = {});

  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  const JsonHttpClient& http() const { return http_; }

 private:
  JsonHttpClient http_;
  std::string model_;
  std::mutex dim_mutex_;
  std::optional<std::size_t> dim_;
};

/// Search endpoint: POST {query, max_results, search_depth} to the base URL
/// itself, reading {results:[{url,title,content}]}.
class LiveWebSearch : public WebSearchProvider {
 public:
  LiveWebSearch(std::string url, std::string api_key, HttpOptions options = {},
                std::string search_depth = "advanced", std::optional<int> max_tokens = std::nullopt);

  std::vector<SearchResult> search(std::string_view query, int max_results) override;
  const JsonHttpClient& http() const { return http_; }

 private:
  JsonHttpClient http_;
  std::string search_depth_;
  std::optional<int> max_tokens_;
};

}  // namespace agentrag::providers
