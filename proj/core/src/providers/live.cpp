#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "agentrag/providers/live.hpp"

#include <cmath>
#include <semaphore>
#include <thread>

#include <httplib.h>

namespace agentrag::providers {

namespace {

using Kind = ProviderError::Kind;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw std::invalid_argument("base URL needs a scheme: '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

ProviderError from_status(int status, const std::string& body) {
  const std::string detail = "HTTP " + std::to_string(status) + ": " + body.substr(0, 200);
  if (status == 401 || status == 403) return {Kind::auth, detail};
  if (status == 429) return {Kind::rate_limit, detail};
  if (status == 408 || status == 504) return {Kind::timeout, detail};
  if (status >= 500) return {Kind::network, detail};
  return {Kind::malformed_response, detail};
}

}  // namespace

struct JsonHttpClient::Impl {
  SplitUrl url;
  std::string api_key;
  HttpOptions options;
  std::counting_semaphore<1024> in_flight;

  Impl(SplitUrl u, std::string key, HttpOptions opts)
      : url(std::move(u)),
        api_key(std::move(key)),
        options(std::move(opts)),
        in_flight(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, options.max_in_flight))) {}
};

JsonHttpClient::JsonHttpClient(std::string base_url, std::string api_key, HttpOptions options)
    : impl_(std::make_unique<Impl>(split_url(base_url), std::move(api_key), std::move(options))) {
  if (!impl_->options.sleep)
    impl_->options.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

JsonHttpClient::~JsonHttpClient() = default;

nlohmann::json JsonHttpClient::post_once(const std::string& path, const std::string& body) {
  impl_->in_flight.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{impl_->in_flight};
  ++attempts_;

  httplib::Client client(impl_->url.origin);
  const auto timeout = impl_->options.timeout;
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
                                0);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);

  const std::string target = impl_->url.prefix + path;
  auto res = client.Post(target.empty() ? "/" : target, headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const Kind kind = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                          ? Kind::timeout
                          : Kind::network;
    throw ProviderError(kind, impl_->url.origin + target + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) throw from_status(res->status, res->body);

  auto doc = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw ProviderError(Kind::malformed_response, "response body is not JSON");
  return doc;
}

nlohmann::json JsonHttpClient::post(const std::string& path, const nlohmann::json& body) {
  const std::string payload = body.dump();
  const auto& retry = impl_->options.retry;
  for (int attempt = 0;; ++attempt) {
    try {
      return post_once(path, payload);
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt >= retry.max_retries) throw;
      const double factor = std::pow(retry.multiplier, attempt);
      impl_->options.sleep(std::chrono::milliseconds(
          static_cast<long long>(std::llround(retry.initial_backoff.count() * factor))));
    }
  }
}

// ---------------------------------------------------------------------------

LiveChatModel::LiveChatModel(std::string api_base, std::string api_key, HttpOptions options)
    : http_(std::move(api_base), std::move(api_key), std::move(options)) {}

std::string LiveChatModel::complete(const ChatRequest& request) {
  request.validate();
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages)
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  const nlohmann::json body{
      {"model", request.model}, {"messages", messages}, {"temperature", request.temperature}};

  const auto reply = http_.post("/chat/completions", body);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(Kind::malformed_response, std::string("chat reply: ") + e.what());
  }
}

LiveEmbedder::LiveEmbedder(std::string api_base, std::string api_key, std::string model,
                           HttpOptions options)
    : http_(std::move(api_base), std::move(api_key), std::move(options)), model_(std::move(model)) {}

std::vector<Embedding> LiveEmbedder::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw std::invalid_argument("embed needs at least one text");
  const nlohmann::json body{{"model", model_},
                            {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  const auto reply = http_.post("/embeddings", body);

  std::vector<Embedding> out(texts.size());
  try {
    const auto& data = reply.at("data");
    if (data.size() != texts.size())
      throw ProviderError(Kind::malformed_response, "embedding count does not match input count");
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t slot = data[i].contains("index") ? data[i].at("index").get<std::size_t>() : i;
      if (slot >= out.size()) throw ProviderError(Kind::malformed_response, "embedding index out of range");
      out[slot].values = data[i].at("embedding").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(Kind::malformed_response, std::string("embedding reply: ") + e.what());
  }

  std::lock_guard lock(dim_mutex_);
  for (const auto& e : out) {
    if (e.values.empty()) throw ProviderError(Kind::malformed_response, "empty embedding");
    if (!dim_) dim_ = e.dim();
    if (e.dim() != *dim_)
      throw ProviderError(Kind::malformed_response,
                          "embedding dimension changed from " + std::to_string(*dim_) + " to " +
                              std::to_string(e.dim()));
  }
  return out;
}

LiveWebSearch::LiveWebSearch(std::string url, std::string api_key, HttpOptions options,
                             std::string search_depth, std::optional<int> max_tokens)
    : http_(std::move(url), std::move(api_key), std::move(options)),
      search_depth_(std::move(search_depth)),
      max_tokens_(max_tokens) {}

std::vector<SearchResult> LiveWebSearch::search(std::string_view query, int max_results) {
  if (query.empty()) throw std::invalid_argument("search query must be non-empty");
  if (max_results < 1) throw std::invalid_argument("max_results must be positive");
  nlohmann::json body{
      {"query", std::string(query)}, {"max_results", max_results}, {"search_depth", search_depth_}};
  if (max_tokens_) body["max_tokens"] = *max_tokens_;

  const auto reply = http_.post("", body);
  std::vector<SearchResult> results;
  try {
    for (const auto& hit : reply.at("results")) {
      SearchResult r;
      r.url = hit.value("url", "");
      if (hit.contains("title") && hit["title"].is_string()) r.title = hit["title"].get<std::string>();
      r.snippet = hit.value("content", "");
      if (r.snippet.empty()) continue;
      results.push_back(std::move(r));
      if (results.size() == static_cast<std::size_t>(max_results)) break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(Kind::malformed_response, std::string("search reply: ") + e.what());
  }
  return results;
}

}  // namespace agentrag::providers
