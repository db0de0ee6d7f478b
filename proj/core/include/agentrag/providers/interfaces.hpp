#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentrag/providers/types.hpp"

namespace agentrag::providers {

// Implementations must be callable from several threads at once.

class ChatModel {
 public:
  virtual ~ChatModel() = default;
  /// Returns the assistant message content. Throws ProviderError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// One vector per input, all of the same dimension. Throws ProviderError;
  /// an empty input list is a precondition violation (std::invalid_argument).
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;

  Embedding embed_one(const std::string& text) { return embed(std::span(&text, 1)).front(); }
};

class WebSearchProvider {
 public:
  virtual ~WebSearchProvider() = default;
  /// Up to max_results hits; an empty list is a valid outcome.
  virtual std::vector<SearchResult> search(std::string_view query, int max_results) = 0;
};

}  // namespace agentrag::providers
