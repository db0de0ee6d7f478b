#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentrag/chains/prompt.hpp"
#include "agentrag/providers/interfaces.hpp"

namespace agentrag::chains {

/// Joins document texts with a blank line between them.
std::string format_docs(std::span<const std::string> docs);

/// True for the answer prompt's no-information reply, with or without a
/// trailing period. Case-sensitive.
bool is_no_information(std::string_view generation);

template <typename T>
struct ChainResult {
  T output;
  std::string raw;
  double latency_ms = 0;
};

/// Prompt -> chat model -> parser compositions. Stateless apart from the
/// shared provider, so safe to share across threads.
class RagChains {
 public:
  RagChains(std::shared_ptr<providers::ChatModel> chat, PromptCatalog catalog = PromptCatalog::defaults(),
            std::string model = "gpt-4-turbo");

  /// Throws std::invalid_argument on empty inputs, MalformedGrade and
  /// ProviderError from the provider.
  ChainResult<providers::BinaryGrade> grade_document(const std::string& question,
                                                     const std::string& document) const;
  ChainResult<std::string> answer(const std::string& question,
                                  std::span<const std::string> context) const;
  /// Trimmed rewrite; the original question when the model replies blank.
  ChainResult<std::string> rewrite_question(const std::string& question) const;
  /// yes means the generation is not grounded in the documents.
  ChainResult<providers::BinaryGrade> grade_hallucination(const std::string& documents,
                                                          const std::string& generation) const;
  /// yes means the generation addresses the question.
  ChainResult<providers::BinaryGrade> grade_usefulness(const std::string& question,
                                                       const std::string& generation) const;

  const PromptCatalog& catalog() const { return catalog_; }

 private:
  ChainResult<std::string> call(std::string_view template_name, const PromptVars& vars) const;
  ChainResult<providers::BinaryGrade> grade(std::string_view template_name,
                                            const PromptVars& vars) const;

  std::shared_ptr<providers::ChatModel> chat_;
  PromptCatalog catalog_;
  std::string model_;
};

}  // namespace agentrag::chains
