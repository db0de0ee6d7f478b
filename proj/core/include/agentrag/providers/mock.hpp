#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agentrag/providers/interfaces.hpp"

// Deterministic offline providers. Their heuristics are test scaffolding for
// running the workflow without network access; they make no claim about how
// a real language model behaves.
namespace agentrag::providers {

/// Lowercased tokens, split on ASCII non-alphanumerics. Bytes >= 0x80 count
/// as token characters so UTF-8 words stay whole. Locale independent.
std::vector<std::string> tokenize(std::string_view text);

/// Tokens of at least four characters that are not common function words.
std::set<std::string> content_words(std::string_view text);
/// The content-word tokens of `text` in order, repeats kept.
std::vector<std::string> content_tokens(std::string_view text);

bool shares_content_word(std::string_view a, std::string_view b);

/// Splits on newlines and on . ! ? followed by whitespace or end of text.
/// Pieces are trimmed; empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Bag-of-words embedder: each content token is hashed (with the seed) into
/// a pseudo-random unit vector; a text embeds to the L2-normalized sum of
/// its token vectors. Text without content words falls back to all of its
/// tokens, and text without tokens maps to the vector of the empty token.
///
/// Unrelated token vectors in 64 dimensions are not orthogonal, so any
/// cosine carries noise of about 1/sqrt(64). kScoreThreshold sits well
/// above that floor while still admitting chunks that share several words
/// with the query.
class MockEmbedder : public Embedder {
 public:
  static constexpr std::size_t kDim = 64;
  static constexpr std::uint64_t kDefaultSeed = 0x243F6A8885A308D3ULL;
  static constexpr double kScoreThreshold = 0.3;

  explicit MockEmbedder(std::uint64_t seed = kDefaultSeed) : seed_(seed) {}

  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  Embedding embed_text(std::string_view text) const;

 private:
  std::uint64_t seed_;
};

/// Substring rule: when `pattern` occurs (ASCII case-insensitive) in the
/// request text, reply with `response`. With `template_name` set the rule
/// only applies to requests rendered from that template.
struct ScriptRule {
  std::string pattern;
  std::string response;
  std::optional<std::string> template_name;
};

/// Scripted rules first, then per-template defaults:
///   grade_document / grade_usefulness: yes iff the two texts share a
///     content word
///   grade_hallucination: no iff every sentence of the generation that has
///     content words shares one with the documents
///   rewrite_question: "Rewritten: <question, trimmed>"
///   answer: the no-information sentinel for empty context, otherwise up to
///     three context sentences sharing a content word with the question
class MockChat : public ChatModel {
 public:
  explicit MockChat(std::vector<ScriptRule> rules = {}) : rules_(std::move(rules)) {}

  /// Rule answering the capital-of-South-Korea question from web snippets.
  static std::vector<ScriptRule> default_script();

  std::string complete(const ChatRequest& request) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::vector<ScriptRule> rules_;
  std::atomic<std::size_t> calls_{0};
};

struct SearchFixture {
  std::vector<std::string> keywords;
  SearchResult result;
};

/// Serves a static fixture table. A fixture matches when any of its
/// keywords is a token of the query; hits are ranked by the number of
/// matching keywords, then by table order.
class MockWebSearch : public WebSearchProvider {
 public:
  MockWebSearch() : MockWebSearch(default_fixtures()) {}
  explicit MockWebSearch(std::vector<SearchFixture> fixtures) : fixtures_(std::move(fixtures)) {}

  static std::vector<SearchFixture> default_fixtures();
  /// JSON array of {keywords, url, title, content}. Throws std::runtime_error.
  static std::vector<SearchFixture> load_fixtures(const std::filesystem::path& path);

  std::vector<SearchResult> search(std::string_view query, int max_results) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::vector<SearchFixture> fixtures_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace agentrag::providers
