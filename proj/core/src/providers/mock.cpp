#include "agentrag/providers/mock.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "agentrag/providers/grade_parser.hpp"
#include "agentrag/providers/prompt_names.hpp"

namespace agentrag::providers {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

std::string trim(std::string_view s) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return std::string(s);
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords{
      "about", "above",  "after",  "again",  "also",  "because", "been",  "before", "being",
      "below", "between", "both",  "could",  "does",  "doing",   "down",  "during", "each",
      "from",  "further", "have",  "having", "here",  "into",    "itself", "just",  "more",
      "most",  "once",   "only",   "other",  "over",  "same",    "should", "some",  "such",
      "than",  "that",   "their",  "theirs", "them",  "then",    "there", "these",  "they",
      "this",  "those",  "through", "under", "until", "very",    "were",  "what",   "when",
      "where", "which",  "while",  "whom",   "will",  "with",    "would", "your",   "yours"};
  return kWords;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ seed;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void normalize(std::vector<double>& v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0) return;
  for (double& x : v) x /= norm;
}

const std::string& var(const PromptOrigin& origin, const std::string& name) {
  static const std::string kEmpty;
  auto it = origin.vars.find(name);
  return it == origin.vars.end() ? kEmpty : it->second;
}

std::string extractive_answer(const std::string& question, const std::string& context) {
  if (trim(context).empty()) return std::string(prompt_names::kNoInformation);
  std::vector<std::string> picked;
  for (auto& sentence : split_sentences(context)) {
    if (picked.size() == 3) break;
    if (!shares_content_word(sentence, question)) continue;
    if (std::find(picked.begin(), picked.end(), sentence) != picked.end()) continue;
    picked.push_back(std::move(sentence));
  }
  if (picked.empty()) return std::string(prompt_names::kNoInformation);
  std::string answer;
  for (auto& sentence : picked) {
    if (!answer.empty()) answer += ' ';
    answer += sentence;
    const char last = sentence.back();
    if (last != '.' && last != '!' && last != '?') answer += '.';
  }
  return answer;
}

bool grounded(const std::string& generation, const std::string& documents) {
  const auto doc_words = content_words(documents);
  for (const auto& sentence : split_sentences(generation)) {
    const auto words = content_words(sentence);
    if (words.empty()) continue;
    const bool hit = std::any_of(words.begin(), words.end(),
                                 [&](const std::string& w) { return doc_words.count(w) > 0; });
    if (!hit) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_token_byte(static_cast<unsigned char>(c))) {
      current += ascii_lower(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::set<std::string> content_words(std::string_view text) {
  std::set<std::string> words;
  for (auto& token : tokenize(text))
    if (token.size() >= 4 && !stopwords().count(token)) words.insert(std::move(token));
  return words;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& token : tokenize(text))
    if (token.size() >= 4 && !stopwords().count(token)) out.push_back(std::move(token));
  return out;
}

bool shares_content_word(std::string_view a, std::string_view b) {
  const auto wa = content_words(a);
  const auto wb = content_words(b);
  return std::any_of(wa.begin(), wa.end(), [&](const std::string& w) { return wb.count(w) > 0; });
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    auto t = trim(current);
    if (!t.empty()) out.push_back(std::move(t));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current += c;
    const bool terminal = c == '.' || c == '!' || c == '?';
    const bool boundary = i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n' ||
                          text[i + 1] == '\t' || text[i + 1] == '\r';
    if (terminal && boundary) flush();
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// MockEmbedder

Embedding MockEmbedder::embed_text(std::string_view text) const {
  auto tokens = content_tokens(text);
  if (tokens.empty()) tokens = tokenize(text);
  if (tokens.empty()) tokens.emplace_back();

  std::vector<double> sum(kDim, 0.0);
  std::vector<double> token_vec(kDim);
  for (const auto& token : tokens) {
    std::uint64_t state = fnv1a(token, seed_);
    for (auto& x : token_vec) {
      // 53 random bits -> [-1, 1)
      x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
    normalize(token_vec);
    for (std::size_t i = 0; i < kDim; ++i) sum[i] += token_vec[i];
  }
  normalize(sum);
  return Embedding{std::move(sum)};
}

std::vector<Embedding> MockEmbedder::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw std::invalid_argument("embed needs at least one text");
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(embed_text(text));
  return out;
}

// ---------------------------------------------------------------------------
// MockChat

std::vector<ScriptRule> MockChat::default_script() {
  return {ScriptRule{"capital of South Korea", "The capital of South Korea is Seoul.",
                     std::string(prompt_names::kAnswer)}};
}

std::string MockChat::complete(const ChatRequest& request) {
  request.validate();
  ++calls_;

  std::string text;
  for (const auto& message : request.messages) text += message.content + "\n";
  const std::string haystack = lower(text);
  const std::string name = request.origin ? request.origin->template_name : std::string();

  for (const auto& rule : rules_) {
    if (rule.template_name && *rule.template_name != name) continue;
    if (haystack.find(lower(rule.pattern)) != std::string::npos) return rule.response;
  }

  if (!request.origin) return "I do not know.";
  const auto& origin = *request.origin;

  if (name == prompt_names::kGradeDocument) {
    const bool relevant = shares_content_word(var(origin, "question"), var(origin, "document"));
    return grade_to_json(relevant ? BinaryGrade::yes : BinaryGrade::no, "binary_score");
  }
  if (name == prompt_names::kGradeUsefulness) {
    const bool useful = shares_content_word(var(origin, "question"), var(origin, "generation"));
    return grade_to_json(useful ? BinaryGrade::yes : BinaryGrade::no);
  }
  if (name == prompt_names::kGradeHallucination) {
    const bool ok = grounded(var(origin, "generation"), var(origin, "documents"));
    return grade_to_json(ok ? BinaryGrade::no : BinaryGrade::yes);
  }
  if (name == prompt_names::kRewriteQuestion) return "Rewritten: " + trim(var(origin, "question"));
  if (name == prompt_names::kAnswer)
    return extractive_answer(var(origin, "question"), var(origin, "context"));
  return "I do not know.";
}

// ---------------------------------------------------------------------------
// MockWebSearch

std::vector<SearchFixture> MockWebSearch::default_fixtures() {
  return {
      {{"seoul", "capital", "south", "korea"},
       {"https://encyclopedia.example.org/wiki/Seoul", "Seoul",
        "Seoul is the capital of South Korea and the country's largest city. The Seoul Capital "
        "Area is home to about half of the population of South Korea."}},
      {{"bts", "kpop", "korea", "seoul"},
       {"https://news.example.org/entertainment/bts-10th-anniversary",
        "BTS marks 10th anniversary in Seoul",
        "K-pop band BTS celebrated the 10th anniversary of its debut with a festival in Seoul, "
        "South Korea, where the group is based."}},
      {{"gwacheon", "gyeonggi", "korea"},
       {"https://travel.example.org/korea/gwacheon", "Gwacheon",
        "Gwacheon is a city in Gyeonggi Province, South Korea, bordering the southern edge of "
        "Seoul."}},
      {{"paris", "france", "capital"},
       {"https://encyclopedia.example.org/wiki/Paris", "Paris",
        "Paris is the capital and most populous city of France."}},
      {{"tokyo", "japan", "capital"},
       {"https://encyclopedia.example.org/wiki/Tokyo", "Tokyo", "Tokyo is the capital of Japan."}},
  };
}

std::vector<SearchFixture> MockWebSearch::load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open search fixture file: " + path.string());
  const auto doc = nlohmann::json::parse(in);
  std::vector<SearchFixture> fixtures;
  for (const auto& entry : doc) {
    SearchFixture fixture;
    for (const auto& kw : entry.at("keywords")) fixture.keywords.push_back(lower(kw.get<std::string>()));
    fixture.result.url = entry.at("url").get<std::string>();
    if (entry.contains("title")) fixture.result.title = entry.at("title").get<std::string>();
    fixture.result.snippet = entry.at("content").get<std::string>();
    if (fixture.result.snippet.empty())
      throw std::runtime_error("search fixture for " + fixture.result.url + " has empty content");
    fixtures.push_back(std::move(fixture));
  }
  return fixtures;
}

std::vector<SearchResult> MockWebSearch::search(std::string_view query, int max_results) {
  if (trim(query).empty()) throw std::invalid_argument("search query must be non-empty");
  if (max_results < 1) throw std::invalid_argument("max_results must be positive");
  ++calls_;

  const auto tokens = tokenize(query);
  const std::set<std::string> query_tokens(tokens.begin(), tokens.end());
  std::vector<std::pair<std::size_t, const SearchFixture*>> hits;
  for (const auto& fixture : fixtures_) {
    const auto n = static_cast<std::size_t>(std::count_if(
        fixture.keywords.begin(), fixture.keywords.end(),
        [&](const std::string& kw) { return query_tokens.count(kw) > 0; }));
    if (n > 0) hits.emplace_back(n, &fixture);
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<SearchResult> results;
  for (const auto& [score, fixture] : hits) {
    if (results.size() == static_cast<std::size_t>(max_results)) break;
    results.push_back(fixture->result);
  }
  return results;
}

}  // namespace agentrag::providers
