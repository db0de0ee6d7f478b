#include "agentrag/providers/grade_parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

#include <nlohmann/json.hpp>

namespace agentrag::providers {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<BinaryGrade> token_grade(std::string_view token) {
  const auto t = lower(trim(token));
  if (t == "yes") return BinaryGrade::yes;
  if (t == "no") return BinaryGrade::no;
  return std::nullopt;
}

// ```lang\n...\n``` or `...`
std::optional<std::string_view> unfence(std::string_view s) {
  if (s.size() >= 6 && s.substr(0, 3) == "```" && s.substr(s.size() - 3) == "```") {
    s = s.substr(3, s.size() - 6);
    auto newline = s.find('\n');
    if (newline != std::string_view::npos) {
      auto tag = s.substr(0, newline);
      bool is_tag = std::all_of(tag.begin(), tag.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ' ';
      });
      if (is_tag) s = s.substr(newline + 1);
    }
    return trim(s);
  }
  if (s.size() >= 2 && s.front() == '`' && s.back() == '`') return trim(s.substr(1, s.size() - 2));
  return std::nullopt;
}

std::optional<BinaryGrade> json_grade(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) return std::nullopt;
  std::optional<BinaryGrade> result;
  for (const char* key : {"score", "binary_score"}) {
    auto it = doc.find(key);
    if (it == doc.end()) continue;
    if (!it->is_string()) return std::nullopt;
    auto grade = token_grade(it->get<std::string>());
    if (!grade || (result && *result != *grade)) return std::nullopt;
    result = grade;
  }
  return result;
}

std::optional<BinaryGrade> repr_grade(std::string_view text) {
  static const std::regex kRepr(
      R"(^(?:[A-Za-z_][A-Za-z0-9_]*\(\s*)?(?:binary_score|score)\s*[=:]\s*(['"]?)(yes|no)\1\s*\)?$)",
      std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, kRepr)) return std::nullopt;
  // Parenthesis balance: either both the Name( prefix and ) suffix or neither.
  const bool opens = text.find('(') != std::string_view::npos;
  const bool closes = !text.empty() && text.back() == ')';
  if (opens != closes) return std::nullopt;
  return token_grade(m[2].str());
}

std::optional<BinaryGrade> bare_grade(std::string_view text) {
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') &&
      text.back() == text.front())
    text = text.substr(1, text.size() - 2);
  return token_grade(text);
}

}  // namespace

BinaryGrade parse_binary_grade(std::string_view raw) {
  std::string_view text = trim(raw);
  if (auto inner = unfence(text)) text = *inner;

  std::optional<BinaryGrade> grade;
  if (!text.empty() && text.front() == '{')
    grade = json_grade(text);
  else if (text.find('=') != std::string_view::npos || text.find(':') != std::string_view::npos)
    grade = repr_grade(text);
  else
    grade = bare_grade(text);

  if (!grade) throw MalformedGrade(std::string(raw));
  return *grade;
}

std::string grade_to_json(BinaryGrade grade, std::string_view key) {
  return nlohmann::json{{std::string(key), std::string(to_string(grade))}}.dump();
}

}  // namespace agentrag::providers
