#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace agentrag::providers {

/// KEY=VALUE lines; '#' comments, blank lines, an optional `export ` prefix
/// and single or double quotes are understood. Missing file -> empty map.
std::map<std::string, std::string> parse_dotenv(std::string_view text);
std::map<std::string, std::string> load_dotenv(const std::filesystem::path& path);

/// Lookup that prefers the process environment over .env values, the same
/// precedence python-dotenv uses without override.
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::map<std::string, std::string> dotenv) : dotenv_(std::move(dotenv)) {}

  static Environment from_process(const std::filesystem::path& dotenv_path = ".env");

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;

 private:
  std::map<std::string, std::string> dotenv_;
};

/// Connection settings for the live providers.
struct LiveSettings {
  std::string llm_api_base = "https://api.openai.com/v1";
  std::string llm_api_key;
  std::string llm_model = "gpt-4-turbo";
  std::string embed_model = "text-embedding-3-small";
  std::string search_api_base = "https://api.tavily.com/search";
  std::string search_api_key;

  /// Reads LLM_API_BASE, LLM_API_KEY, LLM_MODEL, EMBED_MODEL,
  /// SEARCH_API_BASE, SEARCH_API_KEY.
  static LiveSettings resolve(const Environment& env);
};

}  // namespace agentrag::providers
