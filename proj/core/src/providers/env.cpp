#include "agentrag/providers/env.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace agentrag::providers {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::map<std::string, std::string> parse_dotenv(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream lines{std::string(text)};
  std::string raw;
  while (std::getline(lines, raw)) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.substr(0, 7) == "export ") line = trim(line.substr(7));
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    } else if (auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    out[key] = std::string(value);
  }
  return out;
}

std::map<std::string, std::string> load_dotenv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dotenv(buffer.str());
}

Environment Environment::from_process(const std::filesystem::path& dotenv_path) {
  return Environment(load_dotenv(dotenv_path));
}

std::optional<std::string> Environment::get(const std::string& key) const {
  if (const char* value = std::getenv(key.c_str()); value && *value) return std::string(value);
  auto it = dotenv_.find(key);
  if (it != dotenv_.end() && !it->second.empty()) return it->second;
  return std::nullopt;
}

std::string Environment::get_or(const std::string& key, std::string fallback) const {
  auto value = get(key);
  return value ? *value : std::move(fallback);
}

LiveSettings LiveSettings::resolve(const Environment& env) {
  LiveSettings s;
  s.llm_api_base = env.get_or("LLM_API_BASE", s.llm_api_base);
  s.llm_api_key = env.get_or("LLM_API_KEY", "");
  s.llm_model = env.get_or("LLM_MODEL", s.llm_model);
  s.embed_model = env.get_or("EMBED_MODEL", s.embed_model);
  s.search_api_base = env.get_or("SEARCH_API_BASE", s.search_api_base);
  s.search_api_key = env.get_or("SEARCH_API_KEY", "");
  return s;
}

}  // namespace agentrag::providers
