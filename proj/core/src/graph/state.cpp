#include "agentrag/graph/state.hpp"

#include <stdexcept>

namespace agentrag::graph {

namespace {

constexpr std::size_t kDigestTextLimit = 48;

// Truncates on a UTF-8 boundary so the digest stays valid JSON text.
std::string truncate_utf8(const std::string& text, std::size_t limit) {
  if (text.size() <= limit) return text;
  std::size_t cut = limit;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return text.substr(0, cut) + "...";
}

}  // namespace

State::State(nlohmann::json fields) : fields_(std::move(fields)) {
  if (fields_.is_null()) fields_ = nlohmann::json::object();
  if (!fields_.is_object()) throw std::invalid_argument("State must be built from a JSON object");
}

bool State::contains(std::string_view key) const {
  return fields_.contains(std::string(key));
}

const nlohmann::json& State::at(std::string_view key) const {
  auto it = fields_.find(std::string(key));
  if (it == fields_.end()) throw std::out_of_range("state has no field '" + std::string(key) + "'");
  return *it;
}

State& State::set(std::string key, nlohmann::json value) {
  fields_[std::move(key)] = std::move(value);
  return *this;
}

State& State::erase(std::string_view key) {
  fields_.erase(std::string(key));
  return *this;
}

void State::merge(const State& update) {
  for (const auto& [key, value] : update.fields_.items()) fields_[key] = value;
}

nlohmann::json State::digest() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : fields_.items()) {
    if (value.is_string()) {
      out[key] = truncate_utf8(value.get<std::string>(), kDigestTextLimit);
    } else if (value.is_array()) {
      out[key] = "[" + std::to_string(value.size()) + " items]";
    } else if (value.is_object()) {
      out[key] = "{" + std::to_string(value.size()) + " fields}";
    } else {
      out[key] = value;
    }
  }
  return out;
}

}  // namespace agentrag::graph
