#include "agentrag/providers/types.hpp"

namespace agentrag::providers {

std::string_view to_string(Role role) { return role == Role::system ? "system" : "user"; }

std::string_view to_string(BinaryGrade grade) { return grade == BinaryGrade::yes ? "yes" : "no"; }

std::string_view to_string(ProviderError::Kind kind) {
  switch (kind) {
    case ProviderError::Kind::network: return "network";
    case ProviderError::Kind::auth: return "auth";
    case ProviderError::Kind::rate_limit: return "rate_limit";
    case ProviderError::Kind::malformed_response: return "malformed_response";
    case ProviderError::Kind::timeout: return "timeout";
  }
  return "unknown";
}

ProviderError::ProviderError(Kind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)) {}

bool ProviderError::retryable() const noexcept {
  return kind_ == Kind::rate_limit || kind_ == Kind::timeout || kind_ == Kind::network;
}

void ChatRequest::validate() const {
  if (messages.empty()) throw std::invalid_argument("chat request has no messages");
  for (const auto& m : messages)
    if (m.content.empty()) throw std::invalid_argument("chat request has an empty message");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
}

}  // namespace agentrag::providers
