#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agentrag::providers {

enum class Role { system, user };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Which catalog template produced a request and the variables it was
/// rendered with. Live providers ignore it; mocks key their behavior on it.
struct PromptOrigin {
  std::string template_name;
  std::map<std::string, std::string> vars;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::string model = "gpt-4-turbo";
  std::optional<PromptOrigin> origin;

  /// Throws std::invalid_argument: needs at least one message, no empty
  /// contents, temperature >= 0.
  void validate() const;
};

struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

struct SearchResult {
  std::string url;
  std::optional<std::string> title;
  std::string snippet;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

enum class BinaryGrade { yes, no };

std::string_view to_string(BinaryGrade grade);

class ProviderError : public std::runtime_error {
 public:
  enum class Kind { network, auth, rate_limit, malformed_response, timeout };

  ProviderError(Kind kind, std::string detail);

  Kind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  /// rate_limit, timeout and transient network failures are retried.
  bool retryable() const noexcept;

 private:
  Kind kind_;
  std::string detail_;
};

std::string_view to_string(ProviderError::Kind kind);

/// A grader reply that is neither JSON {"score"|"binary_score": yes|no},
/// the binary_score='yes' form, nor a bare yes/no token.
class MalformedGrade : public std::runtime_error {
 public:
  explicit MalformedGrade(std::string raw)
      : std::runtime_error("unrecognized grade: '" + raw + "'"), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace agentrag::providers
