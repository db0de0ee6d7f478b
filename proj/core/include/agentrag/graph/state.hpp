#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace agentrag::graph {

/// Open record of named fields flowing through a workflow.
///
/// Nodes return a partial State; merging overwrites the fields present in the
/// update and leaves every other field untouched (shallow replacement).
class State {
 public:
  State() : fields_(nlohmann::json::object()) {}
  explicit State(nlohmann::json fields);

  bool contains(std::string_view key) const;
  bool empty() const { return fields_.empty(); }
  std::size_t size() const { return fields_.size(); }

  // Throws std::out_of_range when the field is absent.
  const nlohmann::json& at(std::string_view key) const;

  template <typename T>
  T get(std::string_view key) const {
    return at(key).get<T>();
  }

  template <typename T>
  T get_or(std::string_view key, T fallback) const {
    auto it = fields_.find(std::string(key));
    if (it == fields_.end() || it->is_null()) return fallback;
    return it->get<T>();
  }

  State& set(std::string key, nlohmann::json value);
  State& erase(std::string_view key);

  void merge(const State& update);

  const nlohmann::json& fields() const { return fields_; }

  /// Compact per-field summary for trace events: short strings verbatim,
  /// long strings truncated, arrays reduced to their length.
  nlohmann::json digest() const;

  friend bool operator==(const State& a, const State& b) { return a.fields_ == b.fields_; }

 private:
  nlohmann::json fields_;
};

}  // namespace agentrag::graph
