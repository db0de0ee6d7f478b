#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agentrag/providers/types.hpp"

namespace agentrag::chains {

class MissingVariable : public std::invalid_argument {
 public:
  explicit MissingVariable(const std::string& name)
      : std::invalid_argument("prompt variable not supplied: " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PromptVars = std::map<std::string, std::string>;

/// System and human message templates with {name} placeholders. "{{" and
/// "}}" render as literal braces. An empty system text sends no system
/// message.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  /// Throws std::invalid_argument on unbalanced braces or bad names.
  PromptTemplate(std::string name, std::string system, std::string human,
                 std::string editorial = {});

  const std::string& name() const { return name_; }
  const std::string& system() const { return system_; }
  const std::string& human() const { return human_; }
  /// Notes on wording added where the source prompt was incomplete.
  const std::string& editorial() const { return editorial_; }
  const std::set<std::string>& required_vars() const { return required_; }

  /// Throws MissingVariable. Extra variables are ignored.
  std::vector<providers::ChatMessage> render(const PromptVars& vars) const;
  providers::ChatRequest request(const PromptVars& vars, std::string model) const;

  friend bool operator==(const PromptTemplate& a, const PromptTemplate& b) {
    return a.name_ == b.name_ && a.system_ == b.system_ && a.human_ == b.human_ &&
           a.editorial_ == b.editorial_;
  }

 private:
  std::string name_, system_, human_, editorial_;
  std::set<std::string> required_;
};

/// Renders one template text. Throws MissingVariable.
std::string render_text(std::string_view text, const PromptVars& vars);

/// The five named prompts. A catalog file uses a small TOML subset:
///
///   [grade_document]
///   system = """..."""
///   human = """..."""
///   editorial = "..."
///
/// Sections in a file replace the built-in template of the same name.
class PromptCatalog {
 public:
  static PromptCatalog defaults();
  /// Throws CatalogError on syntax errors, unknown template names or
  /// placeholders the chain does not supply.
  static PromptCatalog parse(std::string_view text);
  static PromptCatalog load(const std::filesystem::path& path);

  const PromptTemplate& get(std::string_view name) const;
  const std::map<std::string, PromptTemplate, std::less<>>& templates() const { return templates_; }

  /// Serializes to the file format; parse(to_toml()) == *this.
  std::string to_toml() const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

/// Variables each named prompt may reference.
const std::set<std::string>& allowed_vars(std::string_view template_name);

}  // namespace agentrag::chains
