#include "agentrag/chains/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "agentrag/providers/prompt_names.hpp"

namespace agentrag::chains {

namespace names = agentrag::prompt_names;

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Calls on_text for literal runs and on_var for each placeholder.
template <typename OnText, typename OnVar>
void scan_template(std::string_view text, OnText on_text, OnVar on_var) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        on_text(std::string_view("{"));
        i += 2;
        continue;
      }
      const auto close = text.find('}', i + 1);
      if (close == std::string_view::npos)
        throw std::invalid_argument("unclosed '{' in prompt template");
      const auto name = text.substr(i + 1, close - i - 1);
      if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char))
        throw std::invalid_argument("bad placeholder '{" + std::string(name) + "}'");
      on_var(name);
      i = close + 1;
    } else if (c == '}') {
      if (i + 1 < text.size() && text[i + 1] == '}') {
        on_text(std::string_view("}"));
        i += 2;
        continue;
      }
      throw std::invalid_argument("unmatched '}' in prompt template");
    } else {
      const auto next = text.find_first_of("{}", i);
      const auto end = next == std::string_view::npos ? text.size() : next;
      on_text(text.substr(i, end - i));
      i = end;
    }
  }
}

std::set<std::string> placeholders(std::string_view text) {
  std::set<std::string> out;
  scan_template(text, [](std::string_view) {}, [&](std::string_view v) { out.emplace(v); });
  return out;
}

}  // namespace

std::string render_text(std::string_view text, const PromptVars& vars) {
  std::string out;
  out.reserve(text.size());
  scan_template(
      text, [&](std::string_view s) { out += s; },
      [&](std::string_view v) {
        auto it = vars.find(std::string(v));
        if (it == vars.end()) throw MissingVariable(std::string(v));
        out += it->second;
      });
  return out;
}

PromptTemplate::PromptTemplate(std::string name, std::string system, std::string human,
                               std::string editorial)
    : name_(std::move(name)),
      system_(std::move(system)),
      human_(std::move(human)),
      editorial_(std::move(editorial)) {
  if (human_.empty()) throw std::invalid_argument("prompt '" + name_ + "' has no human message");
  required_ = placeholders(system_);
  required_.merge(placeholders(human_));
}

std::vector<providers::ChatMessage> PromptTemplate::render(const PromptVars& vars) const {
  for (const auto& v : required_)
    if (!vars.count(v)) throw MissingVariable(v);
  std::vector<providers::ChatMessage> out;
  if (!system_.empty()) out.push_back({providers::Role::system, render_text(system_, vars)});
  out.push_back({providers::Role::user, render_text(human_, vars)});
  return out;
}

providers::ChatRequest PromptTemplate::request(const PromptVars& vars, std::string model) const {
  providers::ChatRequest req;
  req.messages = render(vars);
  req.model = std::move(model);
  req.origin = providers::PromptOrigin{name_, vars};
  return req;
}

// ---------------------------------------------------------------------------
// Built-in prompts

const std::set<std::string>& allowed_vars(std::string_view template_name) {
  static const std::map<std::string, std::set<std::string>, std::less<>> table{
      {std::string(names::kGradeDocument), {"document", "question"}},
      {std::string(names::kAnswer), {"question", "context"}},
      {std::string(names::kRewriteQuestion), {"question"}},
      {std::string(names::kGradeHallucination), {"documents", "generation"}},
      {std::string(names::kGradeUsefulness), {"question", "generation"}},
  };
  auto it = table.find(template_name);
  if (it == table.end()) throw CatalogError("unknown prompt template '" + std::string(template_name) + "'");
  return it->second;
}

PromptCatalog PromptCatalog::defaults() {
  PromptCatalog c;
  auto put = [&](PromptTemplate t) { c.templates_.emplace(t.name(), std::move(t)); };

  put(PromptTemplate(
      std::string(names::kGradeDocument),
      "You are a professional evaluator who evaluates the relevance of searched documents to a "
      "user question.\n"
      "- We assign a relevance rating to documents if they contain keywords or semantic meaning "
      "related to the user question.\n"
      "- Your rating should be 'yes' or 'no' indicating whether the article is relevant to the "
      "question.\n"
      "Reply with a JSON object with a single key 'binary_score' and no preamble or explanation.",
      "Searched Documents: {document}\n"
      "User Questions: {question}",
      "The source prompt is cut off mid-sentence on its first three lines; the endings "
      "\"to a user question\", \"meaning related to the user question\" and \"to the question\" "
      "are completions. The JSON reply instruction replaces structured output binding."));

  put(PromptTemplate(
      std::string(names::kAnswer), "",
      "You are an Assistant for a Q&A.\n"
      "Answer the question using the following retrieved Context fragment.\n"
      "If there is no context or you do not know the answer, answer that you do not know the "
      "answer\n"
      "Do not construct an answer unless it corresponds to the provided Context.\n"
      "If the Context value is null when constructing an answer.\n"
      "answer \"RAG does not have relevant information\".\n"
      "Please provide a detailed and summarized answer to the question.\n"
      "Question: {question}\n"
      "Context: {context}\n"
      "Answer:",
      "Transcribed verbatim apart from leading indentation."));

  put(PromptTemplate(
      std::string(names::kRewriteQuestion),
      "Act as a question rewriter and perform the following tasks:\n"
      "- Convert the following input question into a better version optimized for web search\n"
      "- When rewriting, look at the input question and infer its underlying semantic intent.\n"
      "- Reply with the rewritten question only.",
      "{question}",
      "The last task line is added so the reply can be used as a query without post-editing."));

  put(PromptTemplate(
      std::string(names::kGradeHallucination), "",
      "This is an evaluator that evaluates whether or not a hallucination is present.\n"
      "It gives a binary 'yes' or 'no' to indicate whether or not a hallucination is present.\n"
      "If you have hallucinations, give 'yes'.\n"
      "Provide the binary score as a JSON with a\n"
      "single key 'score' and no preamble or explanation.\n"
      "Here are the facts:\n"
      " ----- \n"
      "{documents}\n"
      " ----- \n"
      "Here is the answer: {generation}",
      "The {n} markers of the source template are rendered as line breaks."));

  put(PromptTemplate(
      std::string(names::kGradeUsefulness), "",
      "You are a relevance evaluator.\n"
      "You connect the retrieved document to the user's question. If the document contains "
      "keywords relevant to the user's question, state it as relevant. There is no need to be "
      "strict. The goal is to filter out bad searches.\n"
      "You assign a binary score of 'yes' or 'no' to indicate whether the document is relevant "
      "to the question.\n"
      "Provide the binary score as a JSON with a single key 'score' and no preamble or "
      "explanation.\n"
      " ----- \n"
      "Here is the question: {question}\n"
      " ----- \n"
      "Here is the answer: {generation}",
      "The second line is cut off after \"relevant to the user\"; \"'s question,\" completes it. "
      "The block between the rules holds the question, not the documents, because this grader "
      "judges whether the answer addresses the question."));
  return c;
}

// ---------------------------------------------------------------------------
// Catalog file format

namespace {

using Sections = std::map<std::string, std::map<std::string, std::string>>;

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : s_(text) {}

  Sections read() {
    Sections out;
    std::string section;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++i_;
        const auto close = s_.find(']', i_);
        if (close == std::string_view::npos || s_.substr(i_, close - i_).find('\n') != std::string_view::npos)
          fail("unterminated section header");
        section = trim(s_.substr(i_, close - i_));
        if (section.empty()) fail("empty section name");
        if (out.count(section)) fail("duplicate section [" + section + "]");
        out[section];
        i_ = close + 1;
        end_of_line();
        continue;
      }
      if (section.empty()) fail("key outside of a section");
      const auto key_end = s_.find('=', i_);
      if (key_end == std::string_view::npos) fail("expected key = value");
      const std::string key = trim(s_.substr(i_, key_end - i_));
      if (key.empty() || !std::all_of(key.begin(), key.end(), is_name_char)) fail("bad key '" + key + "'");
      i_ = key_end + 1;
      skip_spaces();
      auto& fields = out[section];
      if (fields.count(key)) fail("duplicate key '" + key + "' in [" + section + "]");
      fields[key] = string_value();
      end_of_line();
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) line += s_[k] == '\n';
    throw CatalogError("prompt catalog line " + std::to_string(line) + ": " + what);
  }

  static std::string trim(std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
    return std::string(v);
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++i_;
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      if (at_end()) return;
      if (peek() == '#') {
        while (!at_end() && peek() != '\n') ++i_;
      }
      if (at_end()) return;
      if (peek() == '\n' || peek() == '\r') {
        ++i_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_spaces();
    if (!at_end() && peek() == '#')
      while (!at_end() && peek() != '\n') ++i_;
    if (!at_end() && peek() == '\r') ++i_;
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected text after value");
    ++i_;
  }

  void escape(std::string& out) {
    if (at_end()) fail("dangling backslash");
    const char c = s_[i_++];
    switch (c) {
      case '\\': out += '\\'; break;
      case '"': out += '"'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: fail(std::string("unsupported escape \\") + c);
    }
  }

  std::string string_value() {
    if (s_.substr(i_, 3) == "\"\"\"") return multi_line();
    if (at_end() || peek() != '"') fail("expected a quoted string");
    ++i_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = s_[i_++];
      if (c == '"') return out;
      if (c == '\\') escape(out);
      else out += c;
    }
  }

  std::string multi_line() {
    i_ += 3;
    if (s_.substr(i_, 2) == "\r\n") i_ += 2;
    else if (!at_end() && peek() == '\n') ++i_;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated multi-line string");
      if (s_.substr(i_, 3) == "\"\"\"") {
        i_ += 3;
        // Up to two quotes directly before the closing delimiter belong to the content.
        for (int extra = 0; extra < 2 && !at_end() && peek() == '"'; ++extra, ++i_) out += '"';
        return out;
      }
      const char c = s_[i_++];
      if (c == '\\') escape(out);
      else if (c != '\r') out += c;
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string quote_multi_line(const std::string& text) {
  std::string out = "\"\"\"\n";
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '\\') out += "\\\\";
    else if (c == '"' && (k + 1 == text.size() || text[k + 1] == '"')) out += "\\\"";
    else out += c;
  }
  return out + "\"\"\"";
}

std::string quote_line(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '\\' || c == '"') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

PromptCatalog PromptCatalog::parse(std::string_view text) {
  PromptCatalog c = defaults();
  for (auto& [name, fields] : TomlReader(text).read()) {
    const auto& allowed = allowed_vars(name);
    for (const auto& [key, value] : fields)
      if (key != "system" && key != "human" && key != "editorial")
        throw CatalogError("[" + name + "]: unknown key '" + key + "'");
    if (!fields.count("human")) throw CatalogError("[" + name + "]: missing 'human'");

    PromptTemplate t;
    try {
      t = PromptTemplate(name, fields["system"], fields["human"], fields["editorial"]);
    } catch (const std::invalid_argument& e) {
      throw CatalogError("[" + name + "]: " + e.what());
    }
    for (const auto& v : t.required_vars())
      if (!allowed.count(v)) throw CatalogError("[" + name + "]: placeholder {" + v + "} is never supplied");
    c.templates_.insert_or_assign(name, std::move(t));
  }
  return c;
}

PromptCatalog PromptCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot read prompt catalog: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const PromptTemplate& PromptCatalog::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw CatalogError("unknown prompt template '" + std::string(name) + "'");
  return it->second;
}

std::string PromptCatalog::to_toml() const {
  std::string out;
  for (const auto& [name, t] : templates_) {
    if (!out.empty()) out += '\n';
    out += "[" + name + "]\n";
    if (!t.editorial().empty()) out += "editorial = " + quote_line(t.editorial()) + "\n";
    if (!t.system().empty()) out += "system = " + quote_multi_line(t.system()) + "\n";
    out += "human = " + quote_multi_line(t.human()) + "\n";
  }
  return out;
}

}  // namespace agentrag::chains
