#include "agentrag/chains/rag_chains.hpp"

#include <chrono>
#include <stdexcept>

#include "agentrag/providers/grade_parser.hpp"
#include "agentrag/providers/prompt_names.hpp"

namespace agentrag::chains {

namespace names = agentrag::prompt_names;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string format_docs(std::span<const std::string> docs) {
  std::string out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i) out += "\n\n";
    out += docs[i];
  }
  return out;
}

bool is_no_information(std::string_view generation) {
  std::string text = trim(generation);
  if (!text.empty() && text.back() == '.') text.pop_back();
  return text == names::kNoInformation;
}

RagChains::RagChains(std::shared_ptr<providers::ChatModel> chat, PromptCatalog catalog,
                     std::string model)
    : chat_(std::move(chat)), catalog_(std::move(catalog)), model_(std::move(model)) {
  if (!chat_) throw std::invalid_argument("RagChains needs a chat model");
}

ChainResult<std::string> RagChains::call(std::string_view template_name,
                                         const PromptVars& vars) const {
  const auto request = catalog_.get(template_name).request(vars, model_);
  const auto start = std::chrono::steady_clock::now();
  std::string raw = chat_->complete(request);
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  return {raw, raw, elapsed.count()};
}

ChainResult<providers::BinaryGrade> RagChains::grade(std::string_view template_name,
                                                     const PromptVars& vars) const {
  auto r = call(template_name, vars);
  return {providers::parse_binary_grade(r.raw), std::move(r.raw), r.latency_ms};
}

ChainResult<providers::BinaryGrade> RagChains::grade_document(const std::string& question,
                                                              const std::string& document) const {
  require(!trim(question).empty(), "grade_document: empty question");
  require(!trim(document).empty(), "grade_document: empty document");
  return grade(names::kGradeDocument, {{"document", document}, {"question", question}});
}

ChainResult<std::string> RagChains::answer(const std::string& question,
                                           std::span<const std::string> context) const {
  require(!trim(question).empty(), "answer: empty question");
  return call(names::kAnswer, {{"question", question}, {"context", format_docs(context)}});
}

ChainResult<std::string> RagChains::rewrite_question(const std::string& question) const {
  require(!trim(question).empty(), "rewrite_question: empty question");
  auto r = call(names::kRewriteQuestion, {{"question", question}});
  r.output = trim(r.raw);
  if (r.output.empty()) r.output = question;
  return r;
}

ChainResult<providers::BinaryGrade> RagChains::grade_hallucination(
    const std::string& documents, const std::string& generation) const {
  require(!trim(generation).empty(), "grade_hallucination: empty generation");
  return grade(names::kGradeHallucination, {{"documents", documents}, {"generation", generation}});
}

ChainResult<providers::BinaryGrade> RagChains::grade_usefulness(
    const std::string& question, const std::string& generation) const {
  require(!trim(question).empty(), "grade_usefulness: empty question");
  require(!trim(generation).empty(), "grade_usefulness: empty generation");
  return grade(names::kGradeUsefulness, {{"question", question}, {"generation", generation}});
}

}  // namespace agentrag::chains
