#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentrag/chains/rag_chains.hpp"
#include "agentrag/graph/state_graph.hpp"
#include "agentrag/providers/interfaces.hpp"
#include "agentrag/store/vector_store.hpp"

namespace agentrag::workflow {

namespace node {
inline constexpr std::string_view kRetrieve = "retrieve";
inline constexpr std::string_view kGradeDocuments = "grade_documents";
inline constexpr std::string_view kRewriteQuery = "rewrite_query";
inline constexpr std::string_view kWebSearch = "web_search";
inline constexpr std::string_view kGenerateAnswer = "generate_answer";
}  // namespace node

namespace label {
inline constexpr std::string_view kRewriteQuery = "rewrite_query";
inline constexpr std::string_view kGenerateAnswer = "generate_answer";
inline constexpr std::string_view kNotSupported = "not_supported";
inline constexpr std::string_view kUseful = "useful";
inline constexpr std::string_view kNotUseful = "not_useful";
inline constexpr std::string_view kBestEffort = "best_effort";
}  // namespace label

/// Typed view of the graph state. The two counters are bookkeeping for the
/// retry caps: generate_answer and web_search each bump theirs.
struct GraphState {
  std::string question;
  std::string generation;
  std::string web_search_add = "no";
  std::vector<std::string> documents;
  int generation_attempts = 0;
  int search_rounds = 0;

  graph::State to_state() const;
  /// Missing fields take their defaults; a missing flag reads as "yes".
  static GraphState from_state(const graph::State& state);
};

struct WorkflowConfig {
  store::RetrieverConfig retriever;
  int max_regenerations = 2;
  int max_research_rounds = 2;
  int web_max_results = 2;
  std::size_t step_limit = 25;

  void validate() const;
};

/// Receives console progress lines ("---WEB SEARCH---" and so on).
using ProgressFn = std::function<void(std::string_view)>;

struct WorkflowDeps {
  std::shared_ptr<providers::ChatModel> chat;
  std::shared_ptr<providers::Embedder> embedder;
  std::shared_ptr<providers::WebSearchProvider> web_search;
  std::shared_ptr<const store::VectorStore> store;
  chains::PromptCatalog catalog = chains::PromptCatalog::defaults();
  std::string model = "gpt-4-turbo";
  ProgressFn progress;
};

/// Routing after grade_documents. Anything but "no" sends the run to the
/// web.
std::string decide_to_generate(const graph::State& state);

/// What the two generation graders concluded.
enum class GenerationCheck { grounded_and_useful, hallucinated, not_useful, grader_failed };

/// Retries spent so far, derived from the state counters.
struct LoopBudget {
  int regenerations_used = 0;
  int research_rounds_used = 0;

  static LoopBudget of(const GraphState& s);
};

/// Label leaving generate_answer for a grading outcome. Caps turn the
/// retry labels into best_effort.
std::string_view route_generation(GenerationCheck check, LoopBudget used, const WorkflowConfig& cfg);

enum class Verdict { useful, best_effort, failed };
std::string_view to_string(Verdict v);

struct RunOutcome {
  GraphState final_state;
  std::vector<graph::TraceEvent> trace;
  Verdict verdict = Verdict::failed;
  std::string run_id;
  std::string error;  // set when verdict is failed

  /// Names of entered nodes, in order.
  std::vector<std::string> node_sequence() const;
  /// Labels chosen by the decision functions, in order.
  std::vector<std::string> decisions() const;
  nlohmann::json to_json() const;
};

/// The corrective retrieval workflow: retrieve, grade, optionally rewrite
/// and search the web, generate, then grade the generation. Runs are
/// independent, so one instance may serve concurrent calls to run().
class CragWorkflow {
 public:
  /// Throws std::invalid_argument when a provider or the store is missing.
  CragWorkflow(WorkflowDeps deps, WorkflowConfig cfg = {});
  // The compiled graph's nodes point back at this object.
  CragWorkflow(const CragWorkflow&) = delete;
  CragWorkflow& operator=(const CragWorkflow&) = delete;

  /// Throws std::invalid_argument for a blank question; graph::RunError
  /// (other than the step limit, which yields Verdict::failed) propagates.
  RunOutcome run(const std::string& question, const graph::TraceSink& sink = {}) const;

  const graph::CompiledGraph& graph() const { return graph_; }
  const chains::RagChains& chains() const { return *chains_; }
  const WorkflowConfig& config() const { return cfg_; }

  // Node and decision bodies, public for direct testing.
  graph::State retrieve(const graph::State& s) const;
  graph::State grade_documents(const graph::State& s) const;
  graph::State rewrite_query(const graph::State& s) const;
  graph::State web_search(const graph::State& s) const;
  graph::State generate_answer(const graph::State& s) const;
  std::string grade_generation_v_documents_and_question(const graph::State& s) const;

 private:
  friend graph::CompiledGraph build_workflow(const CragWorkflow& wf);
  void say(std::string_view line) const;

  WorkflowDeps deps_;
  WorkflowConfig cfg_;
  std::shared_ptr<chains::RagChains> chains_;
  graph::CompiledGraph graph_;
};

/// The graph with the workflow's nodes wired to `wf`.
graph::CompiledGraph build_workflow(const CragWorkflow& wf);

}  // namespace agentrag::workflow
