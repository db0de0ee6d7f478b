#include "agentrag/workflow/crag.hpp"

#include <algorithm>
#include <stdexcept>

namespace agentrag::workflow {

using graph::State;
using providers::BinaryGrade;
using providers::MalformedGrade;
using providers::ProviderError;

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

// Auth failures are configuration errors; everything else a grader can
// throw degrades the run instead of aborting it.
void rethrow_if_fatal(const ProviderError& e) {
  if (e.kind() == ProviderError::Kind::auth) throw;
}

}  // namespace

// ---------------------------------------------------------------------------
// GraphState

State GraphState::to_state() const {
  State s;
  s.set("question", question);
  s.set("generation", generation);
  s.set("web_search_add", web_search_add);
  s.set("documents", documents);
  s.set("generation_attempts", generation_attempts);
  s.set("search_rounds", search_rounds);
  return s;
}

GraphState GraphState::from_state(const State& s) {
  GraphState g;
  g.question = s.get_or<std::string>("question", "");
  g.generation = s.get_or<std::string>("generation", "");
  g.web_search_add = s.get_or<std::string>("web_search_add", "yes");
  g.documents = s.get_or<std::vector<std::string>>("documents", {});
  g.generation_attempts = s.get_or<int>("generation_attempts", 0);
  g.search_rounds = s.get_or<int>("search_rounds", 0);
  return g;
}

void WorkflowConfig::validate() const {
  retriever.validate();
  if (max_regenerations < 0 || max_research_rounds < 0)
    throw std::invalid_argument("retry caps must be non-negative");
  if (web_max_results < 1) throw std::invalid_argument("web_max_results must be at least 1");
  if (step_limit < 1) throw std::invalid_argument("step_limit must be at least 1");
}

// ---------------------------------------------------------------------------
// Routing

std::string decide_to_generate(const State& state) {
  const bool search = state.get_or<std::string>("web_search_add", "yes") != "no";
  return std::string(search ? label::kRewriteQuery : label::kGenerateAnswer);
}

LoopBudget LoopBudget::of(const GraphState& s) {
  LoopBudget b;
  // A web search reached through grade_documents is the first round, not a retry.
  const int initial_search = (s.web_search_add == "yes" && s.search_rounds > 0) ? 1 : 0;
  b.research_rounds_used = std::max(0, s.search_rounds - initial_search);
  b.regenerations_used = std::max(0, s.generation_attempts - 1 - b.research_rounds_used);
  return b;
}

std::string_view route_generation(GenerationCheck check, LoopBudget used, const WorkflowConfig& cfg) {
  switch (check) {
    case GenerationCheck::grounded_and_useful:
      return label::kUseful;
    case GenerationCheck::hallucinated:
      return used.regenerations_used < cfg.max_regenerations ? label::kNotSupported
                                                             : label::kBestEffort;
    case GenerationCheck::not_useful:
      return used.research_rounds_used < cfg.max_research_rounds ? label::kNotUseful
                                                                 : label::kBestEffort;
    case GenerationCheck::grader_failed:
      break;
  }
  return label::kBestEffort;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::useful: return "useful";
    case Verdict::best_effort: return "best_effort";
    case Verdict::failed: return "failed";
  }
  return "failed";
}

// ---------------------------------------------------------------------------
// RunOutcome

std::vector<std::string> RunOutcome::node_sequence() const {
  std::vector<std::string> out;
  for (const auto& e : trace)
    if (e.kind == graph::EventKind::node_enter && e.node) out.push_back(*e.node);
  return out;
}

std::vector<std::string> RunOutcome::decisions() const {
  std::vector<std::string> out;
  for (const auto& e : trace)
    if (e.kind == graph::EventKind::decision && e.label) out.push_back(*e.label);
  return out;
}

nlohmann::json RunOutcome::to_json() const {
  nlohmann::json j{{"run_id", run_id},
                   {"question", final_state.question},
                   {"generation", final_state.generation},
                   {"web_search_add", final_state.web_search_add},
                   {"documents", final_state.documents},
                   {"verdict", to_string(verdict)},
                   {"nodes", node_sequence()},
                   {"decisions", decisions()}};
  if (!error.empty()) j["error"] = error;
  return j;
}

// ---------------------------------------------------------------------------
// CragWorkflow

namespace {

WorkflowDeps checked(WorkflowDeps deps) {
  if (!deps.chat) throw std::invalid_argument("workflow needs a chat model");
  if (!deps.embedder) throw std::invalid_argument("workflow needs an embedder");
  if (!deps.web_search) throw std::invalid_argument("workflow needs a web search provider");
  if (!deps.store) throw std::invalid_argument("workflow needs a vector store");
  return deps;
}

}  // namespace

CragWorkflow::CragWorkflow(WorkflowDeps deps, WorkflowConfig cfg)
    : deps_(checked(std::move(deps))),
      cfg_((cfg.validate(), cfg)),
      chains_(std::make_shared<chains::RagChains>(deps_.chat, deps_.catalog, deps_.model)),
      graph_(build_workflow(*this)) {}

void CragWorkflow::say(std::string_view line) const {
  if (deps_.progress) deps_.progress(line);
}

State CragWorkflow::retrieve(const State& s) const {
  say("---Search in VectorDB---");
  const auto question = s.get_or<std::string>("question", "");
  if (blank(question)) throw std::invalid_argument("retrieve: question is empty");
  std::vector<std::string> documents;
  for (const auto& hit : deps_.store->retrieve(question, *deps_.embedder, cfg_.retriever))
    documents.push_back(hit.chunk.text);
  return State().set("documents", documents);
}

State CragWorkflow::grade_documents(const State& s) const {
  say("---Check the relevance of questions and documents---");
  const auto g = GraphState::from_state(s);
  if (g.documents.empty()) {
    say("---No documents found---");
    return State().set("documents", nlohmann::json::array()).set("web_search_add", "yes");
  }

  std::vector<std::string> kept;
  bool search = false;
  for (const auto& doc : g.documents) {
    try {
      if (chains_->grade_document(g.question, doc).output == BinaryGrade::yes) {
        say("---GRADE: This is a relevant document---");
        kept.push_back(doc);
        continue;
      }
      say("---GRADE: This is not a relevant document---");
    } catch (const MalformedGrade&) {
      say("---GRADE: Unreadable grade, document dropped---");
    } catch (const ProviderError& e) {
      rethrow_if_fatal(e);
      say("---GRADE: Grader unavailable, document dropped---");
    }
    search = true;
  }
  return State().set("documents", kept).set("web_search_add", search ? "yes" : "no");
}

State CragWorkflow::rewrite_query(const State& s) const {
  say("---Query rewrite---");
  const auto question = s.get_or<std::string>("question", "");
  return State().set("question", chains_->rewrite_question(question).output);
}

State CragWorkflow::web_search(const State& s) const {
  say("---WEB SEARCH---");
  auto g = GraphState::from_state(s);
  if (blank(g.question)) throw std::invalid_argument("web_search: question is empty");
  for (auto& hit : deps_.web_search->search(g.question, cfg_.web_max_results))
    g.documents.push_back(std::move(hit.snippet));
  return State().set("documents", g.documents).set("search_rounds", g.search_rounds + 1);
}

State CragWorkflow::generate_answer(const State& s) const {
  say("---Generate Answer---");
  const auto g = GraphState::from_state(s);
  return State()
      .set("generation", chains_->answer(g.question, g.documents).output)
      .set("generation_attempts", g.generation_attempts + 1);
}

std::string CragWorkflow::grade_generation_v_documents_and_question(const State& s) const {
  const auto g = GraphState::from_state(s);
  GenerationCheck check = GenerationCheck::not_useful;

  if (blank(g.generation) || chains::is_no_information(g.generation)) {
    // Nothing to grade: the answer chain found no usable context.
    say("---DECISION: No relevant information in the context---");
  } else {
    try {
      say("---CHECK HALLUCINATIONS---");
      const auto docs = chains::format_docs(g.documents);
      if (chains_->grade_hallucination(docs, g.generation).output == BinaryGrade::yes) {
        check = GenerationCheck::hallucinated;
      } else {
        say("---DECISION: Generate document-based answers---");
        say("---GRADE GENERATION vs QUESTION---");
        check = chains_->grade_usefulness(g.question, g.generation).output == BinaryGrade::yes
                    ? GenerationCheck::grounded_and_useful
                    : GenerationCheck::not_useful;
      }
    } catch (const MalformedGrade&) {
      check = GenerationCheck::grader_failed;
    } catch (const ProviderError& e) {
      rethrow_if_fatal(e);
      check = GenerationCheck::grader_failed;
    }
  }

  const auto route = route_generation(check, LoopBudget::of(g), cfg_);
  if (route == label::kUseful) say("---DECISION: Generate answers to your questions---");
  else if (route == label::kNotSupported) say("---DECISION: Answer is not grounded in the documents, generate again---");
  else if (route == label::kNotUseful) say("---DECISION: Answer does not address the question, search the web again---");
  else say("---DECISION: Retry limit reached, returning the best available answer---");
  return std::string(route);
}

graph::CompiledGraph build_workflow(const CragWorkflow& wf) {
  const std::string retrieve(node::kRetrieve), grade(node::kGradeDocuments),
      rewrite(node::kRewriteQuery), search(node::kWebSearch), generate(node::kGenerateAnswer);
  const std::string end(graph::kEnd);

  graph::StateGraph g;
  g.add_node(retrieve, [&wf](const State& s) { return wf.retrieve(s); });
  g.add_node(grade, [&wf](const State& s) { return wf.grade_documents(s); });
  g.add_node(rewrite, [&wf](const State& s) { return wf.rewrite_query(s); });
  g.add_node(search, [&wf](const State& s) { return wf.web_search(s); });
  g.add_node(generate, [&wf](const State& s) { return wf.generate_answer(s); });

  g.set_entry_point(retrieve);
  g.add_edge(retrieve, grade);
  g.add_conditional_edges(
      grade,
      [&wf](const State& s) {
        wf.say("---Evaluate graded documents---");
        auto choice = decide_to_generate(s);
        wf.say(choice == label::kRewriteQuery
                   ? "---DECISION: The Vectorstore RAG document is not relevant to the question, "
                     "so I decided to search the web.---"
                   : "---DECISION: Generate response---");
        return choice;
      },
      {{std::string(label::kRewriteQuery), rewrite}, {std::string(label::kGenerateAnswer), generate}});
  g.add_edge(rewrite, search);
  g.add_edge(search, generate);
  g.add_conditional_edges(
      generate,
      [&wf](const State& s) { return wf.grade_generation_v_documents_and_question(s); },
      {{std::string(label::kNotSupported), generate},
       {std::string(label::kUseful), end},
       {std::string(label::kNotUseful), search},
       {std::string(label::kBestEffort), end}});
  return g.compile();
}

RunOutcome CragWorkflow::run(const std::string& question, const graph::TraceSink& sink) const {
  if (blank(question)) throw std::invalid_argument("question must not be empty");

  GraphState initial;
  initial.question = question;
  graph::RunConfig rc;
  rc.step_limit = cfg_.step_limit;
  auto exec = graph_.stream(initial.to_state(), rc);

  RunOutcome out;
  out.run_id = exec.run_id();
  while (auto item = exec.next()) {
    if (sink) sink(item->event);
    out.trace.push_back(std::move(item->event));
  }
  out.final_state = GraphState::from_state(exec.state());

  if (exec.error()) {
    try {
      exec.rethrow_if_failed();
    } catch (const graph::StepLimitExceeded& e) {
      out.verdict = Verdict::failed;
      out.error = e.what();
      return out;
    }
  }

  const auto labels = out.decisions();
  out.verdict = (!labels.empty() && labels.back() == label::kUseful) ? Verdict::useful
                                                                      : Verdict::best_effort;
  return out;
}

}  // namespace agentrag::workflow
