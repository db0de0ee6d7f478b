#include "app.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "agentrag/chains/prompt.hpp"
#include "agentrag/graph/errors.hpp"
#include "agentrag/ingest/document.hpp"
#include "agentrag/ingest/splitter.hpp"
#include "agentrag/providers/env.hpp"
#include "agentrag/providers/live.hpp"
#include "agentrag/providers/mock.hpp"
#include "agentrag/store/vector_store.hpp"
#include "agentrag/workflow/crag.hpp"

namespace agentrag::cli {

namespace fs = std::filesystem;
using providers::ProviderError;

namespace {

struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

struct Options {
  bool live = false;
  std::string store_path = "agentrag_store.json";
  std::string env_file = ".env";
  std::string prompts_path;
  std::string web_fixtures_path;
  std::string trace_path;
  bool json = false;

  // index
  std::vector<std::string> files;
  std::size_t chunk_size = 300;
  std::size_t chunk_overlap = 30;

  // ask / repl
  std::string question;
  std::size_t k = 4;
  std::optional<double> threshold;
  int max_regenerations = 2;
  int max_research_rounds = 2;
  int web_max_results = 2;
};

struct Providers {
  std::shared_ptr<providers::ChatModel> chat;
  std::shared_ptr<providers::Embedder> embedder;
  std::shared_ptr<providers::WebSearchProvider> web_search;
  std::string model = "gpt-4-turbo";
};

std::string require_key(const providers::Environment& env, const std::string& name) {
  auto value = env.get(name);
  if (!value) throw ExitError(kExitProvider, name + " is not set (environment or .env file); required in --live mode");
  return *value;
}

// `need_chat` is false for indexing, which only embeds.
Providers make_providers(const Options& o, bool need_chat) {
  Providers p;
  if (!o.live) {
    p.chat = std::make_shared<providers::MockChat>(providers::MockChat::default_script());
    p.embedder = std::make_shared<providers::MockEmbedder>();
    p.web_search = o.web_fixtures_path.empty()
                       ? std::make_shared<providers::MockWebSearch>()
                       : std::make_shared<providers::MockWebSearch>(
                             providers::MockWebSearch::load_fixtures(o.web_fixtures_path));
    return p;
  }
  const auto env = providers::Environment::from_process(o.env_file);
  auto settings = providers::LiveSettings::resolve(env);
  settings.llm_api_key = require_key(env, "LLM_API_KEY");
  p.model = settings.llm_model;
  p.embedder = std::make_shared<providers::LiveEmbedder>(settings.llm_api_base, settings.llm_api_key,
                                                         settings.embed_model);
  if (need_chat) {
    settings.search_api_key = require_key(env, "SEARCH_API_KEY");
    p.chat = std::make_shared<providers::LiveChatModel>(settings.llm_api_base, settings.llm_api_key);
    p.web_search = std::make_shared<providers::LiveWebSearch>(settings.search_api_base,
                                                              settings.search_api_key);
  }
  return p;
}

std::shared_ptr<const store::VectorStore> load_store(const Options& o) {
  if (!fs::exists(o.store_path))
    throw ExitError(kExitMissingStore, "no vector store at '" + o.store_path + "'; run `index` first");
  return std::make_shared<const store::VectorStore>(store::VectorStore::load(o.store_path));
}

// ---------------------------------------------------------------------------

int cmd_index(const Options& o, std::ostream& out, std::ostream& err) {
  ingest::SplitterConfig split_cfg;
  split_cfg.chunk_size = o.chunk_size;
  split_cfg.chunk_overlap = o.chunk_overlap;
  try {
    split_cfg.validate();
  } catch (const std::exception& e) {
    throw ExitError(kExitUsage, e.what());
  }

  auto p = make_providers(o, /*need_chat=*/false);
  store::VectorStore st;
  if (fs::exists(o.store_path)) st = store::VectorStore::load(o.store_path);

  std::size_t docs = 0, chunks = 0, added = 0;
  for (const auto& file : o.files) {
    try {
      const auto doc = ingest::load_document(file);
      const auto pieces = ingest::split(doc, split_cfg);
      if (pieces.empty()) {
        err << "warning: " << file << ": no indexable text\n";
        continue;
      }
      added += st.add_chunks(pieces, *p.embedder);
      chunks += pieces.size();
      ++docs;
      std::size_t longest = 0;
      for (const auto& c : pieces) longest = std::max(longest, c.char_end - c.char_start);
      out << file << ": " << pieces.size() << " chunks (longest " << longest << " chars)\n";
    } catch (const ProviderError&) {
      throw;
    } catch (const std::exception& e) {
      err << "error: " << file << ": " << e.what() << "\n";
    }
  }
  if (docs == 0) {
    err << "error: no document could be indexed\n";
    return kExitFailure;
  }
  st.persist(o.store_path);
  out << "indexed " << docs << " document(s), " << chunks << " chunks (" << added << " new), dim "
      << (st.dim() ? *st.dim() : 0) << ", " << st.size() << " entries in " << o.store_path << "\n";
  return kExitOk;
}

class Session {
 public:
  Session(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {
    auto p = make_providers(o, /*need_chat=*/true);
    workflow::WorkflowDeps deps;
    deps.chat = p.chat;
    deps.embedder = p.embedder;
    deps.web_search = p.web_search;
    deps.store = load_store(o);
    deps.model = p.model;
    if (!o.prompts_path.empty()) deps.catalog = chains::PromptCatalog::load(o.prompts_path);
    if (!o.json) deps.progress = [this](std::string_view line) { out_ << line << '\n' << std::flush; };

    workflow::WorkflowConfig cfg;
    cfg.retriever.k = o.k;
    cfg.retriever.score_threshold =
        o.threshold.value_or(o.live ? store::RetrieverConfig{}.score_threshold
                                    : providers::MockEmbedder::kScoreThreshold);
    cfg.max_regenerations = o.max_regenerations;
    cfg.max_research_rounds = o.max_research_rounds;
    cfg.web_max_results = o.web_max_results;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ExitError(kExitUsage, e.what());
    }
    workflow_ = std::make_unique<workflow::CragWorkflow>(std::move(deps), cfg);

    if (!o.trace_path.empty()) {
      trace_file_.open(o.trace_path, std::ios::app);
      if (!trace_file_) throw ExitError(kExitFailure, "cannot open trace file '" + o.trace_path + "'");
      writer_.emplace(trace_file_);
    }
  }

  int ask(const std::string& question) {
    const auto outcome = workflow_->run(question, writer_ ? writer_->sink() : graph::TraceSink{});
    // Display-only rewrite, computed outside the workflow.
    const auto rewritten = workflow_->chains().rewrite_question(question).output;

    if (o_.json) {
      auto j = outcome.to_json();
      j["first_question"] = question;
      j["rewritten_question"] = rewritten;
      out_ << j.dump() << '\n';
    } else {
      out_ << " First question : " << question << '\n'
           << " Rewritten question : " << rewritten << '\n'
           << outcome.final_state.generation << '\n'
           << "Verdict: " << workflow::to_string(outcome.verdict) << '\n';
    }
    if (outcome.verdict == workflow::Verdict::failed) {
      err_ << "error: " << outcome.error << '\n';
      return kExitFailure;
    }
    return kExitOk;
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<workflow::CragWorkflow> workflow_;
  std::ofstream trace_file_;
  std::optional<graph::JsonlTraceWriter> writer_;
};

int report(std::ostream& err, const std::exception_ptr& ep);

int cmd_repl(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Session session(o, out, err);
  std::string line;
  while (true) {
    out << "question> " << std::flush;
    if (!std::getline(in, line)) break;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string question = line.substr(first, last - first + 1);
    if (question == "quit" || question == "exit") break;
    try {
      session.ask(question);
    } catch (...) {
      report(err, std::current_exception());
    }
  }
  out << '\n';
  return kExitOk;
}

int cmd_graph(const Options& o, std::ostream& out) {
  // Topology does not depend on the providers; offline stand-ins suffice.
  workflow::WorkflowDeps deps;
  deps.chat = std::make_shared<providers::MockChat>();
  deps.embedder = std::make_shared<providers::MockEmbedder>();
  deps.web_search = std::make_shared<providers::MockWebSearch>();
  deps.store = std::make_shared<const store::VectorStore>();
  if (!o.prompts_path.empty()) deps.catalog = chains::PromptCatalog::load(o.prompts_path);
  workflow::CragWorkflow wf(std::move(deps));
  out << wf.graph().export_dot();
  return kExitOk;
}

// Maps an exception to a diagnostic and an exit code.
int report(std::ostream& err, const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ExitError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const ProviderError& e) {
    err << "provider error (" << providers::to_string(e.kind()) << "): " << e.detail() << '\n';
    return kExitProvider;
  } catch (const graph::NodeFailed& e) {
    if (e.cause()) {
      try {
        std::rethrow_exception(e.cause());
      } catch (const ProviderError& pe) {
        err << "provider error in " << e.node() << " (" << providers::to_string(pe.kind())
            << "): " << pe.detail() << '\n';
        return kExitProvider;
      } catch (...) {
      }
    }
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Agentic corrective RAG over local documents with web-search fallback", "agentrag"};
  app.fallthrough();
  app.require_subcommand(1);

  auto* mock_flag = app.add_flag("--mock", "Offline deterministic providers (default)");
  auto* live_flag = app.add_flag("--live", o.live, "HTTP providers configured from the environment");
  mock_flag->excludes(live_flag);
  app.add_option("--store", o.store_path, "Vector store file")->capture_default_str();
  app.add_option("--env-file", o.env_file, "Dotenv file for --live")->capture_default_str();
  app.add_option("--prompts", o.prompts_path, "Prompt catalog overriding the built-in prompts");
  app.add_option("--web-fixtures", o.web_fixtures_path, "JSON fixtures for the mock web search");

  auto* index = app.add_subcommand("index", "Split, embed and store documents");
  index->add_option("files", o.files, "Text files (UTF-8)");
  index->add_option("--chunk-size", o.chunk_size, "Maximum chunk length in characters")->capture_default_str();
  index->add_option("--chunk-overlap", o.chunk_overlap, "Characters shared by neighbouring chunks")->capture_default_str();

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--trace", o.trace_path, "Append JSON Lines trace events to this file");
    cmd->add_option("--k", o.k, "Maximum retrieved chunks")->capture_default_str();
    cmd->add_option("--threshold", o.threshold, "Minimum cosine score (default 0.5 live, 0.3 mock)");
    cmd->add_option("--max-regenerations", o.max_regenerations)->capture_default_str();
    cmd->add_option("--max-research-rounds", o.max_research_rounds)->capture_default_str();
    cmd->add_option("--web-results", o.web_max_results, "Web results per search")->capture_default_str();
    cmd->add_flag("--json", o.json, "Print the run outcome as JSON");
  };
  auto* ask = app.add_subcommand("ask", "Answer one question");
  ask->add_option("question", o.question, "The question")->required();
  add_run_options(ask);
  auto* repl = app.add_subcommand("repl", "Answer questions read line by line");
  add_run_options(repl);
  auto* graph_cmd = app.add_subcommand("graph", "Print the workflow graph as DOT");

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (index->parsed()) {
      if (o.files.empty()) {
        err << "usage error: index needs at least one file\n";
        return kExitUsage;
      }
      return cmd_index(o, out, err);
    }
    if (ask->parsed()) {
      Session session(o, out, err);
      return session.ask(o.question);
    }
    if (repl->parsed()) return cmd_repl(o, in, out, err);
    if (graph_cmd->parsed()) return cmd_graph(o, out);
  } catch (...) {
    return report(err, std::current_exception());
  }
  return kExitUsage;
}

}  // namespace agentrag::cli
