#include <benchmark/benchmark.h>

#include "agentrag/ingest/document.hpp"
#include "agentrag/ingest/splitter.hpp"
#include "agentrag/providers/mock.hpp"
#include "agentrag/workflow/crag.hpp"

using namespace agentrag;

namespace {

std::unique_ptr<workflow::CragWorkflow> mock_workflow() {
  auto embedder = std::make_shared<providers::MockEmbedder>();
  auto st = std::make_shared<store::VectorStore>();
  const auto doc = ingest::load_document(AGENTRAG_DATA_DIR "/dress_code_standards.txt");
  st->add_chunks(ingest::split(doc, ingest::SplitterConfig{}), *embedder);

  workflow::WorkflowDeps deps;
  deps.chat = std::make_shared<providers::MockChat>(providers::MockChat::default_script());
  deps.embedder = embedder;
  deps.web_search = std::make_shared<providers::MockWebSearch>();
  deps.store = st;
  workflow::WorkflowConfig cfg;
  cfg.retriever.score_threshold = providers::MockEmbedder::kScoreThreshold;
  return std::make_unique<workflow::CragWorkflow>(std::move(deps), cfg);
}

void BM_RunLocalAnswer(benchmark::State& state) {
  const auto wf = mock_workflow();
  for (auto _ : state)
    benchmark::DoNotOptimize(wf->run("What are some considerations for dress selection for work?"));
}
BENCHMARK(BM_RunLocalAnswer);

void BM_RunWebFallback(benchmark::State& state) {
  const auto wf = mock_workflow();
  for (auto _ : state)
    benchmark::DoNotOptimize(wf->run("Tell me what is the capital of the country where BTS is located"));
}
BENCHMARK(BM_RunWebFallback);

}  // namespace
BENCHMARK_MAIN();
