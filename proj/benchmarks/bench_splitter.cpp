#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "agentrag/ingest/splitter.hpp"

namespace {

std::string fixture() {
  std::ifstream in(AGENTRAG_DATA_DIR "/dress_code_standards.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void BM_SplitFixture(benchmark::State& state) {
  const auto text = fixture();
  agentrag::ingest::SplitterConfig cfg;
  cfg.chunk_size = static_cast<std::size_t>(state.range(0));
  cfg.chunk_overlap = cfg.chunk_size / 10;
  for (auto _ : state) benchmark::DoNotOptimize(agentrag::ingest::split_text(text, cfg, "doc"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_SplitFixture)->Arg(100)->Arg(300)->Arg(1000);

void BM_SplitLargeText(benchmark::State& state) {
  std::string text;
  const auto base = fixture();
  while (text.size() < static_cast<std::size_t>(state.range(0))) text += base + "\n\n";
  const agentrag::ingest::SplitterConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(agentrag::ingest::split_text(text, cfg, "doc"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_SplitLargeText)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
