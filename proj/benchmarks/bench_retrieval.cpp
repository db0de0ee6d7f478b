#include <random>

#include <benchmark/benchmark.h>

#include "agentrag/providers/mock.hpp"
#include "agentrag/store/vector_store.hpp"

using namespace agentrag;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

store::VectorStore random_store(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::vector<ingest::Chunk> chunks;
  std::vector<providers::Embedding> vectors;
  for (std::size_t i = 0; i < n; ++i) {
    chunks.push_back({"doc", i, "chunk", 0, 5});
    vectors.push_back({random_vector(rng, dim)});
  }
  store::VectorStore st;
  st.add_embedded(chunks, vectors);
  return st;
}

void BM_Search(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto st = random_store(n, dim);
  std::mt19937_64 rng(2);
  const auto query = random_vector(rng, dim);
  const store::RetrieverConfig cfg{4, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(st.search(query, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Search)->Args({100, 64})->Args({10'000, 64})->Args({10'000, 1536});

void BM_MockEmbed(benchmark::State& state) {
  providers::MockEmbedder emb;
  const std::string text = "What are some considerations for dress selection for work in the summer season?";
  for (auto _ : state) benchmark::DoNotOptimize(emb.embed_text(text));
}
BENCHMARK(BM_MockEmbed);

}  // namespace
