#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "agentrag/ingest/splitter.hpp"
#include "agentrag/providers/mock.hpp"
#include "agentrag/store/vector_store.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_inputs.hpp"

using namespace agentrag;
using store::VectorStore;

namespace {

ingest::Chunk chunk(std::string doc, std::size_t index, std::string text = "t") {
  return ingest::Chunk{std::move(doc), index, std::move(text), 0, 1};
}

// Fixed-output embedder for error paths.
class ScriptedEmbedder : public providers::Embedder {
 public:
  explicit ScriptedEmbedder(std::vector<std::vector<double>> out) : out_(std::move(out)) {}
  std::vector<providers::Embedding> embed(std::span<const std::string> texts) override {
    std::vector<providers::Embedding> r;
    for (std::size_t i = 0; i < texts.size(); ++i) r.push_back({out_[i % out_.size()]});
    return r;
  }

 private:
  std::vector<std::vector<double>> out_;
};

}  // namespace

TEST(Cosine, KnownValues) {
  const std::vector<double> a{1, 2, 2}, b{2, 1, 2};
  EXPECT_NEAR(store::cosine_similarity(a, b), 8.0 / 9.0, 1e-12);
  EXPECT_NEAR(store::cosine_similarity(a, a), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(store::cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
}

TEST(Cosine, Errors) {
  EXPECT_THROW(store::cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 2}), store::DimMismatch);
  EXPECT_THROW(store::cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
               store::DegenerateVector);
}

TEST(Cosine, SymmetryScaleInvarianceAndRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lambda(1e-3, 1e3);
  for (int i = 0; i < 500; ++i) {
    const auto a = testsupport::random_vector(rng, 64);
    const auto b = testsupport::random_vector(rng, 64);
    const double ab = store::cosine_similarity(a, b);
    EXPECT_NEAR(ab, store::cosine_similarity(b, a), 1e-12);
    auto scaled = a;
    const double l = lambda(rng);
    for (double& x : scaled) x *= l;
    EXPECT_NEAR(store::cosine_similarity(scaled, b), ab, 1e-9);
    EXPECT_GE(ab, -1.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(RetrieverConfig, Validation) {
  store::RetrieverConfig cfg;
  EXPECT_EQ(cfg.k, 4u);
  EXPECT_DOUBLE_EQ(cfg.score_threshold, 0.5);
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.k = 1;
  cfg.score_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(VectorStore, AddIsIdempotent) {
  providers::MockEmbedder embedder;
  std::vector<ingest::Chunk> chunks;
  for (std::size_t i = 0; i < 12; ++i) chunks.push_back(chunk("d", i, "text number " + std::to_string(i)));
  VectorStore st;
  EXPECT_EQ(st.add_chunks(chunks, embedder), 12u);
  EXPECT_EQ(st.size(), 12u);
  EXPECT_EQ(st.add_chunks(chunks, embedder), 0u);
  EXPECT_EQ(st.size(), 12u);
  EXPECT_EQ(st.dim(), 64u);
  EXPECT_TRUE(st.contains("d", 11));
  EXPECT_THROW(st.add_chunks(std::span<const ingest::Chunk>{}, embedder), std::invalid_argument);
}

TEST(VectorStore, DimensionMismatchRejectedAtomically) {
  VectorStore st;
  ScriptedEmbedder mixed({{1, 0, 0}, {1, 0}});
  std::vector<ingest::Chunk> two{chunk("d", 0), chunk("d", 1)};
  EXPECT_THROW(st.add_chunks(two, mixed), store::DimMismatch);
  EXPECT_TRUE(st.empty());

  ScriptedEmbedder three({{1, 0, 0}});
  st.add_chunks(std::vector<ingest::Chunk>{chunk("d", 0)}, three);
  ScriptedEmbedder two_d({{1, 0}});
  EXPECT_THROW(st.add_chunks(std::vector<ingest::Chunk>{chunk("d", 1)}, two_d), store::DimMismatch);
  EXPECT_THROW(st.search(std::vector<double>{1, 0}), store::DimMismatch);
}

TEST(VectorStore, ZeroVectorRejected) {
  VectorStore st;
  ScriptedEmbedder zero({{0, 0, 0}});
  EXPECT_THROW(st.add_chunks(std::vector<ingest::Chunk>{chunk("d", 0)}, zero), store::DegenerateVector);
  EXPECT_TRUE(st.empty());
}

TEST(VectorStore, EmptyStoreReturnsNothing) {
  VectorStore st;
  providers::MockEmbedder embedder;
  EXPECT_TRUE(st.retrieve("anything", embedder).empty());
}

TEST(VectorStore, SelfQueryRanksFirst) {
  auto st = testsupport::dress_store();
  providers::MockEmbedder embedder;
  for (const auto& e : st->entries()) {
    const auto hits = st->retrieve(e.chunk.text, embedder, {4, 0.0});
    ASSERT_FALSE(hits.empty());
    EXPECT_NEAR(hits.front().score, 1.0, 1e-6);
    // Another chunk may embed identically only if its text does.
    EXPECT_EQ(hits.front().chunk.text, e.chunk.text);
  }
}

TEST(VectorStore, OutOfDomainQueryIsEmptyAtDefaultThreshold) {
  auto st = testsupport::dress_store();
  providers::MockEmbedder embedder;
  EXPECT_TRUE(st->retrieve(testsupport::kBtsQuestion, embedder, {}).empty());
  EXPECT_TRUE(st->retrieve(testsupport::kBtsQuestion, embedder,
                           {4, providers::MockEmbedder::kScoreThreshold}).empty());
}

TEST(VectorStore, InDomainQueryFindsPurposeChunk) {
  auto st = testsupport::dress_store();
  providers::MockEmbedder embedder;
  const auto hits = st->retrieve(testsupport::kDressQuestion, embedder, {4, providers::MockEmbedder::kScoreThreshold});
  ASSERT_FALSE(hits.empty());
  EXPECT_NE(hits.front().chunk.text.find("Dress Code"), std::string::npos);
}

TEST(VectorStore, ThirtyChunkStoreMatchesBruteForce) {
  std::mt19937_64 rng(30);
  auto rs = testsupport::random_store(rng, 30, 16);
  for (int q = 0; q < 50; ++q) {
    const auto query = testsupport::random_vector(rng, 16);
    const store::RetrieverConfig cfg{5, 0.1};
    if (testsupport::decision_margin(rs.oracle, query, cfg.score_threshold) < 1e-9) continue;
    const auto got = rs.store.search(query, cfg);
    const auto want = testsupport::brute_force_retrieve(rs.oracle, query, cfg.k, cfg.score_threshold);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].chunk.doc_id, want[i].doc_id);
      EXPECT_EQ(got[i].chunk.index, want[i].index);
      EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
    }
  }
}

TEST(VectorStoreProperty, RandomStoresMatchBruteForce) {
  std::mt19937_64 rng(4242);
  std::size_t skipped = 0, checked = 0;
  for (int s = 0; s < 50; ++s) {
    auto rs = testsupport::random_store(rng, 1 + rng() % 100, 64);
    for (int q = 0; q < 20; ++q) {
      const auto query = testsupport::random_vector(rng, 64);
      const store::RetrieverConfig cfg{1 + rng() % 10, std::uniform_real_distribution<double>(-0.3, 0.4)(rng)};
      if (testsupport::decision_margin(rs.oracle, query, cfg.score_threshold) < 1e-9) {
        ++skipped;
        continue;
      }
      ++checked;
      const auto got = rs.store.search(query, cfg);
      const auto want = testsupport::brute_force_retrieve(rs.oracle, query, cfg.k, cfg.score_threshold);
      ASSERT_EQ(got.size(), want.size()) << "store " << s << " query " << q;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].chunk.doc_id, want[i].doc_id) << "store " << s << " query " << q << " rank " << i;
        EXPECT_EQ(got[i].chunk.index, want[i].index) << "store " << s << " query " << q << " rank " << i;
      }
    }
  }
  EXPECT_LE(skipped, 10u);
  EXPECT_GE(checked, 990u);
}

TEST(VectorStoreProperty, RaisingThresholdNeverAddsResults) {
  std::mt19937_64 rng(5);
  for (int s = 0; s < 20; ++s) {
    auto rs = testsupport::random_store(rng, 60, 32);
    const auto query = testsupport::random_vector(rng, 32);
    std::vector<std::pair<std::string, std::size_t>> previous;
    bool first = true;
    for (double t = -1.0; t <= 1.0; t += 0.05) {
      std::vector<std::pair<std::string, std::size_t>> ids;
      for (const auto& h : rs.store.search(query, {100, t})) ids.emplace_back(h.chunk.doc_id, h.chunk.index);
      std::sort(ids.begin(), ids.end());
      if (!first) EXPECT_TRUE(std::includes(previous.begin(), previous.end(), ids.begin(), ids.end()));
      previous = ids;
      first = false;
    }
  }
}

TEST(VectorStoreProperty, OrderingIsTotal) {
  std::mt19937_64 rng(6);
  for (int s = 0; s < 20; ++s) {
    auto rs = testsupport::random_store(rng, 80, 8);
    const auto hits = rs.store.search(testsupport::random_vector(rng, 8), {80, -1.0});
    for (std::size_t i = 1; i < hits.size(); ++i) {
      const auto& a = hits[i - 1];
      const auto& b = hits[i];
      const bool ordered = a.score > b.score ||
                           (a.score == b.score && std::tie(a.chunk.doc_id, a.chunk.index) <
                                                      std::tie(b.chunk.doc_id, b.chunk.index));
      EXPECT_TRUE(ordered);
    }
  }
}

TEST(VectorStorePersist, RoundTripPreservesRetrieval) {
  testsupport::TempDir dir;
  providers::MockEmbedder embedder;
  auto st = testsupport::dress_store();
  ASSERT_GE(st->size(), 12u);
  st->persist(dir / "store.json");
  const auto loaded = VectorStore::load(dir / "store.json");
  EXPECT_EQ(loaded.size(), st->size());
  EXPECT_EQ(loaded.dim(), st->dim());
  for (const std::string probe : {std::string(testsupport::kDressQuestion), std::string("shorts in summer"),
                                  std::string("client companies dress code"), std::string("jeans and sneakers"),
                                  std::string(testsupport::kBtsQuestion)}) {
    const auto a = st->retrieve(probe, embedder, {4, 0.0});
    const auto b = loaded.retrieve(probe, embedder, {4, 0.0});
    ASSERT_EQ(a.size(), b.size()) << probe;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].chunk, b[i].chunk) << probe;
      EXPECT_NEAR(a[i].score, b[i].score, 1e-12) << probe;
    }
  }
}

TEST(VectorStorePersist, EmptyStoreRoundTrips) {
  testsupport::TempDir dir;
  VectorStore().persist(dir / "empty.json");
  EXPECT_TRUE(VectorStore::load(dir / "empty.json").empty());
}

TEST(VectorStorePersist, Errors) {
  testsupport::TempDir dir;
  EXPECT_THROW(VectorStore::load(dir / "missing.json"), store::IoError);
  EXPECT_THROW(VectorStore().persist(dir / "no-such-dir" / "x.json"), store::IoError);

  testsupport::dress_store()->persist(dir / "full.json");
  const auto full = testsupport::read_file(dir / "full.json");
  std::ofstream(dir / "truncated.json") << full.substr(0, full.size() / 2);
  EXPECT_THROW(VectorStore::load(dir / "truncated.json"), store::FormatError);

  std::ofstream(dir / "wrong.json") << R"({"dim": 2, "entries": [{"doc_id": "d"}]})";
  EXPECT_THROW(VectorStore::load(dir / "wrong.json"), store::FormatError);
  std::ofstream(dir / "dim.json")
      << R"({"dim": 3, "entries": [{"doc_id":"d","index":0,"text":"t","char_start":0,"char_end":1,"vector":[1,0]}]})";
  EXPECT_THROW(VectorStore::load(dir / "dim.json"), store::FormatError);
  std::ofstream(dir / "zero.json")
      << R"({"dim": 2, "entries": [{"doc_id":"d","index":0,"text":"t","char_start":0,"char_end":1,"vector":[0,0]}]})";
  EXPECT_THROW(VectorStore::load(dir / "zero.json"), store::FormatError);
}
