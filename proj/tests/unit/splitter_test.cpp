#include <random>

#include <gtest/gtest.h>

#include "agentrag/ingest/splitter.hpp"
#include "agentrag/ingest/utf8.hpp"
#include "fixtures.hpp"
#include "random_inputs.hpp"
#include "reference_splitter.hpp"

using namespace agentrag::ingest;

namespace {

std::vector<std::u32string> u32_separators(const SplitterConfig& cfg) {
  std::vector<std::u32string> out;
  for (const auto& s : cfg.separators) out.push_back(testsupport::to_u32(s));
  return out;
}

void expect_properties(const std::string& text, const std::vector<Chunk>& chunks, const SplitterConfig& cfg,
                       const std::string& ctx) {
  const auto cps = utf8::decode(text);
  std::vector<bool> covered(cps.size(), false);
  std::size_t prev_start = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto& c = chunks[i];
    const auto body = utf8::decode(c.text);
    EXPECT_LE(body.size(), cfg.chunk_size) << ctx;
    ASSERT_LE(c.char_end, cps.size()) << ctx;
    EXPECT_EQ(cps.substr(c.char_start, c.char_end - c.char_start), body) << ctx << " chunk " << i;
    EXPECT_FALSE(body.empty()) << ctx;
    EXPECT_EQ(c.index, i);
    if (i > 0) EXPECT_GT(c.char_start, prev_start) << ctx;
    prev_start = c.char_start;
    for (std::size_t p = c.char_start; p < c.char_end; ++p) covered[p] = true;
  }
  for (std::size_t p = 0; p < cps.size(); ++p)
    if (!utf8::is_space(cps[p])) EXPECT_TRUE(covered[p]) << ctx << " position " << p;
}

void expect_matches_reference(const std::string& text, const std::vector<Chunk>& chunks,
                              const SplitterConfig& cfg, const std::string& ctx) {
  const auto ref = testsupport::reference_split(testsupport::to_u32(text), cfg.chunk_size, cfg.chunk_overlap,
                                                u32_separators(cfg));
  ASSERT_EQ(chunks.size(), ref.size()) << ctx;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(chunks[i].text, testsupport::to_utf8(ref[i].text)) << ctx << " chunk " << i;
    EXPECT_EQ(chunks[i].char_start, ref[i].start) << ctx << " chunk " << i;
  }
}

}  // namespace

TEST(SplitterConfig, Validation) {
  SplitterConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.chunk_overlap = cfg.chunk_size;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.chunk_size = 0;
  cfg.chunk_overlap = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.separators = {"\n", " "};
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(split_text("abc", cfg), ConfigError);
}

TEST(Splitter, ShortTextIsOneChunk) {
  const auto chunks = split_text("0123456789", SplitterConfig{}, "d");
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].text, "0123456789");
  EXPECT_EQ(chunks[0].doc_id, "d");
  EXPECT_EQ(chunks[0].char_start, 0u);
  EXPECT_EQ(chunks[0].char_end, 10u);
}

TEST(Splitter, EmptyAndBlankTextGiveNoChunks) {
  EXPECT_TRUE(split_text("", SplitterConfig{}).empty());
  EXPECT_TRUE(split_text(" \n\n \t", SplitterConfig{}).empty());
}

TEST(Splitter, OffsetsCountCodePoints) {
  SplitterConfig cfg;
  cfg.chunk_size = 4;
  cfg.chunk_overlap = 0;
  const auto chunks = split_text("\xEC\x84\x9C\xEC\x9A\xB8 abc", cfg);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "\xEC\x84\x9C\xEC\x9A\xB8");
  EXPECT_EQ(chunks[1].char_start, 3u);
  EXPECT_EQ(chunks[1].char_end, 6u);
}

TEST(Splitter, OverlapCarriesTrailingWords) {
  SplitterConfig cfg;
  cfg.chunk_size = 10;
  cfg.chunk_overlap = 4;
  const auto chunks = split_text("aaa bbb ccc ddd", cfg);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].text, "aaa bbb");
  EXPECT_EQ(chunks[1].text, "bbb ccc");
  EXPECT_EQ(chunks[2].text, "ccc ddd");
  EXPECT_EQ(chunks[1].char_start, 4u);
}

TEST(Splitter, FixtureAtDefaultSize) {
  const auto doc = load_document(testsupport::dress_fixture_path());
  const SplitterConfig cfg;
  const auto chunks = split(doc, cfg);
  ASSERT_GT(chunks.size(), 1u);
  expect_properties(doc.text, chunks, cfg, "fixture");
  expect_matches_reference(doc.text, chunks, cfg, "fixture");
  bool found = false;
  for (const auto& c : chunks)
    found = found || (c.text.find("2. Considerations for Dress Selection") != std::string::npos &&
                      c.text.find("professionalism and decorum") != std::string::npos);
  EXPECT_TRUE(found);
  for (const auto& c : chunks) EXPECT_EQ(c.doc_id, "dress_code_standards");
}

TEST(SplitterProperty, RandomTextsMatchReference) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 200; ++i) {
    const auto text = testsupport::random_text(rng, 2000);
    const SplitterConfig cfg;
    const auto chunks = split_text(text, cfg, "r");
    const auto ctx = "text " + std::to_string(i);
    expect_properties(text, chunks, cfg, ctx);
    expect_matches_reference(text, chunks, cfg, ctx);
  }
}

TEST(SplitterProperty, RandomSizesMatchReference) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    SplitterConfig cfg;
    cfg.chunk_size = 1 + rng() % 60;
    cfg.chunk_overlap = rng() % cfg.chunk_size;
    const auto text = testsupport::random_text(rng, 400);
    const auto chunks = split_text(text, cfg);
    const auto ctx = "case " + std::to_string(i) + " size " + std::to_string(cfg.chunk_size) + " overlap " +
                     std::to_string(cfg.chunk_overlap);
    expect_properties(text, chunks, cfg, ctx);
    expect_matches_reference(text, chunks, cfg, ctx);
  }
}

TEST(SplitterProperty, ZeroOverlapGivesDisjointSpans) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    SplitterConfig cfg;
    cfg.chunk_size = 5 + rng() % 100;
    cfg.chunk_overlap = 0;
    const auto chunks = split_text(testsupport::random_text(rng, 800), cfg);
    for (std::size_t k = 1; k < chunks.size(); ++k)
      EXPECT_LE(chunks[k - 1].char_end, chunks[k].char_start) << "case " << i;
  }
}

TEST(SplitterProperty, Deterministic) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto text = testsupport::random_text(rng, 1500);
    EXPECT_EQ(split_text(text, SplitterConfig{}), split_text(text, SplitterConfig{}));
  }
}
