#include "agentrag/store/vector_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace agentrag::store {

namespace {

double norm(std::span<const double> v) {
  double sum = 0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

std::vector<double> normalized(std::span<const double> v) {
  const double n = norm(v);
  if (n == 0 || !std::isfinite(n)) throw DegenerateVector("cannot normalize a zero or non-finite vector");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

bool ranks_before(const ScoredChunk& a, const ScoredChunk& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.chunk.doc_id != b.chunk.doc_id) return a.chunk.doc_id < b.chunk.doc_id;
  return a.chunk.index < b.chunk.index;
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimMismatch("dimension " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0 || nb == 0) throw DegenerateVector("cosine similarity of a zero vector");
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

void RetrieverConfig::validate() const {
  if (k < 1) throw std::invalid_argument("retriever k must be at least 1");
  if (!(score_threshold >= -1.0 && score_threshold <= 1.0))
    throw std::invalid_argument("score_threshold must lie in [-1, 1]");
}

bool VectorStore::contains(std::string_view doc_id, std::size_t index) const {
  return keys_.count(std::pair<std::string, std::size_t>(doc_id, index)) > 0;
}

std::size_t VectorStore::add_embedded(std::span<const ingest::Chunk> chunks,
                                      std::span<const providers::Embedding> vectors) {
  if (chunks.size() != vectors.size())
    throw std::invalid_argument("chunk and vector counts differ");

  // Validate the whole batch before mutating anything.
  std::optional<std::size_t> dim = dim_;
  std::vector<std::vector<double>> unit;
  unit.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.dim() == 0) throw DimMismatch("embedding has dimension 0");
    if (!dim) dim = v.dim();
    if (v.dim() != *dim)
      throw DimMismatch("embedding dimension " + std::to_string(v.dim()) + " does not match " +
                        std::to_string(*dim));
    unit.push_back(normalized(v.values));
  }

  std::size_t added = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    auto key = std::make_pair(chunks[i].doc_id, chunks[i].index);
    if (!keys_.insert(key).second) continue;
    entries_.push_back(Entry{chunks[i], std::move(unit[i])});
    ++added;
  }
  dim_ = dim;
  return added;
}

std::size_t VectorStore::add_chunks(std::span<const ingest::Chunk> chunks,
                                    providers::Embedder& embedder) {
  if (chunks.empty()) throw std::invalid_argument("add_chunks needs at least one chunk");

  std::vector<ingest::Chunk> fresh;
  std::set<std::pair<std::string, std::size_t>> batch_keys;
  for (const auto& chunk : chunks) {
    if (contains(chunk.doc_id, chunk.index)) continue;
    if (!batch_keys.emplace(chunk.doc_id, chunk.index).second) continue;
    fresh.push_back(chunk);
  }
  if (fresh.empty()) return 0;

  std::vector<std::string> texts;
  texts.reserve(fresh.size());
  for (const auto& chunk : fresh) texts.push_back(chunk.text);
  const auto vectors = embedder.embed(texts);
  if (vectors.size() != fresh.size())
    throw DimMismatch("embedder returned " + std::to_string(vectors.size()) + " vectors for " +
                      std::to_string(fresh.size()) + " texts");
  return add_embedded(fresh, vectors);
}

std::vector<ScoredChunk> VectorStore::search(std::span<const double> query,
                                             const RetrieverConfig& cfg) const {
  cfg.validate();
  if (entries_.empty()) return {};
  if (query.size() != *dim_)
    throw DimMismatch("query dimension " + std::to_string(query.size()) + " does not match store " +
                      std::to_string(*dim_));
  const auto q = normalized(query);

  std::vector<ScoredChunk> hits;
  for (const auto& entry : entries_) {
    double dot = 0;
    for (std::size_t i = 0; i < q.size(); ++i) dot += q[i] * entry.vector[i];
    dot = std::clamp(dot, -1.0, 1.0);
    if (dot >= cfg.score_threshold) hits.push_back(ScoredChunk{entry.chunk, dot});
  }
  const std::size_t keep = std::min(cfg.k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                    ranks_before);
  hits.resize(keep);
  return hits;
}

std::vector<ScoredChunk> VectorStore::retrieve(const std::string& query,
                                               providers::Embedder& embedder,
                                               const RetrieverConfig& cfg) const {
  cfg.validate();
  if (entries_.empty()) return {};
  const auto q = embedder.embed_one(query);
  return search(q.values, cfg);
}

void VectorStore::persist(const std::filesystem::path& path) const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    entries.push_back({{"doc_id", e.chunk.doc_id},
                       {"index", e.chunk.index},
                       {"text", e.chunk.text},
                       {"char_start", e.chunk.char_start},
                       {"char_end", e.chunk.char_end},
                       {"vector", e.vector}});
  }
  const nlohmann::json doc{{"dim", dim_ ? nlohmann::json(*dim_) : nlohmann::json(nullptr)},
                           {"entries", std::move(entries)}};

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write store file: " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw IoError("failed writing store file: " + path.string());
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read store file: " + path.string());

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": not a valid store file (" + e.what() + ")");
  }

  VectorStore store;
  try {
    std::vector<ingest::Chunk> chunks;
    std::vector<providers::Embedding> vectors;
    for (const auto& e : doc.at("entries")) {
      ingest::Chunk chunk;
      chunk.doc_id = e.at("doc_id").get<std::string>();
      chunk.index = e.at("index").get<std::size_t>();
      chunk.text = e.at("text").get<std::string>();
      chunk.char_start = e.at("char_start").get<std::size_t>();
      chunk.char_end = e.at("char_end").get<std::size_t>();
      chunks.push_back(std::move(chunk));
      vectors.push_back(providers::Embedding{e.at("vector").get<std::vector<double>>()});
    }
    const auto& dim = doc.at("dim");
    if (!chunks.empty()) {
      store.add_embedded(chunks, vectors);
      if (store.size() != chunks.size()) throw FormatError("duplicate (doc_id, index) entries");
      if (dim.get<std::size_t>() != *store.dim_) throw FormatError("dim field disagrees with vectors");
    } else if (!dim.is_null()) {
      store.dim_ = dim.get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": malformed store (" + e.what() + ")");
  } catch (const DimMismatch& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DegenerateVector& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return store;
}

}  // namespace agentrag::store
