#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agentrag/ingest/splitter.hpp"
#include "agentrag/providers/interfaces.hpp"

namespace agentrag::store {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimMismatch : public StoreError {
 public:
  using StoreError::StoreError;
};
class DegenerateVector : public StoreError {
 public:
  using StoreError::StoreError;
};
class IoError : public StoreError {
 public:
  using StoreError::StoreError;
};
class FormatError : public StoreError {
 public:
  using StoreError::StoreError;
};

/// (a·b) / (|a||b|). Throws DimMismatch or DegenerateVector (zero vector).
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ScoredChunk {
  ingest::Chunk chunk;
  double score = 0;
};

struct RetrieverConfig {
  std::size_t k = 4;
  double score_threshold = 0.5;

  void validate() const;
};

/// Brute-force in-memory index. Vectors are unit-normalized on insert, so a
/// score is the dot product with the normalized query. Concurrent reads are
/// safe; mutation needs exclusive access.
class VectorStore {
 public:
  struct Entry {
    ingest::Chunk chunk;
    std::vector<double> vector;
  };

  /// Embeds and stores chunks not yet present (keyed by doc_id, index).
  /// Returns how many were added.
  std::size_t add_chunks(std::span<const ingest::Chunk> chunks, providers::Embedder& embedder);

  /// Stores pre-computed vectors. Same idempotence and checks as add_chunks.
  std::size_t add_embedded(std::span<const ingest::Chunk> chunks,
                           std::span<const providers::Embedding> vectors);

  /// Up to k chunks scoring at least the threshold, by score descending then
  /// (doc_id, index) ascending. Empty when nothing passes.
  std::vector<ScoredChunk> retrieve(const std::string& query, providers::Embedder& embedder,
                                    const RetrieverConfig& cfg = {}) const;
  std::vector<ScoredChunk> search(std::span<const double> query, const RetrieverConfig& cfg = {}) const;

  /// JSON: {dim, entries:[{doc_id,index,text,char_start,char_end,vector}]}.
  void persist(const std::filesystem::path& path) const;
  static VectorStore load(const std::filesystem::path& path);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<std::size_t> dim() const { return dim_; }
  bool contains(std::string_view doc_id, std::size_t index) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::optional<std::size_t> dim_;
  std::vector<Entry> entries_;
  std::set<std::pair<std::string, std::size_t>, std::less<>> keys_;
};

}  // namespace agentrag::store
