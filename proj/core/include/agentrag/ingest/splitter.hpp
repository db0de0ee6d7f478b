#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "agentrag/ingest/document.hpp"

namespace agentrag::ingest {

/// Sizes are in Unicode code points.
struct SplitterConfig {
  std::size_t chunk_size = 300;
  std::size_t chunk_overlap = 30;
  std::vector<std::string> separators{"\n\n", "\n", " ", ""};

  /// Throws ConfigError unless 0 <= overlap < size, size > 0 and the
  /// separator list ends with "".
  void validate() const;
};

/// A contiguous slice of a document. `char_start`/`char_end` are code point
/// offsets into the source text, half-open.
struct Chunk {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Recursive separator splitting.
///
/// The text is cut on the first separator that occurs in it (the separator
/// stays attached to the front of the following piece). Pieces shorter than
/// chunk_size are merged greedily left to right; a merged chunk is flushed
/// once the next piece would overflow, and the tail of the flushed chunk (at
/// most chunk_overlap code points, whole pieces only) seeds the next one.
/// Pieces that are still too long are split again with the remaining
/// separators. Chunks are whitespace-trimmed and empty chunks dropped. A
/// chunk that starts where its successor starts is a prefix of it and is
/// dropped too, so starts are strictly increasing.
std::vector<Chunk> split_text(std::string_view text, const SplitterConfig& cfg,
                              std::string_view doc_id = {});

std::vector<Chunk> split(const Document& doc, const SplitterConfig& cfg);

}  // namespace agentrag::ingest
