#include "agentrag/ingest/splitter.hpp"

#include <algorithm>
#include <deque>
#include <span>

#include "agentrag/ingest/utf8.hpp"

namespace agentrag::ingest {

namespace {

struct Span {
  std::size_t start;
  std::size_t end;
  std::size_t size() const { return end - start; }
};

class RecursiveSplitter {
 public:
  RecursiveSplitter(std::u32string_view text, const SplitterConfig& cfg,
                    std::vector<std::u32string> separators)
      : text_(text), cfg_(cfg), separators_(std::move(separators)) {}

  std::vector<Span> run() {
    std::vector<Span> out;
    split(Span{0, text_.size()}, 0, out);
    return out;
  }

 private:
  bool occurs(Span span, const std::u32string& sep) const {
    return text_.substr(span.start, span.size()).find(sep) != std::u32string_view::npos;
  }

  // Cuts before every non-overlapping occurrence of sep; empty pieces vanish.
  std::vector<Span> cut(Span span, const std::u32string& sep) const {
    std::vector<Span> pieces;
    if (sep.empty()) {
      for (std::size_t i = span.start; i < span.end; ++i) pieces.push_back(Span{i, i + 1});
      return pieces;
    }
    const auto view = text_.substr(span.start, span.size());
    std::size_t piece_start = 0;
    std::size_t pos = view.find(sep);
    while (pos != std::u32string_view::npos) {
      if (pos > piece_start) pieces.push_back(Span{span.start + piece_start, span.start + pos});
      piece_start = pos;
      pos = view.find(sep, pos + sep.size());
    }
    if (view.size() > piece_start)
      pieces.push_back(Span{span.start + piece_start, span.start + view.size()});
    return pieces;
  }

  void split(Span span, std::size_t first_separator, std::vector<Span>& out) const {
    std::size_t chosen = separators_.size() - 1;
    for (std::size_t i = first_separator; i < separators_.size(); ++i) {
      if (separators_[i].empty() || occurs(span, separators_[i])) {
        chosen = i;
        break;
      }
    }
    const bool can_recurse = chosen + 1 < separators_.size();

    std::vector<Span> small;
    for (const Span& piece : cut(span, separators_[chosen])) {
      if (piece.size() < cfg_.chunk_size) {
        small.push_back(piece);
        continue;
      }
      merge(small, out);
      small.clear();
      if (can_recurse)
        split(piece, chosen + 1, out);
      else
        emit(piece, out);
    }
    merge(small, out);
  }

  void merge(std::span<const Span> pieces, std::vector<Span>& out) const {
    std::deque<Span> current;
    std::size_t total = 0;
    for (const Span& piece : pieces) {
      const std::size_t len = piece.size();
      if (total + len > cfg_.chunk_size) {
        if (!current.empty()) {
          emit(Span{current.front().start, current.back().end}, out);
          while (total > cfg_.chunk_overlap || (total > 0 && total + len > cfg_.chunk_size)) {
            total -= current.front().size();
            current.pop_front();
          }
        }
      }
      current.push_back(piece);
      total += len;
    }
    if (!current.empty()) emit(Span{current.front().start, current.back().end}, out);
  }

  void emit(Span span, std::vector<Span>& out) const {
    while (span.start < span.end && utf8::is_space(text_[span.start])) ++span.start;
    while (span.end > span.start && utf8::is_space(text_[span.end - 1])) --span.end;
    if (span.size() == 0) return;
    // Same start: one chunk is a prefix of the other; keep the longer.
    if (!out.empty() && out.back().start == span.start)
      out.back().end = std::max(out.back().end, span.end);
    else
      out.push_back(span);
  }

  std::u32string_view text_;
  const SplitterConfig& cfg_;
  std::vector<std::u32string> separators_;
};

}  // namespace

void SplitterConfig::validate() const {
  if (chunk_size == 0) throw ConfigError("chunk_size must be positive");
  if (chunk_overlap >= chunk_size)
    throw ConfigError("chunk_overlap (" + std::to_string(chunk_overlap) +
                      ") must be smaller than chunk_size (" + std::to_string(chunk_size) + ")");
  if (separators.empty() || !separators.back().empty())
    throw ConfigError("separator list must end with the empty separator");
}

std::vector<Chunk> split_text(std::string_view text, const SplitterConfig& cfg,
                              std::string_view doc_id) {
  cfg.validate();
  std::vector<std::u32string> separators;
  separators.reserve(cfg.separators.size());
  for (const auto& sep : cfg.separators) separators.push_back(utf8::decode(sep));

  const std::u32string decoded = utf8::decode(text);
  RecursiveSplitter splitter(decoded, cfg, std::move(separators));

  std::vector<Chunk> chunks;
  for (const auto& span : splitter.run()) {
    Chunk chunk;
    chunk.doc_id = std::string(doc_id);
    chunk.index = chunks.size();
    chunk.text = utf8::encode(std::u32string_view(decoded).substr(span.start, span.size()));
    chunk.char_start = span.start;
    chunk.char_end = span.end;
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

std::vector<Chunk> split(const Document& doc, const SplitterConfig& cfg) {
  return split_text(doc.text, cfg, doc.id);
}

}  // namespace agentrag::ingest
