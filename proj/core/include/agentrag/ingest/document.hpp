#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace agentrag::ingest {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotFound : public IngestError {
 public:
  using IngestError::IngestError;
};
class EncodingError : public IngestError {
 public:
  using IngestError::IngestError;
};
class ConfigError : public IngestError {
 public:
  using IngestError::IngestError;
};

struct Document {
  std::string id;
  std::string source;
  std::string text;
  std::map<std::string, std::string> metadata;

  bool indexable() const { return !text.empty(); }
};

/// Reads a UTF-8 text or markdown file. A leading byte-order mark is
/// stripped; `id` and metadata "title" are the file stem.
Document load_document(const std::filesystem::path& path);

/// Builds a document from in-memory text (validated as UTF-8).
Document make_document(std::string id, std::string text, std::string source = {});

}  // namespace agentrag::ingest
