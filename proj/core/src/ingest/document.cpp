#include "agentrag/ingest/document.hpp"

#include <fstream>
#include <iterator>

#include "agentrag/ingest/utf8.hpp"

namespace agentrag::ingest {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

}  // namespace

Document load_document(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw NotFound("no such file: " + path.string());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open: " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  if (std::string_view(bytes).substr(0, kBom.size()) == kBom) bytes.erase(0, kBom.size());
  try {
    utf8::validate(bytes);
  } catch (const EncodingError& e) {
    throw EncodingError(path.string() + ": " + e.what());
  }

  Document doc;
  doc.id = path.stem().string();
  doc.source = path.string();
  doc.text = std::move(bytes);
  doc.metadata["title"] = doc.id;
  doc.metadata["origin"] = "file";
  return doc;
}

Document make_document(std::string id, std::string text, std::string source) {
  utf8::validate(text);
  Document doc;
  doc.metadata["title"] = id;
  doc.metadata["origin"] = "memory";
  doc.id = std::move(id);
  doc.source = std::move(source);
  doc.text = std::move(text);
  return doc;
}

}  // namespace agentrag::ingest
