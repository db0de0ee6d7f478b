#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "agentrag/ingest/document.hpp"
#include "agentrag/ingest/splitter.hpp"
#include "agentrag/providers/mock.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using namespace agentrag;

fs::path data_dir() { return fs::path(AGENTRAG_DATA_DIR); }

fs::path dress_fixture_path() { return data_dir() / "dress_code_standards.txt"; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<store::VectorStore> dress_store() {
  auto st = std::make_shared<store::VectorStore>();
  providers::MockEmbedder embedder;
  const auto chunks = ingest::split(ingest::load_document(dress_fixture_path()), ingest::SplitterConfig{});
  st->add_chunks(chunks, embedder);
  return st;
}

workflow::WorkflowDeps mock_deps(std::shared_ptr<const store::VectorStore> store,
                                 std::shared_ptr<providers::ChatModel> chat) {
  workflow::WorkflowDeps deps;
  deps.chat = chat ? std::move(chat)
                   : std::make_shared<providers::MockChat>(providers::MockChat::default_script());
  deps.embedder = std::make_shared<providers::MockEmbedder>();
  deps.web_search = std::make_shared<providers::MockWebSearch>();
  deps.store = std::move(store);
  return deps;
}

workflow::WorkflowConfig mock_config() {
  workflow::WorkflowConfig cfg;
  cfg.retriever.score_threshold = providers::MockEmbedder::kScoreThreshold;
  return cfg;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("agentrag-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
           std::to_string(rd()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace testsupport
