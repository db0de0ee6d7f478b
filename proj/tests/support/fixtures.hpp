#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "agentrag/providers/interfaces.hpp"
#include "agentrag/store/vector_store.hpp"
#include "agentrag/workflow/crag.hpp"

namespace testsupport {

inline constexpr const char* kDressQuestion = "What are some considerations for dress selection for work?";
inline constexpr const char* kBtsQuestion = "Tell me what is the capital of the country where BTS is located";

std::filesystem::path data_dir();
std::filesystem::path dress_fixture_path();
std::string read_file(const std::filesystem::path& path);

/// The dress-code fixture split at (300, 30) and embedded with the mock.
std::shared_ptr<agentrag::store::VectorStore> dress_store();

/// Mock chat (with the default script), mock embedder and mock search over
/// `store`. Pass a chat model to replace the mock one.
agentrag::workflow::WorkflowDeps mock_deps(std::shared_ptr<const agentrag::store::VectorStore> store,
                                           std::shared_ptr<agentrag::providers::ChatModel> chat = nullptr);

/// Default caps with the mock-mode retrieval threshold.
agentrag::workflow::WorkflowConfig mock_config();

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
