#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "agentrag/graph/trace.hpp"
#include "app.hpp"
#include "dot_parser.hpp"
#include "fixtures.hpp"

using agentrag::cli::run;
using Seq = std::vector<std::string>;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "agentrag");
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(f, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = (dir_ / "store.json").string();
    const auto r = cli({"--store", store_, "index", testsupport::dress_fixture_path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  testsupport::TempDir dir_;
  std::string store_;
};

}  // namespace

TEST_F(CliTest, IndexSummaryAndIdempotence) {
  auto r = cli({"--store", store_, "index", testsupport::dress_fixture_path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(0 new)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("dim 64"), std::string::npos);
}

TEST_F(CliTest, IndexUsageErrors) {
  EXPECT_EQ(cli({"--store", store_, "index"}).code, 2);
  EXPECT_EQ(cli({"--store", store_, "index", "--chunk-size", "10", "--chunk-overlap", "10",
                 testsupport::dress_fixture_path().string()})
                .code,
            2);
  EXPECT_EQ(cli({"--store", store_, "index", (dir_ / "missing.txt").string()}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
}

TEST_F(CliTest, AskLocalScenarioWithTrace) {
  const auto trace = dir_ / "trace.jsonl";
  const auto r = cli({"--store", store_, "ask", "--trace", trace.string(), testsupport::kDressQuestion});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("---Search in VectorDB---"), std::string::npos);
  EXPECT_NE(r.out.find(" First question : " + std::string(testsupport::kDressQuestion)), std::string::npos);
  EXPECT_NE(r.out.find(" Rewritten question : "), std::string::npos);
  EXPECT_NE(r.out.find("Verdict: useful"), std::string::npos);

  Seq entered;
  for (const auto& j : read_jsonl(trace)) {
    const auto e = agentrag::graph::trace_event_from_json(j);
    if (e.kind == agentrag::graph::EventKind::node_enter) entered.push_back(*e.node);
  }
  EXPECT_EQ(entered, (Seq{"retrieve", "grade_documents", "generate_answer"}));
}

TEST_F(CliTest, AskWebScenarioJson) {
  const auto trace = dir_ / "trace.jsonl";
  const auto r = cli({"--store", store_, "ask", "--json", "--trace", trace.string(), testsupport::kBtsQuestion});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["first_question"], testsupport::kBtsQuestion);
  EXPECT_EQ(j["web_search_add"], "yes");
  EXPECT_NE(j["generation"].get<std::string>().find("Seoul"), std::string::npos);
  const auto nodes = j["nodes"].get<Seq>();
  EXPECT_NE(std::find(nodes.begin(), nodes.end(), "web_search"), nodes.end());
  EXPECT_FALSE(read_jsonl(trace).empty());
}

TEST_F(CliTest, TraceAppendsAcrossRuns) {
  const auto trace = dir_ / "trace.jsonl";
  cli({"--store", store_, "ask", "--trace", trace.string(), testsupport::kDressQuestion});
  const auto first = read_jsonl(trace).size();
  cli({"--store", store_, "ask", "--trace", trace.string(), testsupport::kDressQuestion});
  EXPECT_EQ(read_jsonl(trace).size(), 2 * first);
}

TEST_F(CliTest, MissingStoreExits3) {
  const auto r = cli({"--store", (dir_ / "nothing.json").string(), "ask", "anything"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("index"), std::string::npos);
}

TEST_F(CliTest, LiveWithoutKeyExits4) {
  const char* saved = std::getenv("LLM_API_KEY");
  const std::string keep = saved ? saved : "";
  ::unsetenv("LLM_API_KEY");
  const auto r = cli({"--live", "--env-file", (dir_ / "absent.env").string(), "--store", store_, "ask", "q"});
  if (saved) ::setenv("LLM_API_KEY", keep.c_str(), 1);
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("LLM_API_KEY"), std::string::npos);
}

TEST_F(CliTest, BadOptionValuesExit2) {
  EXPECT_EQ(cli({"--store", store_, "ask", "--k", "0", "q"}).code, 2);
  EXPECT_EQ(cli({"--store", store_, "ask", "--web-results", "0", "q"}).code, 2);
  EXPECT_EQ(cli({"--store", store_, "ask", "   "}).code, 2);
}

TEST_F(CliTest, ReplAnswersUntilQuit) {
  const auto trace = dir_ / "trace.jsonl";
  const std::string input =
      std::string(testsupport::kDressQuestion) + "\n\n   \n" + testsupport::kBtsQuestion + "\nquit\nnever asked\n";
  const auto r = cli({"--store", store_, "repl", "--trace", trace.string()}, input);
  ASSERT_EQ(r.code, 0) << r.err;
  std::set<std::string> run_ids;
  std::size_t starts = 0;
  for (const auto& j : read_jsonl(trace)) {
    run_ids.insert(j["run_id"].get<std::string>());
    starts += j["kind"] == "run_start";
  }
  EXPECT_EQ(starts, 2u);
  EXPECT_EQ(run_ids.size(), 2u);
  EXPECT_EQ(r.out.find("never asked"), std::string::npos);
}

TEST_F(CliTest, ReplEndsAtEof) {
  const auto r = cli({"--store", store_, "repl"}, "");
  EXPECT_EQ(r.code, 0);
}

TEST(CliGraph, StableParseableDot) {
  const auto a = cli({"graph"});
  const auto b = cli({"graph"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto dot = testsupport::parse_dot(a.out);
  EXPECT_TRUE(dot.directed);
  EXPECT_EQ(dot.name, "workflow");
  EXPECT_EQ(dot.nodes.size(), 6u);
  EXPECT_TRUE(dot.has_edge("retrieve", "grade_documents"));
  EXPECT_TRUE(dot.has_edge("generate_answer", "END"));
}

TEST(CliGraph, HelpAndUsage) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, 2);
}
