#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "cli.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/linearize.hpp"
#include "support.hpp"

using namespace riddleforge;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "riddleforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliPipeline : public ::testing::Test {
 protected:
  rftest::TempDir dir;
  std::string snap = dir.file("g.snap");
  std::string riddles = dir.file("riddles.jsonl");

  void ingest() {
    const auto r = invoke({"ingest", "--assertions", rftest::fixture("corpus/assertions.tsv").string(),
                        "--out", snap});
    ASSERT_EQ(r.code, 0) << r.err;
  }
};

}  // namespace

TEST_F(CliPipeline, IngestThenAugment) {
  ingest();
  const auto r = invoke({"augment", "--graph", snap, "--manifest",
                      rftest::fixture("ten_images.jsonl").string(), "--out", riddles});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("riddles"), std::string::npos);
  auto lines = open_lines(riddles);
  std::string line;
  std::size_t n = 0;
  while (lines->next_line(line)) {
    const Riddle riddle = riddle_from_json(line);
    EXPECT_EQ(count_substitution_tokens(riddle.text), 1u);
    ++n;
  }
  EXPECT_GT(n, 0u);

  const auto manifest = nlohmann::json::parse(read_file(riddles + ".manifest.json"));
  EXPECT_EQ(manifest.at("subcommand"), "augment");
  EXPECT_EQ(manifest.at("outputs").at(riddles), sha256_file(riddles));
  EXPECT_EQ(manifest.at("inputs").at(snap), sha256_file(snap));
  EXPECT_EQ(manifest.at("flags").at("tau"), "0.5");
  EXPECT_TRUE(manifest.contains("started_at"));
}

TEST_F(CliPipeline, RefusesToOverwrite) {
  ingest();
  const auto again = invoke({"ingest", "--assertions",
                          rftest::fixture("corpus/assertions.tsv").string(), "--out", snap});
  EXPECT_EQ(again.code, 1);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  const auto forced = invoke({"ingest", "--assertions",
                           rftest::fixture("corpus/assertions.tsv").string(), "--out", snap,
                           "--force"});
  EXPECT_EQ(forced.code, 0) << forced.err;
}

TEST_F(CliPipeline, RerunsAreByteIdentical) {
  ingest();
  const std::string manifest = rftest::fixture("corpus/captions.jsonl").string();
  std::vector<std::string> digests;
  for (const char* workers : {"1", "3"}) {
    const std::string out = dir.file(std::string("b") + workers + ".json");
    const std::string hold = dir.file(std::string("h") + workers + ".json");
    const auto r = invoke({"benchmark", "--graph", snap, "--manifest", manifest, "--out", out,
                        "--holdout-out", hold, "--image-fraction", "0.3", "--max-queries", "20",
                        "--seed", "11", "--workers", workers});
    ASSERT_EQ(r.code, 0) << r.err;
    digests.push_back(sha256_file(out) + sha256_file(hold));
    const std::string aug = dir.file(std::string("r") + workers + ".jsonl");
    const auto a = invoke({"augment", "--graph", snap, "--manifest", manifest, "--holdout", hold,
                        "--out", aug, "--workers", workers});
    ASSERT_EQ(a.code, 0) << a.err;
    digests.push_back(sha256_file(aug));
  }
  EXPECT_EQ(digests[0], digests[2]);
  EXPECT_EQ(digests[1], digests[3]);
}

TEST_F(CliPipeline, SeedFromEnvironment) {
  ingest();
  const std::string manifest = rftest::fixture("corpus/captions.jsonl").string();
  ::setenv("RIDDLEFORGE_SEED", "11", 1);
  const auto a = invoke({"benchmark", "--graph", snap, "--manifest", manifest, "--out",
                      dir.file("env.json"), "--holdout-out", dir.file("envh.json"),
                      "--image-fraction", "0.3", "--max-queries", "5"});
  ::unsetenv("RIDDLEFORGE_SEED");
  const auto b = invoke({"benchmark", "--graph", snap, "--manifest", manifest, "--out",
                      dir.file("flag.json"), "--holdout-out", dir.file("flagh.json"),
                      "--image-fraction", "0.3", "--max-queries", "5", "--seed", "11"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_file(dir.file("env.json")), read_file(dir.file("flag.json")));
}

TEST_F(CliPipeline, HoldoutForAnotherGraphIsRejected) {
  ingest();
  const auto small = dir.file("small.snap");
  ASSERT_EQ(invoke({"ingest", "--assertions", rftest::fixture("lemon_graph.tsv").string(), "--out",
                 small}).code,
            0);
  const std::string manifest = rftest::fixture("corpus/captions.jsonl").string();
  ASSERT_EQ(invoke({"benchmark", "--graph", snap, "--manifest", manifest, "--out", dir.file("b.json"),
                 "--holdout-out", dir.file("h.json"), "--image-fraction", "0.3",
                 "--max-queries", "5"}).code,
            0);
  const auto r = invoke({"augment", "--graph", small, "--manifest", manifest, "--holdout",
                      dir.file("h.json"), "--out", riddles});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("different graph"), std::string::npos);
}

TEST(Cli, EvalPrintsTable) {
  const auto r = invoke({"eval", "--benchmark", rftest::fixture("eval/tiny_benchmark.json").string(),
                      "--scores", rftest::fixture("eval/tiny_scores.csv").string(), "--model",
                      "fixture"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fixture"), std::string::npos);
  EXPECT_NE(r.out.find("0.7500"), std::string::npos);
  EXPECT_NE(r.err.find("tie-break"), std::string::npos);
}

TEST(Cli, EvalMissingPairExitsOne) {
  rftest::TempDir dir;
  std::string scores = read_file(rftest::fixture("eval/tiny_scores.csv"));
  const std::string drop = "text_image_unseen:e3-h,img4,0.5\n";
  scores.erase(scores.find(drop), drop.size());
  write_file(dir.file("s.csv"), scores);
  const auto r = invoke({"eval", "--benchmark", rftest::fixture("eval/tiny_benchmark.json").string(),
                      "--scores", dir.file("s.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("text_image_unseen:e3-h"), std::string::npos);
  EXPECT_NE(r.err.find("img4"), std::string::npos);
}

TEST(Cli, EvalWritesReport) {
  rftest::TempDir dir;
  const auto r = invoke({"eval", "--benchmark", rftest::fixture("eval/tiny_benchmark.json").string(),
                      "--scores", rftest::fixture("eval/tiny_scores.csv").string(), "--out",
                      dir.file("report.json"), "--tie-break", "positives-last"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(dir.file("report.json")));
  EXPECT_NEAR(j.at("splits")[1].at("accuracy").get<double>(), 1.0 / 3.0, 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  const auto missing = invoke({"augment", "--graph", "x"});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_NE(missing.err.find("--manifest"), std::string::npos);
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("benchmark"), std::string::npos);
  EXPECT_EQ(invoke({"stats", "--corpus", "x", "--mode", "verbs"}).code, cli::kExitUsage);
}

TEST(Cli, MissingInputIsIoError) {
  rftest::TempDir dir;
  const auto r = invoke({"ingest", "--assertions", "/nonexistent/a.tsv", "--out", dir.file("g")});
  EXPECT_EQ(r.code, cli::kExitIo);
}

TEST(Cli, StatsToStdout) {
  const auto r = invoke({"stats", "--corpus", rftest::fixture("corpus/captions.jsonl").string(),
                      "--mode", "lengths"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("mode"), "lengths");
  EXPECT_GT(j.at("mean").get<double>(), 3.0);
}

TEST(Cli, MixStream) {
  rftest::TempDir dir;
  const auto g = dir.file("g.snap");
  ASSERT_EQ(invoke({"ingest", "--assertions", rftest::fixture("corpus/assertions.tsv").string(),
                 "--out", g}).code,
            0);
  const auto rid = dir.file("r.jsonl");
  ASSERT_EQ(invoke({"augment", "--graph", g, "--manifest",
                 rftest::fixture("corpus/captions.jsonl").string(), "--out", rid}).code,
            0);
  const auto out = dir.file("mix.jsonl.gz");
  const auto r = invoke({"mix", "--captions", rftest::fixture("corpus/captions.jsonl").string(),
                      "--riddles", rid, "--out", out, "--batch-size", "10", "--steps", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = open_lines(out);
  std::string line;
  std::vector<std::size_t> per_step(5, 0);
  std::size_t total = 0;
  while (lines->next_line(line)) {
    const auto j = nlohmann::json::parse(line);
    ++total;
    if (j.at("origin") == "riddle") ++per_step.at(j.at("step").get<std::size_t>());
    EXPECT_TRUE(j.contains("image_id"));
    EXPECT_TRUE(j.contains("text"));
  }
  EXPECT_EQ(total, 50u);
  // p = 0.5, 0.4, 0.3, 0.2, 0.1 over 5 batches of 10.
  EXPECT_EQ(per_step, (std::vector<std::size_t>{5, 4, 3, 2, 1}));
}
