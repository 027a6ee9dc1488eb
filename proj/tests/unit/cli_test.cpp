#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"
#include "netab/checkpoint.hpp"

namespace netab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kData = NETAB_DATA_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  std::vector<json> lines() const {
    std::vector<json> v;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) v.push_back(json::parse(line));
    return v;
  }
};

Run netab(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("netab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> toy_train(const std::string& out) const {
    return {"--quiet", "train", "--config", kData + "/toy.cfg",
            "--train", kData + "/toy_train.csv", "--test", kData + "/toy_test.csv",
            "--val", kData + "/toy_test.csv", "--embeddings", kData + "/toy_glove.txt",
            "--out", (dir_ / out).string()};
  }
  fs::path dir_;
};

TEST_F(CliTest, TrainOnToyCorpus) {
  auto r = netab(toy_train("run"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = r.lines();
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0]["command"], "train");
  EXPECT_GE(lines[0]["accuracy"].get<double>(), 0.9);
  for (const char* f : {"manifest.json", "history.csv", "history.json", "model.ckpt"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  }
  auto manifest = json::parse(slurp(dir_ / "run" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["settings"]["total_epochs"], "12");
  EXPECT_EQ(manifest["inputs"].size(), 4u);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  auto args = toy_train("run");
  args.insert(args.end(), {"--total-epochs", "4", "--warmup-epochs", "1"});
  auto r = netab(args);
  ASSERT_EQ(r.code, 0) << r.err;
  auto history = json::parse(slurp(dir_ / "run" / "history.json"));
  EXPECT_EQ(history["epochs"].size(), 4u);
}

TEST_F(CliTest, RejectsNoiseAboveHalf) {
  auto args = toy_train("run");
  args.insert(args.end(), {"--noise-rate", "0.6"});
  auto r = netab(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("fewer than half"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(netab({"train", "--no-such-flag", "1"}).code, 2);
  EXPECT_EQ(netab({}).code, 2);
  EXPECT_EQ(netab({"train", "--out", (dir_ / "x").string()}).code, 2);
  auto missing = toy_train("run");
  missing[5] = "/no/such/file.csv";
  EXPECT_EQ(netab(missing).code, 2);
  auto bad_number = toy_train("run");
  bad_number.insert(bad_number.end(), {"--lr", "fast"});
  EXPECT_EQ(netab(bad_number).code, 2);

  auto cfg = dir_ / "bad.cfg";
  std::ofstream(cfg) << "learning_speed = 3\n";
  auto r = netab({"train", "--config", cfg.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("learning_speed"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) {
  auto r = netab({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST_F(CliTest, DivergenceExitsThree) {
  auto args = toy_train("run");
  args.insert(args.end(), {"--lr", "1e300", "--lr-decay", "1"});
  auto r = netab(args);
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("epoch"), std::string::npos) << r.err;
}

TEST_F(CliTest, SameFlagsGiveIdenticalHistory) {
  ASSERT_EQ(netab(toy_train("a")).code, 0);
  ASSERT_EQ(netab(toy_train("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "history.csv"), slurp(dir_ / "b" / "history.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "model.ckpt"), slurp(dir_ / "b" / "model.ckpt"));
}

TEST_F(CliTest, ReplayReproducesTrainRun) {
  ASSERT_EQ(netab(toy_train("orig")).code, 0);
  auto r = netab({"--quiet", "replay", "--manifest", (dir_ / "orig" / "manifest.json").string(),
                  "--out", (dir_ / "again").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "orig" / "history.csv"), slurp(dir_ / "again" / "history.csv"));
  EXPECT_EQ(slurp(dir_ / "orig" / "history.json"), slurp(dir_ / "again" / "history.json"));
  EXPECT_EQ(slurp(dir_ / "orig" / "model.ckpt"), slurp(dir_ / "again" / "model.ckpt"));
}

TEST_F(CliTest, ReplayRefusesChangedInputs) {
  auto train = dir_ / "train.csv";
  fs::copy_file(kData + "/toy_train.csv", train);
  auto args = toy_train("orig");
  args[5] = train.string();
  ASSERT_EQ(netab(args).code, 0);
  std::ofstream(train, std::ios::app) << "1,\"one more wonderful line\"\n";
  auto r = netab({"replay", "--manifest", (dir_ / "orig" / "manifest.json").string(), "--out",
                  (dir_ / "again").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("changed"), std::string::npos);
}

TEST_F(CliTest, EvaluateMatchesTrain) {
  auto t = netab(toy_train("run"));
  ASSERT_EQ(t.code, 0) << t.err;
  auto e = netab({"evaluate", "--checkpoint", (dir_ / "run" / "model.ckpt").string(), "--test",
                  kData + "/toy_test.csv"});
  ASSERT_EQ(e.code, 0) << e.err;
  auto trained = t.lines()[0];
  auto evaluated = e.lines()[0];
  for (const char* k : {"accuracy", "f1_pos", "f1_neg", "tp", "fp", "tn", "fn"}) {
    EXPECT_EQ(trained[k], evaluated[k]) << k;
  }
  auto on_train = netab({"evaluate", "--checkpoint", (dir_ / "run" / "model.ckpt").string(),
                         "--test", kData + "/toy_train.csv"});
  EXPECT_EQ(on_train.code, 0);
  EXPECT_EQ(on_train.lines()[0]["test_size"], 40);
}

TEST_F(CliTest, EvaluateRejectsDamagedCheckpoints) {
  ASSERT_EQ(netab(toy_train("run")).code, 0);
  auto bytes = slurp(dir_ / "run" / "model.ckpt");
  auto damaged = bytes;
  damaged[damaged.size() / 2 + 100] ^= 0x10;
  std::ofstream(dir_ / "damaged.ckpt", std::ios::binary) << damaged;
  auto r = netab({"evaluate", "--checkpoint", (dir_ / "damaged.ckpt").string(), "--test",
                  kData + "/toy_test.csv"});
  EXPECT_EQ(r.code, 2);

  auto future = bytes;
  future[8] = 9;
  std::ofstream(dir_ / "future.ckpt", std::ios::binary) << future;
  r = netab({"evaluate", "--checkpoint", (dir_ / "future.ckpt").string(), "--test",
             kData + "/toy_test.csv"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("version 9"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(std::to_string(kCheckpointVersion)), std::string::npos);
}

TEST_F(CliTest, CorruptCountsAndDeterminism) {
  auto corpus = dir_ / "syn.csv";
  ASSERT_EQ(netab({"synth", "--out", corpus.string(), "--size", "100"}).code, 0);

  auto zero = netab({"corrupt", "--in", corpus.string(), "--out", (dir_ / "zero.csv").string(),
                     "--rate", "0"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  EXPECT_EQ(zero.lines()[0]["flipped"], 0);
  std::istringstream rows(slurp(dir_ / "zero.csv"));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "label,text,corrupted");
  while (std::getline(rows, line)) EXPECT_EQ(line.back(), '0');

  auto a = netab({"corrupt", "--in", corpus.string(), "--out", (dir_ / "a.csv").string(),
                  "--rate", "0.3", "--seed", "4"});
  auto b = netab({"corrupt", "--in", corpus.string(), "--out", (dir_ / "b.csv").string(),
                  "--rate", "0.3", "--seed", "4"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.lines()[0]["flipped"], 30);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  std::size_t flagged = 0;
  std::istringstream noisy(slurp(dir_ / "a.csv"));
  std::getline(noisy, line);
  while (std::getline(noisy, line)) flagged += line.back() == '1' ? 1 : 0;
  EXPECT_EQ(flagged, 30u);
  EXPECT_TRUE(fs::exists(dir_ / "a.csv.manifest.json"));

  EXPECT_EQ(netab({"corrupt", "--in", corpus.string(), "--out", (dir_ / "c.csv").string(),
                   "--rate", "0.55"})
                .code,
            2);
}

std::vector<std::string> toy_sweep(const fs::path& out, const std::string& workers) {
  return {"--quiet", "sweep", "--config", kData + "/toy.cfg", "--synthetic", "60",
          "--rates", "0,0.5", "--seeds", "1", "--total-epochs", "3", "--warmup-epochs", "1",
          "--workers", workers, "--out", out.string()};
}

TEST_F(CliTest, SweepWritesOneRowPerCell) {
  auto r = netab(toy_sweep(dir_ / "s", "1"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream rows(slurp(dir_ / "s" / "results.csv"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(rows, line)) ++n;
  EXPECT_EQ(n, 5u);
  EXPECT_EQ(r.lines().size(), 4u);
  EXPECT_TRUE(r.lines()[0].contains("mean_accuracy"));
}

TEST_F(CliTest, SweepRejectsRateAboveHalf) {
  auto args = toy_sweep(dir_ / "s", "1");
  args[7] = "0,0.6";
  EXPECT_EQ(netab(args).code, 2);
}

TEST_F(CliTest, SweepIsWorkerInvariantAndReplayable) {
  ASSERT_EQ(netab(toy_sweep(dir_ / "w1", "1")).code, 0);
  ASSERT_EQ(netab(toy_sweep(dir_ / "w4", "4")).code, 0);
  EXPECT_EQ(slurp(dir_ / "w1" / "results.csv"), slurp(dir_ / "w4" / "results.csv"));
  auto r = netab({"--quiet", "replay", "--manifest", (dir_ / "w4" / "manifest.json").string(),
                  "--out", (dir_ / "replayed").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "w4" / "results.csv"), slurp(dir_ / "replayed" / "results.csv"));
}

TEST_F(CliTest, WorkerDefaultComesFromEnvironment) {
  ::setenv("NETAB_WORKERS", "3", 1);
  auto r = netab(toy_sweep(dir_ / "s", "1"));
  ASSERT_EQ(r.code, 0);
  auto args = toy_sweep(dir_ / "t", "1");
  args.erase(args.begin() + 14, args.begin() + 16);  // drop --workers
  ASSERT_EQ(netab(args).code, 0);
  ::unsetenv("NETAB_WORKERS");
  EXPECT_EQ(json::parse(slurp(dir_ / "s" / "manifest.json"))["settings"]["workers"], "1");
  EXPECT_EQ(json::parse(slurp(dir_ / "t" / "manifest.json"))["settings"]["workers"], "3");
}

}  // namespace
}  // namespace netab
