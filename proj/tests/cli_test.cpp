// Copyright 2026 The tsot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the tsot binary through the shell.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_support.hpp"

namespace tsot {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("tsot_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p;
  }

  RunResult run(const std::string& args, const std::string& stdin_text = "") {
    const fs::path in = file("stdin.txt", stdin_text);
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("'") + TSOT_CLI_PATH + "' " + args + " < '" + in.string() + "' > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

std::string golden_path() { return std::string(TSOT_DATA_DIR) + "/golden_pair.jsonl"; }

TEST_F(CliTest, SerializeGoldenAlign) {
  const RunResult r = run("serialize --strategy align --input '" + golden_path() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["tsot"], testing::kGoldenAlign);
  EXPECT_EQ(j["id"], "table1-de-en");
  EXPECT_EQ(j["duration_ms"], 4000);
  EXPECT_NE(r.err.find("1 utterances"), std::string::npos) << r.err;
}

TEST_F(CliTest, SerializeGammaStrategies) {
  const std::pair<const char*, const char*> cases[] = {{"inter0.0", testing::kGoldenInter00},
                                                      {"inter1.0", testing::kGoldenInter10},
                                                      {"inter0.5", testing::kGoldenInter05}};
  for (const auto& [name, expected] : cases) {
    const RunResult r = run(std::string("serialize -s ") + name, slurp(golden_path()));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["tsot"], expected) << name;
  }
}

TEST_F(CliTest, SerializeEmptyInput) {
  const RunResult r = run("serialize --json", "");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(json::parse(r.err)["utterances"], 0);
}

TEST_F(CliTest, SerializeMissingAlignmentAbortsOrSkips) {
  const std::string corpus = slurp(golden_path()) + R"({"id": "no-align", "src": "a b", "tgt": "c"})" + "\n";
  const RunResult abort = run("serialize --strategy align", corpus);
  EXPECT_NE(abort.exit_code, 0);
  EXPECT_NE(abort.err.find("line 2"), std::string::npos) << abort.err;

  const RunResult skip = run("--json serialize --strategy align --skip-bad", corpus);
  ASSERT_EQ(skip.exit_code, 0) << skip.err;
  EXPECT_NE(skip.err.find("no-align"), std::string::npos) << skip.err;
  const std::string summary = skip.err.substr(skip.err.rfind('{'));
  EXPECT_EQ(json::parse(summary)["skipped"], 1);
  EXPECT_EQ(json::parse(summary)["utterances"], 1);
}

TEST_F(CliTest, ValidatePassesOnSerializedCorpus) {
  const RunResult gen = run("gen-synthetic --seed 7 --count 40 --topology monotone,crossing,many-to-one,sparse");
  ASSERT_EQ(gen.exit_code, 0) << gen.err;
  const RunResult ser = run("serialize --strategy align", gen.out);
  ASSERT_EQ(ser.exit_code, 0) << ser.err;
  const RunResult val = run("validate", ser.out);
  EXPECT_EQ(val.exit_code, 0) << val.out;
  EXPECT_NE(val.out.find("40 records, 0 failed"), std::string::npos) << val.out;
}

TEST_F(CliTest, ValidateReportsCorruptedRecord) {
  json j = json::parse(slurp(golden_path()));
  j["tsot"] = "#ASR# Ich brauche das wirklich. #ST# I need really it.";
  const RunResult r = run("validate", j.dump() + "\n");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("table1-de-en"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 failed"), std::string::npos) << r.out;

  const RunResult js = run("validate --json", j.dump() + "\n");
  EXPECT_EQ(js.exit_code, 1);
  const json report = json::parse(js.out);
  EXPECT_EQ(report["failures"][0]["st_divergence"], 1);
  EXPECT_TRUE(report["failures"][0]["asr_divergence"].is_null());
}

TEST_F(CliTest, ValidateEmptyInput) {
  const RunResult r = run("validate", "");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("0 records"), std::string::npos);
}

TEST_F(CliTest, SplitRecoversBothTasks) {
  json j = json::parse(slurp(golden_path()));
  j["tsot"] = testing::kGoldenInter05;
  const RunResult r = run("split", j.dump() + "\n");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json o = json::parse(r.out);
  EXPECT_EQ(o["asr"], "Ich brauche das wirklich.");
  EXPECT_EQ(o["st"], "I really need it.");
  EXPECT_TRUE(o["warnings"].empty());
}

TEST_F(CliTest, GenSyntheticIsDeterministic) {
  const RunResult a = run("gen-synthetic --seed 42 --count 25 --topology crossing,sparse");
  const RunResult b = run("gen-synthetic --seed 42 --count 25 --topology crossing,sparse");
  const RunResult c = run("gen-synthetic --seed 43 --count 25 --topology crossing,sparse");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 25);
}

TEST_F(CliTest, GenSyntheticNeedsSeed) {
  EXPECT_NE(run("gen-synthetic --count 3").exit_code, 0);
}

TEST_F(CliTest, UnknownStrategyFails) {
  const RunResult r = run("serialize --strategy inter2", slurp(golden_path()));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("inter2"), std::string::npos) << r.err;
}

TEST_F(CliTest, SimulateThenEvalGolden) {
  const fs::path table = dir_ / "table.json";
  const fs::path logs = dir_ / "logs.jsonl";
  const RunResult sim = run("simulate --chunk-ms 1000 --input '" + golden_path() + "' --output '" + logs.string() +
                            "' --table '" + table.string() + "'");
  ASSERT_EQ(sim.exit_code, 0) << sim.err;
  EXPECT_NE(sim.err.find("align"), std::string::npos);

  const json t = json::parse(slurp(table));
  ASSERT_EQ(t["strategies"].size(), 4u);
  EXPECT_EQ(t["strategies"][3]["strategy"], "align");
  EXPECT_DOUBLE_EQ(t["strategies"][3]["asr_laal_ms"].get<double>(), 1000.0);
  EXPECT_DOUBLE_EQ(t["strategies"][3]["st_laal_ms"].get<double>(), 2000.0);
  EXPECT_DOUBLE_EQ(t["strategies"][0]["st_laal_ms"].get<double>(), 4000.0);

  const RunResult ev = run("eval --input '" + golden_path() + "' --hyp '" + logs.string() + "'");
  ASSERT_EQ(ev.exit_code, 0) << ev.err;
  const json e = json::parse(ev.out);
  ASSERT_TRUE(e.contains("align"));
  const json& corpus = e["align"]["corpus"];
  EXPECT_DOUBLE_EQ(corpus["wer_percent"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(corpus["bleu"].get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(corpus["st"]["laal_ms"].get<double>(), 2000.0);
  EXPECT_TRUE(e["align"]["by_lang_pair"].contains("de-en"));
}

TEST_F(CliTest, FullPipeline) {
  const fs::path corpus = file("corpus.jsonl", run("gen-synthetic --seed 3 --count 30 --topology monotone,crossing").out);
  const fs::path serialized = dir_ / "ser.jsonl";
  ASSERT_EQ(run("serialize --strategy align -i '" + corpus.string() + "' -o '" + serialized.string() + "'").exit_code,
            0);
  ASSERT_EQ(run("validate -i '" + serialized.string() + "'").exit_code, 0);

  const RunResult split = run("split -i '" + serialized.string() + "'");
  ASSERT_EQ(split.exit_code, 0);
  EXPECT_EQ(std::count(split.out.begin(), split.out.end(), '\n'), 30);

  const fs::path logs = dir_ / "logs.jsonl";
  const RunResult sim =
      run("--json simulate --strategies inter0.0,align -i '" + corpus.string() + "' -o '" + logs.string() + "'");
  ASSERT_EQ(sim.exit_code, 0) << sim.err;
  const json table = json::parse(sim.err);
  EXPECT_GT(table["strategies"][0]["st_laal_ms"].get<double>(), table["strategies"][1]["st_laal_ms"].get<double>());

  const RunResult ev = run("eval --pooling pooled -i '" + corpus.string() + "' --hyp '" + logs.string() + "'");
  ASSERT_EQ(ev.exit_code, 0) << ev.err;
  const json e = json::parse(ev.out);
  EXPECT_EQ(e["inter0.0"]["corpus"]["utterance_count"], 30);
  EXPECT_DOUBLE_EQ(e["align"]["corpus"]["wer_percent"].get<double>(), 0.0);

  const RunResult stats = run("stats --json --strategy align -i '" + corpus.string() + "'");
  ASSERT_EQ(stats.exit_code, 0) << stats.err;
  EXPECT_EQ(json::parse(stats.out)["utterances"], 30);
}

}  // namespace
}  // namespace tsot
