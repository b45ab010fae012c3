// Copyright 2026 The febe Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "febe/cli.hpp"

using namespace febe;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_in_process(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Result run_binary(const std::string& args) {
  const std::string cmd = std::string(FEBE_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("febe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("FEBE_JOBS");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HubbardSectorPipeline) {
  ASSERT_EQ(run_binary("gen --model hubbard --n 4 -o " + path("h.json")).code, 0);
  ASSERT_EQ(run_binary("encode -i " + path("h.json") + " --class eta-one-body --eta 2 --m-b 5 --lambda auto -o " + path("m.json")).code, 0);
  auto v = run_binary("verify " + path("m.json"));
  EXPECT_EQ(v.code, 0);
  auto j = json::parse(v.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("alpha_used").get<double>(), 8.0);
  EXPECT_EQ(j.at("columns_checked").get<int>(), 6);
}

TEST_F(Cli, SelectSwapEstimate) {
  auto r = run_binary("estimate --class select-swap --L 16 --lambda 4 --m-b 1");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j.at("formula").at("t_count").get<double>(), 48.0);
  const double ratio = j.at("reconcile").at("ratio_t").get<double>();
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST_F(Cli, TamperedManifestFailsVerification) {
  ASSERT_EQ(run_in_process({"gen", "--model", "localized", "--n", "4", "--seed", "5", "-o", path("h.json")}).code, 0);
  ASSERT_EQ(run_in_process({"encode", "-i", path("h.json"), "--class", "one-body", "-o", path("m.json")}).code, 0);
  EXPECT_EQ(run_in_process({"verify", path("m.json")}).code, 0);

  auto m = cli::read_json_file(path("m.json"));
  auto& w = m.at("table").at("words");
  w[0] = w[0].get<std::string>() == "0x0" ? "0x7" : "0x0";
  write_json(path("t.json"), m);
  auto r = run_binary("verify " + path("t.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out).at("pass").get<bool>());

  m = cli::read_json_file(path("m.json"));
  m["alpha"] = 4.0;
  write_json(path("a.json"), m);
  EXPECT_EQ(run_in_process({"verify", path("a.json")}).code, 1);
}

TEST_F(Cli, FlagErrorsExitTwo) {
  ASSERT_EQ(run_in_process({"gen", "--n", "4", "-o", path("h.json")}).code, 0);
  EXPECT_EQ(run_binary("encode --bogus").code, 2);
  EXPECT_EQ(run_binary("").code, 2);
  const std::string in = path("h.json");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"encode", "-i", in, "--lambda", "3"},
           {"encode", "-i", in, "--boundary", "ring"},
           {"encode", "-i", in, "--class", "one-body", "--eta", "2"},
           {"encode", "-i", in, "--class", "nope"},
           {"encode", "--class", "one-body"},
           {"encode", "-i", in, "--cost-model", "fast"},
           {"export", "-i", in, "--manifest", in},
           {"estimate", "--class", "select-swap"},
           {"estimate", "--class", "select-swap", "--L", "8", "--lambda", "16"},
           {"sweep", "--format", "xml"},
           {"gen", "--model", "jellium"},
       }) {
    auto r = run_in_process(args);
    EXPECT_EQ(r.code, 2) << args[0] << " " << args.back();
    EXPECT_FALSE(r.err.empty());
  }
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run_binary("--help").code, 0); }

TEST_F(Cli, JobsEnvironmentOverride) {
  setenv("FEBE_JOBS", "0", 1);
  EXPECT_EQ(run_in_process({"gen", "--n", "4"}).code, 2);
  setenv("FEBE_JOBS", "2", 1);
  EXPECT_EQ(cli::resolve_jobs(7), 2);
  unsetenv("FEBE_JOBS");
  EXPECT_EQ(cli::resolve_jobs(3), 3);
}

TEST_F(Cli, OutputsAreDeterministic) {
  ASSERT_EQ(run_in_process({"gen", "--model", "ti-factorized", "--n", "4", "--seed", "9", "-o", path("h.json")}).code, 0);
  const std::vector<std::string> enc = {"encode", "-i", path("h.json"), "--seed", "9"};
  auto a = run_in_process(enc), b = run_in_process(enc);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run_binary("encode -i " + path("h.json") + " --seed 9").out, a.out);

  const std::vector<std::string> sw = {"sweep", "--class", "number,eta-number", "--n", "4", "--eta", "1,2", "--lambda", "auto,2"};
  auto s1 = run_in_process(sw);
  setenv("FEBE_JOBS", "3", 1);
  auto s2 = run_in_process(sw);
  unsetenv("FEBE_JOBS");
  ASSERT_EQ(s1.code, 0);
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(s1.out.substr(0, s1.out.find('\n')), std::string(sweep_csv_header()));
}

TEST_F(Cli, ExportMatchesEncodeCircuit) {
  ASSERT_EQ(run_in_process({"gen", "--n", "4", "--T", "0.5", "--U", "0.75", "-o", path("h.json")}).code, 0);
  ASSERT_EQ(run_in_process({"encode", "-i", path("h.json"), "--class", "nn", "-o", path("m.json"), "--circuit", path("c.txt")}).code, 0);
  auto from_manifest = run_in_process({"export", "--manifest", path("m.json")});
  auto from_spec = run_in_process({"export", "-i", path("h.json"), "--class", "nn"});
  ASSERT_EQ(from_manifest.code, 0);
  EXPECT_EQ(from_manifest.out, cli::read_text(path("c.txt")));
  EXPECT_EQ(from_spec.out, from_manifest.out);
  EXPECT_EQ(export_text(parse_text(from_manifest.out)), from_manifest.out);
}

TEST_F(Cli, ClassRestrictionIsReported) {
  ASSERT_EQ(run_in_process({"gen", "--n", "4", "-o", path("h.json")}).code, 0);
  auto r = run_in_process({"encode", "-i", path("h.json"), "--class", "nn"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("two-body"), std::string::npos);
  auto m = json::parse(r.out);
  EXPECT_EQ(m.at("dropped_terms").size(), 1u);
  EXPECT_EQ(m.at("alpha").get<double>(), 8.0);
}

TEST_F(Cli, NonSelectSwapEstimateUsesTemplate) {
  auto r = run_in_process({"estimate", "--class", "ti-eta", "--n", "4", "--eta", "2"});
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j.at("alpha").get<double>(), 8.0);
  EXPECT_GT(j.at("counted").at("t_count").get<long long>(), 0);
}
