// Copyright 2026 The Privscope Authors.
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "doctest.h"
#include "privscope/common/io.h"
#include "support/corpus.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("privscope-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  const fs::path& dir() const { return dir_; }

  // Runs the CLI inside the scratch directory.
  Result Run(const std::string& args, const std::string& env = "") const {
    std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" PRIVSCOPE_CLI_PATH "' " + args +
                      " > .stdout 2> .stderr";
    int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadFile(dir_ / ".stdout");
    r.err = ReadFile(dir_ / ".stderr");
    return r;
  }

  void CopyFixture(const std::string& id) const {
    fs::copy(testing::FixturesDir() / id, dir_ / id, fs::copy_options::recursive);
    fs::remove(dir_ / id / "manifest.json");
  }

 private:
  fs::path dir_;
};

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = ReadFile(e.path());
  }
  return files;
}

TEST_CASE("usage errors exit 64") {
  Scratch s;
  CHECK(s.Run("").code == 64);
  CHECK(s.Run("analyze").code == 64);
  CHECK(s.Run("frobnicate x").code == 64);
  CHECK(s.Run("analyze --scope nothing x.js").code == 64);
  CHECK(s.Run("analyze missing.js").code == 64);
  CHECK(s.Run("diff x.js").code == 64);  // --policy is required

  std::ofstream(s.dir() / "bad.json") << R"({"targets": "not-a-list"})";
  CHECK(s.Run("--config bad.json analyze").code == 64);
}

TEST_CASE("sandbox passthrough") {
  Scratch s;
  CHECK(s.Run("sandbox run").code == 64);
  CHECK(s.Run("sandbox shake fx").code == 64);
  auto missing = s.Run("sandbox run fx", "PRIVSCOPE_SANDBOX=");
  CHECK(missing.code == 69);
  CHECK(missing.err.find("not installed") != std::string::npos);

  auto harness = s.dir() / "harness.sh";
  std::ofstream(harness) << "#!/bin/sh\necho \"$@\"\nexit 5\n";
  fs::permissions(harness, fs::perms::owner_all);
  auto ran = s.Run("sandbox bench fx --runs 3", "PRIVSCOPE_SANDBOX='" + harness.string() + "'");
  CHECK(ran.code == 5);
  CHECK(ran.out == "bench fx --runs 3\n");
}

TEST_CASE("analyze, emit and instrument a function") {
  Scratch s;
  s.CopyFixture("aws-js-s3-upload");
  auto analyze = s.Run("analyze aws-js-s3-upload");
  CHECK(analyze.code == 0);
  CHECK(analyze.out == "aws-js-s3-upload: 1 permissions, 0 fallbacks\n");
  auto fn = s.dir() / "privscope-out" / "functions" / "aws-js-s3-upload";
  auto pset = ParseJsonFile(fn / "permissions.json");
  CHECK(pset["requirements"][0]["resource"] == "${S3_NAME}/uploads/report.csv");

  CHECK(s.Run("emit aws-js-s3-upload").code == 0);
  auto policy = ParseJsonFile(fn / "policy-aws.json");
  CHECK(policy["policy"]["Statement"][0]["Resource"] == "arn:aws:s3:::${S3_NAME}/uploads/report.csv");
  CHECK(fs::exists(fn / "allowlist.json"));

  CHECK(s.Run("instrument --mode inline aws-js-s3-upload").code == 0);
  CHECK(fs::exists(fn / "instrumented" / "handler.js"));
  CHECK_FALSE(fs::exists(fn / "instrumented" / "handler.allowlist.json"));
  CHECK(ParseJsonFile(fn / "reconstruction.json")["handler.js"]["ok"] == true);
  CHECK(s.Run("instrument aws-js-s3-upload").code == 0);
  CHECK(fs::exists(fn / "instrumented" / "handler.allowlist.json"));

  auto manifest = ParseJsonFile(s.dir() / "privscope-out" / "manifest.json");
  CHECK(manifest["functions"].contains("aws-js-s3-upload"));
}

TEST_CASE("fallbacks make analyze exit 2") {
  Scratch s;
  s.CopyFixture("aws-py-list");
  auto r = s.Run("analyze aws-py-list");
  CHECK(r.code == 2);
  CHECK(r.out == "aws-py-list: 1 permissions, 1 fallbacks\n");
  CHECK(s.Run("emit aws-py-list").code == 0);
}

TEST_CASE("azure emission without naming fails") {
  Scratch s;
  s.CopyFixture("azure-js-blob-delete");
  CHECK(s.Run("analyze azure-js-blob-delete").code == 0);
  auto r = s.Run("emit azure-js-blob-delete");
  CHECK(r.code == 2);
  CHECK(r.err.find("MissingNaming") != std::string::npos);
}

TEST_CASE("diff exit codes") {
  Scratch s;
  s.CopyFixture("function-a");
  fs::copy(testing::FixturesDir() / "policies" / "function-a-overpermissive.json", s.dir() / "live.json");
  std::ofstream(s.dir() / "cfg.json")
      << R"({"targets": ["function-a"], "naming": {"region": "us-east-1", "account_id": "123456789012"}})";
  CHECK(s.Run("--config cfg.json analyze").code == 0);
  CHECK(s.Run("--config cfg.json emit").code == 0);

  auto drift = s.Run("--config cfg.json diff --policy live.json");
  CHECK(drift.code == 3);
  auto report = Json::parse(drift.out);
  REQUIRE(report["excess"].size() == 1);
  CHECK(report["excess"][0] == Json::parse(R"({"service":"lambda","resource":"*","action":"lambda:InvokeFunction"})"));
  CHECK(report["missing"].empty());
  CHECK(drift.err == "excess: lambda * lambda:InvokeFunction\n");

  auto clean = s.Run("--config cfg.json diff --policy privscope-out/functions/function-a/policy-aws.json");
  CHECK(clean.code == 0);
  CHECK(Json::parse(clean.out)["excess"].empty());

  std::string text = ReadFile(s.dir() / "live.json");
  std::ofstream(s.dir() / "truncated.json") << text.substr(0, text.size() / 2);
  auto broken = s.Run("--config cfg.json diff --policy truncated.json");
  CHECK(broken.code == 2);
  CHECK(broken.err.find("UnparseablePolicy") != std::string::npos);
}

TEST_CASE("reanalyze refreshes changed functions only") {
  Scratch s;
  s.CopyFixture("function-a");
  s.CopyFixture("function-b");
  std::ofstream(s.dir() / "cfg.json") << R"({"targets": ["function-a", "function-b"],
    "naming": {"region": "us-east-1", "account_id": "123456789012"}})";
  CHECK(s.Run("--config cfg.json analyze").code == 0);
  CHECK(s.Run("--config cfg.json emit").code == 0);
  CHECK(s.Run("--config cfg.json instrument function-b").code == 0);

  auto same = s.Run("--config cfg.json reanalyze");
  CHECK(same.code == 0);
  CHECK(same.out == "function-a: unchanged\nfunction-b: unchanged\n");

  auto src = s.dir() / "function-b" / "handler.js";
  std::string text = ReadFile(src);
  auto at = text.find("'DB-B'");
  REQUIRE(at != std::string::npos);
  text.replace(at, 6, "'DB-C'");
  std::ofstream(src, std::ios::trunc) << text;

  auto changed = s.Run("--config cfg.json reanalyze");
  CHECK(changed.code == 0);
  CHECK(changed.out.find("function-a: unchanged") != std::string::npos);
  CHECK(changed.out.find("function-b: unchanged") == std::string::npos);
  auto fn = s.dir() / "privscope-out" / "functions" / "function-b";
  CHECK(ParseJsonFile(fn / "permissions.json")["requirements"][0]["resource"] == "DB-C");
  CHECK(ParseJsonFile(fn / "allowlist.json")["entries"]["dynamodb"].contains("DB-C"));
  CHECK(ReadFile(fn / "instrumented" / "handler.allowlist.json").find("DB-C") != std::string::npos);
}

TEST_CASE("full runs are byte-identical") {
  Scratch s;
  auto config = (testing::FixturesDir() / "privscope.json").string();
  for (const char* out : {"run1", "run2"}) {
    for (const char* cmd : {"analyze", "emit", "instrument"}) {
      int code = s.Run(std::string("--config '") + config + "' --output " + out + " " + cmd).code;
      CHECK((code == 0 || (code == 2 && std::string(cmd) == "analyze")));
    }
  }
  auto a = Tree(s.dir() / "run1");
  auto b = Tree(s.dir() / "run2");
  CHECK(a.size() > 66 * 6);
  CHECK(a == b);
}

}  // namespace
}  // namespace privscope
