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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "privscope/integrate/integrator.h"
#include "support/programs.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

const RuleSet& Rules() { return RuleSet::Default(); }

AllowList AllowFor(const SourceUnit& unit, const EnvValues& env) {
  auto pset = ExtractPermissions(BuildSemanticRegistry(unit, Rules()), Rules(), ScopeLevel::kEntity);
  return BuildAllowList(pset, env, AllowlistMode::kSnapshot, false);
}

InstrumentedSource Instrument(const SourceUnit& unit, EmbedMode mode = EmbedMode::kInline,
                              const EnvValues& env = {}) {
  return InjectHooks(unit, AllowFor(unit, env), mode, Rules());
}

void ExpectSound(const SourceUnit& unit, const InstrumentedSource& inst) {
  CHECK(StripInjected(inst) == unit.text);
  auto report = ValidateReconstruction(unit, inst, Rules());
  for (const auto& c : report.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}

const char* kJsV2 = R"(#!/usr/bin/env node
const AWS = require('aws-sdk');
const s3 = new AWS.S3();
const docs = new AWS.DynamoDB.DocumentClient();

exports.handler = async (event) => {
  await s3.putObject({ Bucket: process.env.S3_NAME, Key: event.name, Body: 'x' }).promise();
  await docs.put({ TableName: 'orders', Item: { id: event.id } }).promise();
  return 'ok';
};
)";

const char* kJsV3 = R"(import { S3Client, GetObjectCommand } from "@aws-sdk/client-s3";

const client = new S3Client({});

export const handler = async (event) => {
  return client.send(new GetObjectCommand({ Bucket: "reports", Key: "daily.csv" }));
};)";

const char* kPy = R"(# -*- coding: utf-8 -*-
import os
import boto3

s3 = boto3.client("s3")
table = boto3.resource("dynamodb").Table(os.environ["TABLE"])


def handler(event, context):
    s3.put_object(Bucket=os.environ["S3_NAME"], Key=event["name"], Body=b"x")
    table.put_item(Item={"id": event["id"]})
)";

const char* kGoV1 = R"(package main

import (
	"os"

	"github.com/aws/aws-sdk-go/aws"
	"github.com/aws/aws-sdk-go/aws/session"
	"github.com/aws/aws-sdk-go/service/s3"
)

var svc = s3.New(session.Must(session.NewSession()))

func handler(name string) error {
	input := &s3.PutObjectInput{Bucket: aws.String(os.Getenv("S3_NAME")), Key: aws.String(name)}
	if _, err := svc.PutObject(input); err != nil {
		return err
	}
	_, err := svc.GetObject(&s3.GetObjectInput{Bucket: aws.String("logs"), Key: aws.String("a.txt")})
	return err
}
)";

const char* kGoGcp = R"(package main

import (
	"context"

	"cloud.google.com/go/storage"
)

func handler(ctx context.Context) error {
	client, err := storage.NewClient(ctx)
	if err != nil {
		return err
	}
	w := client.Bucket("uploads").Object("a.txt").NewWriter(ctx)
	return w.Close()
}
)";

SourceUnit Unit(const std::string& name, const std::string& text) {
  return SourceUnit::FromText(name, text);
}

TEST_CASE("hook template per language") {
  CHECK(HookTemplateFor(Language::kJavaScript, Vendor::kAws, Rules()).kind ==
        HookKind::kMethodRedefinition);
  CHECK(HookTemplateFor(Language::kPython, Vendor::kAzure, Rules()).kind == HookKind::kWrapperClass);
  CHECK(HookTemplateFor(Language::kGo, Vendor::kGcp, Rules()).kind == HookKind::kExplicitCall);
  try {
    HookTemplateFor(Language::kGo, Vendor::kAzure, Rules());
    FAIL("expected UnsupportedCombination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedCombination);
  }
}

TEST_CASE("javascript clients are wrapped and restore exactly") {
  auto unit = Unit("fn.js", kJsV2);
  auto inst = Instrument(unit, EmbedMode::kInline, {{"S3_NAME", "b1"}});
  CHECK(inst.text.rfind("#!/usr/bin/env node\n// privscope:instrumented sha256=", 0) == 0);
  CHECK(inst.text.find("__privscope_guard(new AWS.S3(), \"s3\", \"client\", false)") !=
        std::string::npos);
  CHECK(inst.text.find("__privscope_guard(new AWS.DynamoDB.DocumentClient(), \"dynamodb\", "
                       "\"document\", false)") != std::string::npos);
  CHECK(inst.embedded_allowlist_ref == "inline");
  CHECK_FALSE(inst.sidecar);
  ExpectSound(unit, inst);
}

TEST_CASE("command-style clients and module syntax") {
  auto unit = Unit("fn.mjs", kJsV3);
  auto inst = Instrument(unit);
  CHECK(inst.text.find("__privscope_guard(new S3Client({}), \"s3\", \"client\", true)") !=
        std::string::npos);
  CHECK(inst.text.find("import * as __privscope_fs_module from \"fs\";") != std::string::npos);
  ExpectSound(unit, inst);
}

TEST_CASE("python preamble follows the imports") {
  auto unit = Unit("fn.py", kPy);
  auto inst = Instrument(unit, EmbedMode::kInline, {{"S3_NAME", "b1"}, {"TABLE", "t1"}});
  CHECK(inst.text.rfind("# -*- coding: utf-8 -*-\n# privscope:instrumented sha256=", 0) == 0);
  auto preamble = inst.text.find("class PrivscopeDenied");
  auto import = inst.text.find("import boto3");
  auto first = inst.text.find("_privscope_guard(boto3.client(\"s3\"), \"s3\", \"client\")");
  REQUIRE(first != std::string::npos);
  CHECK(import < preamble);
  CHECK(preamble < first);
  CHECK(inst.text.find("_privscope_guard(boto3.resource(\"dynamodb\"), \"dynamodb\", \"resource\")") !=
        std::string::npos);
  ExpectSound(unit, inst);
}

TEST_CASE("python client without a top-level import has no anchor") {
  auto unit = Unit("fn.py", "try:\n    import boto3\nexcept ImportError:\n    boto3 = None\n\n"
                            "s3 = boto3.client('s3')\n");
  try {
    Instrument(unit);
    FAIL("expected AnchorNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAnchorNotFound);
    REQUIRE(e.location());
    CHECK(e.location()->line == 6);
  }
}

TEST_CASE("python client on the import line has no anchor") {
  auto unit = Unit("fn.py", "import boto3; s3 = boto3.client('s3')\n\ndef h(e, c):\n    s3.list_buckets()\n");
  try {
    Instrument(unit);
    FAIL("expected AnchorNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAnchorNotFound);
  }
}

TEST_CASE("go calls get explicit checks") {
  auto unit = Unit("main.go", kGoV1);
  auto inst = Instrument(unit, EmbedMode::kInline, {{"S3_NAME", "b1"}});
  CHECK(inst.text.rfind("// privscope:instrumented sha256=", 0) == 0);
  CHECK(inst.text.find("privscopejson \"encoding/json\"") != std::string::npos);
  CHECK(inst.text.find("\tprivscopeCheck(\"s3\", \"PutObject\", svc, input, \"Bucket\", \"Key\")\n"
                       "\tif _, err := svc.PutObject(input)") != std::string::npos);
  CHECK(inst.text.find("privscopeCheck(\"s3\", \"GetObject\", svc, &s3.GetObjectInput{") !=
        std::string::npos);
  CHECK(inst.text.find("privscopefilepath") == std::string::npos);
  ExpectSound(unit, inst);
}

TEST_CASE("go derived handles") {
  auto unit = Unit("main.go", kGoGcp);
  auto inst = Instrument(unit);
  CHECK(inst.text.find("privscopeCheck(\"storage\", \"object.NewWriter\", "
                       "client.Bucket(\"uploads\").Object(\"a.txt\"), nil") != std::string::npos);
  ExpectSound(unit, inst);
}

TEST_CASE("go with azure is unsupported") {
  auto unit = Unit("main.go",
                   "package main\n\nimport \"github.com/Azure/azure-sdk-for-go/sdk/storage/azblob\"\n\n"
                   "var c, _ = azblob.NewClientFromConnectionString(\"x\", nil)\n");
  try {
    Instrument(unit);
    FAIL("expected UnsupportedCombination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedCombination);
  }
}

TEST_CASE("second injection is rejected") {
  for (auto [name, text] : {std::pair{"fn.js", kJsV2}, {"fn.py", kPy}, {"main.go", kGoV1}}) {
    auto unit = Unit(name, text);
    auto inst = Instrument(unit);
    CHECK(IsInstrumented(inst.text));
    try {
      InjectHooks(Unit(name, inst.text), AllowList{}, EmbedMode::kInline, Rules());
      FAIL("expected AlreadyInstrumented");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kAlreadyInstrumented);
      REQUIRE(e.location());
      CHECK(e.location()->line >= 1);
    }
  }
}

TEST_CASE("files without SDK calls only gain a sentinel and the allowlist") {
  for (auto [name, text] : {std::pair{"util.js", "module.exports = (a) => a + 1;\n"},
                            {"util.py", "def add(a):\n    return a + 1"},
                            {"util.go", "package util\n\nfunc Add(a int) int { return a + 1 }\n"}}) {
    auto unit = Unit(name, text);
    auto inst = Instrument(unit);
    CHECK(IsInstrumented(inst.text));
    CHECK(inst.text.find("hooks begin") != std::string::npos);
    CHECK(inst.text.find("guard(") == std::string::npos);
    CHECK(inst.text.find("privscopeCheck(") == std::string::npos);
    ExpectSound(unit, inst);
  }
}

TEST_CASE("sidecar mode references the allowlist file") {
  auto unit = Unit("handlers/upload.js", kJsV2);
  auto inst = Instrument(unit, EmbedMode::kSidecar, {{"S3_NAME", "b1"}});
  CHECK(inst.embedded_allowlist_ref == "upload.allowlist.json");
  REQUIRE(inst.sidecar);
  auto sidecar = Json::parse(*inst.sidecar);
  CHECK(sidecar["entries"]["s3"].contains("b1/*"));
  CHECK(inst.text.find("\"upload.allowlist.json\"") != std::string::npos);
  CHECK(inst.text.find("\"b1/*\"") == std::string::npos);
  ExpectSound(unit, inst);

  auto go = Instrument(Unit("main.go", kGoV1), EmbedMode::kSidecar);
  CHECK(go.text.find("privscopefilepath \"path/filepath\"") != std::string::npos);
  ExpectSound(Unit("main.go", kGoV1), go);
}

TEST_CASE("injection is deterministic") {
  for (auto [name, text] : {std::pair{"fn.js", kJsV2}, {"fn.py", kPy}, {"main.go", kGoV1}}) {
    auto a = Instrument(Unit(name, text));
    auto b = Instrument(Unit(name, text));
    CHECK(a.text == b.text);
    CHECK(a.RegionsJson() == b.RegionsJson());
  }
}

InstrumentedSource DropRegions(InstrumentedSource inst, const std::string& role, int count) {
  InstrumentedSource out = inst;
  out.text.clear();
  out.injected_regions.clear();
  std::uint32_t cursor = 0;
  std::uint32_t removed = 0;
  for (const auto& r : inst.injected_regions) {
    out.text.append(inst.text, cursor, r.begin - cursor);
    cursor = r.end;
    if (r.role == role && count > 0) {
      --count;
      removed += r.end - r.begin;
      continue;
    }
    out.text.append(inst.text, r.begin, r.end - r.begin);
    out.injected_regions.push_back({r.begin - removed, r.end - removed, r.role});
  }
  out.text.append(inst.text, cursor, std::string::npos);
  return out;
}

const ReconstructionCheck& Check(const ReconstructionReport& report, const std::string& name) {
  for (const auto& c : report.checks) {
    if (c.name == name) return c;
  }
  FAIL("no check " << name);
  return report.checks.front();
}

TEST_CASE("a removed guard is reported with the site") {
  auto unit = Unit("fn.js", kJsV2);
  auto inst = Instrument(unit);
  auto broken = DropRegions(DropRegions(inst, "guard-open", 1), "guard-close", 1);
  CHECK(StripInjected(broken) == unit.text);
  auto report = ValidateReconstruction(unit, broken, Rules());
  CHECK_FALSE(report.ok());
  CHECK(Check(report, "strip-equals-original").passed);
  CHECK_FALSE(Check(report, "sites-guarded").passed);
  CHECK(Check(report, "sites-guarded").detail == "unguarded s3.putObject at 7:12");

  auto go = Unit("main.go", kGoV1);
  auto missing = DropRegions(Instrument(go), "check", 1);
  auto go_report = ValidateReconstruction(go, missing, Rules());
  CHECK(Check(go_report, "sites-guarded").detail == "unguarded s3.PutObject at 15:19");
}

TEST_CASE("a one-byte change is located") {
  auto unit = Unit("fn.py", kPy);
  auto inst = Instrument(unit);
  auto at = inst.text.rfind("Body=b\"x\"");
  REQUIRE(at != std::string::npos);
  inst.text[at + 7] = 'y';
  auto report = ValidateReconstruction(unit, inst, Rules());
  CHECK_FALSE(Check(report, "strip-equals-original").passed);
  CHECK(Check(report, "strip-equals-original").detail == "first difference at 10:75");
}

// Runtime behaviour of the injected hooks against stand-in SDK modules.

bool Have(const std::string& tool) {
  return std::system(("command -v " + tool + " >/dev/null 2>&1").c_str()) == 0;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("privscope-it-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  void Write(const std::string& rel, const std::string& text) const {
    fs::create_directories((dir / rel).parent_path());
    std::ofstream(dir / rel, std::ios::binary) << text;
  }
  std::string Read(const std::string& rel) const { return ReadFile(dir / rel); }
  int Run(const std::string& command) const {
    return std::system(("cd '" + dir.string() + "' && " + command + " > out.txt 2>&1").c_str());
  }
};

TEST_CASE("instrumented javascript parses under node") {
  if (!Have("node")) return;
  Scratch s;
  s.Write("a.js", Instrument(Unit("a.js", kJsV2)).text);
  s.Write("b.mjs", Instrument(Unit("b.mjs", kJsV3)).text);
  CHECK(s.Run("node --check a.js") == 0);
  CHECK(s.Run("node --check b.mjs") == 0);
}

TEST_CASE("instrumented python compiles") {
  if (!Have("python3")) return;
  Scratch s;
  s.Write("a.py", Instrument(Unit("a.py", kPy)).text);
  CHECK(s.Run("python3 -m py_compile a.py") == 0);
}

const char* kFakeAwsSdk = R"(class S3 {
  putObject(p) { return { promise: async () => "put " + p.Bucket + "/" + p.Key }; }
  deleteObject(p) { return { promise: async () => "deleted" }; }
}
class DocumentClient {
  put(p) { return { promise: async () => "item " + p.TableName }; }
}
module.exports = { S3: S3, DynamoDB: { DocumentClient: DocumentClient } };
)";

const char* kJsDriver = R"(const fn = require("./fn.js");
(async () => {
  console.log(await fn.handler({ name: "a.txt", id: "1" }));
  process.env.S3_NAME = "other";
  try {
    await fn.handler({ name: "a.txt", id: "1" });
    console.log("not denied");
  } catch (e) {
    console.log(e.name + " " + JSON.stringify(e.privscope));
  }
})();
)";

TEST_CASE("javascript hooks allow listed calls and deny others") {
  if (!Have("node")) return;
  Scratch s;
  s.Write("node_modules/aws-sdk/index.js", kFakeAwsSdk);
  s.Write("fn.js", Instrument(Unit("fn.js", kJsV2), EmbedMode::kInline, {{"S3_NAME", "b1"}}).text);
  s.Write("run.js", kJsDriver);
  REQUIRE(s.Run("S3_NAME=b1 PRIVSCOPE_DECISION_LOG=log.jsonl node run.js") == 0);
  CHECK(s.Read("out.txt") ==
        "ok\nPrivscopeDenied {\"service\":\"s3\",\"resource\":\"other/a.txt\","
        "\"action\":\"s3:PutObject\",\"reason\":\"ResourceMiss\"}\n");
  auto log = s.Read("log.jsonl");
  CHECK(log.find("\"verdict\":\"Allow\"") != std::string::npos);
  CHECK(log.find("\"resource\":\"orders\"") != std::string::npos);
  CHECK(log.find("\"verdict\":\"Deny\",\"reason\":\"ResourceMiss\"") != std::string::npos);
}

TEST_CASE("javascript sidecar is read at runtime") {
  if (!Have("node")) return;
  Scratch s;
  auto inst = Instrument(Unit("fn.js", kJsV2), EmbedMode::kSidecar, {{"S3_NAME", "b1"}});
  s.Write("node_modules/aws-sdk/index.js", kFakeAwsSdk);
  s.Write("fn.js", inst.text);
  s.Write(inst.embedded_allowlist_ref, *inst.sidecar);
  s.Write("run.js", kJsDriver);
  REQUIRE(s.Run("S3_NAME=b1 node run.js") == 0);
  CHECK(s.Read("out.txt").rfind("ok\nPrivscopeDenied ", 0) == 0);
}

const char* kFakeBoto3 = R"(class _S3(object):
    def put_object(self, **kwargs):
        return "put " + kwargs["Bucket"] + "/" + kwargs["Key"]


class _Table(object):
    def __init__(self, name):
        self.name = name

    def put_item(self, **kwargs):
        return "item " + self.name


class _Dynamo(object):
    def Table(self, name):
        return _Table(name)


def client(name):
    return _S3()


def resource(name):
    return _Dynamo()
)";

const char* kPyDriver = R"(import os
import fn

fn.handler({"name": "a.txt", "id": "1"}, None)
print("ok")
os.environ["TABLE"] = "t2"
try:
    fn.handler({"name": "a.txt", "id": "1"}, None)
    print("not denied")
except fn.PrivscopeDenied as e:
    print(sorted(e.payload.items()))
)";

TEST_CASE("python hooks allow listed calls and deny others") {
  if (!Have("python3")) return;
  Scratch s;
  s.Write("boto3/__init__.py", kFakeBoto3);
  s.Write("fn.py", Instrument(Unit("fn.py", kPy), EmbedMode::kInline,
                              {{"S3_NAME", "b1"}, {"TABLE", "t1"}}).text);
  s.Write("run.py", kPyDriver);
  REQUIRE(s.Run("S3_NAME=b1 TABLE=t1 PRIVSCOPE_DECISION_LOG=log.jsonl python3 run.py") == 0);
  // The table handle is bound at import time, so the env change is not seen.
  CHECK(s.Read("out.txt") == "ok\nnot denied\n");
  auto log = s.Read("log.jsonl");
  CHECK(log.find("\"resource\": \"t1\"") != std::string::npos);
  CHECK(log.find("\"verdict\": \"Deny\"") == std::string::npos);
}

TEST_CASE("python hooks deny an unlisted bucket") {
  if (!Have("python3")) return;
  Scratch s;
  s.Write("boto3/__init__.py", kFakeBoto3);
  s.Write("fn.py", Instrument(Unit("fn.py", kPy), EmbedMode::kInline,
                              {{"S3_NAME", "b1"}, {"TABLE", "t1"}}).text);
  s.Write("run.py", "import fn\nfn.handler({'name': 'a.txt', 'id': '1'}, None)\n");
  CHECK(s.Run("S3_NAME=b2 TABLE=t1 python3 run.py") != 0);
  auto out = s.Read("out.txt");
  CHECK(out.find("PrivscopeDenied") != std::string::npos);
  CHECK(out.find("\"reason\": \"ResourceMiss\"") != std::string::npos);
}

}  // namespace
}  // namespace privscope
