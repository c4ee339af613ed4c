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

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "privscope/allow/allowlist.h"
#include "support/programs.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

const RuleSet& Rules() { return RuleSet::Default(); }

SemanticRegistry Build(const std::string& name, const std::string& text) {
  return BuildSemanticRegistry(SourceUnit::FromText(name, text), Rules());
}

PermissionSet Extract(const std::string& name, const std::string& text,
                      ScopeLevel scope = ScopeLevel::kEntity) {
  return ExtractPermissions(Build(name, text), Rules(), scope);
}

std::vector<std::pair<std::string, std::string>> Pairs(const PermissionSet& ps) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& r : ps.requirements) out.emplace_back(r.action, r.resource);
  return out;
}

const char* kUpload = R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
exports.handler = async (event) => {
  await s3.putObject({ Bucket: process.env.S3_NAME, Key: event.name, Body: event.body }).promise();
};
)";

TEST_CASE("env bucket with a dynamic key at each scope") {
  auto entity = Extract("up.js", kUpload);
  CHECK(Pairs(entity) == std::vector<std::pair<std::string, std::string>>{{"s3:PutObject", "${S3_NAME}/*"}});
  CHECK(entity.requirements[0].resolvability == Resolvability::kPrefix);
  REQUIRE(entity.env_bindings.count("S3_NAME"));
  CHECK(entity.env_bindings.at("S3_NAME").roles == std::vector<EnvRole>{{"s3", "bucket"}});
  CHECK(entity.fallbacks.empty());

  auto object = Extract("up.js", kUpload, ScopeLevel::kObject);
  CHECK(Pairs(object) == std::vector<std::pair<std::string, std::string>>{{"s3:PutObject", "${S3_NAME}/*"}});
  auto service = Extract("up.js", kUpload, ScopeLevel::kService);
  CHECK(Pairs(service) == std::vector<std::pair<std::string, std::string>>{{"s3:PutObject", "*"}});
  CHECK(service.scope == ScopeLevel::kService);
}

TEST_CASE("literal key") {
  auto ps = Extract("k.js", R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
exports.handler = async () => s3.getObject({ Bucket: process.env.S3_NAME, Key: 'report.csv' }).promise();
)");
  REQUIRE(ps.requirements.size() == 1);
  CHECK(ps.requirements[0].resource == "${S3_NAME}/report.csv");
  CHECK(ps.requirements[0].resolvability == Resolvability::kStatic);
}

TEST_CASE("two-leaf concatenations") {
  // Leaves are a literal or a handler parameter; only literal-then-dynamic
  // keeps a usable prefix.
  struct Leaf {
    std::string code;
    bool dynamic;
  };
  std::vector<Leaf> leaves = {{"'logs-'", false}, {"event.id", true}};
  for (const auto& a : leaves) {
    for (const auto& b : leaves) {
      std::string src = "const AWS = require('aws-sdk');\nconst db = new AWS.DynamoDB();\n"
                        "exports.handler = async (event) => db.getItem({ TableName: " +
                        a.code + " + " + (b.dynamic ? std::string("event.sfx") : "'v1'") + " }).promise();\n";
      auto ps = Extract("c.js", src);
      REQUIRE(ps.requirements.size() == 1);
      const auto& r = ps.requirements[0];
      Resolvability want = !a.dynamic && !b.dynamic ? Resolvability::kStatic
                           : !a.dynamic            ? Resolvability::kPrefix
                                                   : Resolvability::kDynamic;
      CAPTURE(src);
      CHECK(r.resolvability == want);
      if (want == Resolvability::kStatic) CHECK(r.resource == "logs-v1");
      if (want == Resolvability::kPrefix) CHECK(r.resource == "logs-*");
      if (want == Resolvability::kDynamic) {
        CHECK(r.resource == "*");
        REQUIRE(ps.fallbacks.size() == 1);
        CHECK(ps.fallbacks[0].reason == "dynamic-resource");
      }
    }
  }
}

TEST_CASE("list calls fall back to the service") {
  auto ps = Extract("l.js", R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
exports.handler = async () => {
  const out = await s3.listObjectsV2({ Bucket: 'b1' }).promise();
  await s3.getObject({ Bucket: 'b1', Key: 'k' }).promise();
};
)");
  CHECK(Pairs(ps) == std::vector<std::pair<std::string, std::string>>{{"s3:GetObject", "b1/k"}, {"s3:ListBucket", "*"}});
  REQUIRE(ps.fallbacks.size() == 1);
  CHECK(ps.fallbacks[0].reason == "wildcard-required");
  CHECK(ps.fallbacks[0].method == "listObjectsV2");
  CHECK_FALSE(ps.fallbacks[0].detail.empty());
}

TEST_CASE("unknown methods are findings") {
  auto reg = Build("u.js", R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
exports.handler = async () => s3.frobnicate({ Bucket: 'b' });
)");
  auto detected = DetectCalls(reg, Rules());
  CHECK(detected.matched.empty());
  REQUIRE(detected.findings.size() == 1);
  CHECK(detected.findings[0].kind == "unknown-method");
  auto ps = ExtractPermissions(reg, Rules(), ScopeLevel::kEntity);
  CHECK(ps.requirements.empty());
  CHECK(ps.findings.size() == 1);
}

TEST_CASE("forwarded helper calls keep their call location") {
  const std::string src = R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
function save(key) {
  return s3.putObject({ Bucket: 'b1', Key: key }).promise();
}
exports.handler = async () => {
  await save('a.txt');
};
)";
  auto reg = Build("h.js", src);
  auto detected = DetectCalls(reg, Rules());
  REQUIRE(detected.matched.size() == 1);
  const auto* site = detected.matched[0].site;
  REQUIRE(site->via);
  CHECK(site->via->line == 7);
  CHECK(site->location.line == 4);
  auto ps = ExtractPermissions(reg, Rules(), ScopeLevel::kEntity);
  CHECK(Pairs(ps) == std::vector<std::pair<std::string, std::string>>{{"s3:PutObject", "b1/a.txt"}});
}

TEST_CASE("map_actions reads the rule verbatim") {
  auto reg = Build("m.js", R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
const lambda = new AWS.Lambda();
exports.handler = async () => {
  await s3.putObject({ Bucket: 'b', Key: 'k' }).promise();
  await lambda.invoke({ FunctionName: 'f' }).promise();
};
)");
  std::map<std::string, std::vector<std::string>> got;
  for (const auto& s : reg.call_sites) got[s.method] = MapActions(s, reg, Rules());
  CHECK(got["putObject"] == std::vector<std::string>{"s3:PutObject"});
  CHECK(got["invoke"] == std::vector<std::string>{"lambda:InvokeFunction"});

  ServiceCallSite bogus;
  bogus.service = "s3";
  bogus.method = "teleport";
  CHECK_THROWS_AS(MapActions(bogus, reg, Rules()), Error);
}

TEST_CASE("map_actions with an added service") {
  // A copy of the shipped rules extended with a generic database service.
  fs::path dir = fs::temp_directory_path() / "privscope-rules-db";
  fs::remove_all(dir);
  fs::copy(RuleSet::DefaultDirectory(), dir);
  Json services = ParseJsonFile(dir / "services.json");
  services["services"]["database"] = services["services"]["dynamodb"];
  Json actions = ParseJsonFile(dir / "actions.json");
  actions["actions"]["database:GetObject"] = {{"aws", "database:GetObject"},
                                               {"gcp", "database.objects.get"},
                                               {"azure", "Microsoft.Example/objects/read"},
                                               {"azure_data", true}};
  Json js = ParseJsonFile(dir / "javascript-aws.json");
  Json rule = {{"service", "database"}, {"method", "getObject"}, {"actions", {"database:GetObject"}},
               {"resource_params", {"TableName"}}};
  js["actions"].push_back(rule);
  std::ofstream(dir / "services.json") << services.dump(2);
  std::ofstream(dir / "actions.json") << actions.dump(2);
  std::ofstream(dir / "javascript-aws.json") << js.dump(2);
  auto rules = RuleSet::Load(dir, RuleSet::DefaultSchemasDirectory());

  SemanticRegistry reg;
  reg.language = Language::kJavaScript;
  reg.vendor = Vendor::kAws;
  ServiceCallSite site;
  site.service = "database";
  site.method = "getObject";
  CHECK(MapActions(site, reg, rules) == std::vector<std::string>{"database:GetObject"});
  fs::remove_all(dir);
}

TEST_CASE("env bindings") {
  auto ps = Extract("t.py", R"(import os
import boto3

ddb = boto3.client('dynamodb')
TABLE = os.environ['TABLE']

def handler(event, context):
    ddb.put_item(TableName=TABLE, Item={})
    return ddb.get_item(TableName=TABLE, Key={})
)");
  REQUIRE(ps.env_bindings.size() == 1);
  const auto& b = ps.env_bindings.at("TABLE");
  CHECK(b.roles == std::vector<EnvRole>{{"dynamodb", "table"}});
  CHECK(b.use_sites.size() == 2);

  auto none = Extract("n.js", R"(const AWS = require('aws-sdk');
const s3 = new AWS.S3();
exports.handler = async () => s3.getObject({ Bucket: 'b', Key: 'k' }).promise();
)");
  CHECK(none.env_bindings.empty());
}

TEST_CASE("source without SDK calls") {
  auto ps = Extract("e.js", "exports.handler = async () => 1;\n");
  CHECK(ps.empty_source);
  CHECK(ps.requirements.empty());
}

TEST_CASE("permission set json round trip") {
  auto ps = Extract("up.js", kUpload);
  auto back = PermissionSet::FromJson(ps.ToJson());
  CHECK(back.Digest() == ps.Digest());
  CHECK(CanonicalJson(back.ToJson()) == CanonicalJson(ps.ToJson()));
}

TEST_CASE("generated programs: scope ordering, static resources, own calls allowed") {
  testing::Rng rng(21);
  for (int i = 0; i < 150; ++i) {
    auto prog = testing::RandomS3Program(rng);
    CAPTURE(prog.source);
    auto reg = Build("gen.js", prog.source);
    std::map<ScopeLevel, AllowList> lists;
    for (ScopeLevel s : {ScopeLevel::kEntity, ScopeLevel::kObject, ScopeLevel::kService}) {
      auto ps = ExtractPermissions(reg, Rules(), s);
      if (s == ScopeLevel::kEntity) {
        for (const auto& r : ps.requirements) {
          if (r.resolvability == Resolvability::kStatic && r.action != "s3:ListBucket") {
            CHECK(r.resource.find('*') == std::string::npos);
          }
        }
      }
      lists[s] = BuildAllowList(ps, testing::ProgramEnv());
    }
    // Every event the program can issue is allowed by its own entity set.
    for (const auto& e : prog.events) {
      CHECK(VerifyCall(e, lists[ScopeLevel::kEntity], {}, Rules()).verdict == Verdict::kAllow);
    }
    // Synthetic events: entity-allowed implies object-allowed implies service-allowed.
    for (const std::string& bucket : {"b1", "env-bucket", "logs-3", "zz"}) {
      for (const std::string& key : {"k.txt", "in/4", "q"}) {
        for (const std::string& action : {"s3:PutObject", "s3:GetObject", "s3:DeleteObject"}) {
          ServiceCallEvent e;
          e.service = "s3";
          e.operation = action;
          e.resolved_resource = bucket + "/" + key;
          bool ent = VerifyCall(e, lists[ScopeLevel::kEntity], {}, Rules()).verdict == Verdict::kAllow;
          bool obj = VerifyCall(e, lists[ScopeLevel::kObject], {}, Rules()).verdict == Verdict::kAllow;
          bool svc = VerifyCall(e, lists[ScopeLevel::kService], {}, Rules()).verdict == Verdict::kAllow;
          CHECK((!ent || obj));
          CHECK((!obj || svc));
        }
      }
    }
  }
}

}  // namespace
}  // namespace privscope
