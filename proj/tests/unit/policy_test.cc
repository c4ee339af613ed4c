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

#include <string>

#include "doctest.h"
#include "privscope/policy/policy.h"
#include "support/generators.h"

namespace privscope {
namespace {

const NamingConfig kNaming{{{"account_id", "123456789012"},
                            {"region", "us-east-1"},
                            {"project", "proj"},
                            {"subscription", "sub-1"},
                            {"resource_group", "rg"},
                            {"storage_account", "acct"},
                            {"cosmos_account", "cosmos"}}};

PermissionSet Set(std::vector<std::pair<std::string, std::string>> grants) {
  PermissionSet ps;
  ps.function_id = "fn";
  ps.vendor = Vendor::kAws;
  for (auto& [action, resource] : grants) {
    PermissionRequirement r;
    r.action = action;
    r.resource = resource;
    ps.requirements.push_back(r);
  }
  return ps;
}

std::set<PolicyTriple> Triples(const PermissionSet& ps) {
  std::set<PolicyTriple> out;
  for (const auto& r : ps.requirements) out.insert({r.service(), r.resource, r.action});
  return out;
}

TEST_CASE("aws document for an env bucket") {
  const auto& rules = RuleSet::Default();
  auto doc = EmitPolicy(Set({{"s3:GetObject", "${S3_NAME}/*"}}), Vendor::kAws, kNaming, rules);
  CHECK(doc.body.dump() ==
        R"({"Statement":[{"Action":"s3:GetObject","Effect":"Allow","Resource":"arn:aws:s3:::${S3_NAME}/*","Sid":"Stmt1"}],"Version":"2012-10-17"})");
  CHECK_FALSE(doc.no_permissions_required);
  CHECK(doc.source_set_digest.size() == 64);
  CHECK(ValidatePolicy(doc, rules).ok());
}

TEST_CASE("actions sharing a resource share a statement") {
  auto doc = EmitPolicy(Set({{"s3:GetObject", "b/k"}, {"s3:PutObject", "b/k"}}), Vendor::kAws,
                        kNaming, RuleSet::Default());
  REQUIRE(doc.body["Statement"].size() == 1);
  CHECK(doc.body["Statement"][0]["Action"] == Json({"s3:GetObject", "s3:PutObject"}));
}

TEST_CASE("empty permission set") {
  const auto& rules = RuleSet::Default();
  for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
    auto doc = EmitPolicy(Set({}), v, kNaming, rules);
    CHECK(doc.no_permissions_required);
    CHECK(ValidatePolicy(doc, rules).ok());
    CHECK(ExpandPolicy(doc, rules, Vendor::kAws, kNaming).triples.empty());
  }
}

TEST_CASE("gcp conditions") {
  auto doc = EmitPolicy(Set({{"s3:GetObject", "b/in/*"}, {"s3:ListBucket", "*"}, {"s3:PutObject", "b/k"}}),
                        Vendor::kGcp, kNaming, RuleSet::Default());
  std::set<std::string> expressions;
  for (const auto& b : doc.body["bindings"]) expressions.insert(b["condition"]["expression"]);
  CHECK(expressions == std::set<std::string>{
                           "true",
                           R"(resource.name == "projects/_/buckets/b/objects/k")",
                           R"(resource.name.startsWith("projects/_/buckets/b/objects/in/"))"});
  CHECK(doc.body["includedPermissions"].size() == 3);
  CHECK(doc.service_wide_actions == std::vector<std::string>{"storage.objects.list"});
}

TEST_CASE("azure splits data actions") {
  auto doc = EmitPolicy(Set({{"s3:GetObject", "b/k"}, {"lambda:InvokeFunction", "f"}}),
                        Vendor::kAzure, kNaming, RuleSet::Default());
  const auto& roles = doc.body["roleDefinitions"];
  REQUIRE(roles.size() == 2);
  int data = 0;
  for (const auto& role : roles) data += static_cast<int>(role["DataActions"].size());
  CHECK(data == 1);
}

TEST_CASE("azure needs naming") {
  NamingConfig partial{{{"resource_group", "rg"}}};
  try {
    EmitPolicy(Set({{"s3:GetObject", "b/k"}}), Vendor::kAzure, partial, RuleSet::Default());
    FAIL("expected MissingNaming");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingNaming);
  }
  // AWS S3 ARNs carry no account or region.
  CHECK_NOTHROW(EmitPolicy(Set({{"s3:GetObject", "b/k"}}), Vendor::kAws, partial, RuleSet::Default()));
}

TEST_CASE("unknown unified action") {
  try {
    EmitPolicy(Set({{"s3:Teleport", "b/k"}}), Vendor::kAws, kNaming, RuleSet::Default());
    FAIL("expected UnmappableAction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnmappableAction);
  }
}

TEST_CASE("render and parse are inverse") {
  const auto& rules = RuleSet::Default();
  for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
    for (std::string neutral : {"b", "b/k", "b/dir/k", "b/*", "b*", "${B}/x", "*"}) {
      auto rendered = RenderResource(rules, "s3", v, neutral, kNaming);
      auto back = ParseResource(rules, "s3", v, rendered, kNaming);
      REQUIRE(back);
      CHECK(*back == neutral);
    }
  }
  CHECK_FALSE(ParseResource(rules, "s3", Vendor::kAws, "arn:aws:sqs:::q", kNaming));
}

TEST_CASE("tri-vendor emissions grant the same authority") {
  const auto& rules = RuleSet::Default();
  testing::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Vendor source = testing::Pick(rng, std::vector<Vendor>{Vendor::kAws, Vendor::kGcp, Vendor::kAzure});
    auto ps = testing::RandomPermissionSet(rng, rules, source);
    auto want = Triples(ps);
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      auto doc = PolicyDocument::FromJson(EmitPolicy(ps, v, kNaming, rules).ToJson());
      auto grants = ExpandPolicy(doc, rules, source, kNaming);
      CHECK(grants.foreign.empty());
      CHECK(grants.triples == want);
    }
  }
}

TEST_CASE("hand-edited wildcard action") {
  const auto& rules = RuleSet::Default();
  auto doc = PolicyDocument::FromJson(Json::parse(
      R"({"Version":"2012-10-17","Statement":[{"Effect":"Allow","Action":"s3:*","Resource":"arn:aws:s3:::b/*"}]})"));
  CHECK(doc.vendor == Vendor::kAws);
  auto report = ValidatePolicy(doc, rules);
  CHECK_FALSE(report.ok());
  CHECK(report.findings[0].kind == "wildcard-action");
  auto grants = ExpandPolicy(doc, rules, Vendor::kAws, kNaming);
  CHECK(grants.triples.count({"s3", "b/*", "s3:DeleteObject"}));
  CHECK(grants.triples.count({"s3", "b/*", "s3:GetObject"}));
}

TEST_CASE("wildcard resource needs a recorded fallback") {
  const auto& rules = RuleSet::Default();
  auto doc = EmitPolicy(Set({{"s3:GetObject", "*"}}), Vendor::kAws, kNaming, rules);
  CHECK(ValidatePolicy(doc, rules).ok());
  doc.service_wide_actions.clear();
  auto report = ValidatePolicy(doc, rules);
  REQUIRE_FALSE(report.ok());
  CHECK(report.findings[0].kind == "wildcard-resource");
  doc.scope = ScopeLevel::kService;
  CHECK(ValidatePolicy(doc, rules).ok());
}

TEST_CASE("duplicates and staleness warn") {
  const auto& rules = RuleSet::Default();
  auto ps = Set({{"s3:GetObject", "b/k"}});
  auto doc = EmitPolicy(ps, Vendor::kAws, kNaming, rules);
  doc.body["Statement"].push_back(doc.body["Statement"][0]);
  auto report = ValidatePolicy(doc, rules, std::string(64, '0'));
  CHECK(report.ok());
  std::set<std::string> kinds;
  for (const auto& f : report.findings) kinds.insert(f.kind);
  CHECK(kinds == std::set<std::string>{"duplicate", "stale"});
  CHECK(ValidatePolicy(doc, rules, ps.Digest()).findings.size() == 1);
}

TEST_CASE("unparseable documents") {
  auto code_of = [](const char* text) {
    try {
      PolicyDocument::FromJson(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  CHECK(code_of(R"({"hello":1})") == ErrorCode::kUnparseablePolicy);
  CHECK(code_of(R"({"Version":"2012-10-17","Statement":"x"})") == ErrorCode::kUnparseablePolicy);
  CHECK(code_of("[1]") == ErrorCode::kUnparseablePolicy);
  auto doc = PolicyDocument::FromJson(Json::parse(
      R"({"Version":"2012-10-17","Statement":[{"Effect":"Allow","NotAction":"s3:GetObject","Resource":"*"}]})"));
  CHECK_THROWS_AS(ExpandPolicy(doc, RuleSet::Default(), Vendor::kAws, kNaming), Error);
}

TEST_CASE("deny statements and unknown grants") {
  auto doc = PolicyDocument::FromJson(Json::parse(R"({"Version":"2012-10-17","Statement":[
    {"Effect":"Deny","Action":"s3:GetObject","Resource":"*"},
    {"Effect":"Allow","Action":["sqs:SendMessage","s3:GetObject"],"Resource":"arn:aws:sqs:us-east-1:1:q"}]})"));
  auto grants = ExpandPolicy(doc, RuleSet::Default(), Vendor::kAws, kNaming);
  CHECK(grants.triples.empty());
  CHECK(grants.foreign.size() == 2);
}

TEST_CASE("gcp permissions outside a binding apply everywhere") {
  auto doc = PolicyDocument::FromJson(Json::parse(
      R"({"title":"t","stage":"GA","includedPermissions":["storage.objects.get"],"bindings":[]})"));
  CHECK(doc.vendor == Vendor::kGcp);
  auto grants = ExpandPolicy(doc, RuleSet::Default(), Vendor::kGcp, kNaming);
  CHECK(grants.triples == std::set<PolicyTriple>{{"storage", "*", "storage:objects.get"}});
}

TEST_CASE("evaluator matches prefixes") {
  PolicyEvaluator eval({{"s3", "b/in/*", "s3:GetObject"}, {"s3", "b/k", "s3:PutObject"}});
  CHECK(eval.Permits("s3", "b/in/x", "s3:GetObject"));
  CHECK_FALSE(eval.Permits("s3", "b/out/x", "s3:GetObject"));
  CHECK_FALSE(eval.Permits("s3", "b/in/x", "s3:PutObject"));
  CHECK(eval.Permits("s3", "b/k", "s3:PutObject"));
  CHECK_FALSE(eval.Permits("s3", "b/k2", "s3:PutObject"));
}

}  // namespace
}  // namespace privscope
