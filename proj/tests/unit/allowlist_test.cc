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

#include <atomic>
#include <string>
#include <thread>

#include "doctest.h"
#include "privscope/allow/allowlist.h"
#include "privscope/common/schema.h"
#include "support/generators.h"
#include "support/oracle.h"

namespace privscope {
namespace {

const RuleSet& Rules() { return RuleSet::Default(); }

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

ServiceCallEvent Event(std::string service, std::string op, std::string resource) {
  ServiceCallEvent e;
  e.service = std::move(service);
  e.operation = std::move(op);
  e.resolved_resource = std::move(resource);
  return e;
}

SchemaValidator LoadSchema(const std::string& name) {
  return SchemaValidator(ParseJsonFile(RuleSet::DefaultSchemasDirectory() / (name + ".schema.json")));
}

TEST_CASE("env values fill the allowlist") {
  auto a = BuildAllowList(Set({{"s3:PutObject", "${S3_NAME}/*"}}), {{"S3_NAME", "user-bucket"}, {"OTHER", "x"}});
  CHECK(a.entries == AllowEntries{{"s3", {{"user-bucket/*", {"s3:PutObject"}}}}});
  CHECK(a.env_snapshot == EnvValues{{"S3_NAME", "user-bucket"}});
  CHECK(LoadSchema("allowlist").Validate(a.ToJson()).empty());
  CHECK(AllowList::FromJson(a.ToJson()).ToJson() == a.ToJson());
}

TEST_CASE("empty set denies everything") {
  auto a = BuildAllowList(Set({}), {});
  CHECK(a.empty());
  auto d = VerifyCall(Event("s3", "s3:GetObject", "b/k"), a, {}, Rules());
  CHECK(d.verdict == Verdict::kDeny);
  CHECK(d.reason == DecisionReason::kServiceMiss);
}

TEST_CASE("missing env value") {
  auto ps = Set({{"dynamodb:GetItem", "${TABLE}"}});
  try {
    BuildAllowList(ps, {});
    FAIL("expected MissingEnvValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingEnvValue);
    CHECK(e.detail() == "TABLE");
  }
  auto lax = BuildAllowList(ps, {}, AllowlistMode::kSnapshot, false);
  CHECK(lax.entries.at("dynamodb").count("${TABLE}"));
  auto e = Event("dynamodb", "dynamodb:GetItem", "orders");
  CHECK(VerifyCall(e, lax, {{"TABLE", "orders"}}, Rules()).verdict == Verdict::kAllow);
  CHECK(VerifyCall(e, lax, {}, Rules()).reason == DecisionReason::kResourceMiss);
}

TEST_CASE("deferred placeholders resolve per call") {
  auto a = BuildAllowList(Set({{"s3:GetObject", "${B}/in/*"}}), {{"B", "ignored"}}, AllowlistMode::kDeferred);
  CHECK(a.env_snapshot.empty());
  CHECK(a.entries.at("s3").count("${B}/in/*"));
  auto e = Event("s3", "s3:GetObject", "live/in/x");
  CHECK(VerifyCall(e, a, {{"B", "live"}}, Rules()).verdict == Verdict::kAllow);
  CHECK(VerifyCall(e, a, {{"B", "other"}}, Rules()).verdict == Verdict::kDeny);
}

TEST_CASE("lookup order and reasons") {
  AllowList a;
  a.entries["s3"]["user-bucket/*"] = {"s3:PutObject"};
  auto allow = VerifyCall(Event("s3", "s3:PutObject", "user-bucket/report.csv"), a, {}, Rules());
  CHECK(allow.verdict == Verdict::kAllow);
  CHECK(allow.reason == DecisionReason::kMatched);
  REQUIRE(allow.matched_entry);
  CHECK(allow.matched_entry->resource == "user-bucket/*");
  CHECK(VerifyCall(Event("s3", "s3:PutObject", "other-bucket/x"), a, {}, Rules()).reason ==
        DecisionReason::kResourceMiss);
  CHECK(VerifyCall(Event("s3", "s3:GetObject", "user-bucket/x"), a, {}, Rules()).reason ==
        DecisionReason::kActionMiss);
  CHECK(VerifyCall(Event("lambda", "lambda:InvokeFunction", "f"), a, {}, Rules()).reason ==
        DecisionReason::kServiceMiss);
}

TEST_CASE("most specific matching pattern is reported") {
  AllowList a;
  a.entries["s3"]["*"] = {"s3:GetObject"};
  a.entries["s3"]["b/*"] = {"s3:GetObject"};
  a.entries["s3"]["b/k"] = {"s3:GetObject"};
  CHECK(VerifyCall(Event("s3", "s3:GetObject", "b/k"), a, {}, Rules()).matched_entry->resource == "b/k");
  CHECK(VerifyCall(Event("s3", "s3:GetObject", "b/j"), a, {}, Rules()).matched_entry->resource == "b/*");
  CHECK(VerifyCall(Event("s3", "s3:GetObject", "c"), a, {}, Rules()).matched_entry->resource == "*");
}

TEST_CASE("event resources from parameters") {
  ServiceCallEvent e;
  e.service = "s3";
  e.operation = "s3:GetObject";
  e.params["Bucket"] = {"b", ""};
  e.params["Key"] = {"k", ""};
  CHECK(ResolveEventResource(e, {}, Rules()) == "b/k");

  ServiceCallEvent doc;
  doc.service = "cosmos";
  doc.operation = "cosmos:items.read";
  doc.params["database"] = {"", "DB"};
  doc.params["container"] = {"users", ""};
  CHECK(ResolveEventResource(doc, {{"DB", "prod"}}, Rules()) == "prod/users");
  CHECK_FALSE(ResolveEventResource(doc, {}, Rules()));

  ServiceCallEvent bucket_only = e;
  bucket_only.params.erase("Key");
  CHECK(ResolveEventResource(bucket_only, {}, Rules()) == "b");

  ServiceCallEvent no_bucket = e;
  no_bucket.params.erase("Bucket");
  CHECK_FALSE(ResolveEventResource(no_bucket, {}, Rules()));
  AllowList a;
  a.entries["s3"]["*"] = {"s3:GetObject"};
  auto d = VerifyCall(no_bucket, a, {}, Rules());
  CHECK(d.verdict == Verdict::kDeny);
  CHECK(d.reason == DecisionReason::kResolutionFailure);
}

TEST_CASE("account-wide operations use the default identifier") {
  AllowList a;
  a.entries["s3"]["b/*"] = {"s3:ListAllMyBuckets"};
  ServiceCallEvent e;
  e.service = "s3";
  e.operation = "s3:ListAllMyBuckets";
  e.requires_resource = false;
  CHECK(VerifyCall(e, a, {}, Rules()).reason == DecisionReason::kResourceMiss);
  a.entries["s3"]["*"] = {"s3:ListAllMyBuckets"};
  auto d = VerifyCall(e, a, {}, Rules());
  CHECK(d.verdict == Verdict::kAllow);
  CHECK(d.resource == "*");
}

TEST_CASE("verifier agrees with the flat-set oracle on a small alphabet") {
  auto alphabet = testing::SmallAlphabet();
  testing::Rng rng(11);
  int events = 0, denied_outside = 0;
  for (int i = 0; i < 200; ++i) {
    auto allow = testing::RandomAllowList(rng, alphabet);
    testing::FlatSetOracle oracle(allow, alphabet.resources);
    for (std::size_t s = 0; s < alphabet.services.size(); ++s) {
      for (const auto& r : alphabet.resources) {
        for (const auto& act : alphabet.actions[s]) {
          auto d = VerifyCall(Event(alphabet.services[s], act, r), allow, {}, Rules());
          bool expect = oracle.Permits(alphabet.services[s], r, act);
          CHECK((d.verdict == Verdict::kAllow) == expect);
          CHECK((d.verdict == Verdict::kAllow) == (d.reason == DecisionReason::kMatched));
          if (!expect) ++denied_outside;
          ++events;
        }
      }
    }
  }
  CHECK(events == 27 * 200);
  CHECK(denied_outside > 0);
}

TEST_CASE("adding an entry never revokes") {
  auto alphabet = testing::SmallAlphabet();
  testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto allow = testing::RandomAllowList(rng, alphabet);
    auto bigger = allow;
    auto extra = testing::RandomAllowList(rng, alphabet, 2);
    for (const auto& [s, by] : extra.entries) {
      for (const auto& [r, acts] : by) bigger.entries[s][r].insert(acts.begin(), acts.end());
    }
    for (std::size_t s = 0; s < alphabet.services.size(); ++s) {
      for (const auto& r : alphabet.resources) {
        for (const auto& act : alphabet.actions[s]) {
          auto e = Event(alphabet.services[s], act, r);
          if (VerifyCall(e, allow, {}, Rules()).verdict == Verdict::kAllow) {
            CHECK(VerifyCall(e, bigger, {}, Rules()).verdict == Verdict::kAllow);
          }
        }
      }
    }
  }
}

TEST_CASE("decision log lines") {
  AllowList a;
  a.entries["s3"]["b/*"] = {"s3:GetObject"};
  Verifier v(a, {}, Rules());
  std::vector<std::string> lines;
  v.SetDecisionLog([&](const std::string& l) { lines.push_back(l); },
                   [] { return std::chrono::system_clock::time_point(std::chrono::milliseconds(1700000000123)); });
  v.Verify(Event("s3", "s3:GetObject", "b/x"));
  v.Verify(Event("s3", "s3:PutObject", "b/x"));
  REQUIRE(lines.size() == 2);
  auto schema = LoadSchema("decision-log");
  for (const auto& l : lines) CHECK(schema.Validate(Json::parse(l)).empty());
  auto first = Json::parse(lines[0]);
  CHECK(first["verdict"] == "Allow");
  CHECK(first["timestamp"] == "2023-11-14T22:13:20.123Z");
  CHECK(Json::parse(lines[1])["reason"] == "ActionMiss");

  auto payload = ErrorPayload(Event("s3", "s3:PutObject", "b/x"),
                              VerifyCall(Event("s3", "s3:PutObject", "b/x"), a, {}, Rules()));
  CHECK(LoadSchema("error-payload").Validate(payload).empty());
  CHECK(payload == Json{{"service", "s3"}, {"resource", "b/x"}, {"action", "s3:PutObject"}, {"reason", "ActionMiss"}});
}

TEST_CASE("replacement is seen whole") {
  AllowList old_list, new_list;
  old_list.entries["s3"]["a/*"] = {"s3:GetObject"};
  old_list.entries["dynamodb"]["t"] = {"dynamodb:GetItem"};
  new_list.entries["s3"]["b/*"] = {"s3:GetObject"};
  Verifier v(old_list, {}, Rules());
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&] {
      while (!stop) {
        auto list = v.Current();
        bool a = VerifyCall(Event("s3", "s3:GetObject", "a/x"), *list, {}, Rules()).verdict == Verdict::kAllow;
        bool t2 = VerifyCall(Event("dynamodb", "dynamodb:GetItem", "t"), *list, {}, Rules()).verdict == Verdict::kAllow;
        bool b = VerifyCall(Event("s3", "s3:GetObject", "b/x"), *list, {}, Rules()).verdict == Verdict::kAllow;
        if (!((a && t2 && !b) || (!a && !t2 && b))) ++torn;
      }
    });
  }
  for (int i = 0; i < 500; ++i) v.Replace(i % 2 ? old_list : new_list);
  stop = true;
  for (auto& r : readers) r.join();
  CHECK(torn == 0);
}

TEST_CASE("drift reports excess grants") {
  const NamingConfig naming;
  auto live = PolicyDocument::FromJson(Json::parse(R"({"Version":"2012-10-17","Statement":[
    {"Effect":"Allow","Action":["s3:PutObject","s3:GetObject"],"Resource":"arn:aws:s3:::user-bucket/*"}]})"));
  auto allow = BuildAllowList(Set({{"s3:PutObject", "${S3_NAME}/*"}}), {{"S3_NAME", "user-bucket"}});
  auto report = DiffPolicy(live, allow, Rules(), Vendor::kAws, naming, "t");
  CHECK(report.excess == std::vector<PolicyTriple>{{"s3", "user-bucket/*", "s3:GetObject"}});
  CHECK(report.missing.empty());

  auto invoke = PolicyDocument::FromJson(Json::parse(R"({"Version":"2012-10-17","Statement":[
    {"Effect":"Allow","Action":"s3:PutObject","Resource":"arn:aws:s3:::user-bucket/*"},
    {"Effect":"Allow","Action":"lambda:InvokeFunction","Resource":"*"}]})"));
  report = DiffPolicy(invoke, allow, Rules(), Vendor::kAws, naming, "t");
  CHECK(report.excess == std::vector<PolicyTriple>{{"lambda", "*", "lambda:InvokeFunction"}});
  CHECK(report.ToJson()["excess"].size() == 1);
}

TEST_CASE("emitted policy and allowlist never drift") {
  const NamingConfig naming{{{"account_id", "1"}, {"region", "r"}, {"project", "p"}, {"subscription", "s"},
                             {"resource_group", "g"}, {"storage_account", "a"}, {"cosmos_account", "c"}}};
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Vendor source = testing::Pick(rng, std::vector<Vendor>{Vendor::kAws, Vendor::kGcp, Vendor::kAzure});
    auto ps = testing::RandomPermissionSet(rng, Rules(), source);
    EnvValues env{{"BUCKET", "real-bucket"}};
    auto mode = testing::Coin(rng) ? AllowlistMode::kSnapshot : AllowlistMode::kDeferred;
    auto allow = BuildAllowList(ps, env, mode);
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      auto report = DiffPolicy(EmitPolicy(ps, v, naming, Rules()), allow, Rules(), source, naming, "t");
      CHECK(report.empty());
    }
  }
}

}  // namespace
}  // namespace privscope
