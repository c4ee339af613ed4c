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

#include "doctest.h"
#include "privscope/common/error.h"
#include "privscope/source/rules.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

fs::path CopyRules(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("privscope_rules_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(RuleSet::DefaultDirectory())) {
    fs::copy_file(e.path(), dir / e.path().filename());
  }
  return dir;
}

void Overwrite(const fs::path& file, const std::string& from, const std::string& to) {
  std::string text = ReadFile(file);
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  std::ofstream(file, std::ios::binary) << text;
}

TEST_CASE("default rule set loads") {
  const RuleSet& rules = RuleSet::Default();
  CHECK(rules.pairs().size() == 8);
  CHECK(rules.IsSupported(Language::kGo, Vendor::kGcp));
  CHECK_FALSE(rules.IsSupported(Language::kGo, Vendor::kAzure));
  CHECK(rules.digest().size() == 64);

  const auto* js = rules.Find(Language::kJavaScript, Vendor::kAws);
  REQUIRE(js != nullptr);
  const auto* put = js->FindAction("s3", "putObject");
  REQUIRE(put != nullptr);
  CHECK(put->actions == std::vector<std::string>{"s3:PutObject"});
  CHECK(js->FindAction("dynamodb", "document.put") != nullptr);
  CHECK(js->FindAction("s3", "listObjectsV2")->wildcard_required);

  CHECK(rules.VendorsForImport(Language::kJavaScript, "@aws-sdk/client-s3") ==
        std::vector<Vendor>{Vendor::kAws});
  CHECK(rules.VendorsForImport(Language::kPython, "azure.storage.blob") ==
        std::vector<Vendor>{Vendor::kAzure});
  CHECK(rules.VendorsForImport(Language::kPython, "azurelib").empty());
  CHECK(rules.VendorsForImport(Language::kGo, "github.com/aws/aws-sdk-go-v2/service/s3") ==
        std::vector<Vendor>{Vendor::kAws});
}

TEST_CASE("native renderings invert per source vendor") {
  const RuleSet& rules = RuleSet::Default();
  for (const auto& [unified, r] : rules.actions()) {
    Vendor source = rules.FindService(ActionService(unified))->vendor;
    for (Vendor target : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      auto back = rules.UnifiedFromNative(target, source, r.For(target));
      REQUIRE(back.has_value());
      CHECK(*back == unified);
    }
  }
}

TEST_CASE("invalid rule files are rejected") {
  SUBCASE("schema violation") {
    auto dir = CopyRules("schema");
    Overwrite(dir / "javascript-aws.json", "\"putObject\"", "42");
    CHECK_THROWS_AS(RuleSet::Load(dir, RuleSet::DefaultSchemasDirectory()), Error);
  }
  SUBCASE("unknown action") {
    auto dir = CopyRules("action");
    Overwrite(dir / "python-aws.json", "\"s3:PutObject\"", "\"s3:PutObjekt\"");
    CHECK_THROWS_AS(RuleSet::Load(dir, RuleSet::DefaultSchemasDirectory()), Error);
  }
  SUBCASE("non-injective rendering") {
    auto dir = CopyRules("inject");
    Overwrite(dir / "actions.json", "\"storage.objects.get\"", "\"storage.objects.create\"");
    try {
      RuleSet::Load(dir, RuleSet::DefaultSchemasDirectory());
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidRules);
    }
  }
  SUBCASE("missing resource params") {
    auto dir = CopyRules("params");
    Overwrite(dir / "go-aws.json", "\"resource_params\": [\n        \"FunctionName\"\n      ]",
              "\"note\": \"x\"");
    CHECK_THROWS_AS(RuleSet::Load(dir, RuleSet::DefaultSchemasDirectory()), Error);
  }
}

}  // namespace
}  // namespace privscope
