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

#ifndef PRIVSCOPE_TESTS_SUPPORT_CORPUS_H_
#define PRIVSCOPE_TESTS_SUPPORT_CORPUS_H_

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "privscope/common/io.h"
#include "privscope/allow/allowlist.h"

namespace privscope::testing {

// One fixture function with its hand-written expectations.
struct Fixture {
  std::string id;
  std::filesystem::path dir;
  std::filesystem::path source;
  Language language = Language::kJavaScript;
  Vendor vendor = Vendor::kAws;
  bool dynamic = false;
  std::set<std::pair<std::string, std::string>> calls;        // service, method
  std::set<std::pair<std::string, std::string>> permissions;  // action, resource
  std::set<std::tuple<std::string, std::string, std::string>> fallbacks;  // service, method, reason
  EnvValues env;
};

inline std::filesystem::path FixturesDir() { return PRIVSCOPE_FIXTURES_DIR; }

// Every directory under the fixtures root holding a manifest.json, by id.
inline std::vector<Fixture> LoadCorpus() {
  std::vector<Fixture> out;
  for (const auto& entry : std::filesystem::directory_iterator(FixturesDir())) {
    auto manifest = entry.path() / "manifest.json";
    if (!entry.is_directory() || !std::filesystem::exists(manifest)) continue;
    Json m = ParseJsonFile(manifest);
    Fixture f;
    f.id = m.at("id").get<std::string>();
    f.dir = entry.path();
    f.source = entry.path() / m.at("source").get<std::string>();
    f.language = *ParseLanguage(m.at("language").get<std::string>());
    f.vendor = *ParseVendor(m.at("vendor").get<std::string>());
    f.dynamic = m.at("kind") == "dynamic";
    auto str = [](const Json& j, const char* key) { return j.at(key).get<std::string>(); };
    for (const auto& c : m.at("calls")) f.calls.insert({str(c, "service"), str(c, "method")});
    for (const auto& p : m.at("permissions")) {
      f.permissions.insert({str(p, "action"), str(p, "resource")});
    }
    for (const auto& b : m.at("fallbacks")) {
      f.fallbacks.insert({str(b, "service"), str(b, "method"), str(b, "reason")});
    }
    if (m.contains("env")) {
      for (const auto& [k, v] : m.at("env").items()) f.env[k] = v.get<std::string>();
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.id < b.id; });
  return out;
}

// Identifiers the fixture config supplies for resource names.
inline NamingConfig CorpusNaming() {
  Json cfg = ParseJsonFile(FixturesDir() / "privscope.json");
  NamingConfig naming;
  for (const auto& [k, v] : cfg.at("naming").items()) naming.values[k] = v.get<std::string>();
  return naming;
}

}  // namespace privscope::testing

#endif  // PRIVSCOPE_TESTS_SUPPORT_CORPUS_H_
