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

#ifndef PRIVSCOPE_INTEGRATE_TEMPLATES_H_
#define PRIVSCOPE_INTEGRATE_TEMPLATES_H_

#include <string>

#include "privscope/common/io.h"

namespace privscope::detail {

struct PreambleInputs {
  Json spec;                   // rule table for the wrapped services
  std::string allowlist_json;  // compact allowlist, inline mode
  std::string sidecar_name;    // sidecar mode when non-empty
  bool esm = false;            // JavaScript module syntax
};

// Each preamble is a run of whole lines without a trailing newline.
std::string JsPreamble(const PreambleInputs& in);
std::string JsNoopPreamble(const PreambleInputs& in);
std::string PyPreamble(const PreambleInputs& in);
std::string PyNoopPreamble(const PreambleInputs& in);
std::string GoImports(const PreambleInputs& in);
std::string GoHelpers(const PreambleInputs& in);
std::string GoNoopHelpers(const PreambleInputs& in);

}  // namespace privscope::detail

#endif  // PRIVSCOPE_INTEGRATE_TEMPLATES_H_
