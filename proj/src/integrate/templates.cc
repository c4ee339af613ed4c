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

#include "integrate/templates.h"

#include <map>

namespace privscope::detail {
namespace {

std::string Fill(std::string text, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    const std::string slot = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
      text.replace(pos, slot.size(), value);
      pos += value.size();
    }
  }
  return text;
}

// JSON string literal; also valid as a JavaScript, Python and Go string.
std::string Literal(const std::string& s) { return Json(s).dump(); }

constexpr char kJs[] = R"js(// privscope hooks begin
{{ESM_IMPORT}}function __privscope_spec() {
  return {{SPEC}};
}
function __privscope_fs() {
  return {{FS}};
}
function __privscope_allowlist() {
  if (!__privscope_allowlist.cached) {
    __privscope_allowlist.cached = {{ALLOWLIST}};
  }
  return __privscope_allowlist.cached;
}
function __privscope_fill(pattern) {
  let out = "";
  let rest = pattern;
  for (;;) {
    const start = rest.indexOf("${");
    const end = start < 0 ? -1 : rest.indexOf("}", start);
    if (end < 0) return out + rest;
    const value = process.env[rest.slice(start + 2, end)];
    if (value === undefined) return null;
    out += rest.slice(0, start) + value;
    rest = rest.slice(end + 1);
  }
}
function __privscope_match(pattern, resource) {
  if (pattern === "*") return true;
  if (pattern.endsWith("*")) return resource.startsWith(pattern.slice(0, -1));
  return pattern === resource;
}
function __privscope_verify(service, action, resource) {
  const byResource = (__privscope_allowlist().entries || {})[service];
  if (!byResource) return "ServiceMiss";
  let hit = false;
  for (const pattern of Object.keys(byResource)) {
    const concrete = __privscope_fill(pattern);
    if (concrete === null || !__privscope_match(concrete, resource)) continue;
    hit = true;
    if (byResource[pattern].includes(action)) return "Matched";
  }
  return hit ? "ActionMiss" : "ResourceMiss";
}
function __privscope_log(service, action, resource, reason) {
  const path = process.env.PRIVSCOPE_DECISION_LOG;
  if (!path) return;
  const line = {
    event: { service: service, operation: action },
    verdict: reason === "Matched" ? "Allow" : "Deny",
    reason: reason,
    timestamp: new Date().toISOString(),
  };
  if (resource) line.resource = resource;
  __privscope_fs().appendFileSync(path, JSON.stringify(line) + "\n");
}
function __privscope_deny(service, resource, action, reason) {
  const payload = { service: service, resource: resource, action: action, reason: reason };
  const err = new Error("privscope: unauthorized call " + JSON.stringify(payload));
  err.name = "PrivscopeDenied";
  err.privscope = payload;
  throw err;
}
function __privscope_params(rule, binds, args) {
  const out = Object.assign({}, binds);
  const first = args[0];
  if (first !== null && typeof first === "object" && !Array.isArray(first)) {
    for (const key of Object.keys(first)) {
      const v = first[key];
      if (!(key in out) && (typeof v === "string" || typeof v === "number")) out[key] = String(v);
    }
  }
  const names = rule.positional || [];
  for (let i = 0; i < names.length && i < args.length; i++) {
    const v = args[i];
    if (!(names[i] in out) && (typeof v === "string" || typeof v === "number")) out[names[i]] = String(v);
  }
  return out;
}
function __privscope_check(service, rule, params) {
  let resource = "*";
  let failed = false;
  if (!rule.wildcard && rule.params.length > 0) {
    const parts = [];
    for (const name of rule.params) {
      const v = params[name];
      if (v === undefined || v === "") break;
      parts.push(v);
    }
    failed = parts.length === 0;
    resource = parts.join("/");
  }
  for (const action of rule.actions) {
    const reason = failed ? "ResolutionFailure" : __privscope_verify(service, action, resource);
    __privscope_log(service, action, resource, reason);
    if (reason !== "Matched") __privscope_deny(service, resource, action, reason);
  }
}
function __privscope_redefine(target, name, value) {
  Object.defineProperty(target, name, { configurable: true, writable: true, value: value });
}
function __privscope_wrap(target, service, kind, binds, command) {
  if (target === null || (typeof target !== "object" && typeof target !== "function")) return target;
  const table = (__privscope_spec()[service] || {})[kind];
  if (!table) return target;
  for (const name of Object.keys(table.calls)) {
    const original = target[name];
    if (typeof original !== "function") continue;
    const rule = table.calls[name];
    __privscope_redefine(target, name, function (...args) {
      __privscope_check(service, rule, __privscope_params(rule, binds, args));
      return original.apply(this, args);
    });
  }
  if (command && typeof target.send === "function") {
    const send = target.send;
    __privscope_redefine(target, "send", function (cmd, ...rest) {
      const type = cmd && cmd.constructor ? cmd.constructor.name.replace(/Command$/, "") : "";
      const method = type.charAt(0).toLowerCase() + type.slice(1);
      const rule = table.calls[method];
      if (!rule) __privscope_deny(service, "", method, "ActionMiss");
      __privscope_check(service, rule, __privscope_params(rule, binds, [cmd.input || {}]));
      return send.call(this, cmd, ...rest);
    });
  }
  for (const name of Object.keys(table.derive)) {
    const d = table.derive[name];
    if (d.property) {
      const value = target[name];
      if (value !== null && typeof value === "object") {
        __privscope_redefine(target, name, __privscope_wrap(value, service, d.kind, Object.assign({}, binds), false));
      }
      continue;
    }
    const original = target[name];
    if (typeof original !== "function") continue;
    __privscope_redefine(target, name, function (...args) {
      const child = original.apply(this, args);
      const next = Object.assign({}, binds);
      for (let i = 0; i < d.bind.length && i < args.length; i++) {
        const v = args[i];
        if (typeof v === "string" || typeof v === "number") next[d.bind[i]] = String(v);
      }
      return __privscope_wrap(child, service, d.kind, next, false);
    });
  }
  return target;
}
function __privscope_guard(target, service, kind, command) {
  return __privscope_wrap(target, service, kind, {}, command === true);
}
// privscope hooks end)js";

constexpr char kJsNoop[] = R"js(// privscope hooks begin
// No cloud SDK calls were found; nothing is wrapped.
function __privscope_allowlist() {
  return {{ALLOWLIST}};
}
// privscope hooks end)js";

constexpr char kPy[] = R"py(# privscope hooks begin
class PrivscopeDenied(PermissionError):
    def __init__(self, payload):
        PermissionError.__init__(self, "privscope: unauthorized call " + __import__("json").dumps(payload, sort_keys=True))
        self.payload = payload


_PRIVSCOPE_SPEC = __import__("json").loads({{SPEC}})
_PRIVSCOPE_ALLOWLIST = {{ALLOWLIST_INIT}}


def _privscope_allowlist():
    global _PRIVSCOPE_ALLOWLIST
    if _PRIVSCOPE_ALLOWLIST is None:
        import json
        import os
        path = os.environ.get("PRIVSCOPE_ALLOWLIST") or os.path.join(os.path.dirname(os.path.abspath(__file__)), {{SIDECAR}})
        with open(path) as f:
            _PRIVSCOPE_ALLOWLIST = json.load(f)
    return _PRIVSCOPE_ALLOWLIST


def _privscope_fill(pattern):
    import os
    out = ""
    rest = pattern
    while "${" in rest:
        start = rest.index("${")
        end = rest.find("}", start)
        if end < 0:
            break
        name = rest[start + 2:end]
        if name not in os.environ:
            return None
        out += rest[:start] + os.environ[name]
        rest = rest[end + 1:]
    return out + rest


def _privscope_match(pattern, resource):
    if pattern == "*":
        return True
    if pattern.endswith("*"):
        return resource.startswith(pattern[:-1])
    return pattern == resource


def _privscope_verify(service, action, resource):
    by_resource = _privscope_allowlist().get("entries", {}).get(service)
    if by_resource is None:
        return "ServiceMiss"
    hit = False
    for pattern in sorted(by_resource):
        concrete = _privscope_fill(pattern)
        if concrete is None or not _privscope_match(concrete, resource):
            continue
        hit = True
        if action in by_resource[pattern]:
            return "Matched"
    if hit:
        return "ActionMiss"
    return "ResourceMiss"


def _privscope_log(service, action, resource, reason):
    import datetime
    import json
    import os
    path = os.environ.get("PRIVSCOPE_DECISION_LOG")
    if not path:
        return
    now = datetime.datetime.now(datetime.timezone.utc)
    line = {
        "event": {"service": service, "operation": action},
        "verdict": "Allow" if reason == "Matched" else "Deny",
        "reason": reason,
        "timestamp": now.strftime("%Y-%m-%dT%H:%M:%S.") + "%03dZ" % (now.microsecond // 1000),
    }
    if resource:
        line["resource"] = resource
    with open(path, "a") as f:
        f.write(json.dumps(line, sort_keys=True) + "\n")


def _privscope_params(rule, binds, args, kwargs):
    out = dict(binds)
    for key, value in kwargs.items():
        if key not in out and isinstance(value, (str, int)):
            out[key] = str(value)
    names = rule.get("positional", [])
    for i in range(min(len(names), len(args))):
        if names[i] not in out and isinstance(args[i], (str, int)):
            out[names[i]] = str(args[i])
    return out


def _privscope_check(service, rule, params):
    resource = "*"
    failed = False
    if not rule["wildcard"] and rule["params"]:
        parts = []
        for name in rule["params"]:
            value = params.get(name, "")
            if value == "":
                break
            parts.append(value)
        failed = not parts
        resource = "/".join(parts)
    for action in rule["actions"]:
        reason = "ResolutionFailure" if failed else _privscope_verify(service, action, resource)
        _privscope_log(service, action, resource, reason)
        if reason != "Matched":
            raise PrivscopeDenied({"service": service, "resource": resource, "action": action, "reason": reason})


def _privscope_checked(fn, service, rule, binds):
    def checked(*args, **kwargs):
        _privscope_check(service, rule, _privscope_params(rule, binds, args, kwargs))
        return fn(*args, **kwargs)
    return checked


def _privscope_deriving(fn, service, derive, binds):
    def derived(*args, **kwargs):
        child = fn(*args, **kwargs)
        bound = dict(binds)
        names = derive["bind"]
        for i in range(len(names)):
            if i < len(args) and isinstance(args[i], (str, int)):
                bound[names[i]] = str(args[i])
            elif names[i] in kwargs and isinstance(kwargs[names[i]], (str, int)):
                bound[names[i]] = str(kwargs[names[i]])
        return _privscope_wrap(child, service, derive["kind"], bound)
    return derived


class _PrivscopeWrapper(object):
    def __init__(self, target, service, kind, binds):
        object.__setattr__(self, "_privscope_state", (target, service, kind, binds))

    def __getattr__(self, name):
        target, service, kind, binds = object.__getattribute__(self, "_privscope_state")
        attr = getattr(target, name)
        table = _PRIVSCOPE_SPEC.get(service, {}).get(kind)
        if table is None:
            return attr
        if name in table["calls"] and callable(attr):
            return _privscope_checked(attr, service, table["calls"][name], binds)
        if name in table["derive"]:
            derive = table["derive"][name]
            if derive["property"]:
                return _privscope_wrap(attr, service, derive["kind"], dict(binds))
            if callable(attr):
                return _privscope_deriving(attr, service, derive, binds)
        return attr

    def __setattr__(self, name, value):
        setattr(object.__getattribute__(self, "_privscope_state")[0], name, value)


def _privscope_wrap(target, service, kind, binds):
    if target is None or isinstance(target, (str, int, float, bool)):
        return target
    return _PrivscopeWrapper(target, service, kind, binds)


def _privscope_guard(target, service, kind):
    return _privscope_wrap(target, service, kind, {})
# privscope hooks end)py";

constexpr char kPyNoop[] = R"py(# privscope hooks begin
# No cloud SDK calls were found; nothing is wrapped.
_PRIVSCOPE_ALLOWLIST = {{ALLOWLIST_INIT}}
# privscope hooks end)py";

constexpr char kGoImports[] = R"go(import (
	privscopejson "encoding/json"
	privscopeos "os"
{{FILEPATH_IMPORT}}	privscopereflect "reflect"
	privscopestrings "strings"
	privscopesync "sync"
	privscopetime "time"
))go";

constexpr char kGo[] = R"go(// privscope hooks begin

// PrivscopeDenied is the panic value for a call outside the allowlist.
type PrivscopeDenied struct {
	Service  string `json:"service"`
	Resource string `json:"resource"`
	Action   string `json:"action"`
	Reason   string `json:"reason"`
}

func (e *PrivscopeDenied) Error() string {
	b, _ := privscopejson.Marshal(e)
	return "privscope: unauthorized call " + string(b)
}

type privscopeRule struct {
	Actions  []string `json:"actions"`
	Params   []string `json:"params"`
	Wildcard bool     `json:"wildcard"`
}

const privscopeRulesJSON = {{SPEC}}

{{ALLOWLIST_DECL}}

var privscopeOnce privscopesync.Once
var privscopeRules map[string]privscopeRule
var privscopeAllow struct {
	Entries map[string]map[string][]string `json:"entries"`
}

func privscopeLoad() {
	privscopeOnce.Do(func() {
		if err := privscopejson.Unmarshal([]byte(privscopeRulesJSON), &privscopeRules); err != nil {
			panic(err)
		}
		data := privscopeAllowListData()
		if err := privscopejson.Unmarshal(data, &privscopeAllow); err != nil {
			privscopeAllow.Entries = nil
		}
	})
}

func privscopeFill(pattern string) (string, bool) {
	out := ""
	rest := pattern
	for {
		start := privscopestrings.Index(rest, "${")
		if start < 0 {
			return out + rest, true
		}
		end := privscopestrings.Index(rest[start:], "}")
		if end < 0 {
			return out + rest, true
		}
		value, ok := privscopeos.LookupEnv(rest[start+2 : start+end])
		if !ok {
			return "", false
		}
		out += rest[:start] + value
		rest = rest[start+end+1:]
	}
}

func privscopeMatch(pattern, resource string) bool {
	if pattern == "*" {
		return true
	}
	if privscopestrings.HasSuffix(pattern, "*") {
		return privscopestrings.HasPrefix(resource, pattern[:len(pattern)-1])
	}
	return pattern == resource
}

func privscopeVerify(service, action, resource string) string {
	byResource, ok := privscopeAllow.Entries[service]
	if !ok {
		return "ServiceMiss"
	}
	hit := false
	for pattern, actions := range byResource {
		concrete, ok := privscopeFill(pattern)
		if !ok || !privscopeMatch(concrete, resource) {
			continue
		}
		hit = true
		for _, a := range actions {
			if a == action {
				return "Matched"
			}
		}
	}
	if hit {
		return "ActionMiss"
	}
	return "ResourceMiss"
}

func privscopeLog(service, action, resource, reason string) {
	path := privscopeos.Getenv("PRIVSCOPE_DECISION_LOG")
	if path == "" {
		return
	}
	verdict := "Deny"
	if reason == "Matched" {
		verdict = "Allow"
	}
	line := map[string]interface{}{
		"event":     map[string]string{"service": service, "operation": action},
		"verdict":   verdict,
		"reason":    reason,
		"timestamp": privscopetime.Now().UTC().Format("2006-01-02T15:04:05.000Z"),
	}
	if resource != "" {
		line["resource"] = resource
	}
	b, _ := privscopejson.Marshal(line)
	f, err := privscopeos.OpenFile(path, privscopeos.O_APPEND|privscopeos.O_CREATE|privscopeos.O_WRONLY, 0644)
	if err != nil {
		return
	}
	defer f.Close()
	f.Write(append(b, '\n'))
}

func privscopeField(v privscopereflect.Value, name string) (privscopereflect.Value, bool) {
	for v.IsValid() && (v.Kind() == privscopereflect.Ptr || v.Kind() == privscopereflect.Interface) {
		if v.IsNil() {
			return privscopereflect.Value{}, false
		}
		v = v.Elem()
	}
	if !v.IsValid() || v.Kind() != privscopereflect.Struct {
		return privscopereflect.Value{}, false
	}
	f := v.FieldByNameFunc(func(n string) bool { return privscopestrings.EqualFold(n, name) })
	return f, f.IsValid()
}

func privscopeString(v privscopereflect.Value) (string, bool) {
	for v.IsValid() && (v.Kind() == privscopereflect.Ptr || v.Kind() == privscopereflect.Interface) {
		if v.IsNil() {
			return "", false
		}
		v = v.Elem()
	}
	if v.IsValid() && v.Kind() == privscopereflect.String {
		return v.String(), true
	}
	return "", false
}

// Handle accessors for resource slots that are bound on the receiver.
var privscopeAccessors = map[string]string{"bucket": "BucketName", "object": "ObjectName", "topic": "ID"}

func privscopeParam(receiver, input interface{}, name string) (string, bool) {
	if input != nil {
		if f, ok := privscopeField(privscopereflect.ValueOf(input), name); ok {
			if s, ok := privscopeString(f); ok {
				return s, true
			}
		}
	}
	if receiver == nil {
		return "", false
	}
	rv := privscopereflect.ValueOf(receiver)
	if m := rv.MethodByName(privscopeAccessors[name]); m.IsValid() && m.Type().NumIn() == 0 && m.Type().NumOut() == 1 {
		if s, ok := privscopeString(m.Call(nil)[0]); ok {
			return s, true
		}
	}
	if name == "collection" {
		if p, ok := privscopeField(rv, "Parent"); ok {
			if f, ok := privscopeField(p, "ID"); ok {
				return privscopeString(f)
			}
		}
	}
	if name == "collection" || name == "document" {
		if f, ok := privscopeField(rv, "ID"); ok {
			return privscopeString(f)
		}
	}
	return "", false
}

func privscopeCheck(service, method string, receiver, input interface{}, params ...string) {
	privscopeLoad()
	rule, ok := privscopeRules[service+"/"+method]
	if !ok {
		panic(&PrivscopeDenied{Service: service, Action: method, Reason: "ActionMiss"})
	}
	resource := "*"
	failed := false
	if !rule.Wildcard && len(params) > 0 {
		var parts []string
		for _, p := range params {
			v, ok := privscopeParam(receiver, input, p)
			if !ok || v == "" {
				break
			}
			parts = append(parts, v)
		}
		failed = len(parts) == 0
		resource = privscopestrings.Join(parts, "/")
	}
	for _, action := range rule.Actions {
		reason := "ResolutionFailure"
		if !failed {
			reason = privscopeVerify(service, action, resource)
		}
		privscopeLog(service, action, resource, reason)
		if reason != "Matched" {
			panic(&PrivscopeDenied{Service: service, Resource: resource, Action: action, Reason: reason})
		}
	}
}
// privscope hooks end)go";

constexpr char kGoInlineAllow[] = R"go(const privscopeAllowListJSON = {{ALLOWLIST}}

func privscopeAllowListData() []byte {
	return []byte(privscopeAllowListJSON)
})go";

constexpr char kGoSidecarAllow[] = R"go(func privscopeAllowListData() []byte {
	path := privscopeos.Getenv("PRIVSCOPE_ALLOWLIST")
	if path == "" {
		exe, _ := privscopeos.Executable()
		path = privscopefilepath.Join(privscopefilepath.Dir(exe), {{SIDECAR}})
	}
	data, err := privscopeos.ReadFile(path)
	if err != nil {
		return []byte("{}")
	}
	return data
})go";

constexpr char kGoNoop[] = R"go(// privscope hooks begin

// No cloud SDK calls were found; nothing is checked.
{{DECL}}
// privscope hooks end)go";

}  // namespace

std::string JsPreamble(const PreambleInputs& in) {
  std::string fs = in.esm ? "__privscope_fs_module" : "require(\"fs\")";
  std::string allow;
  if (in.sidecar_name.empty()) {
    allow = in.allowlist_json;
  } else if (in.esm) {
    allow = "JSON.parse(__privscope_fs().readFileSync(process.env.PRIVSCOPE_ALLOWLIST || new URL(" +
            Literal(in.sidecar_name) + ", import.meta.url), \"utf8\"))";
  } else {
    allow = "JSON.parse(__privscope_fs().readFileSync(process.env.PRIVSCOPE_ALLOWLIST || "
            "require(\"path\").join(__dirname, " + Literal(in.sidecar_name) + "), \"utf8\"))";
  }
  return Fill(kJs, {{"ESM_IMPORT", in.esm ? "import * as __privscope_fs_module from \"fs\";\n" : ""},
                    {"SPEC", in.spec.dump()},
                    {"FS", fs},
                    {"ALLOWLIST", allow}});
}

std::string JsNoopPreamble(const PreambleInputs& in) {
  return Fill(kJsNoop, {{"ALLOWLIST", in.sidecar_name.empty() ? in.allowlist_json
                                                               : Literal(in.sidecar_name)}});
}

std::string PyPreamble(const PreambleInputs& in) {
  std::string init = in.sidecar_name.empty()
                         ? "__import__(\"json\").loads(" + Literal(in.allowlist_json) + ")"
                         : "None";
  return Fill(kPy, {{"SPEC", Literal(in.spec.dump())},
                    {"ALLOWLIST_INIT", init},
                    {"SIDECAR", Literal(in.sidecar_name.empty() ? "" : in.sidecar_name)}});
}

std::string PyNoopPreamble(const PreambleInputs& in) {
  std::string init = in.sidecar_name.empty()
                         ? "__import__(\"json\").loads(" + Literal(in.allowlist_json) + ")"
                         : Literal(in.sidecar_name);
  return Fill(kPyNoop, {{"ALLOWLIST_INIT", init}});
}

std::string GoImports(const PreambleInputs& in) {
  return Fill(kGoImports, {{"FILEPATH_IMPORT", in.sidecar_name.empty()
                                                   ? ""
                                                   : "\tprivscopefilepath \"path/filepath\"\n"}});
}

std::string GoHelpers(const PreambleInputs& in) {
  std::string decl = in.sidecar_name.empty()
                         ? Fill(kGoInlineAllow, {{"ALLOWLIST", Literal(in.allowlist_json)}})
                         : Fill(kGoSidecarAllow, {{"SIDECAR", Literal(in.sidecar_name)}});
  return Fill(kGo, {{"SPEC", Literal(in.spec.dump())}, {"ALLOWLIST_DECL", decl}});
}

std::string GoNoopHelpers(const PreambleInputs& in) {
  std::string decl = in.sidecar_name.empty()
                         ? "const privscopeAllowListJSON = " + Literal(in.allowlist_json)
                         : "const privscopeAllowListFile = " + Literal(in.sidecar_name);
  return Fill(kGoNoop, {{"DECL", decl}});
}

}  // namespace privscope::detail
