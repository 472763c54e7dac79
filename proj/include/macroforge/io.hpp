#pragma once

// JSON encodings of instances, macro results and succinct plans. Output is
// canonical: object keys sorted, arrays in id / canonical order.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "macroforge/action_graph.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/instance.hpp"
#include "macroforge/macro_engine.hpp"
#include "macroforge/solver.hpp"

namespace macroforge {

using Json = nlohmann::json;

inline constexpr std::string_view kInstanceFormat = "macroforge-instance/1";

namespace detail {

[[noreturn]] inline void fail_at(const std::string& path, const std::string& msg) {
  throw InputError(path + ": " + msg);
}

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(path, std::string("missing field '") + key + "'");
  return *it;
}

inline const std::string& as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail_at(path, "expected a string");
  return j.get_ref<const std::string&>();
}

inline std::uint64_t as_index(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    fail_at(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
}
inline void expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail_at(path, "expected an array");
}

inline std::string member(const std::string& path, const std::string& key) {
  const bool plain = !key.empty() && key.find_first_of(".[]'\" ") == std::string::npos;
  return plain ? path + "." + key : path + "['" + key + "']";
}
inline std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("$: malformed JSON: ") + e.what());
  }
}

}  // namespace detail

inline Json partial_to_json(const PartialState& p, const VariableTable& vars) {
  Json out = Json::object();
  for (const auto& a : p) out[vars.name(a.var)] = vars.value_name(a.var, a.value);
  return out;
}

inline Json state_to_json(const State& s, const VariableTable& vars) {
  return partial_to_json(PartialState::from_state(s), vars);
}

inline PartialState partial_from_json(const Json& j, const VariableTable& vars,
                                      const std::string& path) {
  detail::expect_object(j, path);
  PartialState p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string at = detail::member(path, it.key());
    const auto v = vars.find(it.key());
    if (!v) detail::fail_at(at, "unknown variable '" + it.key() + "'");
    const auto& name = detail::as_string(it.value(), at);
    const auto x = vars.find_value(*v, name);
    if (!x) detail::fail_at(at, "value '" + name + "' is not in the domain of '" + it.key() + "'");
    p.set(*v, *x);
  }
  return p;
}

inline State state_from_json(const Json& j, const VariableTable& vars, const std::string& path) {
  const PartialState p = partial_from_json(j, vars, path);
  std::vector<Value> values(vars.size());
  for (VarId v = 0; v < vars.size(); ++v) {
    const auto x = p.get(v);
    if (!x) detail::fail_at(path, "state does not assign variable '" + vars.name(v) + "'");
    values[v] = *x;
  }
  return State(std::move(values));
}

inline Json instance_to_json(const PlanningInstance& inst) {
  Json vars = Json::array();
  for (VarId v = 0; v < inst.vars.size(); ++v)
    vars.push_back({{"name", inst.vars.name(v)}, {"domain", inst.vars.domain(v)}});
  Json actions = Json::array();
  for (const auto& a : inst.actions)
    actions.push_back({{"name", a.name},
                       {"pre", partial_to_json(a.pre, inst.vars)},
                       {"post", partial_to_json(a.post, inst.vars)}});
  Json out{{"format", kInstanceFormat},
           {"variables", std::move(vars)},
           {"init", state_to_json(inst.init, inst.vars)},
           {"goal", partial_to_json(inst.goal, inst.vars)},
           {"actions", std::move(actions)}};
  if (!inst.domain.empty()) out["domain"] = inst.domain;
  return out;
}

inline PlanningInstance instance_from_json(const Json& j) {
  using namespace detail;
  const std::string root = "$";
  expect_object(j, root);
  const auto& format = as_string(field(j, "format", root), member(root, "format"));
  if (format != kInstanceFormat)
    fail_at(member(root, "format"), "unsupported format '" + format + "'");
  PlanningInstance inst;
  if (auto it = j.find("domain"); it != j.end()) inst.domain = as_string(*it, member(root, "domain"));

  const std::string vpath = member(root, "variables");
  const Json& vars = field(j, "variables", root);
  expect_array(vars, vpath);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string at = item(vpath, i);
    expect_object(vars[i], at);
    const auto& name = as_string(field(vars[i], "name", at), member(at, "name"));
    const Json& dom = field(vars[i], "domain", at);
    expect_array(dom, member(at, "domain"));
    std::vector<std::string> values;
    for (std::size_t d = 0; d < dom.size(); ++d)
      values.push_back(as_string(dom[d], item(member(at, "domain"), d)));
    try {
      inst.vars.add(name, std::move(values));
    } catch (const InputError& e) {
      fail_at(at, e.what());
    }
  }

  inst.init = state_from_json(field(j, "init", root), inst.vars, member(root, "init"));
  inst.goal = partial_from_json(field(j, "goal", root), inst.vars, member(root, "goal"));

  const std::string apath = member(root, "actions");
  const Json& actions = field(j, "actions", root);
  expect_array(actions, apath);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string at = item(apath, i);
    expect_object(actions[i], at);
    Action a;
    a.id = static_cast<ActionId>(i);
    a.name = as_string(field(actions[i], "name", at), member(at, "name"));
    a.pre = partial_from_json(field(actions[i], "pre", at), inst.vars, member(at, "pre"));
    a.post = partial_from_json(field(actions[i], "post", at), inst.vars, member(at, "post"));
    inst.actions.push_back(std::move(a));
  }
  inst.validate();
  return inst;
}

inline PlanningInstance parse_instance(std::string_view text) {
  return instance_from_json(detail::parse_text(text));
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json action_to_json(const MacroLibrary& lib, ActionId id, const VariableTable& vars) {
  const Action a = lib.action(id);
  Json out{{"id", id},
           {"name", lib.display_name(id)},
           {"pre", partial_to_json(a.pre, vars)},
           {"post", partial_to_json(a.post, vars)}};
  if (a.derivation) out["derivation"] = {a.derivation->left, a.derivation->right};
  return out;
}

inline Json library_to_json(const MacroLibrary& lib, const VariableTable& vars) {
  Json out = Json::array();
  for (ActionId id = 0; id < lib.size(); ++id) out.push_back(action_to_json(lib, id, vars));
  return out;
}

inline MacroLibrary library_from_json(const Json& j, const VariableTable& vars,
                                      const std::string& path) {
  using namespace detail;
  expect_array(j, path);
  MacroLibrary lib(vars);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = item(path, i);
    expect_object(j[i], at);
    if (as_index(field(j[i], "id", at), member(at, "id")) != i)
      fail_at(member(at, "id"), "action ids must be 0, 1, 2, ... in order");
    Action a;
    a.id = static_cast<ActionId>(i);
    a.name = as_string(field(j[i], "name", at), member(at, "name"));
    a.pre = partial_from_json(field(j[i], "pre", at), vars, member(at, "pre"));
    a.post = partial_from_json(field(j[i], "post", at), vars, member(at, "post"));
    if (auto d = j[i].find("derivation"); d != j[i].end()) {
      const std::string dp = member(at, "derivation");
      expect_array(*d, dp);
      if (d->size() != 2) fail_at(dp, "expected [left, right]");
      a.derivation = Derivation{static_cast<ActionId>(as_index((*d)[0], item(dp, 0))),
                                static_cast<ActionId>(as_index((*d)[1], item(dp, 1)))};
      if (a.derivation->left >= i || a.derivation->right >= i)
        fail_at(dp, "derivation must reference earlier actions");
      if (a.name == "m" + std::to_string(i)) a.name.clear();
    }
    lib.append(a);
  }
  return lib;
}

inline Json plan_to_json(const SuccinctPlan& plan, const VariableTable& vars) {
  Json trace = Json::array();
  for (const auto& s : plan.trace) trace.push_back(state_to_json(s, vars));
  return {{"actions", library_to_json(plan.library, vars)},
          {"top", plan.top},
          {"trace", std::move(trace)}};
}

inline SuccinctPlan plan_from_json(const Json& j, const VariableTable& vars) {
  using namespace detail;
  const std::string root = "$";
  expect_object(j, root);
  SuccinctPlan plan;
  plan.library = library_from_json(field(j, "actions", root), vars, member(root, "actions"));
  const Json& top = field(j, "top", root);
  expect_array(top, member(root, "top"));
  for (std::size_t i = 0; i < top.size(); ++i) {
    const auto id = as_index(top[i], item(member(root, "top"), i));
    if (id >= plan.library.size()) fail_at(item(member(root, "top"), i), "unknown action id");
    plan.top.push_back(static_cast<ActionId>(id));
  }
  if (auto t = j.find("trace"); t != j.end()) {
    expect_array(*t, member(root, "trace"));
    for (std::size_t i = 0; i < t->size(); ++i)
      plan.trace.push_back(state_from_json((*t)[i], vars, item(member(root, "trace"), i)));
  }
  return plan;
}

inline SuccinctPlan parse_plan(std::string_view text, const VariableTable& vars) {
  return plan_from_json(detail::parse_text(text), vars);
}

/// Wall time is left out unless asked for, so equal runs dump equal bytes.
inline Json macro_stats_to_json(const MacroStats& s, bool with_time) {
  Json out{{"iterations", s.iterations},     {"edges", s.edges},
           {"label_changes", s.label_changes}, {"edge_events", s.edge_events},
           {"triples", s.triples},           {"combines", s.combines},
           {"vertices", s.vertices},         {"labels", s.labels}};
  if (with_time) out["wall_ms"] = s.wall_ms;
  return out;
}

/// States (ball order), edges sorted by (source, target), the registry and
/// its derivation log.
inline Json macro_result_to_json(const MacroResult& r, const VariableTable& vars,
                                 bool with_time = false) {
  Json states = Json::array();
  for (const auto& s : r.graph.vertices()) states.push_back(state_to_json(s, vars));
  Json edges = Json::array();
  for (const auto& e : r.graph.edges()) edges.push_back({e.source, e.target, e.label});
  Json log = Json::array();
  for (const auto& d : r.library.log()) log.push_back({d.parent, d.left, d.right});
  return {{"states", std::move(states)},
          {"edges", std::move(edges)},
          {"actions", library_to_json(r.library, vars)},
          {"base", r.base},
          {"log", std::move(log)},
          {"stats", macro_stats_to_json(r.stats, with_time)}};
}

}  // namespace macroforge
