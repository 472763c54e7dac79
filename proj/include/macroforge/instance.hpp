#pragma once

#include <string>
#include <vector>

#include "macroforge/action_algebra.hpp"
#include "macroforge/core_model.hpp"
#include "macroforge/errors.hpp"

namespace macroforge {

/// Π = (V, init, goal, A). `actions[i].id == i`.
struct PlanningInstance {
  VariableTable vars;
  State init;
  PartialState goal;
  std::vector<Action> actions;
  /// Generator family ("blocksworld", "hanoi") or empty; lets tools rebuild
  /// the domain's consistency filter for instances read from disk.
  std::string domain;

  bool operator==(const PlanningInstance&) const = default;

  void validate() const {
    if (init.size() != vars.size()) throw InputError("init is not total over the variables");
    for (VarId v = 0; v < vars.size(); ++v)
      if (init[v] >= vars.domain_size(v)) throw InputError("init value out of domain for " + vars.name(v));
    auto check = [&](const PartialState& p, const std::string& where) {
      for (const auto& a : p) {
        if (a.var >= vars.size()) throw InputError(where + ": unknown variable");
        if (a.value >= vars.domain_size(a.var))
          throw InputError(where + ": value out of domain for " + vars.name(a.var));
      }
    };
    check(goal, "goal");
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i].id != i) throw InputError("action ids must be consecutive");
      check(actions[i].pre, "action " + actions[i].name + " pre");
      check(actions[i].post, "action " + actions[i].name + " post");
    }
  }

  bool solved(const State& s) const { return is_goal_state(s, goal); }
};

}  // namespace macroforge
