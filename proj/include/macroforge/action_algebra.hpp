#pragma once

// Actions as precondition/postcondition pairs over partial states, plan
// semantics, and the combine/better primitives in their literal,
// pair-set form. The graph engine uses the bitset kernel in facts.hpp;
// this form is the readable reference it is tested against.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "macroforge/core_model.hpp"

namespace macroforge {

using ActionId = std::uint32_t;
inline constexpr ActionId kNoAction = static_cast<ActionId>(-1);

struct Derivation {
  ActionId left;
  ActionId right;
  bool operator==(const Derivation&) const = default;
};

struct Action {
  ActionId id = kNoAction;
  std::string name;
  PartialState pre;
  PartialState post;
  std::optional<Derivation> derivation;

  /// Condition equality; ignores id, name and derivation.
  bool same_conditions(const Action& other) const {
    return pre == other.pre && post == other.post;
  }
  bool operator==(const Action&) const = default;
};

struct Plan {
  std::vector<ActionId> steps;
};

/// Drops postcondition pairs already required by the precondition.
inline Action normalized(Action a) {
  a.post = minus(a.post, a.pre);
  return a;
}

inline bool applicable(const Action& a, const State& s) { return a.pre.holds_in(s); }

/// s[a]: post(a) overrides s when a is applicable, otherwise s is unchanged.
inline State apply_action(const State& s, const Action& a) {
  if (!applicable(a, s)) return s;
  State out = s;
  for (const auto& p : a.post) out[p.var] = p.value;
  return out;
}

/// Left fold of apply_action. `registry[id]` must hold the action with that id.
inline State apply_plan(State s, const Plan& plan, std::span<const Action> registry) {
  for (ActionId id : plan.steps) {
    if (id >= registry.size()) throw InputError("plan references unknown action " + std::to_string(id));
    s = apply_action(s, registry[id]);
  }
  return s;
}

/// The action equivalent to running `a` then `b`. Requires the chain to be
/// realisable: b's precondition may not contradict what is known after a.
inline Action combine(const Action& a, const Action& b) {
  // What holds right after a has run.
  PartialState known = a.post;
  for (const auto& p : a.pre)
    if (!a.post.defines(p.var)) known.set(p.var, p.value);

  PartialState pr = a.pre;
  for (const auto& p : b.pre) {
    if (auto k = known.get(p.var)) {
      if (*k != p.value)
        throw MisuseError("combine: precondition " + std::to_string(p.var) + "=" +
                          std::to_string(p.value) + " of the second action contradicts the first");
      continue;
    }
    pr.set(p.var, p.value);
  }

  PartialState pos = b.post;
  for (const auto& p : a.post)
    if (!b.post.defines(p.var)) pos.set(p.var, p.value);

  Action out;
  out.pre = std::move(pr);
  out.post = minus(pos, out.pre);
  out.derivation = Derivation{a.id, b.id};
  return out;
}

/// True when `candidate` has strictly smaller conditions than `incumbent`
/// (containment on both sides, strict on at least one).
inline bool better_than(const Action& candidate, const Action& incumbent) {
  const bool pre_sub = candidate.pre.subset_of(incumbent.pre);
  const bool post_sub = candidate.post.subset_of(incumbent.post);
  if (!pre_sub || !post_sub) return false;
  return candidate.pre.size() < incumbent.pre.size() ||
         candidate.post.size() < incumbent.post.size();
}

}  // namespace macroforge
