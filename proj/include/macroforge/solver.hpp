#pragma once

// solve_mph and the primitive-reachability baseline, plus succinct plans:
// streaming expansion, exact expanded length, and an independent validator.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "macroforge/action_graph.hpp"
#include "macroforge/core_model.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/instance.hpp"
#include "macroforge/library.hpp"
#include "macroforge/log.hpp"
#include "macroforge/macro_engine.hpp"

namespace macroforge {

using BigCount = boost::multiprecision::cpp_int;

/// Top-level sequence Q over `library`. Primitive ids coincide with the
/// instance's action ids. `trace` starts at init and lists every state
/// reached after a top-level step.
struct SuccinctPlan {
  MacroLibrary library;
  std::vector<ActionId> top;
  std::vector<State> trace;
};

enum class SolveStatus { solved, unknown, resource_exceeded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::unknown: return "unknown";
    default: return "resource_exceeded";
  }
}

struct SolveStats {
  std::uint64_t iterations = 0;
  std::vector<std::size_t> ball_sizes;  ///< one per iteration
  std::uint64_t edges = 0;              ///< summed over iterations
  std::uint64_t label_changes = 0;
  double wall_ms = 0;
  std::size_t max_ball() const {
    return ball_sizes.empty() ? 0 : *std::max_element(ball_sizes.begin(), ball_sizes.end());
  }
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::unknown;
  SuccinctPlan plan;  ///< complete when solved; the partial progress otherwise
  SolveStats stats;
  std::string detail;
};

struct SolveOptions {
  std::size_t ball_cap = kDefaultBallCap;
  /// Passed to compute_macros. The solver skips the certifying scan by
  /// default; tests certify the same graphs separately.
  MacroOptions macro = no_certify();
  /// Sees every compute_macros result before the solver moves on.
  std::function<void(const MacroResult&)> on_result;

 private:
  static MacroOptions no_certify() {
    MacroOptions m;
    m.certify = false;
    return m;
  }
};

namespace detail {

inline MacroLibrary plan_library(const PlanningInstance& inst) {
  MacroLibrary lib(inst.vars);
  for (const auto& a : inst.actions) lib.append(a);
  return lib;
}

/// Goal states first, then fewer wrong variables, then lexicographic state.
inline bool preferred(const State& a, const State& b, const PartialState& goal) {
  const bool ga = is_goal_state(a, goal), gb = is_goal_state(b, goal);
  if (ga != gb) return ga;
  const auto wa = wrong(a, goal).size(), wb = wrong(b, goal).size();
  if (wa != wb) return wa < wb;
  return a < b;
}

inline bool admissible_step(const State& s, const State& t, const PartialState& goal) {
  return is_goal_state(t, goal) || is_improvement(s, t, goal);
}

inline void check_progress(const PlanningInstance& inst, const State& prev, const State& next) {
  const auto before = wrong(prev, inst.goal), after = wrong(next, inst.goal);
  if (after.size() >= before.size() && !is_goal_state(next, inst.goal))
    throw InternalError("solver: wrong(s) did not shrink");
  for (const auto& g : inst.goal)
    if (prev[g.var] == g.value && next[g.var] != g.value)
      throw InternalError("solver: a correct goal variable was broken");
  // Improvements may move non-goal variables, so full domination of init is
  // only guaranteed when the goal is total; the wrong-set half always holds.
  if (inst.goal.size() == inst.vars.size() ? !dominates(next, inst.init, inst.goal)
                                           : !std::includes(before.begin(), before.end(),
                                                            after.begin(), after.end()))
    throw InternalError("solver: s no longer dominates init");
}

template <class Step>
SolveOutcome outer_loop(const PlanningInstance& inst, std::size_t k, const StateFilter& filter,
                        const SolveOptions& opt, Step&& step) {
  if (k < 1) throw MisuseError("solver: width must be at least 1");
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.plan.library = plan_library(inst);
  State s = inst.init;
  out.plan.trace.push_back(s);
  auto finish = [&](SolveStatus st, std::string detail = {}) {
    out.status = st;
    out.detail = std::move(detail);
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(out);
  };
  while (!inst.solved(s)) {
    if (out.stats.iterations > inst.vars.size())
      throw InternalError("solver: more iterations than variables");
    ++out.stats.iterations;
    std::vector<State> region;
    try {
      region = ball(inst.vars, s, k, filter, opt.ball_cap);
    } catch (const ResourceError& e) {
      return finish(SolveStatus::resource_exceeded, e.what());
    }
    out.stats.ball_sizes.push_back(region.size());
    std::optional<State> next = step(s, std::move(region), out);
    if (!next) return finish(SolveStatus::unknown, "no improvement reachable within the ball");
    check_progress(inst, s, *next);
    log::info("solver: iteration " + std::to_string(out.stats.iterations) + ", " +
              std::to_string(wrong(*next, inst.goal).size()) + " wrong");
    s = std::move(*next);
  }
  return finish(SolveStatus::solved);
}

}  // namespace detail

/// Runs compute_macros over ball(s, k, filter) and follows one edge from s
/// to a goal state or an improvement per iteration.
inline SolveOutcome solve_mph(const PlanningInstance& inst, std::size_t k,
                              const StateFilter& filter = {}, const SolveOptions& opt = {}) {
  auto layout = std::make_shared<const FactLayout>(inst.vars);
  return detail::outer_loop(
      inst, k, filter, opt,
      [&](const State& s, std::vector<State> region, SolveOutcome& out) -> std::optional<State> {
        MacroResult r = compute_macros(layout, std::move(region), inst.actions, opt.macro);
        out.stats.edges += r.stats.edges;
        out.stats.label_changes += r.stats.label_changes;
        if (opt.on_result) opt.on_result(r);
        const VertexId sv = vertex_of(r.graph, s);
        std::optional<VertexId> best;
        for (VertexId t : r.graph.out(sv)) {
          const State& ts = r.graph.vertex(t);
          if (!detail::admissible_step(s, ts, inst.goal)) continue;
          if (!best || detail::preferred(ts, r.graph.vertex(*best), inst.goal)) best = t;
        }
        if (!best) return std::nullopt;
        // The label is read before s moves on.
        const ActionId label = r.graph.label(sv, *best);
        out.plan.top.push_back(out.plan.library.import_closure(r.library, label));
        out.plan.trace.push_back(r.graph.vertex(*best));
        return r.graph.vertex(*best);
      });
}

/// Same outer loop, but the ball is searched with primitive actions only
/// (breadth-first, staying inside the ball). The path to the chosen state
/// is appended to Q step by step; no macros are formed.
inline SolveOutcome baseline_reach(const PlanningInstance& inst, std::size_t k,
                                   const StateFilter& filter = {}, const SolveOptions& opt = {}) {
  return detail::outer_loop(
      inst, k, filter, opt,
      [&](const State& s, std::vector<State> region, SolveOutcome& out) -> std::optional<State> {
        std::unordered_map<State, std::uint32_t, StateHash> index;
        index.reserve(region.size());
        for (std::uint32_t i = 0; i < region.size(); ++i) index.emplace(region[i], i);
        struct Parent {
          std::uint32_t from;
          ActionId action;
        };
        std::vector<std::optional<Parent>> parent(region.size());
        const std::uint32_t root = index.at(s);
        std::vector<std::uint32_t> queue{root};
        std::vector<std::uint8_t> seen(region.size(), 0);
        seen[root] = 1;
        std::uint64_t edges = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          const State& u = region[queue[head]];
          for (const auto& a : inst.actions) {
            if (!applicable(a, u)) continue;
            const State v = apply_action(u, a);
            auto it = index.find(v);
            if (it == index.end() || it->second == queue[head]) continue;
            ++edges;
            if (seen[it->second]) continue;
            seen[it->second] = 1;
            parent[it->second] = Parent{queue[head], a.id};
            queue.push_back(it->second);
          }
        }
        out.stats.edges += edges;
        std::optional<std::uint32_t> best;
        for (std::uint32_t t : queue) {
          if (t == root || !detail::admissible_step(s, region[t], inst.goal)) continue;
          if (!best || detail::preferred(region[t], region[*best], inst.goal)) best = t;
        }
        if (!best) return std::nullopt;
        std::vector<std::uint32_t> path;
        for (std::uint32_t v = *best; v != root; v = parent[v]->from) path.push_back(v);
        std::reverse(path.begin(), path.end());
        for (std::uint32_t v : path) {
          out.plan.top.push_back(parent[v]->action);
          out.plan.trace.push_back(region[v]);
        }
        return region[*best];
      });
}

/// Streams the primitive ids of `id`'s derivation tree in order (left
/// subtree, then right). `sink` may return bool; false stops the stream.
/// Returns false when stopped early.
template <class Sink>
bool expand(const MacroLibrary& lib, ActionId id, Sink&& sink) {
  std::vector<ActionId> stack{id};
  while (!stack.empty()) {
    const ActionId a = stack.back();
    stack.pop_back();
    if (a >= lib.size()) throw InputError("expand: dangling action id " + std::to_string(a));
    if (const auto& d = lib.derivation(a)) {
      if (d->left >= a || d->right >= a)
        throw InputError("expand: action " + std::to_string(a) +
                         " derives from an action that is not defined before it");
      stack.push_back(d->right);
      stack.push_back(d->left);
      continue;
    }
    if constexpr (std::is_same_v<std::invoke_result_t<Sink&, ActionId>, bool>) {
      if (!sink(a)) return false;
    } else {
      sink(a);
    }
  }
  return true;
}

template <class Sink>
bool expand(const SuccinctPlan& plan, Sink&& sink) {
  for (ActionId a : plan.top)
    if (!expand(plan.library, a, sink)) return false;
  return true;
}

/// Number of primitives `id` expands to, memoized over the derivation DAG.
inline BigCount expanded_length(const MacroLibrary& lib, ActionId id) {
  if (id >= lib.size()) throw InputError("expanded_length: unknown action id " + std::to_string(id));
  std::unordered_map<ActionId, BigCount> memo;
  std::vector<std::pair<ActionId, bool>> stack{{id, false}};
  while (!stack.empty()) {
    auto [a, ready] = stack.back();
    stack.pop_back();
    if (memo.contains(a)) continue;
    const auto& d = lib.derivation(a);
    if (!d) {
      memo.emplace(a, 1);
    } else if (ready) {
      memo.emplace(a, memo.at(d->left) + memo.at(d->right));
    } else {
      if (d->left >= a || d->right >= a)
        throw InputError("expanded_length: action " + std::to_string(a) + " is not well-founded");
      stack.push_back({a, true});
      stack.push_back({d->right, false});
      stack.push_back({d->left, false});
    }
  }
  return memo.at(id);
}

inline BigCount expanded_length(const SuccinctPlan& plan) {
  BigCount total = 0;
  for (ActionId a : plan.top) total += expanded_length(plan.library, a);
  return total;
}

/// Replays expand(plan) from init with the instance's own actions. Each
/// primitive of the plan must match the instance action with the same id.
/// Strict mode fails on the first inapplicable step; otherwise such steps
/// are skipped. Returns whether the final state satisfies the goal.
inline bool validate(const PlanningInstance& inst, const SuccinctPlan& plan, bool strict) {
  State s = inst.init;
  bool ok = true;
  std::vector<std::int8_t> checked(plan.library.size(), 0);
  try {
    expand(plan, [&](ActionId p) {
      if (p >= inst.actions.size()) return ok = false;
      if (!checked[p]) {
        const Action mine = normalized(inst.actions[p]);
        checked[p] = plan.library.action(p).same_conditions(mine) ? 1 : -1;
      }
      if (checked[p] < 0) return ok = false;
      const Action& a = inst.actions[p];
      if (applicable(a, s)) {
        s = apply_action(s, a);
      } else if (strict) {
        return ok = false;
      }
      return true;
    });
  } catch (const InputError&) {
    return false;
  }
  return ok && inst.solved(s);
}

}  // namespace macroforge
