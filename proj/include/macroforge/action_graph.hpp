#pragma once

// Labelled action graphs over a fixed state set and the two local rewrites
// (apply, transitive) that the macro engine closes under.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "macroforge/core_model.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/facts.hpp"
#include "macroforge/library.hpp"

namespace macroforge {

using VertexId = std::uint32_t;

struct Transition {
  State source;
  ActionId action = kNoAction;
  State target;
};

/// Directed graph over a fixed, ordered state set with at most one labelled
/// edge per ordered pair and no self-loops. Labels are ids in a
/// MacroLibrary that the caller keeps alongside the graph.
class ActionGraph {
 public:
  /// Vertex count above which edge labels are hashed instead of stored in
  /// a dense |S|x|S| table.
  static constexpr std::size_t kDenseLimit = 4096;

  ActionGraph() = default;
  ActionGraph(std::vector<State> states, std::shared_ptr<const FactLayout> layout)
      : layout_(std::move(layout)), states_(std::move(states)) {
    const std::size_t w = layout_->words();
    bits_.resize(states_.size() * w);
    for (VertexId v = 0; v < states_.size(); ++v) {
      if (states_[v].size() != layout_->vars())
        throw InputError("action graph: vertex is not a total state");
      layout_->encode(states_[v], {bits_.data() + v * w, w});
      const auto h = bits::hash(vertex_bits(v), w);
      if (index_.find(vertex_bits(v), w, h, [this](std::uint32_t i) { return vertex_bits(i); }))
        throw InputError("action graph: duplicate vertex");
      index_.insert(v, h);
    }
    out_.resize(states_.size());
    in_.resize(states_.size());
    if (dense()) dense_.assign(states_.size() * states_.size(), kNoAction);
  }

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<State>& vertices() const noexcept { return states_; }
  const State& vertex(VertexId v) const { return states_.at(v); }
  const Word* vertex_bits(VertexId v) const { return bits_.data() + std::size_t{v} * layout_->words(); }
  const FactLayout& layout() const { return *layout_; }

  std::optional<VertexId> find(const State& s) const {
    if (s.size() != layout_->vars()) return std::nullopt;
    std::vector<Word> tmp(layout_->words());
    layout_->encode(s, tmp);
    return find_bits(tmp.data());
  }
  std::optional<VertexId> find_bits(const Word* state) const {
    const std::size_t w = layout_->words();
    return index_.find(state, w, bits::hash(state, w),
                       [this](std::uint32_t i) { return vertex_bits(i); });
  }

  ActionId label(VertexId u, VertexId v) const {
    if (dense()) return dense_[std::size_t{u} * states_.size() + v];
    auto it = sparse_.find(key(u, v));
    return it == sparse_.end() ? kNoAction : it->second;
  }
  bool has_edge(VertexId u, VertexId v) const { return label(u, v) != kNoAction; }

  /// Successors / predecessors in insertion order.
  std::span<const VertexId> out(VertexId u) const { return out_[u]; }
  std::span<const VertexId> in(VertexId v) const { return in_[v]; }

  /// Number of edges currently labelled with `a`.
  std::uint32_t uses(ActionId a) const { return a < refs_.size() ? refs_[a] : 0; }
  bool is_label(ActionId a) const { return uses(a) > 0; }

  /// Creates or relabels (u, v). Returns the previous label (kNoAction when
  /// the edge is new).
  ActionId set_label(VertexId u, VertexId v, ActionId a) {
    if (u == v) throw InternalError("action graph: self-loop");
    ActionId* slot;
    if (dense()) {
      slot = &dense_[std::size_t{u} * states_.size() + v];
    } else {
      slot = &sparse_.try_emplace(key(u, v), kNoAction).first->second;
    }
    const ActionId old = *slot;
    if (old == a) return old;
    *slot = a;
    if (old == kNoAction) {
      out_[u].push_back(v);
      in_[v].push_back(u);
      ++edge_count_;
    } else {
      --refs_[old];
    }
    if (a >= refs_.size()) refs_.resize(std::max<std::size_t>(a + 1, refs_.size() * 2), 0);
    ++refs_[a];
    return old;
  }

  struct Edge {
    VertexId source;
    VertexId target;
    ActionId label;
    bool operator==(const Edge&) const = default;
  };
  /// All edges sorted by (source, target).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (VertexId u = 0; u < states_.size(); ++u) {
      std::vector<VertexId> targets(out_[u].begin(), out_[u].end());
      std::sort(targets.begin(), targets.end());
      for (VertexId v : targets) out.push_back({u, v, label(u, v)});
    }
    return out;
  }

  /// Distinct labels in registry order.
  std::vector<ActionId> labels() const {
    std::vector<ActionId> out;
    for (ActionId a = 0; a < refs_.size(); ++a)
      if (refs_[a]) out.push_back(a);
    return out;
  }

 private:
  bool dense() const { return states_.size() <= kDenseLimit; }
  static std::uint64_t key(VertexId u, VertexId v) { return (std::uint64_t{u} << 32) | v; }

  std::shared_ptr<const FactLayout> layout_;
  std::vector<State> states_;
  std::vector<Word> bits_;
  PackedIdTable index_;
  std::vector<ActionId> dense_;
  std::unordered_map<std::uint64_t, ActionId> sparse_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::vector<std::uint32_t> refs_;
  std::size_t edge_count_ = 0;
};

/// Whether `candidate` should replace the label of (u, v): always when the
/// edge is absent, otherwise on strict condition improvement.
inline bool better(const MacroLibrary& lib, PackedAction candidate, const ActionGraph& g,
                   VertexId u, VertexId v) {
  const ActionId cur = g.label(u, v);
  return cur == kNoAction || packed_better(candidate, lib.packed(cur));
}
inline bool better(const MacroLibrary& lib, ActionId candidate, const ActionGraph& g, VertexId u,
                   VertexId v) {
  return better(lib, lib.packed(candidate), g, u, v);
}

inline VertexId vertex_of(const ActionGraph& g, const State& s) {
  if (auto v = g.find(s)) return *v;
  throw InputError("state is not a vertex of the action graph");
}

/// Places (s, t) with label a, overwriting any existing label.
inline void addlabel(ActionGraph& g, const State& s, const State& t, ActionId a) {
  g.set_label(vertex_of(g, s), vertex_of(g, t), a);
}

/// Called after every label installation: (source, target, old, new).
using InstallObserver = std::function<void(VertexId, VertexId, ActionId, ActionId)>;

/// apply(G, A, a, s). `in_base(a)` tells whether a belongs to the base
/// action set A. Returns whether G changed.
template <class InBase>
bool rewrite_apply(ActionGraph& g, const MacroLibrary& lib, InBase&& in_base, ActionId a,
                   VertexId s, const InstallObserver& observe = {}) {
  if (!in_base(a) && !g.is_label(a)) return false;
  const PackedAction pa = lib.packed(a);
  if (!packed_applicable(pa, g.vertex_bits(s))) return false;
  Word buf[16];
  std::vector<Word> heap;
  Word* next = buf;
  if (pa.w > 16) {
    heap.resize(pa.w);
    next = heap.data();
  }
  packed_apply(pa, g.vertex_bits(s), next);
  const auto t = g.find_bits(next);
  if (!t || *t == s) return false;
  if (!better(lib, pa, g, s, *t)) return false;
  const ActionId old = g.set_label(s, *t, a);
  if (observe) observe(s, *t, old, a);
  return true;
}

/// transitive(G, s1, s2, s3). Interns the combined label in `lib` when it is
/// installed and returns the produced transition's label.
inline std::optional<ActionId> rewrite_transitive(ActionGraph& g, MacroLibrary& lib, VertexId s1,
                                                  VertexId s2, VertexId s3,
                                                  std::span<Word> scratch = {},
                                                  const InstallObserver& observe = {}) {
  if (s1 == s3) return std::nullopt;  // self-loops are never edges
  const ActionId first = g.label(s1, s2);
  const ActionId second = g.label(s2, s3);
  if (first == kNoAction || second == kNoAction) return std::nullopt;
  const ActionId cur = g.label(s1, s3);
  const std::size_t w = lib.words();
  // pre(combine(a, b)) contains pre(a), so containment of pre(a) in the
  // incumbent's precondition is necessary for an improvement.
  if (cur != kNoAction && !bits::subset(lib.packed(first).pre(), lib.packed(cur).pre(), w))
    return std::nullopt;
  std::vector<Word> local;
  if (scratch.size() < 4 * w) {
    local.resize(4 * w);
    scratch = local;
  }
  if (!packed_combine(lib.layout(), lib.packed(first), lib.packed(second), scratch.data()))
    throw InternalError("transitive: edge labels do not chain");
  const PackedAction combined{scratch.data(), w};
  if (cur != kNoAction && !packed_better(combined, lib.packed(cur))) return std::nullopt;
  const ActionId id = lib.intern_derived(scratch.data(), {first, second});
  const ActionId old = g.set_label(s1, s3, id);
  if (observe) observe(s1, s3, old, id);
  return id;
}

struct ApplyCommand {
  ActionId action;
  State at;
};
struct TransitiveCommand {
  State s1, s2, s3;
};
using GraphCommand = std::variant<ApplyCommand, TransitiveCommand>;

struct ProgramRun {
  ActionGraph graph;
  std::vector<Transition> produced;  ///< one per installing transitive command
};

/// Executes an action graph program over `states` starting from the
/// edgeless graph. `base` are the ids (in `lib`) forming the action set A.
inline ProgramRun run_program(std::span<const GraphCommand> program, std::vector<State> states,
                              std::span<const ActionId> base, MacroLibrary& lib) {
  ProgramRun run{ActionGraph(std::move(states), lib.layout_ptr()), {}};
  auto& g = run.graph;
  auto in_base = [&](ActionId a) { return std::find(base.begin(), base.end(), a) != base.end(); };
  for (const auto& cmd : program) {
    if (const auto* ap = std::get_if<ApplyCommand>(&cmd)) {
      if (ap->action >= lib.size()) throw InputError("program applies an unknown action");
      rewrite_apply(g, lib, in_base, ap->action, vertex_of(g, ap->at));
    } else {
      const auto& tr = std::get<TransitiveCommand>(cmd);
      const VertexId a = vertex_of(g, tr.s1), b = vertex_of(g, tr.s2), c = vertex_of(g, tr.s3);
      if (auto id = rewrite_transitive(g, lib, a, b, c)) run.produced.push_back({tr.s1, *id, tr.s3});
    }
  }
  return run;
}

}  // namespace macroforge
