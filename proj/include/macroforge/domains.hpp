#pragma once

// Blocksworld-arm and Towers of Hanoi: generators, consistency filters and
// the macro constructors the derivability results talk about.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "macroforge/core_model.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/instance.hpp"

namespace macroforge {

// ---------------------------------------------------------------- Blocksworld

/// Variable/value numbering of a generated n-block instance:
/// arm, on-b1..on-bn, clear-b1..clear-bn.
struct BlocksworldVars {
  std::size_t n;

  VarId arm() const { return 0; }
  VarId on(std::size_t b) const { return static_cast<VarId>(1 + b); }
  VarId clear(std::size_t b) const { return static_cast<VarId>(1 + n + b); }

  static constexpr Value kEmpty = 0;
  static Value holding(std::size_t b) { return static_cast<Value>(1 + b); }
  static constexpr Value kTable = 0;
  static constexpr Value kArm = 1;
  static Value on_block(std::size_t b) { return static_cast<Value>(2 + b); }
  static constexpr Value kT = 0;
  static constexpr Value kF = 1;
};

/// Support of each block: "table" or another block's name. `held` names the
/// block in the arm, which then has no entry in `on`.
struct BlocksworldLayout {
  std::map<std::string, std::string> on;
  std::optional<std::string> held;
};

struct BlocksworldConfig {
  std::vector<std::string> blocks;
  BlocksworldLayout init;
  BlocksworldLayout goal;
};

inline std::size_t block_index(const std::vector<std::string>& blocks, const std::string& name) {
  auto it = std::find(blocks.begin(), blocks.end(), name);
  if (it == blocks.end()) throw InputError("unknown block '" + name + "'");
  return static_cast<std::size_t>(it - blocks.begin());
}

inline VariableTable blocksworld_variables(const std::vector<std::string>& blocks) {
  VariableTable vars;
  std::vector<std::string> arm{"empty"};
  std::vector<std::string> on{"table", "arm"};
  for (const auto& b : blocks) {
    arm.push_back(b);
    on.push_back(b);
  }
  vars.add("arm", arm);
  for (const auto& b : blocks) vars.add("on-" + b, on);
  for (const auto& b : blocks) vars.add("clear-" + b, {"T", "F"});
  return vars;
}

/// The state encoding a physical layout. Rejects cycles, double support and
/// blocks without a position.
inline State blocksworld_state(const std::vector<std::string>& blocks,
                               const BlocksworldLayout& layout) {
  const std::size_t n = blocks.size();
  const BlocksworldVars bv{n};
  std::vector<Value> values(2 * n + 1, 0);
  std::vector<std::optional<std::size_t>> support(n);  // nullopt = table or arm
  std::vector<int> above(n, -1);
  std::optional<std::size_t> held;
  if (layout.held) held = block_index(blocks, *layout.held);
  values[bv.arm()] = held ? BlocksworldVars::holding(*held) : BlocksworldVars::kEmpty;
  for (std::size_t b = 0; b < n; ++b) {
    if (held == b) {
      if (layout.on.count(blocks[b])) throw InputError("held block " + blocks[b] + " also has a support");
      values[bv.on(b)] = BlocksworldVars::kArm;
      continue;
    }
    auto it = layout.on.find(blocks[b]);
    if (it == layout.on.end()) throw InputError("block " + blocks[b] + " has no position");
    if (it->second == "table") {
      values[bv.on(b)] = BlocksworldVars::kTable;
      continue;
    }
    const std::size_t c = block_index(blocks, it->second);
    if (c == b) throw InputError("block " + blocks[b] + " is on itself");
    if (held == c) throw InputError("block " + blocks[b] + " is on the held block");
    if (above[c] >= 0) throw InputError("block " + blocks[c] + " supports two blocks");
    above[c] = static_cast<int>(b);
    support[b] = c;
    values[bv.on(b)] = BlocksworldVars::on_block(c);
  }
  for (const auto& [name, _] : layout.on) block_index(blocks, name);
  for (std::size_t b = 0; b < n; ++b) {
    std::size_t steps = 0;
    for (auto c = support[b]; c; c = support[*c])
      if (++steps > n) throw InputError("cyclic layout through block " + blocks[b]);
  }
  for (std::size_t b = 0; b < n; ++b)
    values[bv.clear(b)] = (held != b && above[b] < 0) ? BlocksworldVars::kT : BlocksworldVars::kF;
  return State(std::move(values));
}

/// pickup/putdown per block, then unstack/stack per ordered pair.
inline std::vector<Action> blocksworld_actions(const std::vector<std::string>& blocks) {
  const std::size_t n = blocks.size();
  const BlocksworldVars bv{n};
  using B = BlocksworldVars;
  std::vector<Action> out;
  auto push = [&](std::string name, PartialState pre, PartialState post) {
    Action a;
    a.id = static_cast<ActionId>(out.size());
    a.name = std::move(name);
    a.pre = std::move(pre);
    a.post = std::move(post);
    out.push_back(std::move(a));
  };
  for (std::size_t b = 0; b < n; ++b) {
    push("pickup-" + blocks[b],
         {{bv.clear(b), B::kT}, {bv.on(b), B::kTable}, {bv.arm(), B::kEmpty}},
         {{bv.clear(b), B::kF}, {bv.on(b), B::kArm}, {bv.arm(), B::holding(b)}});
    push("putdown-" + blocks[b], {{bv.arm(), B::holding(b)}},
         {{bv.arm(), B::kEmpty}, {bv.clear(b), B::kT}, {bv.on(b), B::kTable}});
  }
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      if (b == c) continue;
      push("unstack-" + blocks[b] + "-" + blocks[c],
           {{bv.clear(b), B::kT}, {bv.on(b), B::on_block(c)}, {bv.arm(), B::kEmpty}},
           {{bv.clear(b), B::kF}, {bv.on(b), B::kArm}, {bv.arm(), B::holding(b)},
            {bv.clear(c), B::kT}});
      push("stack-" + blocks[b] + "-" + blocks[c],
           {{bv.arm(), B::holding(b)}, {bv.clear(c), B::kT}},
           {{bv.arm(), B::kEmpty}, {bv.clear(c), B::kF}, {bv.clear(b), B::kT},
            {bv.on(b), B::on_block(c)}});
    }
  return out;
}

inline PlanningInstance gen_blocksworld(const BlocksworldConfig& cfg) {
  if (cfg.blocks.empty()) throw InputError("blocksworld needs at least one block");
  for (std::size_t i = 0; i < cfg.blocks.size(); ++i) {
    const auto& b = cfg.blocks[i];
    if (b == "table" || b == "arm" || b == "empty")
      throw InputError("'" + b + "' is reserved and cannot name a block");
    if (std::find(cfg.blocks.begin(), cfg.blocks.begin() + i, b) != cfg.blocks.begin() + i)
      throw InputError("duplicate block '" + b + "'");
  }
  PlanningInstance inst;
  inst.vars = blocksworld_variables(cfg.blocks);
  inst.init = blocksworld_state(cfg.blocks, cfg.init);
  inst.goal = PartialState::from_state(blocksworld_state(cfg.blocks, cfg.goal));
  inst.actions = blocksworld_actions(cfg.blocks);
  inst.domain = "blocksworld";
  return inst;
}

inline std::vector<std::string> default_block_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("b" + std::to_string(i));
  return out;
}

/// Layout with `tower` stacked top-first (tower[0] on tower[1] ... last on
/// the table); remaining blocks on the table.
inline BlocksworldLayout stacked_layout(const std::vector<std::string>& blocks,
                                        const std::vector<std::string>& tower) {
  BlocksworldLayout l;
  for (const auto& b : blocks) l.on[b] = "table";
  for (std::size_t i = 0; i + 1 < tower.size(); ++i) l.on[tower[i]] = tower[i + 1];
  return l;
}

/// Uniformly shuffled blocks cut into random towers, nothing held.
template <class Rng>
BlocksworldLayout random_layout(const std::vector<std::string>& blocks, Rng& rng) {
  std::vector<std::string> order = blocks;
  std::shuffle(order.begin(), order.end(), rng);
  BlocksworldLayout l;
  std::bernoulli_distribution cut(0.5);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const bool on_table = i + 1 == order.size() || cut(rng);
    l.on[order[i]] = on_table ? "table" : order[i + 1];
  }
  return l;
}

/// n blocks with independent random init and goal layouts.
inline PlanningInstance random_blocksworld(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto blocks = default_block_names(n);
  BlocksworldConfig cfg{blocks, random_layout(blocks, rng), {}};
  cfg.goal = random_layout(blocks, rng);
  return gen_blocksworld(cfg);
}

/// Structural test on a single state (nothing about reachability beyond
/// the layout being physical):
///  - at most one block in the arm, and arm=b iff on-b=arm;
///  - no block on itself, on a held block, or sharing a support;
///  - supports are acyclic;
///  - clear-b=T iff b is not held and no block is on b.
/// For ≥1 block this coincides with reachability from any consistent state.
inline bool blocksworld_consistent(std::size_t n, std::span<const Value> v) {
  const BlocksworldVars bv{n};
  using B = BlocksworldVars;
  const std::size_t len = v.size();
  auto known = [&](VarId x) { return x < len; };
  std::optional<std::size_t> held;
  if (known(bv.arm()) && v[bv.arm()] != B::kEmpty) held = v[bv.arm()] - 1u;

  std::vector<int> above(n, -1);
  for (std::size_t b = 0; b < n && known(bv.on(b)); ++b) {
    const Value on = v[bv.on(b)];
    if ((on == B::kArm) != (held == b)) return false;
    if (on >= 2) {
      const std::size_t c = on - 2u;
      if (c == b || held == c || above[c] >= 0) return false;
      above[c] = static_cast<int>(b);
    }
  }
  if (!known(bv.on(n - 1))) return true;
  for (std::size_t b = 0; b < n; ++b) {
    std::size_t steps = 0;
    for (Value on = v[bv.on(b)]; on >= 2; on = v[bv.on(on - 2u)])
      if (++steps > n) return false;
  }
  for (std::size_t b = 0; b < n && known(bv.clear(b)); ++b) {
    const bool clear = held != b && above[b] < 0;
    if ((v[bv.clear(b)] == B::kT) != clear) return false;
  }
  return true;
}
inline bool blocksworld_consistent(std::size_t n, const State& s) {
  return s.size() == 2 * n + 1 && blocksworld_consistent(n, std::span<const Value>(s.values()));
}

inline StateFilter blocksworld_filter(std::size_t n) {
  return StateFilter::of([n](const State& s) { return blocksworld_consistent(n, s); },
                         "consistent",
                         [n](std::span<const Value> prefix) { return blocksworld_consistent(n, prefix); });
}

/// Pile of block indices, top first.
using Pile = std::vector<std::size_t>;

namespace detail {

inline PartialState pile_common(const BlocksworldVars& bv, const Pile& p,
                                std::initializer_list<std::size_t> others) {
  if (p.empty()) throw InputError("pile must be nonempty");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= bv.n) throw InputError("pile block out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (p[i] == p[j]) throw InputError("pile repeats a block");
  }
  for (std::size_t o : others) {
    if (o >= bv.n) throw InputError("block out of range");
    if (std::find(p.begin(), p.end(), o) != p.end()) throw InputError("block is part of the pile");
  }
  PartialState s{{bv.clear(p.front()), BlocksworldVars::kT}, {bv.arm(), BlocksworldVars::kEmpty}};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s.set(bv.on(p[i]), BlocksworldVars::on_block(p[i + 1]));
  return s;
}

}  // namespace detail

/// Sub-tower P from block b to the table.
inline Action oracle_subtow_table(std::size_t n, const Pile& p, std::size_t b) {
  const BlocksworldVars bv{n};
  Action a;
  a.name = "subtow-table";
  a.pre = detail::pile_common(bv, p, {b});
  a.pre.set(bv.on(p.back()), BlocksworldVars::on_block(b));
  a.post = {{bv.on(p.back()), BlocksworldVars::kTable}, {bv.clear(b), BlocksworldVars::kT}};
  return a;
}

/// Sub-tower P from block b onto block b2.
inline Action oracle_subtow_block(std::size_t n, const Pile& p, std::size_t b, std::size_t b2) {
  if (b == b2) throw InputError("subtow-block needs two different blocks");
  const BlocksworldVars bv{n};
  Action a;
  a.name = "subtow-block";
  a.pre = detail::pile_common(bv, p, {b, b2});
  a.pre.set(bv.on(p.back()), BlocksworldVars::on_block(b));
  a.pre.set(bv.clear(b2), BlocksworldVars::kT);
  a.post = {{bv.on(p.back()), BlocksworldVars::on_block(b2)},
            {bv.clear(b), BlocksworldVars::kT},
            {bv.clear(b2), BlocksworldVars::kF}};
  return a;
}

/// Tower P (bottom on the table) onto block b2.
inline Action oracle_tow_block(std::size_t n, const Pile& p, std::size_t b2) {
  const BlocksworldVars bv{n};
  Action a;
  a.name = "tow-block";
  a.pre = detail::pile_common(bv, p, {b2});
  a.pre.set(bv.on(p.back()), BlocksworldVars::kTable);
  a.pre.set(bv.clear(b2), BlocksworldVars::kT);
  a.post = {{bv.on(p.back()), BlocksworldVars::on_block(b2)}, {bv.clear(b2), BlocksworldVars::kF}};
  return a;
}

// --------------------------------------------------------------------- Hanoi

struct HanoiConfig {
  std::size_t ndisks = 3;
  /// Also emit moves whose source position can never hold the disk.
  bool all_moves = false;
};

/// Positions are numbered d1..dk (0..k-1) then p1..p3 (k..k+2), which is
/// also the size order used by the move legality test.
struct HanoiVars {
  std::size_t k;

  VarId on(std::size_t d) const { return static_cast<VarId>(d); }
  VarId clear_pos(std::size_t x) const { return static_cast<VarId>(k + x); }
  Value peg(std::size_t i) const { return static_cast<Value>(k + i); }
  bool is_peg(std::size_t x) const { return x >= k; }
  std::size_t positions() const { return k + 3; }

  static constexpr Value kT = 0;
  static constexpr Value kF = 1;
};

inline VariableTable hanoi_variables(std::size_t k) {
  std::vector<std::string> positions;
  for (std::size_t i = 1; i <= k; ++i) positions.push_back("d" + std::to_string(i));
  for (int i = 1; i <= 3; ++i) positions.push_back("p" + std::to_string(i));
  VariableTable vars;
  for (std::size_t i = 0; i < k; ++i) vars.add("on-" + positions[i], positions);
  for (const auto& x : positions) vars.add("clear-" + x, {"T", "F"});
  return vars;
}

inline PlanningInstance gen_hanoi(const HanoiConfig& cfg) {
  const std::size_t k = cfg.ndisks;
  if (k == 0) throw InputError("hanoi needs at least one disk");
  const HanoiVars hv{k};
  PlanningInstance inst;
  inst.vars = hanoi_variables(k);
  inst.domain = "hanoi";

  auto pos_name = [&](std::size_t x) { return inst.vars.value_name(0, static_cast<Value>(x)); };
  for (std::size_t d = 0; d < k; ++d)
    for (std::size_t from = 0; from < hv.positions(); ++from)
      for (std::size_t to = d + 1; to < hv.positions(); ++to) {
        if (from == to) continue;
        if (!cfg.all_moves && from <= d) continue;
        Action a;
        a.id = static_cast<ActionId>(inst.actions.size());
        a.name = "move-" + pos_name(d) + "-" + pos_name(from) + "-" + pos_name(to);
        a.pre = {{hv.clear_pos(d), HanoiVars::kT},
                 {hv.clear_pos(to), HanoiVars::kT},
                 {hv.on(d), static_cast<Value>(from)}};
        a.post = {{hv.clear_pos(to), HanoiVars::kF},
                  {hv.clear_pos(from), HanoiVars::kT},
                  {hv.on(d), static_cast<Value>(to)}};
        inst.actions.push_back(std::move(a));
      }

  std::vector<Value> init(2 * k + 3, HanoiVars::kF);
  for (std::size_t d = 0; d + 1 < k; ++d) init[hv.on(d)] = static_cast<Value>(d + 1);
  init[hv.on(k - 1)] = hv.peg(0);
  init[hv.clear_pos(0)] = HanoiVars::kT;
  init[hv.clear_pos(hv.peg(1))] = HanoiVars::kT;
  init[hv.clear_pos(hv.peg(2))] = HanoiVars::kT;
  inst.init = State(init);

  std::vector<Value> goal = init;
  goal[hv.on(k - 1)] = hv.peg(2);
  goal[hv.clear_pos(hv.peg(0))] = HanoiVars::kT;
  goal[hv.clear_pos(hv.peg(2))] = HanoiVars::kF;
  inst.goal = PartialState::from_state(State(goal));
  return inst;
}

/// Every disk on a strictly larger position, at most one disk per position,
/// clear-x=T iff nothing is on x. Accepts prefixes in variable order.
inline bool hanoi_consistent(std::size_t k, std::span<const Value> v) {
  const HanoiVars hv{k};
  std::vector<std::uint8_t> occupied(hv.positions(), 0);
  for (std::size_t d = 0; d < k && d < v.size(); ++d) {
    const Value x = v[hv.on(d)];
    if (x <= d || x >= hv.positions() || occupied[x]) return false;
    occupied[x] = 1;
  }
  for (std::size_t x = 0; x < hv.positions() && hv.clear_pos(x) < v.size(); ++x)
    if ((v[hv.clear_pos(x)] == HanoiVars::kT) == static_cast<bool>(occupied[x])) return false;
  return true;
}
inline bool hanoi_consistent(std::size_t k, const State& s) {
  return s.size() == 2 * k + 3 && hanoi_consistent(k, std::span<const Value>(s.values()));
}

inline StateFilter hanoi_filter(std::size_t k) {
  return StateFilter::of([k](const State& s) { return hanoi_consistent(k, s); }, "consistent",
                         [k](std::span<const Value> prefix) { return hanoi_consistent(k, prefix); });
}

/// Moves the tower d1..di from position x to x2 (positions as HanoiVars
/// numbers).
inline Action oracle_subtow_pos(std::size_t k, std::size_t i, std::size_t x, std::size_t x2) {
  const HanoiVars hv{k};
  if (i < 1 || i > k) throw InputError("subtow-pos depth out of range");
  if (x == x2) throw InputError("subtow-pos needs two different positions");
  if (x >= hv.positions() || x2 >= hv.positions()) throw InputError("position out of range");
  Action a;
  a.name = "subtow-pos";
  a.pre.set(hv.clear_pos(0), HanoiVars::kT);
  for (std::size_t d = 0; d + 1 < i; ++d) a.pre.set(hv.on(d), static_cast<Value>(d + 1));
  a.pre.set(hv.on(i - 1), static_cast<Value>(x));
  a.pre.set(hv.clear_pos(x2), HanoiVars::kT);
  a.post = {{hv.on(i - 1), static_cast<Value>(x2)},
            {hv.clear_pos(x), HanoiVars::kT},
            {hv.clear_pos(x2), HanoiVars::kF}};
  return a;
}

/// The admissibility filter for an instance produced by one of the
/// generators, recovered from its domain tag and variable count.
inline StateFilter consistency_filter(const PlanningInstance& inst) {
  if (inst.domain == "blocksworld") return blocksworld_filter((inst.vars.size() - 1) / 2);
  if (inst.domain == "hanoi") return hanoi_filter((inst.vars.size() - 3) / 2);
  throw InputError("no consistency filter for domain '" + inst.domain + "'");
}

}  // namespace macroforge
