#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"

using namespace macroforge;

namespace {

using B = BlocksworldVars;

std::vector<std::string> names(std::size_t n) { return default_block_names(n); }

PlanningInstance stacked(std::size_t n) {
  const auto b = names(n);
  return gen_blocksworld({b, stacked_layout(b, b), stacked_layout(b, {})});
}

const Action& by_name(const PlanningInstance& inst, const std::string& name) {
  for (const auto& a : inst.actions)
    if (a.name == name) return a;
  throw std::runtime_error("no action " + name);
}

State goal_state(const PlanningInstance& inst) {
  State s = inst.init;
  for (const auto& a : inst.goal) s[a.var] = a.value;
  return s;
}

}  // namespace

TEST(Blocksworld, Counts) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto inst = stacked(n);
    EXPECT_EQ(inst.vars.size(), 2 * n + 1);
    EXPECT_EQ(inst.actions.size(), 2 * n + 2 * n * (n - 1));
  }
  EXPECT_EQ(oracle::all_states(stacked(2).vars).size(), 192u);
  const auto one = stacked(1);
  std::set<std::string> got;
  for (const auto& a : one.actions) got.insert(a.name);
  EXPECT_EQ(got, (std::set<std::string>{"pickup-b1", "putdown-b1"}));
}

TEST(Blocksworld, StackedInitEncoding) {
  const auto inst = stacked(3);
  const B bv{3};
  EXPECT_EQ(inst.init[bv.arm()], B::kEmpty);
  EXPECT_EQ(inst.init[bv.on(0)], B::on_block(1));
  EXPECT_EQ(inst.init[bv.on(1)], B::on_block(2));
  EXPECT_EQ(inst.init[bv.on(2)], B::kTable);
  EXPECT_EQ(inst.init[bv.clear(0)], B::kT);
  EXPECT_EQ(inst.init[bv.clear(1)], B::kF);
  EXPECT_EQ(inst.init[bv.clear(2)], B::kF);
  // Total goal: every variable is fixed.
  EXPECT_EQ(inst.goal.size(), inst.vars.size());
}

TEST(Blocksworld, RejectsCyclesAndBadNames) {
  const auto b = names(2);
  BlocksworldLayout cyclic;
  cyclic.on = {{"b1", "b2"}, {"b2", "b1"}};
  EXPECT_THROW(gen_blocksworld({b, cyclic, stacked_layout(b, {})}), InputError);
  BlocksworldLayout unknown;
  unknown.on = {{"b1", "table"}, {"b2", "b9"}};
  EXPECT_THROW(gen_blocksworld({b, unknown, stacked_layout(b, {})}), InputError);
  BlocksworldLayout shared;
  const auto b3 = names(3);
  shared.on = {{"b1", "b3"}, {"b2", "b3"}, {"b3", "table"}};
  EXPECT_THROW(gen_blocksworld({b3, shared, stacked_layout(b3, {})}), InputError);
  EXPECT_THROW(gen_blocksworld({{}, {}, {}}), InputError);
}

TEST(Blocksworld, ConsistencyExamples) {
  EXPECT_TRUE(blocksworld_consistent(3, stacked(3).init));
  // b1 and b2 both on b3.
  State s = stacked(3).init;
  const B bv{3};
  s[bv.on(1)] = B::on_block(2);
  s[bv.on(0)] = B::on_block(2);
  EXPECT_FALSE(blocksworld_consistent(3, s));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = random_blocksworld(4, seed);
    EXPECT_TRUE(blocksworld_consistent(4, inst.init));
    EXPECT_TRUE(blocksworld_consistent(4, goal_state(inst)));
  }
}

TEST(Blocksworld, TwoBlockConsistentCountPinned) {
  const auto all = oracle::all_states(stacked(2).vars);
  std::size_t n = 0;
  for (const auto& s : all) n += blocksworld_consistent(2, s);
  // Three arm-empty arrangements plus holding either block.
  EXPECT_EQ(n, 5u);
}

TEST(Blocksworld, PrefixPredicateAgreesWithFullPredicate) {
  // The pruning form may only reject prefixes that no completion accepts.
  const auto vars = stacked(2).vars;
  const auto all = oracle::all_states(vars);
  for (const auto& s : all) {
    if (!blocksworld_consistent(2, s)) continue;
    for (std::size_t len = 0; len <= s.size(); ++len)
      EXPECT_TRUE(blocksworld_consistent(2, std::span<const Value>(s.values().data(), len)));
  }
}

TEST(Blocksworld, ActionsPreserveConsistency) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto inst = stacked(n);
    for (const auto& s : oracle::all_states(inst.vars)) {
      if (!blocksworld_consistent(n, s)) continue;
      for (const auto& a : inst.actions)
        if (applicable(a, s)) {
          EXPECT_TRUE(blocksworld_consistent(n, apply_action(s, a))) << a.name;
        }
    }
  }
}

TEST(Blocksworld, ReachableEqualsConsistent) {
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto inst = stacked(n);
    const auto reach = oracle::reachable(inst, inst.init);
    std::set<State> r(reach.begin(), reach.end()), c;
    for (const auto& s : oracle::all_states(inst.vars))
      if (blocksworld_consistent(n, s)) c.insert(s);
    EXPECT_EQ(r, c) << n;
  }
}

TEST(Oracles, SubtowTableSingleBlock) {
  const B bv{2};
  const Action a = oracle_subtow_table(2, {0}, 1);
  EXPECT_EQ(a.pre, (PartialState{{bv.clear(0), B::kT}, {bv.arm(), B::kEmpty}, {bv.on(0), B::on_block(1)}}));
  EXPECT_EQ(a.post, (PartialState{{bv.on(0), B::kTable}, {bv.clear(1), B::kT}}));
  // Same conditions as unstack then putdown.
  const auto inst = stacked(2);
  EXPECT_TRUE(a.same_conditions(combine(by_name(inst, "unstack-b1-b2"), by_name(inst, "putdown-b1"))));
}

TEST(Oracles, SubtowBlockSingleBlockIsUnstackThenStack) {
  const auto inst = stacked(3);
  const Action a = oracle_subtow_block(3, {0}, 1, 2);
  EXPECT_TRUE(
      a.same_conditions(combine(by_name(inst, "unstack-b1-b2"), by_name(inst, "stack-b1-b3"))));
}

TEST(Oracles, TowBlockRequiresBottomOnTable) {
  const B bv{3};
  const Action a = oracle_tow_block(3, {0, 1}, 2);
  EXPECT_EQ(a.pre.get(bv.on(1)), B::kTable);
  EXPECT_EQ(a.pre.get(bv.on(0)), B::on_block(1));
  EXPECT_EQ(a.post, (PartialState{{bv.on(1), B::on_block(2)}, {bv.clear(2), B::kF}}));
}

TEST(Oracles, MembershipViolations) {
  EXPECT_THROW(oracle_subtow_table(3, {}, 1), InputError);
  EXPECT_THROW(oracle_subtow_table(3, {0, 1}, 1), InputError);
  EXPECT_THROW(oracle_subtow_block(3, {0}, 1, 1), InputError);
  EXPECT_THROW(oracle_tow_block(3, {0, 0}, 2), InputError);
  EXPECT_THROW(oracle_subtow_table(3, {0}, 7), InputError);
}

// The oracle macros behave as their names say at every consistent state
// where they apply.
TEST(Oracles, PileMacrosMoveThePile) {
  const std::size_t n = 3;
  const B bv{n};
  const auto inst = stacked(n);
  const Action table = oracle_subtow_table(n, {0, 1}, 2);
  std::size_t hits = 0;
  for (const auto& s : oracle::all_states(inst.vars)) {
    if (!blocksworld_consistent(n, s) || !applicable(table, s)) continue;
    ++hits;
    const State t = apply_action(s, table);
    EXPECT_TRUE(blocksworld_consistent(n, t));
    EXPECT_EQ(t[bv.on(1)], B::kTable);
    EXPECT_EQ(t[bv.on(0)], B::on_block(1));
    EXPECT_EQ(t[bv.clear(2)], B::kT);
  }
  EXPECT_EQ(hits, 1u);
}

TEST(Hanoi, Counts) {
  const auto h1 = gen_hanoi({1});
  EXPECT_EQ(h1.vars.size(), 5u);
  for (const auto& a : h1.actions) EXPECT_EQ(a.name.substr(0, 8), "move-d1-");
  // d1 moves between the three pegs: 3 * 2 ordered pairs.
  EXPECT_EQ(h1.actions.size(), 6u);
  EXPECT_EQ(oracle::all_states(gen_hanoi({2}).vars).size(), 800u);
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_EQ(gen_hanoi({k}).vars.size(), 2 * k + 3);
}

TEST(Hanoi, LiteralModeAddsUnfireableMoves) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto legal = gen_hanoi({k});
    const auto literal = gen_hanoi({k, true});
    EXPECT_GT(literal.actions.size(), legal.actions.size());
    const auto f = hanoi_filter(k);
    std::set<std::string> legal_names;
    for (const auto& a : legal.actions) legal_names.insert(a.name);
    // The extra moves never fire from a consistent state.
    const auto reach = oracle::reachable(literal, literal.init);
    for (const auto& s : reach) {
      EXPECT_TRUE(f.accepts(s));
      for (const auto& a : literal.actions)
        if (!legal_names.contains(a.name)) {
          EXPECT_FALSE(applicable(a, s)) << a.name;
        }
    }
  }
}

TEST(Hanoi, InitGoalDifferInThreeVariables) {
  for (std::size_t k = 1; k <= 8; ++k) {
    const auto inst = gen_hanoi({k});
    EXPECT_EQ(hamming(inst.init, goal_state(inst)), 3u);
    EXPECT_TRUE(hanoi_consistent(k, inst.init));
    EXPECT_TRUE(hanoi_consistent(k, goal_state(inst)));
  }
}

TEST(Hanoi, ConsistentCountIsThreeToTheK) {
  std::size_t expected = 1;
  for (std::size_t k = 1; k <= 4; ++k) {
    expected *= 3;
    std::size_t n = 0;
    for (const auto& s : oracle::all_states(hanoi_variables(k))) n += hanoi_consistent(k, s);
    EXPECT_EQ(n, expected) << k;
  }
}

TEST(Hanoi, ClearCoherence) {
  const auto inst = gen_hanoi({2});
  const HanoiVars hv{2};
  ASSERT_EQ(inst.init[hv.on(0)], 1u);  // d1 on d2
  State s = inst.init;
  s[hv.clear_pos(1)] = HanoiVars::kT;
  EXPECT_FALSE(hanoi_consistent(2, s));
}

TEST(Hanoi, ReachableEqualsConsistent) {
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto inst = gen_hanoi({k});
    const auto reach = oracle::reachable(inst, inst.init);
    EXPECT_EQ(reach.size(), static_cast<std::size_t>(std::pow(3, k)));
    for (const auto& a : inst.actions)
      for (const auto& s : reach)
        if (applicable(a, s)) {
          EXPECT_TRUE(hanoi_consistent(k, apply_action(s, a)));
        }
  }
}

TEST(Hanoi, SubtowPosExamples) {
  const auto inst = gen_hanoi({3});
  const HanoiVars hv{3};
  // Depth 1 is a primitive move.
  const Action one = oracle_subtow_pos(3, 1, hv.peg(1), hv.peg(2));
  EXPECT_TRUE(one.same_conditions(by_name(inst, "move-d1-p2-p3")));
  const Action two = oracle_subtow_pos(3, 2, hv.peg(0), hv.peg(1));
  EXPECT_EQ(two.pre.size(), 4u);
  EXPECT_EQ(two.post.size(), 3u);
  EXPECT_THROW(oracle_subtow_pos(3, 0, hv.peg(0), hv.peg(1)), InputError);
  EXPECT_THROW(oracle_subtow_pos(3, 4, hv.peg(0), hv.peg(1)), InputError);
  EXPECT_THROW(oracle_subtow_pos(3, 1, hv.peg(0), hv.peg(0)), InputError);
}

TEST(Hanoi, SubtowPosSolvesEveryInstanceInOneStep) {
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto inst = gen_hanoi({k});
    const HanoiVars hv{k};
    const Action a = oracle_subtow_pos(k, k, hv.peg(0), hv.peg(2));
    ASSERT_TRUE(applicable(a, inst.init)) << k;
    EXPECT_TRUE(inst.solved(apply_action(inst.init, a))) << k;
    EXPECT_EQ(apply_action(inst.init, a), goal_state(inst));
  }
}

TEST(Hanoi, OptimalLengthsByBfs) {
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto inst = gen_hanoi({k});
    EXPECT_EQ(oracle::bfs_distance(inst, inst.init, inst.goal), (std::size_t{1} << k) - 1);
  }
}

TEST(Domains, ConsistencyFilterByTag) {
  EXPECT_EQ(consistency_filter(gen_hanoi({2})).name, "consistent");
  PlanningInstance untagged = gen_hanoi({2});
  untagged.domain.clear();
  EXPECT_THROW(consistency_filter(untagged), InputError);
}

TEST(Domains, RandomBlocksworldIsSeeded) {
  EXPECT_EQ(random_blocksworld(5, 42), random_blocksworld(5, 42));
  bool differs = false;
  for (std::uint64_t s = 1; s < 10 && !differs; ++s)
    differs = !(random_blocksworld(5, 0) == random_blocksworld(5, s));
  EXPECT_TRUE(differs);
}
