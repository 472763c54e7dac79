#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace macroforge;

namespace {

const std::vector<std::string> kTwo = {"b1", "b2"};

const Action& by_name(const PlanningInstance& inst, const std::string& name) {
  for (const auto& a : inst.actions)
    if (a.name == name) return a;
  throw std::runtime_error("no action " + name);
}

}  // namespace

TEST(Applicable, EmptyPreconditionAndPickup) {
  const auto inst = gen_blocksworld({kTwo, stacked_layout(kTwo, {}), stacked_layout(kTwo, {})});
  const BlocksworldVars bv{2};
  Action empty;
  for (const auto& s : oracle::all_states(inst.vars)) EXPECT_TRUE(applicable(empty, s));
  const Action& pickup = by_name(inst, "pickup-b1");
  State s = inst.init;  // both blocks on the table, arm empty
  EXPECT_TRUE(applicable(pickup, s));
  s[bv.arm()] = BlocksworldVars::holding(1);
  EXPECT_FALSE(applicable(pickup, s));
}

TEST(ApplyAction, InapplicableEmptyPostAndUnstack) {
  const auto inst =
      gen_blocksworld({kTwo, stacked_layout(kTwo, {"b1", "b2"}), stacked_layout(kTwo, {})});
  const BlocksworldVars bv{2};
  const State s1 = inst.init;
  EXPECT_EQ(apply_action(s1, by_name(inst, "pickup-b2")), s1);
  Action noop;
  noop.pre = {{bv.arm(), BlocksworldVars::kEmpty}};
  EXPECT_EQ(apply_action(s1, noop), s1);
  State expected = s1;
  expected[bv.arm()] = BlocksworldVars::holding(0);
  expected[bv.on(0)] = BlocksworldVars::kArm;
  expected[bv.clear(0)] = BlocksworldVars::kF;
  expected[bv.clear(1)] = BlocksworldVars::kT;
  EXPECT_EQ(apply_action(s1, by_name(inst, "unstack-b1-b2")), expected);
}

TEST(ApplyPlan, EmptyPlanSingleStepAndHanoiTextbook) {
  const auto inst = gen_hanoi({2});
  EXPECT_EQ(apply_plan(inst.init, {}, inst.actions), inst.init);
  const Action& first = inst.actions[0];
  EXPECT_EQ(apply_plan(inst.init, {{first.id}}, inst.actions), apply_action(inst.init, first));
  auto id = [&](const std::string& n) { return by_name(inst, n).id; };
  const Plan textbook{{id("move-d1-d2-p2"), id("move-d2-p1-p3"), id("move-d1-p2-d2")}};
  EXPECT_TRUE(inst.solved(apply_plan(inst.init, textbook, inst.actions)));
  EXPECT_THROW(apply_plan(inst.init, {{9999}}, inst.actions), InputError);
}

TEST(Combine, SingleVariableChain) {
  Action a, b;
  a.pre = {{0, 0}};
  a.post = {{0, 1}};
  b.pre = {{0, 1}};
  b.post = {{0, 2}};
  const Action c = combine(a, b);
  EXPECT_EQ(c.pre, (PartialState{{0, 0}}));
  EXPECT_EQ(c.post, (PartialState{{0, 2}}));
}

TEST(Combine, UnstackThenPutdown) {
  const auto inst =
      gen_blocksworld({kTwo, stacked_layout(kTwo, {"b1", "b2"}), stacked_layout(kTwo, {})});
  const BlocksworldVars bv{2};
  using B = BlocksworldVars;
  const Action& unstack = by_name(inst, "unstack-b1-b2");
  const Action& putdown = by_name(inst, "putdown-b1");
  const Action c = combine(unstack, putdown);
  EXPECT_EQ(c.pre, (PartialState{{bv.clear(0), B::kT}, {bv.on(0), B::on_block(1)}, {bv.arm(), B::kEmpty}}));
  EXPECT_EQ(c.post, (PartialState{{bv.on(0), B::kTable}, {bv.clear(1), B::kT}}));
  ASSERT_TRUE(c.derivation);
  EXPECT_EQ(c.derivation->left, unstack.id);
  EXPECT_EQ(c.derivation->right, putdown.id);
  // The two-step plan and the macro agree on all 192 states.
  for (const auto& s : oracle::all_states(inst.vars)) {
    const bool chain = applicable(unstack, s) && applicable(putdown, apply_action(s, unstack));
    EXPECT_EQ(applicable(c, s), chain);
    if (chain) {
      EXPECT_EQ(apply_action(s, c), apply_action(apply_action(s, unstack), putdown));
    }
  }
}

TEST(Combine, SelfChainThatCannotRepeatIsMisuse) {
  Action a;
  a.pre = {{0, 0}};
  a.post = {{0, 1}};
  EXPECT_THROW(combine(a, a), MisuseError);
}

TEST(Better, Examples) {
  Action cur;
  cur.pre = {{0, 0}, {1, 1}};
  cur.post = {{2, 1}};
  EXPECT_FALSE(better_than(cur, cur));
  Action smaller = cur;
  smaller.pre.erase(1);
  EXPECT_TRUE(better_than(smaller, cur));
  EXPECT_FALSE(better_than(cur, smaller));
  Action incomparable = cur;
  incomparable.pre.set(3, 0);
  incomparable.pre.erase(1);
  EXPECT_FALSE(better_than(incomparable, cur));
  EXPECT_FALSE(better_than(cur, incomparable));
}

TEST(Better, StrictlyShrinksConditionSize) {
  std::mt19937 rng(3);
  VariableTable vars;
  for (int v = 0; v < 5; ++v) vars.add("v" + std::to_string(v), {"0", "1", "2"});
  for (int i = 0; i < 20000; ++i) {
    const Action a = oracle::random_action(vars, rng, 3, 3);
    const Action b = oracle::random_action(vars, rng, 3, 3);
    if (better_than(a, b)) {
      EXPECT_LT(a.pre.size() + a.post.size(), b.pre.size() + b.post.size());
      EXPECT_FALSE(better_than(b, a));
    }
  }
}

TEST(Normalization, PostExcludesPre) {
  Action a;
  a.pre = {{0, 1}, {1, 0}};
  a.post = {{0, 1}, {1, 1}};
  const Action n = normalized(a);
  EXPECT_EQ(n.post, (PartialState{{1, 1}}));
  for (const auto& inst : {gen_hanoi({3}), gen_blocksworld({kTwo, stacked_layout(kTwo, {}),
                                                             stacked_layout(kTwo, {})})})
    for (const auto& p : inst.actions) EXPECT_EQ(normalized(p), p) << p.name;
}

// Exhaustively: the macro is applicable exactly where the two-step
// chain is, and reaches the same state.
TEST(MacroApplicability, TwoBlockBlocksworldExhaustive) {
  const auto inst = gen_blocksworld({kTwo, stacked_layout(kTwo, {}), stacked_layout(kTwo, {})});
  ASSERT_EQ(oracle::all_states(inst.vars).size(), 192u);
  std::size_t checked = 0;
  EXPECT_EQ(oracle::applicability_violations(inst, checked), 0u);
  EXPECT_GT(checked, 100000u);
}

TEST(MacroApplicability, TwoDiskHanoiExhaustive) {
  const auto inst = gen_hanoi({2, /*all_moves=*/true});
  ASSERT_EQ(oracle::all_states(inst.vars).size(), 800u);
  std::size_t checked = 0;
  EXPECT_EQ(oracle::applicability_violations(inst, checked), 0u);
  EXPECT_GT(checked, 1000000u);
}


// Over random chained triples: both bracketings agree on conditions.
TEST(CombineAssociativity, AssociativityOnRandomChains) {
  std::size_t triples = 0;
  EXPECT_EQ(oracle::associativity_violations(2024, 50, 250, triples), 0u);
  EXPECT_GE(triples, 10000u);
}

// The packed encoding agrees with the literal operations.
TEST(Packed, AgreesWithLiteralOperations) {
  std::mt19937_64 rng(77);
  VariableTable vars;
  for (int v = 0; v < 9; ++v) {
    std::vector<std::string> dom;
    for (int x = 0; x < 2 + v % 4; ++x) dom.push_back(std::to_string(x));
    vars.add("v" + std::to_string(v), dom);
  }
  const FactLayout layout(vars);
  const std::size_t w = layout.words();
  const auto states = oracle::all_states(vars);
  std::vector<Word> pa(4 * w), pb(4 * w), pc(4 * w), lit(4 * w), sb(w), out(w), tb(w);
  for (int i = 0; i < 20000; ++i) {
    const State s = states[rng() % states.size()];
    const Action a = oracle::action_at(vars, s, rng);
    const Action b = i % 3 ? oracle::action_at(vars, apply_action(s, a), rng)
                           : oracle::random_action(vars, rng, 3, 3);
    pack_action(layout, a.pre, a.post, pa);
    pack_action(layout, b.pre, b.post, pb);
    layout.encode(s, sb);
    EXPECT_EQ(packed_applicable({pa.data(), w}, sb.data()), applicable(a, s));
    if (applicable(a, s)) {
      packed_apply({pa.data(), w}, sb.data(), out.data());
      layout.encode(apply_action(s, a), tb);
      EXPECT_EQ(out, tb);
    }
    EXPECT_EQ(packed_better({pa.data(), w}, {pb.data(), w}), better_than(a, b));
    std::optional<Action> c;
    try {
      c = combine(a, b);
    } catch (const MisuseError&) {
    }
    const bool ok = packed_combine(layout, {pa.data(), w}, {pb.data(), w}, pc.data());
    ASSERT_EQ(ok, c.has_value());
    if (ok) {
      pack_action(layout, c->pre, c->post, lit);
      EXPECT_EQ(pc, lit);
    }
  }
}
