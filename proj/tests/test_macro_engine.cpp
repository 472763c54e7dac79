#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace macroforge;

namespace {

using EdgeSet = std::set<std::pair<VertexId, VertexId>>;

EdgeSet edge_set(const ActionGraph& g) {
  EdgeSet out;
  for (const auto& e : g.edges()) out.insert({e.source, e.target});
  return out;
}

/// Edges with their labels' conditions, for comparing runs that may number
/// registry entries differently.
std::vector<std::tuple<VertexId, VertexId, PartialState, PartialState>> labelled_edges(
    const MacroResult& r) {
  std::vector<std::tuple<VertexId, VertexId, PartialState, PartialState>> out;
  for (const auto& e : r.graph.edges()) {
    const Action a = r.library.action(e.label);
    out.emplace_back(e.source, e.target, a.pre, a.post);
  }
  return out;
}

MacroOptions strict() {
  MacroOptions o;
  o.strict_scan = true;
  return o;
}

MacroOptions uncertified() {
  MacroOptions o;
  o.certify = false;
  return o;
}

PlanningInstance two_blocks() {
  const std::vector<std::string> b = {"b1", "b2"};
  return gen_blocksworld({b, stacked_layout(b, {"b1", "b2"}), stacked_layout(b, {})});
}

PlanningInstance three_blocks_stacked() {
  const std::vector<std::string> b = {"b1", "b2", "b3"};
  return gen_blocksworld({b, stacked_layout(b, {"b1", "b2", "b3"}), stacked_layout(b, {})});
}

/// A small random instance: few variables, a handful of random actions.
PlanningInstance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PlanningInstance inst;
  const std::size_t n = 2 + rng() % 3;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::string> dom;
    for (std::size_t x = 0, d = 2 + rng() % 2; x < d; ++x) dom.push_back(std::to_string(x));
    inst.vars.add("v" + std::to_string(v), dom);
  }
  inst.init = State(std::vector<Value>(n, 0));
  for (std::size_t i = 0, m = 2 + rng() % 6; i < m; ++i) {
    Action a = oracle::random_action(inst.vars, rng, 2, 2);
    a.id = static_cast<ActionId>(i);
    a.name = "a" + std::to_string(i);
    inst.actions.push_back(a);
  }
  return inst;
}

}  // namespace

TEST(ComputeMacros, SingleStateIsEdgeless) {
  const auto inst = gen_hanoi({2});
  const auto r = compute_macros(inst.vars, {inst.init}, inst.actions);
  EXPECT_EQ(r.graph.edge_count(), 0u);
  EXPECT_TRUE(r.library.log().empty());
  EXPECT_TRUE(label_set(r.graph).empty());
}

TEST(ComputeMacros, EmptyStateSetIsInputError) {
  const auto inst = gen_hanoi({2});
  EXPECT_THROW(compute_macros(inst.vars, {}, inst.actions), InputError);
}

TEST(ComputeMacros, ThreeStateExample) {
  const auto ex = oracle::three_state_example();
  const auto r = compute_macros(ex.inst.vars, ex.states(), ex.inst.actions);
  // s1 <-> s2 <-> s3 and s1 <-> s3.
  EXPECT_EQ(r.graph.edge_count(), 6u);
  const Action m = r.library.action(r.graph.label(0, 2));
  EXPECT_TRUE(m.same_conditions(combine(ex.inst.actions[ex.id("unstack-b1-b2")],
                                        ex.inst.actions[ex.id("putdown-b1")])));
  EXPECT_EQ(fixed_point_violations(r), 0u);
}

TEST(ComputeMacros, WorklistMatchesStrictScanAndNaiveClosure) {
  std::vector<std::pair<PlanningInstance, std::vector<State>>> cases;
  {
    const auto inst = two_blocks();
    cases.emplace_back(inst, ball(inst.vars, inst.init, 2));
  }
  {
    const auto inst = gen_hanoi({2});
    cases.emplace_back(inst, ball(inst.vars, inst.init, 7, hanoi_filter(2)));
  }
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = random_instance(seed);
    cases.emplace_back(inst, oracle::all_states(inst.vars));
  }
  for (const auto& [inst, states] : cases) {
    const auto fast = compute_macros(inst.vars, states, inst.actions);
    const auto slow = compute_macros(inst.vars, states, inst.actions, strict());
    EXPECT_EQ(edge_set(fast.graph), edge_set(slow.graph));
    EXPECT_EQ(fixed_point_violations(fast), 0u);
    EXPECT_EQ(fixed_point_violations(slow), 0u);
    const auto naive = oracle::naive_closure(states, inst.actions);
    EdgeSet naive_edges;
    for (std::size_t i = 0; i < naive.size(); ++i)
      if (naive[i]) naive_edges.insert({i / states.size(), i % states.size()});
    EXPECT_EQ(edge_set(fast.graph), naive_edges);
  }
}

TEST(ComputeMacros, CertificationChangesNothing) {
  for (const auto& inst : {two_blocks(), gen_hanoi({2}), three_blocks_stacked()}) {
    const auto states = ball(inst.vars, inst.init, 4, consistency_filter(inst));
    const auto a = compute_macros(inst.vars, states, inst.actions);
    const auto b = compute_macros(inst.vars, states, inst.actions, uncertified());
    EXPECT_EQ(a.graph.edges(), b.graph.edges());
    EXPECT_EQ(a.library.log(), b.library.log());
    EXPECT_EQ(fixed_point_violations(b), 0u);
  }
}

TEST(ComputeMacros, FixedPointInvariantsOnDomainBalls) {
  const auto bw = three_blocks_stacked();
  const auto h3 = gen_hanoi({3});
  for (const auto& [inst, k] : {std::pair{bw, 4}, std::pair{bw, 5}, std::pair{h3, 7}}) {
    const auto r = compute_macros(inst.vars, ball(inst.vars, inst.init, k, consistency_filter(inst)),
                                  inst.actions);
    EXPECT_EQ(fixed_point_violations(r), 0u);
    EXPECT_TRUE(is_transitively_closed(r.graph));
    EXPECT_TRUE(edges_sound(r));
    EXPECT_LE(r.stats.label_changes, 2 * inst.vars.size() * r.graph.edge_count() + r.graph.edge_count());
    for (const auto& rec : r.library.log()) {
      EXPECT_LT(rec.left, rec.parent);
      EXPECT_LT(rec.right, rec.parent);
      EXPECT_EQ(r.library.derivation(rec.parent), (Derivation{rec.left, rec.right}));
    }
    for (ActionId a : label_set(r.graph)) EXPECT_LT(a, r.library.size());
  }
}

// In-set primitive reachability implies an edge. The converse holds only up
// to label replacement: a better label found on another edge may expand
// through states outside the set, so every edge is checked by replaying
// its expansion instead.
TEST(ComputeMacros, EdgesMatchReachability) {
  const auto bw = two_blocks();
  const auto h2 = gen_hanoi({2});
  std::vector<std::pair<PlanningInstance, std::vector<State>>> cases{
      {bw, ball(bw.vars, bw.init, 3)},
      {bw, ball(bw.vars, bw.init, 5, blocksworld_filter(2))},
      {h2, ball(h2.vars, h2.init, 4)},
      {h2, ball(h2.vars, h2.init, 7)}};
  std::size_t outside = 0;
  for (const auto& [inst, states] : cases) {
    ASSERT_LE(states.size(), 800u);
    const auto r = compute_macros(inst.vars, states, inst.actions);
    const auto reach = oracle::reach_matrix(r.graph);
    std::map<State, VertexId> index;
    for (VertexId i = 0; i < states.size(); ++i) index[states[i]] = i;
    for (VertexId u = 0; u < states.size(); ++u) {
      // Primitive BFS from u that never leaves the state set.
      std::vector<bool> seen(states.size(), false);
      std::vector<VertexId> queue{u};
      seen[u] = true;
      for (std::size_t head = 0; head < queue.size(); ++head)
        for (const auto& a : inst.actions) {
          const auto it = index.find(apply_action(states[queue[head]], a));
          if (it != index.end() && !seen[it->second]) {
            seen[it->second] = true;
            queue.push_back(it->second);
          }
        }
      for (VertexId v = 0; v < states.size(); ++v) {
        if (u == v) continue;
        const bool edge = r.graph.has_edge(u, v);
        ASSERT_EQ(reach[u][v], edge);
        if (seen[v]) {
          ASSERT_TRUE(edge) << u << "->" << v;
        }
        if (edge && !seen[v]) {
          ++outside;
          State s = states[u];
          expand(r.library, r.graph.label(u, v), [&](ActionId p) {
            EXPECT_TRUE(applicable(inst.actions[p], s));
            s = apply_action(s, inst.actions[p]);
            return true;
          });
          ASSERT_EQ(s, states[v]) << u << "->" << v;
        }
      }
    }
  }
  EXPECT_GT(outside, 0u);
}

TEST(ComputeMacros, Deterministic) {
  const auto inst = three_blocks_stacked();
  const auto states = ball(inst.vars, inst.init, 5, blocksworld_filter(3));
  const auto a = compute_macros(inst.vars, states, inst.actions);
  const auto b = compute_macros(inst.vars, states, inst.actions);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.library.log(), b.library.log());
  EXPECT_EQ(a.library.actions(), b.library.actions());
  EXPECT_EQ(labelled_edges(a), labelled_edges(b));
}

TEST(ComputeMacros, LabelBudgetIsASafetyValve) {
  const auto inst = gen_hanoi({2});
  MacroOptions o;
  o.label_budget = 3;
  EXPECT_THROW(compute_macros(inst.vars, ball(inst.vars, inst.init, 7, hanoi_filter(2)),
                              inst.actions, o),
               InternalError);
}

TEST(ComputeMacros, LabelChangesPerEdgeBoundedByTwoN) {
  const auto inst = three_blocks_stacked();
  std::map<std::pair<VertexId, VertexId>, std::size_t> installs;
  MacroOptions o;
  o.observer = [&](VertexId u, VertexId v, ActionId, ActionId) { ++installs[{u, v}]; };
  const auto r = compute_macros(inst.vars, ball(inst.vars, inst.init, 5, blocksworld_filter(3)),
                                inst.actions, o);
  std::uint64_t total = 0;
  for (const auto& [e, c] : installs) {
    EXPECT_LE(c, 2 * inst.vars.size() + 1);
    total += c;
  }
  EXPECT_EQ(total, r.stats.label_changes);
}

TEST(ComputeMacros, HanoiTwoDiskFullSpaceHasInitToGoalEdge) {
  const auto inst = gen_hanoi({2, /*all_moves=*/true});
  const auto states = ball(inst.vars, inst.init, 7);
  ASSERT_EQ(states.size(), 800u);
  const auto r = compute_macros(inst.vars, states, inst.actions);
  State goal = inst.init;
  for (const auto& a : inst.goal) goal[a.var] = a.value;
  const auto g = r.graph.find(goal);
  ASSERT_TRUE(g);
  ASSERT_TRUE(r.graph.has_edge(0, *g));
  const Action label = r.library.action(r.graph.label(0, *g));
  const Action oracle = oracle_subtow_pos(2, 2, HanoiVars{2}.peg(0), HanoiVars{2}.peg(2));
  // Every condition of the oracle macro is among the label's conditions.
  EXPECT_TRUE(oracle.pre.subset_of(label.pre));
  EXPECT_EQ(apply_action(inst.init, label), goal);
}

TEST(Minimality, SingleActionDomain) {
  Action a;
  a.pre = {{0, 0}};
  a.post = {{1, 1}};
  const State s{0, 0};
  EXPECT_EQ(is_condition_minimal(s, a, apply_action(s, a), std::vector<Action>{a}, 3),
            Minimality::minimal);
}

TEST(Minimality, UnstackPutdownIsMinimalAndPaddingIsNot) {
  const auto ex = oracle::three_state_example();
  const Action m = combine(ex.inst.actions[ex.id("unstack-b1-b2")],
                           ex.inst.actions[ex.id("putdown-b1")]);
  EXPECT_EQ(is_condition_minimal(ex.s1, m, ex.s3, ex.inst.actions, 4), Minimality::minimal);
  Action padded = m;
  padded.pre.set(BlocksworldVars{2}.clear(1), ex.s1[BlocksworldVars{2}.clear(1)]);
  EXPECT_EQ(is_condition_minimal(ex.s1, padded, ex.s3, ex.inst.actions, 4),
            Minimality::non_minimal);
}

TEST(Minimality, BudgetExhaustionIsInconclusive) {
  const auto ex = oracle::three_state_example();
  const Action m = combine(ex.inst.actions[ex.id("unstack-b1-b2")],
                           ex.inst.actions[ex.id("putdown-b1")]);
  EXPECT_EQ(is_condition_minimal(ex.s1, m, ex.s3, ex.inst.actions, 6, 5), Minimality::inconclusive);
  EXPECT_THROW(is_condition_minimal(ex.s1, m, ex.s3, ex.inst.actions, 0), MisuseError);
}

TEST(Discovery, EmptyProgramIsVacuous) {
  const auto ex = oracle::three_state_example();
  std::vector<ActionId> base;
  auto lib = oracle::primitive_library(ex.inst, &base);
  const auto run = run_program({}, ex.states(), base, lib);
  const auto r = compute_macros(ex.inst.vars, ex.states(), ex.inst.actions);
  EXPECT_TRUE(check_discovery(run, lib, r));
}

TEST(Discovery, ThreeStateProgram) {
  const auto ex = oracle::three_state_example();
  std::vector<ActionId> base;
  auto lib = oracle::primitive_library(ex.inst, &base);
  const auto run = run_program(oracle::three_state_program(ex), ex.states(), base, lib);
  ASSERT_EQ(run.produced.size(), 1u);
  for (const auto& t : run.produced)
    EXPECT_EQ(is_condition_minimal(t.source, lib.action(t.action), t.target, ex.inst.actions, 4),
              Minimality::minimal);
  const auto r = compute_macros(ex.inst.vars, ex.states(), ex.inst.actions);
  EXPECT_TRUE(check_discovery(run, lib, r));
}

TEST(Discovery, HanoiTwoDiskProgram) {
  const auto inst = gen_hanoi({2, /*all_moves=*/true});
  const auto states = ball(inst.vars, inst.init, 7);
  std::vector<ActionId> base;
  auto lib = oracle::primitive_library(inst, &base);
  const auto run = run_program(oracle::hanoi2_program(inst), states, base, lib);
  ASSERT_EQ(run.produced.size(), 2u);
  const auto r = compute_macros(inst.vars, states, inst.actions);
  EXPECT_TRUE(check_discovery(run, lib, r));
}
