#pragma once

// compute_macros: closes an action graph over a state set under the apply
// and transitive rewrites. The default schedule is a worklist; a final
// literal scan certifies the fixed point unless disabled. `strict_scan` runs only the
// literal nested loops.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "macroforge/action_graph.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/log.hpp"

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && defined(__linux__)
#define MACROFORGE_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define MACROFORGE_VECTOR_CLONES
#endif

namespace macroforge {

struct MacroOptions {
  bool strict_scan = false;
  /// Run the literal scan after the worklist drains. The worklist alone
  /// reaches the same fixed point; the scan is a check that costs a full
  /// pass over all triples.
  bool certify = true;
  /// Cap on label installations; default (2n + 1)|E| evaluated as edges
  /// appear.
  std::optional<std::uint64_t> label_budget;
  InstallObserver observer;
};

struct MacroStats {
  std::uint64_t iterations = 0;  ///< outer rounds (worklist drain + certifying scan)
  std::uint64_t edges = 0;
  std::uint64_t label_changes = 0;
  std::uint64_t edge_events = 0;
  std::uint64_t triples = 0;
  std::uint64_t combines = 0;
  std::size_t vertices = 0;
  std::size_t labels = 0;
  double wall_ms = 0;
};

struct MacroResult {
  ActionGraph graph;
  MacroLibrary library;
  std::vector<ActionId> base;  ///< library ids of the input actions, deduplicated
  MacroStats stats;
};

namespace detail {

// The kernels below test 64 candidates per output word and set bit j of
// mask[i] for candidate 64i + j. Inputs are padded to a multiple of 64
// rows; bits past the real row count are cleared by the callers.

inline std::size_t padded(std::size_t n) { return (n + 63) & ~std::size_t{63}; }

inline void clear_tail(Word* mask, std::size_t n) {
  if (n % 64) mask[n / 64] &= (Word{1} << (n % 64)) - 1;
}

/// Bit s set when pre is contained in row s of `states` (W words per row).
template <std::size_t W>
MACROFORGE_VECTOR_CLONES inline Word applicable_rows_w(const Word* pre_in,
                                                       const Word* __restrict sb, std::size_t m,
                                                       Word* __restrict mask) {
  Word pre[W];
  for (std::size_t k = 0; k < W; ++k) pre[k] = pre_in[k];
  Word any = 0;
  for (std::size_t blk = 0; blk < m / 64; ++blk) {
    Word bits = 0;
    for (std::size_t j = 0; j < 64; ++j) {
      Word miss = 0;
      for (std::size_t k = 0; k < W; ++k) miss |= pre[k] & ~sb[(blk * 64 + j) * W + k];
      bits |= static_cast<Word>(miss == 0) << j;
    }
    mask[blk] = bits;
    any |= bits;
  }
  return any;
}

inline bool applicable_rows(const Word* pre, const Word* states, std::size_t n, std::size_t w,
                            Word* mask) {
  const std::size_t m = padded(n);
  switch (w) {
    case 1: applicable_rows_w<1>(pre, states, m, mask); break;
    case 2: applicable_rows_w<2>(pre, states, m, mask); break;
    case 3: applicable_rows_w<3>(pre, states, m, mask); break;
    default: applicable_rows_w<4>(pre, states, m, mask); break;
  }
  clear_tail(mask, n);
  for (std::size_t i = 0; i < m / 64; ++i)
    if (mask[i]) return true;
  return false;
}

/// Calls f(i) for every set bit i, in increasing order.
template <class F>
inline void for_each_flagged(const Word* mask, std::size_t n, F&& f) {
  for (std::size_t blk = 0; blk < padded(n) / 64; ++blk)
    for (Word bits = mask[blk]; bits; bits &= bits - 1)
      f(static_cast<VertexId>(blk * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
}

/// Row- and column-major copies of the edge labels' condition bits, so the
/// transitive scans over a row (fixed first leg) or a column (fixed second
/// leg) stream through contiguous memory. Absent edges hold all-ones, which
/// makes them pass the filter as "target" and fail it as a leg; every flagged
/// index is re-checked exactly.
class DenseMirror {
 public:
  /// Mirrors are used when they fit in this many bytes.
  static constexpr std::size_t kMaxBytes = std::size_t{320} << 20;

  static bool fits(std::size_t n, std::size_t w) {
    return w <= 4 && n * padded(n) * w * sizeof(Word) * 7 <= kMaxBytes;
  }

  DenseMirror(std::size_t n, std::size_t w) : n_(n), m_(padded(n)), w_(w) {
    for (auto& f : row_) f.assign(n * m_ * w, ~Word{0});
    for (auto& f : col_) f.assign(n * m_ * w, ~Word{0});
  }

  void set(VertexId u, VertexId v, PackedAction a) {
    const std::size_t r = (std::size_t{u} * m_ + v) * w_;
    const std::size_t c = (std::size_t{v} * m_ + u) * w_;
    for (std::size_t k = 0; k < w_; ++k) {
      row_[0][r + k] = a.pre()[k];
      row_[1][r + k] = a.post()[k];
      row_[2][r + k] = a.post_span()[k];
      col_[0][c + k] = a.pre()[k];
      col_[1][c + k] = a.post()[k];
      col_[2][c + k] = a.pre_span()[k];
      col_[3][c + k] = a.post_span()[k];
    }
  }

  /// Bit y set when combine(first, l(v,y)) may beat l(u,y). Returns whether
  /// any bit is set.
  bool forward(PackedAction first, VertexId u, VertexId v, Word* mask) const {
    switch (w_) {
      case 1: forward_w<1>(first, u, v, mask); break;
      case 2: forward_w<2>(first, u, v, mask); break;
      case 3: forward_w<3>(first, u, v, mask); break;
      default: forward_w<4>(first, u, v, mask); break;
    }
    return finish(mask);
  }
  /// Bit x set when combine(l(x,u), second) may beat l(x,v).
  bool backward(PackedAction second, VertexId u, VertexId v, Word* mask) const {
    switch (w_) {
      case 1: backward_w<1>(second, u, v, mask); break;
      case 2: backward_w<2>(second, u, v, mask); break;
      case 3: backward_w<3>(second, u, v, mask); break;
      default: backward_w<4>(second, u, v, mask); break;
    }
    return finish(mask);
  }

 private:
  bool finish(Word* mask) const {
    clear_tail(mask, n_);
    Word any = 0;
    for (std::size_t i = 0; i < m_ / 64; ++i) any |= mask[i];
    return any != 0;
  }

  // Both kernels evaluate the word-wise combine of two legs against the
  // incumbent target label without materialising the combined action.
  template <std::size_t W>
  MACROFORGE_VECTOR_CLONES void forward_w(PackedAction first, VertexId u, VertexId v,
                                          Word* __restrict mask) const {
    Word p1[W], q1[W], kspan[W];
    for (std::size_t k = 0; k < W; ++k) {
      p1[k] = first.pre()[k];
      q1[k] = first.post()[k];
      kspan[k] = first.pre_span()[k] | first.post_span()[k];
    }
    const std::size_t m = m_;
    const Word* __restrict p2 = row_[0].data() + std::size_t{v} * m * W;
    const Word* __restrict q2 = row_[1].data() + std::size_t{v} * m * W;
    const Word* __restrict qs2 = row_[2].data() + std::size_t{v} * m * W;
    const Word* __restrict pc = row_[0].data() + std::size_t{u} * m * W;
    const Word* __restrict qc = row_[1].data() + std::size_t{u} * m * W;
    for (std::size_t blk = 0; blk < m / 64; ++blk) {
      Word bits = 0;
      for (std::size_t j = 0; j < 64; ++j) {
        Word bad = 0, diff = 0;
        for (std::size_t k = 0; k < W; ++k) {
          const std::size_t i = (blk * 64 + j) * W + k;
          const Word pre = p1[k] | (p2[i] & ~kspan[k]);
          const Word post = (q2[i] | (q1[k] & ~qs2[i])) & ~pre;
          bad |= (pre & ~pc[i]) | (post & ~qc[i]);
          diff |= (pre ^ pc[i]) | (post ^ qc[i]);
        }
        bits |= (static_cast<Word>(bad == 0) & static_cast<Word>(diff != 0)) << j;
      }
      mask[blk] = bits;
    }
  }

  template <std::size_t W>
  MACROFORGE_VECTOR_CLONES void backward_w(PackedAction second, VertexId u, VertexId v,
                                           Word* __restrict mask) const {
    Word p2[W], q2[W], qs2[W];
    for (std::size_t k = 0; k < W; ++k) {
      p2[k] = second.pre()[k];
      q2[k] = second.post()[k];
      qs2[k] = second.post_span()[k];
    }
    const std::size_t m = m_;
    const Word* __restrict p1 = col_[0].data() + std::size_t{u} * m * W;
    const Word* __restrict q1 = col_[1].data() + std::size_t{u} * m * W;
    const Word* __restrict ps1 = col_[2].data() + std::size_t{u} * m * W;
    const Word* __restrict qs1 = col_[3].data() + std::size_t{u} * m * W;
    const Word* __restrict pc = col_[0].data() + std::size_t{v} * m * W;
    const Word* __restrict qc = col_[1].data() + std::size_t{v} * m * W;
    for (std::size_t blk = 0; blk < m / 64; ++blk) {
      Word bits = 0;
      for (std::size_t j = 0; j < 64; ++j) {
        Word bad = 0, diff = 0;
        for (std::size_t k = 0; k < W; ++k) {
          const std::size_t i = (blk * 64 + j) * W + k;
          const Word pre = p1[i] | (p2[k] & ~(ps1[i] | qs1[i]));
          const Word post = (q2[k] | (q1[i] & ~qs2[k])) & ~pre;
          bad |= (pre & ~pc[i]) | (post & ~qc[i]);
          diff |= (pre ^ pc[i]) | (post ^ qc[i]);
        }
        bits |= (static_cast<Word>(bad == 0) & static_cast<Word>(diff != 0)) << j;
      }
      mask[blk] = bits;
    }
  }

  std::size_t n_, m_, w_;
  std::vector<Word> row_[3];  // pre, post, post_span; rows padded to m_
  std::vector<Word> col_[4];  // pre, post, pre_span, post_span
};

class MacroEngine {
 public:
  MacroEngine(MacroResult& r, const MacroOptions& opt)
      : g_(r.graph), lib_(r.library), stats_(r.stats), opt_(opt), w_(lib_.words()) {
    is_base_.assign(lib_.size(), 0);
    for (ActionId a : r.base) is_base_[a] = 1;
    scratch_.resize(4 * w_);
    next_.resize(w_);
    n_ = lib_.layout().vars();
    if (DenseMirror::fits(g_.size(), w_)) {
      mirror_.emplace(g_.size(), w_);
      flag_.resize(padded(g_.size()) / 64);
    }
    if (w_ <= 4) {
      vbits_.assign(padded(g_.size()) * w_, 0);
      if (g_.size() > 0)
        std::copy(g_.vertex_bits(0), g_.vertex_bits(0) + g_.size() * w_, vbits_.begin());
      app_.resize(padded(g_.size()) / 64);
    }
  }

  void run() {
    if (opt_.strict_scan) {
      worklist_ = false;
      do ++stats_.iterations;
      while (scan_round());
      return;
    }
    // Seed: every base action is applied everywhere once.
    for (ActionId a = 0; a < is_base_.size(); ++a)
      if (is_base_[a]) enqueue_label(a);
    do {
      ++stats_.iterations;
      drain();
    } while (opt_.certify && scan_round());
  }

 private:
  bool in_base(ActionId a) const { return a < is_base_.size() && is_base_[a]; }

  void install(VertexId u, VertexId v, ActionId a) {
    const ActionId old = g_.set_label(u, v, a);
    if (mirror_) mirror_->set(u, v, lib_.packed(a));
    ++stats_.label_changes;
    const std::uint64_t budget =
        opt_.label_budget ? *opt_.label_budget : (2 * n_ + 1) * g_.edge_count();
    if (stats_.label_changes > budget)
      throw InternalError("compute_macros: label installation budget exceeded");
    if (opt_.observer) opt_.observer(u, v, old, a);
    if (worklist_) {
      edges_.push_back({u, v, a});
      enqueue_label(a);
    }
  }

  void enqueue_label(ActionId a) {
    if (a >= applied_.size()) applied_.resize(std::max<std::size_t>(a + 1, 2 * applied_.size()), 0);
    if (applied_[a]) return;
    applied_[a] = 1;
    labels_.push_back(a);
  }

  // apply(G, A, a, s) over every vertex.
  bool apply_everywhere(ActionId a) {
    if (!in_base(a) && !g_.is_label(a)) return false;
    const PackedAction pa = lib_.packed(a);
    bool changed = false;
    auto at = [&](VertexId s) {
      const Word* sb = g_.vertex_bits(s);
      packed_apply(pa, sb, next_.data());
      const auto t = g_.find_bits(next_.data());
      if (!t || *t == s) return;
      const ActionId cur = g_.label(s, *t);
      if (cur == a || (cur != kNoAction && !packed_better(pa, lib_.packed(cur)))) return;
      install(s, *t, a);
      changed = true;
    };
    if (w_ <= 4) {
      if (!applicable_rows(pa.pre(), vbits_.data(), g_.size(), w_, app_.data())) return false;
      for_each_flagged(app_.data(), g_.size(), at);
    } else {
      for (VertexId s = 0; s < g_.size(); ++s)
        if (packed_applicable(pa, g_.vertex_bits(s))) at(s);
    }
    return changed;
  }

  // transitive(G, s1, s2, s3) given the current labels of (s1,s2), (s2,s3).
  bool transitive(VertexId s1, VertexId s3, ActionId first, ActionId second) {
    if (s1 == s3) return false;
    const ActionId cur = g_.label(s1, s3);
    if (cur != kNoAction && !bits::subset(lib_.packed(first).pre(), lib_.packed(cur).pre(), w_))
      return false;
    ++stats_.combines;
    if (!packed_combine(lib_.layout(), lib_.packed(first), lib_.packed(second), scratch_.data()))
      throw InternalError("compute_macros: edge labels do not chain");
    if (cur != kNoAction && !packed_better({scratch_.data(), w_}, lib_.packed(cur))) return false;
    install(s1, s3, lib_.intern_derived(scratch_.data(), {first, second}));
    return true;
  }

  // All triples (s1, s2, y) for fixed s1, s2 in increasing y.
  bool transitive_row(VertexId s1, VertexId s2) {
    const ActionId first = g_.label(s1, s2);
    bool changed = false;
    if (mirror_) {
      stats_.triples += g_.size();
      if (!mirror_->forward(lib_.packed(first), s1, s2, flag_.data())) return false;
      for_each_flagged(flag_.data(), g_.size(), [&](VertexId y) {
        const ActionId second = g_.label(s2, y);
        if (second != kNoAction) changed |= transitive(s1, y, first, second);
      });
      return changed;
    }
    for (std::size_t i = 0; i < g_.out(s2).size(); ++i) {
      const VertexId y = g_.out(s2)[i];
      ++stats_.triples;
      changed |= transitive(s1, y, first, g_.label(s2, y));
    }
    return changed;
  }

  // All triples (x, s2, s3) for fixed s2, s3.
  void transitive_column(VertexId s2, VertexId s3) {
    const ActionId second = g_.label(s2, s3);
    if (mirror_) {
      stats_.triples += g_.size();
      if (!mirror_->backward(lib_.packed(second), s2, s3, flag_.data())) return;
      for_each_flagged(flag_.data(), g_.size(), [&](VertexId x) {
        const ActionId first = g_.label(x, s2);
        if (first != kNoAction) transitive(x, s3, first, second);
      });
      return;
    }
    for (std::size_t i = 0; i < g_.in(s2).size(); ++i) {
      const VertexId x = g_.in(s2)[i];
      ++stats_.triples;
      transitive(x, s3, g_.label(x, s2), second);
    }
  }

  void drain() {
    while (!labels_.empty() || !edges_.empty()) {
      if (!edges_.empty()) {
        const EdgeEvent e = edges_.front();
        edges_.pop_front();
        process_edge(e);
      } else {
        const ActionId a = labels_.front();
        labels_.pop_front();
        apply_everywhere(a);
      }
    }
  }

  struct EdgeEvent {
    VertexId u, v;
    ActionId label;
  };

  // A new label on (u, v) can only create opportunities in the triples
  // that use (u, v) as their first or second leg. Neither scan below can
  // relabel (u, v) itself: that would need a self-loop leg.
  void process_edge(const EdgeEvent& e) {
    if (g_.label(e.u, e.v) != e.label) return;  // superseded by a later event
    ++stats_.edge_events;
    transitive_column(e.u, e.v);
    transitive_row(e.u, e.v);
  }

  // One round of the literal schedule: apply for every a in A ∪ l(E(G)) at
  // every state, then transitive over every triple (s1, s2, s3) in
  // lexicographic order. Triples without both legs are no-ops.
  bool scan_round() {
    bool changed = false;
    const ActionId registered = static_cast<ActionId>(lib_.size());
    for (ActionId a = 0; a < registered; ++a)
      if (in_base(a) || g_.is_label(a)) changed |= apply_everywhere(a);
    for (VertexId s1 = 0; s1 < g_.size(); ++s1)
      for (VertexId s2 = 0; s2 < g_.size(); ++s2)
        if (g_.has_edge(s1, s2)) changed |= transitive_row_sorted(s1, s2);
    return changed;
  }

  // transitive_row, but visiting s3 in vertex order on the sparse path too.
  bool transitive_row_sorted(VertexId s1, VertexId s2) {
    if (mirror_) return transitive_row(s1, s2);
    const ActionId first = g_.label(s1, s2);
    sorted_.assign(g_.out(s2).begin(), g_.out(s2).end());
    std::sort(sorted_.begin(), sorted_.end());
    bool changed = false;
    for (VertexId y : sorted_) {
      ++stats_.triples;
      changed |= transitive(s1, y, first, g_.label(s2, y));
    }
    return changed;
  }

  ActionGraph& g_;
  MacroLibrary& lib_;
  MacroStats& stats_;
  const MacroOptions& opt_;
  std::size_t w_;
  std::size_t n_;
  bool worklist_ = true;
  std::vector<std::uint8_t> is_base_;
  std::vector<std::uint8_t> applied_;
  std::deque<ActionId> labels_;
  std::deque<EdgeEvent> edges_;
  std::vector<Word> scratch_;
  std::vector<Word> next_;
  std::optional<DenseMirror> mirror_;
  std::vector<Word> flag_;
  std::vector<Word> app_;
  std::vector<Word> vbits_;  // vertex bits padded for applicable_rows
  std::vector<VertexId> sorted_;
};

}  // namespace detail

/// Runs the fixed point over `states` (ball order) with base actions `actions`.
inline MacroResult compute_macros(std::shared_ptr<const FactLayout> layout,
                                  std::vector<State> states, std::span<const Action> actions,
                                  const MacroOptions& options = {}) {
  if (states.empty()) throw InputError("compute_macros: empty state set");
  const auto start = std::chrono::steady_clock::now();
  MacroResult r{ActionGraph(std::move(states), layout), MacroLibrary(layout), {}, {}};
  for (const auto& a : actions) {
    const ActionId id = r.library.add_primitive(a);
    if (std::find(r.base.begin(), r.base.end(), id) == r.base.end()) r.base.push_back(id);
  }
  detail::MacroEngine(r, options).run();
  r.stats.edges = r.graph.edge_count();
  r.stats.vertices = r.graph.size();
  r.stats.labels = r.graph.labels().size();
  r.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  log::debug("compute_macros: " + std::to_string(r.stats.vertices) + " states, " +
             std::to_string(r.stats.edges) + " edges, " + std::to_string(r.library.size()) +
             " actions, " + std::to_string(r.stats.wall_ms) + " ms");
  return r;
}

inline MacroResult compute_macros(const VariableTable& vars, std::vector<State> states,
                                  std::span<const Action> actions,
                                  const MacroOptions& options = {}) {
  return compute_macros(std::make_shared<const FactLayout>(vars), std::move(states), actions,
                        options);
}

/// l(E(G)): distinct edge labels (registry entries are unique by conditions).
inline std::vector<ActionId> label_set(const ActionGraph& g) { return g.labels(); }

/// Counts the rewrites a literal scan would still perform: apply over
/// base ∪ labels at every vertex, transitive over every triple. Zero at a
/// fixed point. Does not modify anything.
inline std::uint64_t fixed_point_violations(const MacroResult& r) {
  const auto& g = r.graph;
  const auto& lib = r.library;
  const std::size_t w = lib.words();
  std::vector<std::uint8_t> base(lib.size(), 0);
  for (ActionId a : r.base) base[a] = 1;
  std::vector<Word> next(w), scratch(4 * w);
  std::uint64_t violations = 0;
  for (ActionId a = 0; a < lib.size(); ++a) {
    if (!base[a] && !g.is_label(a)) continue;
    const PackedAction pa = lib.packed(a);
    for (VertexId s = 0; s < g.size(); ++s) {
      if (!packed_applicable(pa, g.vertex_bits(s))) continue;
      packed_apply(pa, g.vertex_bits(s), next.data());
      const auto t = g.find_bits(next.data());
      if (t && *t != s && better(lib, pa, g, s, *t)) ++violations;
    }
  }
  for (VertexId s1 = 0; s1 < g.size(); ++s1)
    for (VertexId s2 : g.out(s1))
      for (VertexId s3 : g.out(s2)) {
        if (s1 == s3) continue;
        if (!packed_combine(lib.layout(), lib.packed(g.label(s1, s2)), lib.packed(g.label(s2, s3)),
                            scratch.data()))
          ++violations;
        else if (better(lib, PackedAction{scratch.data(), w}, g, s1, s3))
          ++violations;
      }
  return violations;
}

/// (s1,s2), (s2,s3) ∈ E with s1 ≠ s3 implies (s1,s3) ∈ E.
inline bool is_transitively_closed(const ActionGraph& g) {
  for (VertexId s1 = 0; s1 < g.size(); ++s1)
    for (VertexId s2 : g.out(s1))
      for (VertexId s3 : g.out(s2))
        if (s1 != s3 && !g.has_edge(s1, s3)) return false;
  return true;
}

/// Every edge label applied at its source reaches its target.
inline bool edges_sound(const MacroResult& r) {
  for (const auto& e : r.graph.edges()) {
    const Action a = r.library.action(e.label);
    if (!applicable(a, r.graph.vertex(e.source))) return false;
    if (apply_action(r.graph.vertex(e.source), a) != r.graph.vertex(e.target)) return false;
  }
  return true;
}

enum class Minimality { minimal, non_minimal, inconclusive };

inline const char* to_string(Minimality m) {
  switch (m) {
    case Minimality::minimal: return "minimal";
    case Minimality::non_minimal: return "non-minimal";
    default: return "inconclusive";
  }
}

inline constexpr std::uint64_t kMinimalityBudget = 100'000;

/// Brute-force condition-minimality of (source, a, target) w.r.t. `base`.
/// Combinations are left folds of combine over sequences of length
/// ≤ max_len; a sequence is extended only while its fold stays applicable
/// at `source`, since pre only grows along the fold.
inline Minimality is_condition_minimal(const State& source, const Action& a, const State& target,
                                       std::span<const Action> base, std::size_t max_len,
                                       std::uint64_t budget = kMinimalityBudget) {
  if (max_len == 0) throw MisuseError("is_condition_minimal: max_len must be at least 1");
  std::uint64_t visited = 0;
  bool exhausted = false;
  bool violated = false;
  auto contains_t = [&](const Action& alt) {
    return a.pre.subset_of(alt.pre) && a.post.subset_of(alt.post);
  };
  std::function<void(const Action&, std::size_t)> rec = [&](const Action& prefix,
                                                           std::size_t len) {
    if (violated || exhausted) return;
    if (apply_action(source, prefix) == target && source != target && !contains_t(prefix)) {
      violated = true;
      return;
    }
    if (len == max_len) return;
    for (const auto& b : base) {
      if (++visited > budget) {
        exhausted = true;
        return;
      }
      Action next;
      try {
        next = combine(prefix, b);
      } catch (const MisuseError&) {
        continue;
      }
      if (!applicable(next, source)) continue;
      rec(next, len + 1);
      if (violated || exhausted) return;
    }
  };
  for (const auto& b : base) {
    if (++visited > budget) {
      exhausted = true;
      break;
    }
    if (!applicable(b, source)) continue;
    rec(normalized(b), 1);
    if (violated || exhausted) break;
  }
  if (violated) return Minimality::non_minimal;
  return exhausted ? Minimality::inconclusive : Minimality::minimal;
}

/// Every action produced by the program's transitive commands appears, by
/// conditions, as an edge label of `result.graph`.
inline bool check_discovery(const ProgramRun& run, const MacroLibrary& program_library,
                            const MacroResult& result) {
  for (const auto& t : run.produced) {
    const Action a = program_library.action(t.action);
    const auto id = result.library.find(a.pre, a.post);
    if (!id || !result.graph.is_label(*id)) return false;
  }
  return true;
}

}  // namespace macroforge
