#pragma once

// Packed fact-set encoding used by the graph engine. Every (variable, value)
// pair gets one bit; a partial state is a bit set with at most one bit per
// variable, and its "span" is the union of the full value blocks of the
// variables it defines. Actions are stored as four consecutive blocks of
// `words()` words: pre, post, span(pre), span(post).

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "macroforge/action_algebra.hpp"
#include "macroforge/core_model.hpp"

namespace macroforge {

using Word = std::uint64_t;
using FactId = std::uint32_t;

class FactLayout {
 public:
  FactLayout() = default;
  explicit FactLayout(const VariableTable& vars) {
    offset_.reserve(vars.size());
    FactId next = 0;
    for (VarId v = 0; v < vars.size(); ++v) {
      offset_.push_back(next);
      next += static_cast<FactId>(vars.domain_size(v));
    }
    nfacts_ = next;
    words_ = (nfacts_ + 63) / 64;
    if (words_ == 0) words_ = 1;
    var_of_.resize(nfacts_);
    for (VarId v = 0; v < vars.size(); ++v)
      for (FactId f = offset_[v]; f < offset_[v] + vars.domain_size(v); ++f) var_of_[f] = v;
    masks_.assign(vars.size() * words_, 0);
    for (FactId f = 0; f < nfacts_; ++f) masks_[var_of_[f] * words_ + f / 64] |= Word{1} << (f % 64);
  }

  std::size_t words() const noexcept { return words_; }
  std::size_t facts() const noexcept { return nfacts_; }
  std::size_t vars() const noexcept { return offset_.size(); }

  FactId fact(VarId v, Value x) const { return offset_[v] + x; }
  VarId var_of(FactId f) const { return var_of_[f]; }
  Value value_of(FactId f) const { return static_cast<Value>(f - offset_[var_of_[f]]); }
  std::span<const Word> var_mask(VarId v) const { return {masks_.data() + v * words_, words_}; }

  void encode(const State& s, std::span<Word> out) const {
    std::fill(out.begin(), out.end(), 0);
    for (VarId v = 0; v < s.size(); ++v) set_bit(out, fact(v, s[v]));
  }
  void encode(const PartialState& p, std::span<Word> out) const {
    std::fill(out.begin(), out.end(), 0);
    for (const auto& a : p) set_bit(out, fact(a.var, a.value));
  }
  /// OR of the value blocks of every variable that `facts` touches.
  void span_of(std::span<const Word> facts, std::span<Word> out) const {
    std::fill(out.begin(), out.end(), 0);
    for (std::size_t w = 0; w < words_; ++w) {
      Word bits = facts[w];
      while (bits) {
        const FactId f = static_cast<FactId>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        const auto m = var_mask(var_of_[f]);
        for (std::size_t i = 0; i < words_; ++i) out[i] |= m[i];
      }
    }
  }
  PartialState decode(std::span<const Word> facts) const {
    PartialState p;
    for (std::size_t w = 0; w < words_; ++w) {
      Word bits = facts[w];
      while (bits) {
        const FactId f = static_cast<FactId>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        p.set(var_of_[f], value_of(f));
      }
    }
    return p;
  }
  State decode_state(std::span<const Word> facts) const {
    std::vector<Value> values(vars(), 0);
    for (const auto& a : decode(facts)) values[a.var] = a.value;
    return State(std::move(values));
  }

  static void set_bit(std::span<Word> bits, FactId f) { bits[f / 64] |= Word{1} << (f % 64); }

 private:
  std::vector<FactId> offset_;
  std::vector<VarId> var_of_;
  std::vector<Word> masks_;
  std::size_t nfacts_ = 0;
  std::size_t words_ = 1;
};

namespace bits {

inline bool subset(const Word* a, const Word* b, std::size_t w) {
  for (std::size_t i = 0; i < w; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}
inline bool equal(const Word* a, const Word* b, std::size_t w) {
  for (std::size_t i = 0; i < w; ++i)
    if (a[i] != b[i]) return false;
  return true;
}
inline std::size_t popcount(const Word* a, std::size_t w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w; ++i) n += static_cast<std::size_t>(std::popcount(a[i]));
  return n;
}
inline std::uint64_t hash(const Word* a, std::size_t w) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < w; ++i) {
    h ^= a[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return h ^ (h >> 33);
}

}  // namespace bits

/// Read-only view of one packed action (pre, post, span(pre), span(post)).
struct PackedAction {
  const Word* base;
  std::size_t w;
  const Word* pre() const { return base; }
  const Word* post() const { return base + w; }
  const Word* pre_span() const { return base + 2 * w; }
  const Word* post_span() const { return base + 3 * w; }
};

inline void pack_action(const FactLayout& layout, const PartialState& pre,
                        const PartialState& post, std::span<Word> out) {
  const std::size_t w = layout.words();
  layout.encode(pre, out.subspan(0, w));
  layout.encode(post, out.subspan(w, w));
  layout.span_of(out.subspan(0, w), out.subspan(2 * w, w));
  layout.span_of(out.subspan(w, w), out.subspan(3 * w, w));
}

/// pre(a) applies to the packed state.
inline bool packed_applicable(PackedAction a, const Word* state) {
  return bits::subset(a.pre(), state, a.w);
}

/// state[a] for an applicable a.
inline void packed_apply(PackedAction a, const Word* state, Word* out) {
  for (std::size_t i = 0; i < a.w; ++i) out[i] = (state[i] & ~a.post_span()[i]) | a.post()[i];
}

/// Packed combine; writes 4w words into `out`. Returns false when b's
/// precondition contradicts what is known after a.
inline bool packed_combine(const FactLayout& layout, PackedAction a, PackedAction b, Word* out) {
  const std::size_t w = a.w;
  Word* pre = out;
  Word* post = out + w;
  Word* pre_span = out + 2 * w;
  Word* post_span = out + 3 * w;
  Word conflict = 0;
  Word overlap_any = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const Word known = a.post()[i] | (a.pre()[i] & ~a.post_span()[i]);
    const Word known_span = a.post_span()[i] | a.pre_span()[i];
    conflict |= b.pre()[i] & known_span & ~known;
    pre[i] = a.pre()[i] | (b.pre()[i] & ~known_span);
    pre_span[i] = a.pre_span()[i] | (b.pre_span()[i] & ~known_span);
    const Word pos = b.post()[i] | (a.post()[i] & ~b.post_span()[i]);
    post[i] = pos;
    post_span[i] = b.post_span()[i] | a.post_span()[i];
    overlap_any |= pos & pre[i];
  }
  if (conflict) return false;
  if (overlap_any) {
    // Drop postcondition pairs already in the precondition, with their spans.
    for (std::size_t i = 0; i < w; ++i) {
      Word dup = post[i] & pre[i];
      post[i] &= ~dup;
      while (dup) {
        const FactId f = static_cast<FactId>(i * 64 + std::countr_zero(dup));
        dup &= dup - 1;
        const auto m = layout.var_mask(layout.var_of(f));
        for (std::size_t j = 0; j < w; ++j) post_span[j] &= ~m[j];
      }
    }
  }
  return true;
}

/// Strict condition improvement of `cand` over `incumbent`.
inline bool packed_better(PackedAction cand, PackedAction incumbent) {
  const std::size_t w = cand.w;
  bool strict = false;
  for (std::size_t i = 0; i < w; ++i) {
    const Word cp = cand.pre()[i], ip = incumbent.pre()[i];
    const Word cq = cand.post()[i], iq = incumbent.post()[i];
    if ((cp & ~ip) | (cq & ~iq)) return false;
    strict |= (cp != ip) | (cq != iq);
  }
  return strict;
}

}  // namespace macroforge
