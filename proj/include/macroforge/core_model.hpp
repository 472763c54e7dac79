#pragma once

// Multi-valued state representation: variable tables, total and partial
// states, Hamming geometry and the ball enumerator.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "macroforge/errors.hpp"

namespace macroforge {

using VarId = std::uint32_t;
using Value = std::uint16_t;

inline constexpr std::size_t kMaxDomainSize = std::numeric_limits<Value>::max();

/// Ordered variables with ordered finite domains. Declaration order is the
/// canonical order used everywhere else.
class VariableTable {
 public:
  VarId add(std::string name, std::vector<std::string> domain) {
    if (name.empty()) throw InputError("variable name must be nonempty");
    if (index_.contains(name)) throw InputError("duplicate variable '" + name + "'");
    if (domain.empty()) throw InputError("variable '" + name + "' has an empty domain");
    if (domain.size() > kMaxDomainSize)
      throw InputError("variable '" + name + "' has too many values");
    std::unordered_map<std::string, Value> values;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (!values.emplace(domain[i], static_cast<Value>(i)).second)
        throw InputError("variable '" + name + "' repeats value '" + domain[i] + "'");
    }
    const auto id = static_cast<VarId>(vars_.size());
    index_.emplace(name, id);
    vars_.push_back({std::move(name), std::move(domain), std::move(values)});
    return id;
  }

  std::size_t size() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }

  const std::string& name(VarId v) const { return vars_.at(v).name; }
  const std::vector<std::string>& domain(VarId v) const { return vars_.at(v).domain; }
  std::size_t domain_size(VarId v) const { return vars_.at(v).domain.size(); }
  const std::string& value_name(VarId v, Value x) const { return vars_.at(v).domain.at(x); }

  std::optional<VarId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Value> find_value(VarId v, std::string_view value) const {
    const auto& values = vars_.at(v).values;
    auto it = values.find(std::string(value));
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
  VarId at(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw InputError("unknown variable '" + std::string(name) + "'");
  }
  Value value_at(VarId v, std::string_view value) const {
    if (auto x = find_value(v, value)) return *x;
    throw InputError("value '" + std::string(value) + "' is not in the domain of '" +
                     name(v) + "'");
  }

  bool operator==(const VariableTable& other) const {
    if (vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name != other.vars_[i].name || vars_[i].domain != other.vars_[i].domain)
        return false;
    }
    return true;
  }

 private:
  struct Variable {
    std::string name;
    std::vector<std::string> domain;
    std::unordered_map<std::string, Value> values;
  };
  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarId> index_;
};

/// Total assignment, indexed by VarId.
class State {
 public:
  State() = default;
  explicit State(std::vector<Value> values) : values_(std::move(values)) {}
  State(std::initializer_list<Value> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  Value operator[](VarId v) const { return values_[v]; }
  Value& operator[](VarId v) { return values_[v]; }
  const std::vector<Value>& values() const noexcept { return values_; }

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::vector<Value> values_;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Value x : s.values()) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct Assignment {
  VarId var;
  Value value;
  auto operator<=>(const Assignment&) const = default;
};

/// Partial assignment kept sorted by variable. Viewed as a set of
/// (variable, value) pairs for containment and difference.
class PartialState {
 public:
  PartialState() = default;
  PartialState(std::initializer_list<Assignment> pairs) {
    for (const auto& p : pairs) set(p.var, p.value);
  }

  static PartialState from_state(const State& s) {
    PartialState p;
    p.pairs_.reserve(s.size());
    for (VarId v = 0; v < s.size(); ++v) p.pairs_.push_back({v, s[v]});
    return p;
  }

  /// Inserts or overwrites.
  void set(VarId v, Value x) {
    auto it = lower(v);
    if (it != pairs_.end() && it->var == v)
      it->value = x;
    else
      pairs_.insert(it, {v, x});
  }
  void erase(VarId v) {
    auto it = lower(v);
    if (it != pairs_.end() && it->var == v) pairs_.erase(it);
  }
  std::optional<Value> get(VarId v) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), v,
                               [](const Assignment& a, VarId key) { return a.var < key; });
    if (it != pairs_.end() && it->var == v) return it->value;
    return std::nullopt;
  }
  bool defines(VarId v) const { return get(v).has_value(); }
  bool contains(Assignment a) const { return get(a.var) == a.value; }

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }
  const std::vector<Assignment>& pairs() const noexcept { return pairs_; }

  std::vector<VarId> vars() const {
    std::vector<VarId> out;
    out.reserve(pairs_.size());
    for (const auto& p : pairs_) out.push_back(p.var);
    return out;
  }

  /// Containment as pair sets.
  bool subset_of(const PartialState& other) const {
    return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(),
                         pairs_.end());
  }
  bool proper_subset_of(const PartialState& other) const {
    return size() < other.size() && subset_of(other);
  }

  /// True when every pair holds in the total state s.
  bool holds_in(const State& s) const {
    return std::all_of(pairs_.begin(), pairs_.end(),
                       [&](const Assignment& a) { return a.var < s.size() && s[a.var] == a.value; });
  }

  bool operator==(const PartialState&) const = default;
  auto operator<=>(const PartialState&) const = default;

 private:
  std::vector<Assignment>::iterator lower(VarId v) {
    return std::lower_bound(pairs_.begin(), pairs_.end(), v,
                            [](const Assignment& a, VarId key) { return a.var < key; });
  }
  std::vector<Assignment> pairs_;
};

/// Pair-set difference p - q.
inline PartialState minus(const PartialState& p, const PartialState& q) {
  PartialState out;
  for (const auto& a : p)
    if (!q.contains(a)) out.set(a.var, a.value);
  return out;
}

inline void check_vars(std::span<const VarId> vars, std::size_t nvars) {
  for (VarId v : vars)
    if (v >= nvars) throw InputError("unknown variable id " + std::to_string(v));
}

/// s restricted to the variables in `vars` (unknown ids are an input error).
inline PartialState restrict(const PartialState& p, std::span<const VarId> vars,
                             std::size_t nvars) {
  check_vars(vars, nvars);
  PartialState out;
  for (VarId v : vars)
    if (auto x = p.get(v)) out.set(v, *x);
  return out;
}
inline PartialState restrict(const State& s, std::span<const VarId> vars) {
  check_vars(vars, s.size());
  PartialState out;
  for (VarId v : vars) out.set(v, s[v]);
  return out;
}

inline std::size_t hamming(const State& s, const State& t) {
  if (s.size() != t.size()) throw InputError("hamming: states range over different variables");
  std::size_t d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) d += s.values()[i] != t.values()[i];
  return d;
}

inline bool is_goal_state(const State& s, const PartialState& goal) { return goal.holds_in(s); }

/// Goal variables whose value in s differs from the goal.
inline std::vector<VarId> wrong(const State& s, const PartialState& goal) {
  std::vector<VarId> out;
  for (const auto& a : goal)
    if (s[a.var] != a.value) out.push_back(a.var);
  return out;
}

inline bool is_improvement(const State& s, const State& next, const PartialState& goal) {
  bool improved = false;
  for (const auto& a : goal) {
    const bool was_right = s[a.var] == a.value;
    const bool is_right = next[a.var] == a.value;
    if (was_right && !is_right) return false;
    if (!was_right && is_right) improved = true;
  }
  return improved;
}

inline bool dominates(const State& s, const State& other, const PartialState& goal) {
  for (VarId v = 0; v < s.size(); ++v)
    if (s[v] != other[v] && !goal.defines(v)) return false;
  for (const auto& a : goal)
    if (s[a.var] != a.value && other[a.var] == a.value) return false;
  return true;
}

/// Optional admissibility test applied while enumerating Hamming balls.
///
/// `prefix` is an optional accelerator: called with the first i values of a
/// candidate (in variable order), it must return false only when no
/// completion of that prefix satisfies `predicate`.
struct StateFilter {
  enum class Mode { none, predicate };

  Mode mode = Mode::none;
  std::function<bool(const State&)> predicate;
  std::function<bool(std::span<const Value>)> prefix;
  std::string name = "none";

  static StateFilter none() { return {}; }
  static StateFilter of(std::function<bool(const State&)> pred, std::string name = "predicate",
                        std::function<bool(std::span<const Value>)> prefix = {}) {
    return {Mode::predicate, std::move(pred), std::move(prefix), std::move(name)};
  }

  bool accepts(const State& s) const { return mode == Mode::none || predicate(s); }
};

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

/// Number of states within distance k of any state, saturating at
/// uint64 max.
inline std::uint64_t ball_size_unfiltered(const VariableTable& vars, std::size_t k) {
  // Elementary symmetric sums of (|D(v)| - 1).
  constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSat / a) return kSat;
    return a * b;
  };
  auto add = [](std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; };
  std::vector<std::uint64_t> e(k + 1, 0);
  e[0] = 1;
  for (VarId v = 0; v < vars.size(); ++v) {
    const std::uint64_t alt = vars.domain_size(v) - 1;
    for (std::size_t j = std::min(k, static_cast<std::size_t>(v) + 1); j >= 1; --j)
      e[j] = add(e[j], mul(e[j - 1], alt));
  }
  std::uint64_t total = 0;
  for (auto x : e) total = add(total, x);
  return total;
}

namespace detail {

// Canonical ball order: distance first, then the sorted set of differing
// variables, then the values on those variables.
inline bool ball_less(const State& center, const State& a, const State& b) {
  const auto da = hamming(center, a);
  const auto db = hamming(center, b);
  if (da != db) return da < db;
  const std::size_t n = center.size();
  std::size_t i = 0, j = 0;
  while (true) {
    while (i < n && a[i] == center[i]) ++i;
    while (j < n && b[j] == center[j]) ++j;
    if (i == n || j == n) break;
    if (i != j) return i < j;
    ++i;
    ++j;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (a[v] != center[v] && a[v] != b[v]) return a[v] < b[v];
  return false;
}

}  // namespace detail

/// All states within Hamming distance k of `center` that pass `filter`, in
/// canonical order. Throws ResourceError when the enumeration would exceed
/// `cap` states (unfiltered projection when the filter cannot prune).
inline std::vector<State> ball(const VariableTable& vars, const State& center, std::size_t k,
                               const StateFilter& filter = {},
                               std::size_t cap = kDefaultBallCap) {
  const std::size_t n = vars.size();
  if (center.size() != n) throw InputError("ball: center is not a total state");
  const bool prunes = filter.mode == StateFilter::Mode::predicate && filter.prefix;
  if (!prunes) {
    const auto projected = ball_size_unfiltered(vars, k);
    if (projected > cap)
      throw ResourceError("ball of radius " + std::to_string(k) + " has " +
                          std::to_string(projected) + " states, over the cap of " +
                          std::to_string(cap));
  }

  std::vector<State> out;
  std::vector<Value> cur(center.values());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t budget) {
    if (prunes && v > 0 && !filter.prefix(std::span<const Value>(cur.data(), v))) return;
    if (v == n) {
      State s(cur);
      if (filter.accepts(s)) {
        if (out.size() >= cap)
          throw ResourceError("ball of radius " + std::to_string(k) +
                              " exceeds the cap of " + std::to_string(cap) + " states");
        out.push_back(std::move(s));
      }
      return;
    }
    rec(v + 1, budget);
    if (budget == 0) return;
    const Value orig = center[static_cast<VarId>(v)];
    for (std::size_t x = 0; x < vars.domain_size(static_cast<VarId>(v)); ++x) {
      if (x == orig) continue;
      cur[v] = static_cast<Value>(x);
      rec(v + 1, budget - 1);
    }
    cur[v] = orig;
  };
  rec(0, k);

  std::sort(out.begin(), out.end(),
            [&](const State& a, const State& b) { return detail::ball_less(center, a, b); });
  return out;
}

}  // namespace macroforge
