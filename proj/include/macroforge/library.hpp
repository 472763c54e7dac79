#pragma once

// Append-only action registry shared by action graphs, the macro engine and
// succinct plans. Entries are deduplicated by condition equality; every
// derived entry carries exactly one derivation record in the log.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "macroforge/action_algebra.hpp"
#include "macroforge/errors.hpp"
#include "macroforge/facts.hpp"

namespace macroforge {

/// Open-addressing set of 32-bit ids keyed by packed words stored elsewhere.
class PackedIdTable {
 public:
  static constexpr std::uint32_t kEmpty = static_cast<std::uint32_t>(-1);

  template <class KeyOf>
  std::optional<std::uint32_t> find(const Word* key, std::size_t w, std::uint64_t h,
                                    KeyOf&& key_of) const {
    if (slots_.empty()) return std::nullopt;
    for (std::size_t i = h & mask_;; i = (i + 1) & mask_) {
      const auto id = slots_[i];
      if (id == kEmpty) return std::nullopt;
      if (hashes_[i] == h && bits::equal(key_of(id), key, w)) return id;
    }
  }

  void insert(std::uint32_t id, std::uint64_t h) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    place(id, h);
    ++count_;
  }

  std::size_t size() const noexcept { return count_; }

 private:
  void place(std::uint32_t id, std::uint64_t h) {
    std::size_t i = h & mask_;
    while (slots_[i] != kEmpty) i = (i + 1) & mask_;
    slots_[i] = id;
    hashes_[i] = h;
  }
  void grow() {
    std::vector<std::uint32_t> old_slots = std::move(slots_);
    std::vector<std::uint64_t> old_hashes = std::move(hashes_);
    const std::size_t cap = old_slots.empty() ? 64 : old_slots.size() * 2;
    slots_.assign(cap, kEmpty);
    hashes_.assign(cap, 0);
    mask_ = cap - 1;
    for (std::size_t i = 0; i < old_slots.size(); ++i)
      if (old_slots[i] != kEmpty) place(old_slots[i], old_hashes[i]);
  }

  std::vector<std::uint32_t> slots_;
  std::vector<std::uint64_t> hashes_;
  std::size_t mask_ = 0;
  std::size_t count_ = 0;
};

struct DerivationRecord {
  ActionId parent;
  ActionId left;
  ActionId right;
  bool operator==(const DerivationRecord&) const = default;
};

class MacroLibrary {
 public:
  MacroLibrary() = default;
  explicit MacroLibrary(std::shared_ptr<const FactLayout> layout) : layout_(std::move(layout)) {}
  explicit MacroLibrary(const VariableTable& vars)
      : layout_(std::make_shared<const FactLayout>(vars)) {}

  MacroLibrary(const MacroLibrary& other)
      : layout_(other.layout_),
        names_(other.names_),
        derivation_(other.derivation_),
        log_(other.log_),
        index_(other.index_) {
    const std::size_t stride = other.layout_ ? 4 * other.words() : 0;
    for (const auto& chunk : other.chunks_) {
      chunks_.push_back(std::make_unique<Word[]>((kChunkMask + 1) * stride));
      std::copy(chunk.get(), chunk.get() + (kChunkMask + 1) * stride, chunks_.back().get());
    }
  }
  MacroLibrary& operator=(const MacroLibrary& other) {
    if (this != &other) *this = MacroLibrary(other);
    return *this;
  }
  MacroLibrary(MacroLibrary&&) noexcept = default;
  MacroLibrary& operator=(MacroLibrary&&) noexcept = default;

  const FactLayout& layout() const { return *layout_; }
  std::shared_ptr<const FactLayout> layout_ptr() const { return layout_; }
  std::size_t words() const { return layout_->words(); }
  std::size_t size() const noexcept { return derivation_.size(); }

  /// Registers a primitive (normalised to post minus pre). Returns the
  /// existing id when an entry with the same conditions is present.
  ActionId add_primitive(const Action& a) {
    const Action n = normalized(a);
    std::vector<Word> packed(4 * words());
    pack_action(*layout_, n.pre, n.post, packed);
    if (auto id = find(packed.data())) return *id;
    return push(packed.data(), n.name, std::nullopt);
  }

  /// Interns a combined action given in packed form (4w words). A new entry
  /// gets derivation `d` and one log record; an existing one is returned as is.
  ActionId intern_derived(const Word* packed, Derivation d, bool* created = nullptr) {
    if (auto id = find(packed)) {
      if (created) *created = false;
      return *id;
    }
    if (d.left >= size() || d.right >= size())
      throw InternalError("derivation references an unregistered action");
    if (created) *created = true;
    const ActionId id = push(packed, {}, d);
    log_.push_back({id, d.left, d.right});
    return id;
  }

  /// Appends without deduplication, preserving ids; used when loading
  /// serialised libraries. Derivations must reference earlier entries.
  ActionId append(const Action& a) {
    std::vector<Word> packed(4 * words());
    pack_action(*layout_, a.pre, minus(a.post, a.pre), packed);
    if (a.derivation && (a.derivation->left >= size() || a.derivation->right >= size()))
      throw InputError("action " + std::to_string(size()) +
                       " derives from an action that is not defined before it");
    const ActionId id = push(packed.data(), a.name, a.derivation, /*index=*/!find(packed.data()));
    if (a.derivation) log_.push_back({id, a.derivation->left, a.derivation->right});
    return id;
  }

  std::optional<ActionId> find(const Word* packed) const {
    const std::size_t w2 = 2 * words();
    return index_.find(packed, w2, bits::hash(packed, w2),
                       [this](std::uint32_t id) { return data(id); });
  }
  std::optional<ActionId> find(const PartialState& pre, const PartialState& post) const {
    std::vector<Word> packed(4 * words());
    pack_action(*layout_, pre, post, packed);
    return find(packed.data());
  }

  PackedAction packed(ActionId id) const { return {data(id), words()}; }
  /// Storage is chunked, so pointers stay valid while entries are appended.
  const Word* data(ActionId id) const {
    return chunks_[id >> kChunkShift].get() + (std::size_t{id} & kChunkMask) * 4 * words();
  }

  bool is_primitive(ActionId id) const { return !derivation_.at(id).has_value(); }
  const std::optional<Derivation>& derivation(ActionId id) const { return derivation_.at(id); }
  const std::string& name(ActionId id) const { return names_.at(id); }
  std::string display_name(ActionId id) const {
    return names_.at(id).empty() ? "m" + std::to_string(id) : names_[id];
  }
  const std::vector<DerivationRecord>& log() const noexcept { return log_; }

  Action action(ActionId id) const {
    if (id >= size()) throw InputError("unknown action id " + std::to_string(id));
    Action a;
    a.id = id;
    a.name = names_[id];
    a.pre = layout_->decode({data(id), words()});
    a.post = layout_->decode({data(id) + words(), words()});
    a.derivation = derivation_[id];
    return a;
  }
  std::vector<Action> actions() const {
    std::vector<Action> out;
    out.reserve(size());
    for (ActionId id = 0; id < size(); ++id) out.push_back(action(id));
    return out;
  }

  /// Copies `id` from `other` together with its derivation DAG. Entries
  /// already present (by conditions) are reused. Returns the local id.
  ActionId import_closure(const MacroLibrary& other, ActionId id) {
    std::unordered_map<ActionId, ActionId> mapped;
    return import_rec(other, id, mapped);
  }

 private:
  ActionId push(const Word* packed, std::string name, std::optional<Derivation> d,
                bool index = true) {
    const ActionId id = static_cast<ActionId>(size());
    const std::size_t stride = 4 * words();
    if ((id & kChunkMask) == 0)
      chunks_.push_back(std::make_unique<Word[]>((kChunkMask + 1) * stride));
    std::copy(packed, packed + stride, chunks_.back().get() + (id & kChunkMask) * stride);
    names_.push_back(std::move(name));
    derivation_.push_back(d);
    if (index) {
      const std::size_t w2 = 2 * words();
      index_.insert(id, bits::hash(packed, w2));
    }
    return id;
  }

  ActionId import_rec(const MacroLibrary& other, ActionId id,
                      std::unordered_map<ActionId, ActionId>& mapped) {
    if (auto it = mapped.find(id); it != mapped.end()) return it->second;
    const Word* packed = other.data(id);
    ActionId local;
    if (auto existing = find(packed)) {
      local = *existing;
    } else if (const auto& d = other.derivation(id)) {
      const ActionId l = import_rec(other, d->left, mapped);
      const ActionId r = import_rec(other, d->right, mapped);
      local = intern_derived(packed, {l, r});
    } else {
      local = push(packed, other.name(id), std::nullopt);
    }
    mapped.emplace(id, local);
    return local;
  }

  static constexpr unsigned kChunkShift = 12;
  static constexpr std::size_t kChunkMask = (std::size_t{1} << kChunkShift) - 1;

  std::shared_ptr<const FactLayout> layout_;
  std::vector<std::unique_ptr<Word[]>> chunks_;
  std::vector<std::string> names_;
  std::vector<std::optional<Derivation>> derivation_;
  std::vector<DerivationRecord> log_;
  PackedIdTable index_;
};

}  // namespace macroforge
