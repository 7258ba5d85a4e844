#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace treegram {

enum class SymbolKind : std::uint8_t { Unknown, Terminal, Nonterminal };

// Interned grammar symbol (a POS tag or a phrasal label). Categories with
// equal names share one table slot, so equality and hashing are O(1) integer
// operations. The kind starts Unknown and is fixed by observation: preterminal
// labels of normalized trees become Terminal, rule left-hand sides become
// Nonterminal. Observing both kinds for one name is an input error.
class Category {
 public:
  Category() : id_(kInvalid) {}

  static Category intern(std::string_view name);
  static Category intern(std::string_view name, SymbolKind kind);
  static std::optional<Category> lookup(std::string_view name);

  // Records kind; throws InputError on a terminal/nonterminal conflict.
  void observe_kind(SymbolKind kind) const;

  const std::string& name() const;
  SymbolKind kind() const;
  bool valid() const { return id_ != kInvalid; }
  std::uint32_t id() const { return id_; }

  friend bool operator==(Category a, Category b) { return a.id_ == b.id_; }
  friend bool operator!=(Category a, Category b) { return a.id_ != b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Category(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

// Orders categories by name, not id, so any sorted output is independent of
// interning history.
struct CategoryNameLess {
  bool operator()(Category a, Category b) const { return a.name() < b.name(); }
};

struct CategoryHash {
  std::size_t operator()(Category c) const {
    return static_cast<std::size_t>(c.id()) * 0x9e3779b97f4a7c15ULL;
  }
};

// Reserved label for the PTB's unlabeled sentence wrapper; excluded from rule
// extraction and bracket scoring.
Category top_category();

inline bool is_top(Category c) { return c == top_category(); }

}  // namespace treegram
