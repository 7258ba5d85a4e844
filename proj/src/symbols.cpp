#include "treegram/symbols.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

#include "treegram/errors.hpp"

namespace treegram {
namespace {

struct SymbolTable {
  std::mutex mutex;
  std::deque<std::string> names;                 // id -> name, stable storage
  std::deque<SymbolKind> kinds;                  // id -> observed kind
  std::unordered_map<std::string_view, std::uint32_t> index;

  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  std::uint32_t intern(std::string_view name) {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    names.emplace_back(name);
    kinds.push_back(SymbolKind::Unknown);
    std::uint32_t id = static_cast<std::uint32_t>(names.size() - 1);
    index.emplace(names.back(), id);
    return id;
  }
};

const char* kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::Terminal: return "terminal";
    case SymbolKind::Nonterminal: return "nonterminal";
    default: return "unknown";
  }
}

}  // namespace

Category Category::intern(std::string_view name) {
  if (name.empty()) throw InputError("cannot intern an empty category name");
  return Category(SymbolTable::instance().intern(name));
}

Category Category::intern(std::string_view name, SymbolKind kind) {
  Category c = intern(name);
  c.observe_kind(kind);
  return c;
}

std::optional<Category> Category::lookup(std::string_view name) {
  auto& table = SymbolTable::instance();
  std::lock_guard<std::mutex> lock(table.mutex);
  auto it = table.index.find(name);
  if (it == table.index.end()) return std::nullopt;
  return Category(it->second);
}

void Category::observe_kind(SymbolKind kind) const {
  if (kind == SymbolKind::Unknown) return;
  auto& table = SymbolTable::instance();
  std::lock_guard<std::mutex> lock(table.mutex);
  SymbolKind& slot = table.kinds[id_];
  if (slot == SymbolKind::Unknown) {
    slot = kind;
  } else if (slot != kind) {
    throw InputError("category '" + table.names[id_] + "' used both as " +
                     kind_name(slot) + " and " + kind_name(kind));
  }
}

const std::string& Category::name() const {
  auto& table = SymbolTable::instance();
  std::lock_guard<std::mutex> lock(table.mutex);
  return table.names[id_];
}

SymbolKind Category::kind() const {
  auto& table = SymbolTable::instance();
  std::lock_guard<std::mutex> lock(table.mutex);
  return table.kinds[id_];
}

Category top_category() {
  static Category top = Category::intern("TOP", SymbolKind::Nonterminal);
  return top;
}

}  // namespace treegram
