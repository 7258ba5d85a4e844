#pragma once

// Seeded random grammars and inputs for the property suites. Nonterminal
// names come from a fixed pool (G0..G7) and terminals from (g0..g3) so that
// kind observation stays consistent across every test in the process.

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/rng.hpp"
#include "treegram/symbols.hpp"

namespace treegram::testing {

struct RandomGrammarSpec {
  int max_rules = 12;
  int max_nonterminals = 6;
  int num_terminals = 3;
  int min_rhs = 1;
  int max_rhs = 4;
  std::uint64_t max_count = 20;
  // Reject grammars whose probability-1 unary cycles the weighted parser
  // refuses (only needed when the grammar will be Viterbi-parsed).
  bool forbid_degenerate_unary_cycles = false;
};

inline Category nonterminal_pool(int i) {
  return Category::intern("G" + std::to_string(i), SymbolKind::Nonterminal);
}

inline Category terminal_pool(int i) {
  return Category::intern("g" + std::to_string(i), SymbolKind::Terminal);
}

// Detects a cycle among unary rules of probability exactly 1, independently
// of the parser's own check.
inline bool has_degenerate_unary_cycle(const Grammar& g) {
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> edges;
  for (const Rule& rule : g.rules()) {
    if (rule.rhs.size() == 1 && rule.count == g.lhs_total(rule.lhs))
      edges[rule.lhs.id()].push_back(rule.rhs[0].id());
  }
  for (const auto& [start, _] : edges) {
    std::vector<std::uint32_t> stack{start};
    std::unordered_set<std::uint32_t> seen;
    while (!stack.empty()) {
      std::uint32_t node = stack.back();
      stack.pop_back();
      auto it = edges.find(node);
      if (it == edges.end()) continue;
      for (std::uint32_t next : it->second) {
        if (next == start) return true;
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
  }
  return false;
}

inline Grammar random_grammar(SplitMix64* rng, const RandomGrammarSpec& spec) {
  for (;;) {
    Grammar g;
    int nts = 2 + static_cast<int>(rng->next_below(
                      static_cast<std::uint64_t>(spec.max_nonterminals - 1)));
    int rules = nts + static_cast<int>(rng->next_below(
                          static_cast<std::uint64_t>(spec.max_rules - nts + 1)));
    rules = std::min(rules, spec.max_rules);
    for (int r = 0; r < rules; ++r) {
      // Give every nonterminal at least one rule, then spread the rest.
      Category lhs = nonterminal_pool(
          r < nts ? r : static_cast<int>(rng->next_below(nts)));
      int len = spec.min_rhs +
                static_cast<int>(rng->next_below(
                    static_cast<std::uint64_t>(spec.max_rhs - spec.min_rhs + 1)));
      std::vector<Category> rhs;
      for (int i = 0; i < len; ++i) {
        if (rng->next_below(100) < 45) {
          rhs.push_back(terminal_pool(
              static_cast<int>(rng->next_below(spec.num_terminals))));
        } else {
          rhs.push_back(
              nonterminal_pool(static_cast<int>(rng->next_below(nts))));
        }
      }
      // Skip X -> X, which no derivation can use.
      if (rhs.size() == 1 && rhs[0] == lhs) {
        --r;
        continue;
      }
      Rule rule(lhs, std::move(rhs), 1 + rng->next_below(spec.max_count));
      if (g.find(rule) == nullptr) g.add_rule(rule);
    }
    if (g.empty()) continue;
    if (spec.forbid_degenerate_unary_cycles && has_degenerate_unary_cycle(g))
      continue;
    return g;
  }
}

inline std::vector<Category> random_symbols(SplitMix64* rng, int nts,
                                            int terminals, int len) {
  std::vector<Category> out;
  for (int i = 0; i < len; ++i) {
    if (rng->next_below(100) < 50) {
      out.push_back(terminal_pool(static_cast<int>(rng->next_below(terminals))));
    } else {
      out.push_back(nonterminal_pool(static_cast<int>(rng->next_below(nts))));
    }
  }
  return out;
}

// Random partial expansion of `goal`: guaranteed recognizable, mixing
// terminals and nonterminals (expansion stops early with stop_percent).
inline std::optional<std::vector<Category>> sample_partial_yield(
    SplitMix64* rng, const Grammar& g, Category goal, int max_len,
    int stop_percent) {
  std::unordered_map<std::uint32_t, std::vector<const Rule*>> by_lhs;
  for (const Rule& rule : g.rules()) by_lhs[rule.lhs.id()].push_back(&rule);
  std::vector<Category> out;
  // Explicit stack with depth budget; gives up on runaway expansions.
  struct Item {
    Category cat;
    int depth;
  };
  std::vector<Item> stack{{goal, 0}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    auto it = by_lhs.find(item.cat.id());
    bool expandable = it != by_lhs.end() && item.depth < 8;
    if (!expandable ||
        (item.depth > 0 && rng->next_below(100) < static_cast<std::uint64_t>(stop_percent))) {
      out.push_back(item.cat);
      if (static_cast<int>(out.size()) > max_len) return std::nullopt;
      continue;
    }
    const std::vector<const Rule*>& options = it->second;
    const Rule* rule = options[rng->next_below(options.size())];
    for (auto rit = rule->rhs.rbegin(); rit != rule->rhs.rend(); ++rit)
      stack.push_back({*rit, item.depth + 1});
  }
  if (out.empty() || static_cast<int>(out.size()) > max_len) return std::nullopt;
  return out;
}

}  // namespace treegram::testing
