#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treegram/symbols.hpp"
#include "treegram/tree.hpp"

namespace treegram {

// Context-free rule with an occurrence count. Identity is (lhs, rhs); counts
// aggregate over identical rules. Epsilon rules are rejected everywhere.
struct Rule {
  Category lhs;
  std::vector<Category> rhs;
  std::uint64_t count = 1;

  Rule() = default;
  Rule(Category lhs, std::vector<Category> rhs, std::uint64_t count = 1);

  bool same_key(const Rule& other) const {
    return lhs == other.lhs && rhs == other.rhs;
  }
  // "<LHS> -> <C1> <C2> ...", used in reports and error messages.
  std::string to_string() const;
};

// Orders rules by (lhs name, rhs names); the deterministic order used by
// grammar files, reports, and Viterbi tie-breaking.
bool rule_name_less(const Rule& a, const Rule& b);

// Counted rule set with per-LHS totals, derived probabilities, and the set of
// observed root categories. Rules keep insertion order, which the compactor's
// "input" ordering policy exposes.
class Grammar {
 public:
  Grammar() = default;

  // Merges counts additively. A rule with count 0 is recorded only if absent
  // and leaves totals untouched. Throws InputError on an epsilon rule.
  void add_rule(const Rule& rule);
  void add_rules(const std::vector<Rule>& rules);

  // Removes by identity; returns false if the rule is unknown.
  bool remove_rule(const Rule& key);

  const Rule* find(const Rule& key) const;
  const Rule* find(Category lhs, const std::vector<Category>& rhs) const;

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  std::uint64_t lhs_total(Category lhs) const;
  double probability(const Rule& rule) const;

  void observe_root(Category root, std::uint64_t count = 1);
  const std::unordered_map<Category, std::uint64_t, CategoryHash>& roots()
      const {
    return roots_;
  }
  std::vector<std::pair<Category, std::uint64_t>> roots_by_name() const;
  // Most frequent root; ties broken by name. Invalid category if no roots.
  Category most_frequent_root() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& ids) const;
  };
  static std::vector<std::uint32_t> make_key(Category lhs,
                                             const std::vector<Category>& rhs);

  std::vector<Rule> rules_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, KeyHash> index_;
  std::unordered_map<Category, std::uint64_t, CategoryHash> totals_;
  std::unordered_map<Category, std::uint64_t, CategoryHash> roots_;
};

// Reads one rule off each internal node with >= 2 children of a normalized
// tree, collapsing unary chains: a node with a single subtree child is
// spliced out and the bottom of the chain takes its place, so no unary rule
// is ever produced. Preterminals are the grammar's terminals and emit no
// rules. A TOP wrapper is excluded. Counts reflect multiplicity within the
// tree; order is first occurrence in a left-to-right walk.
std::vector<Rule> extract_rules(const Tree& tree);

// extract_rules + add_rules + root observation in one step.
void extract_into(Grammar* grammar, const Tree& tree);

// Root categories a tree contributes: the labels of its unary-collapsed
// start nodes (children of a TOP wrapper, or the root itself).
std::vector<Category> observed_roots(const Tree& tree);

struct GrowthCurve {
  // (cumulative POS tokens processed, distinct rules so far)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
};

// Streaming pass over normalized trees; emits a point whenever the cumulative
// token count crosses a multiple of sample_every.
GrowthCurve growth_curve(const std::vector<Tree>& trees,
                         std::uint64_t sample_every);

// Text format: one "<count> <LHS> -> <C1> <C2> ..." line per rule, sorted by
// (lhs, rhs); optional "# root <name> <count>" comment lines carry the root
// set. Other '#' lines are ignored. read_grammar throws InputError with a
// line number on a non-positive count, empty RHS, or malformed arrow.
Grammar read_grammar(std::string_view text);
Grammar read_grammar_file(const std::filesystem::path& path);
std::string write_grammar(const Grammar& grammar);
void write_grammar_file(const std::filesystem::path& path,
                        const Grammar& grammar,
                        const std::string& header_comment = "");

}  // namespace treegram
