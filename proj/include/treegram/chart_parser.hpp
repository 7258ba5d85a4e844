#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/symbols.hpp"
#include "treegram/tree.hpp"

namespace treegram {

struct ParseResult {
  bool recognized = false;
  std::optional<Tree> best_tree;
  std::optional<double> best_logprob;
  // parse_sentence only: the grammar failed and best_tree is the flat
  // single-bracket stand-in despite recognized == false.
  bool fallback = false;
};

// Bottom-up CKY over a fixed grammar snapshot, with on-the-fly left-branching
// binarization of n-ary rules (dotted items) and per-cell unary closure.
// Input symbols may be terminals or nonterminals: every input symbol seeds
// its width-1 cell with itself at probability 1, which is what makes rule
// right-hand sides parsable. Returned derivations contain only original
// grammar rules.
//
// Weighted parsers score derivations by the product of maximum-likelihood
// rule probabilities, computed once at construction; they require all counts
// positive and reject probability-1.0 unary cycles as degenerate. Ties are
// broken toward the derivation whose top rule sorts first by (lhs, rhs)
// names, then the leftmost split, so results are reproducible run to run.
//
// The parser never mutates the grammar; one instance can serve many calls,
// each with its own excluded-rule set (excluded rules are skipped entirely).
class ChartParser {
 public:
  enum class Mode { Unweighted, Weighted };

  ChartParser(const Grammar& grammar, Mode mode);

  // Dense id of a rule in this snapshot, or -1 if the rule is not present.
  int rule_id(const Rule& key) const;
  int num_rules() const { return static_cast<int>(rules_.size()); }
  const Rule& rule_at(int id) const { return rules_[id].original; }

  // excluded may be empty or sized num_rules().
  bool recognize(const std::vector<Category>& input, Category goal,
                 const std::vector<bool>& excluded = {}) const;
  ParseResult parse(const std::vector<Category>& input, Category goal,
                    const std::vector<bool>& excluded = {}) const;
  // Best parse over any goal in roots; never excludes rules.
  ParseResult parse_any(const std::vector<Category>& input,
                        const std::vector<Category>& roots) const;

  std::vector<bool> make_excluded(const std::vector<Rule>& rules) const;

 private:
  struct IndexedRule {
    Rule original;
    double logprob;   // 0 in unweighted mode
    int ordinal;      // rank under rule_name_less
  };

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& ids) const;
  };

  class Chart;
  void check_degenerate_unary_cycles() const;

  std::vector<IndexedRule> rules_;
  // Non-unary and unary rules grouped by their first RHS symbol.
  std::unordered_map<std::uint32_t, std::vector<int>> starts_with_;
  std::unordered_map<std::uint32_t, std::vector<int>> unary_with_;
  std::unordered_map<std::vector<std::uint32_t>, int, KeyHash> rule_ids_;
  Mode mode_;
};

// Spec-shaped conveniences; each builds a one-shot parser.
bool recognize(const Grammar& grammar, const std::vector<Category>& input,
               Category goal, const std::vector<Rule>& excluded = {});
ParseResult viterbi(const Grammar& grammar, const std::vector<Category>& input,
                    Category goal, const std::vector<Rule>& excluded = {});

// Bracketed form of a derivation tree with category leaves printed bare,
// e.g. "(NP (NP DT NN) CC (NP DT NN))". Used for compaction witnesses.
std::string format_derivation(const Tree& tree);

// Viterbi parse of a POS tag sequence against every root, best root wins.
// On failure returns the flat fallback tree labeled with the grammar's most
// frequent root (first root by name if the grammar records none), with
// fallback = true.
ParseResult parse_sentence(const Grammar& grammar,
                           const std::vector<Category>& pos_tags,
                           const std::vector<Category>& roots);

}  // namespace treegram
