#pragma once

#include <cstddef>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/symbols.hpp"
#include "treegram/tree.hpp"

namespace treegram {

// POS tags deleted from the bracket index space, per evalb convention.
bool is_punctuation_tag(Category tag);

struct Bracket {
  Category label;
  int start = 0;
  int end = 0;  // exclusive, over punctuation-adjusted token indices
};

struct BracketSet {
  std::vector<Bracket> brackets;  // multiset
};

// One bracket per non-preterminal node, root included, TOP excluded.
// Punctuation tokens are deleted from the index space first; brackets
// reduced to an empty span by the deletion are dropped.
BracketSet extract_brackets(const Tree& tree);

struct PairScore {
  std::size_t matched = 0;
  std::size_t gold_count = 0;
  std::size_t test_count = 0;
};

// Maximum multiset intersection of the two bracket sets: labelled matches
// need equal labels and spans, unlabelled only spans. Throws InputError when
// the punctuation-adjusted yields differ in length.
PairScore score_pair(const Tree& gold, const Tree& test, bool labelled);

struct EvalReport {
  double labelled_recall = 0.0;
  double labelled_precision = 0.0;
  double unlabelled_recall = 0.0;
  double unlabelled_precision = 0.0;
  std::size_t labelled_matched = 0;
  std::size_t unlabelled_matched = 0;
  std::size_t gold_brackets = 0;
  std::size_t test_brackets = 0;
  std::size_t sentences_evaluated = 0;
  std::size_t fallback_parses = 0;
  std::size_t sentences_skipped = 0;  // yield mismatches
  std::size_t grammar_size = 0;
};

// Parses each gold tree's POS tag sequence with the grammar and scores the
// result, micro-averaging bracket totals across sentences. Fallback (flat)
// parses stay in the totals and are counted separately. Parse roots come
// from the grammar's recorded root set, or from the gold corpus's root
// labels when the grammar records none.
EvalReport evaluate_corpus(const Grammar& grammar,
                           const std::vector<Tree>& gold_trees);

}  // namespace treegram
