#include "treegram/evaluator.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "treegram/chart_parser.hpp"
#include "treegram/errors.hpp"

namespace treegram {

bool is_punctuation_tag(Category tag) {
  const std::string& n = tag.name();
  return n == "." || n == "," || n == ":" || n == "''" || n == "``" ||
         n == "-LRB-" || n == "-RRB-";
}

namespace {

// Leaves in order; adjusted[t] = number of non-punctuation tokens among the
// first t. A span (s, e) maps to (adjusted[s], adjusted[e]).
void collect_leaves(const Tree& tree, std::vector<const Tree*>* leaves) {
  if (tree.is_preterminal()) {
    leaves->push_back(&tree);
    return;
  }
  for (const Tree& child : tree.children()) collect_leaves(child, leaves);
}

std::vector<int> punctuation_adjustment(const std::vector<const Tree*>& leaves) {
  std::vector<int> adjusted(leaves.size() + 1, 0);
  for (std::size_t t = 0; t < leaves.size(); ++t) {
    adjusted[t + 1] =
        adjusted[t] + (is_punctuation_tag(leaves[t]->label()) ? 0 : 1);
  }
  return adjusted;
}

void collect_brackets(const Tree& tree, int start,
                      const std::vector<int>& adjusted, BracketSet* out) {
  if (tree.is_preterminal()) return;
  int pos = start;
  for (const Tree& child : tree.children()) {
    collect_brackets(child, pos, adjusted, out);
    pos += static_cast<int>(child.token_count());
  }
  if (is_top(tree.label())) return;
  int lo = adjusted[static_cast<std::size_t>(start)];
  int hi = adjusted[static_cast<std::size_t>(pos)];
  if (hi > lo) out->brackets.push_back({tree.label(), lo, hi});
}

int adjusted_yield_length(const Tree& tree) {
  std::vector<const Tree*> leaves;
  collect_leaves(tree, &leaves);
  int n = 0;
  for (const Tree* leaf : leaves)
    if (!is_punctuation_tag(leaf->label())) ++n;
  return n;
}

}  // namespace

BracketSet extract_brackets(const Tree& tree) {
  std::vector<const Tree*> leaves;
  collect_leaves(tree, &leaves);
  std::vector<int> adjusted = punctuation_adjustment(leaves);
  BracketSet out;
  collect_brackets(tree, 0, adjusted, &out);
  return out;
}

PairScore score_pair(const Tree& gold, const Tree& test, bool labelled) {
  if (adjusted_yield_length(gold) != adjusted_yield_length(test))
    throw InputError("gold/test yield mismatch after punctuation deletion");

  BracketSet gold_set = extract_brackets(gold);
  BracketSet test_set = extract_brackets(test);

  PairScore score;
  score.gold_count = gold_set.brackets.size();
  score.test_count = test_set.brackets.size();

  std::map<std::tuple<std::string, int, int>, std::size_t> pool;
  for (const Bracket& b : gold_set.brackets) {
    std::string label = labelled ? b.label.name() : std::string();
    ++pool[{label, b.start, b.end}];
  }
  for (const Bracket& b : test_set.brackets) {
    std::string label = labelled ? b.label.name() : std::string();
    auto it = pool.find({label, b.start, b.end});
    if (it != pool.end() && it->second > 0) {
      --it->second;
      ++score.matched;
    }
  }
  return score;
}

EvalReport evaluate_corpus(const Grammar& grammar,
                           const std::vector<Tree>& gold_trees) {
  EvalReport report;
  report.grammar_size = grammar.size();

  std::vector<Category> roots;
  for (const auto& [root, count] : grammar.roots_by_name()) roots.push_back(root);
  if (roots.empty()) {
    // No recorded roots (plain rule files): use the gold corpus's own.
    std::map<std::string, Category> seen;
    for (const Tree& tree : gold_trees)
      for (Category root : observed_roots(tree)) seen.emplace(root.name(), root);
    for (const auto& [_, root] : seen) roots.push_back(root);
  }

  ChartParser parser(grammar, ChartParser::Mode::Weighted);
  Category fallback_label = grammar.most_frequent_root();
  if (!fallback_label.valid() && !roots.empty()) fallback_label = roots.front();

  for (const Tree& gold : gold_trees) {
    std::vector<Category> tags = gold.tag_sequence();
    if (tags.empty()) {
      ++report.sentences_skipped;
      continue;
    }
    ParseResult result = parser.parse_any(tags, roots);
    Tree test;
    if (result.recognized) {
      test = *result.best_tree;
    } else {
      ++report.fallback_parses;
      std::vector<Tree> leaves;
      leaves.reserve(tags.size());
      for (Category tag : tags) leaves.push_back(Tree::leaf(tag, tag.name()));
      test = Tree::node(fallback_label, std::move(leaves));
      test.assign_spans(0);
    }
    PairScore labelled, unlabelled;
    try {
      labelled = score_pair(gold, test, true);
      unlabelled = score_pair(gold, test, false);
    } catch (const InputError&) {
      ++report.sentences_skipped;
      continue;
    }
    ++report.sentences_evaluated;
    report.labelled_matched += labelled.matched;
    report.unlabelled_matched += unlabelled.matched;
    report.gold_brackets += labelled.gold_count;
    report.test_brackets += labelled.test_count;
  }

  auto pct = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0
                    : 100.0 * static_cast<double>(num) /
                          static_cast<double>(den);
  };
  report.labelled_recall = pct(report.labelled_matched, report.gold_brackets);
  report.labelled_precision =
      pct(report.labelled_matched, report.test_brackets);
  report.unlabelled_recall =
      pct(report.unlabelled_matched, report.gold_brackets);
  report.unlabelled_precision =
      pct(report.unlabelled_matched, report.test_brackets);
  return report;
}

}  // namespace treegram
