#include <cmath>
#include <unordered_map>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/random_grammars.hpp"
#include "treegram/errors.hpp"
#include "treegram/grammar.hpp"
#include "treegram/rng.hpp"
#include "treegram/synth.hpp"
#include "treegram/treebank_io.hpp"

using namespace treegram;
using namespace treegram::testing;

namespace {

std::unordered_map<std::string, std::uint64_t> rule_counts(
    const std::vector<Rule>& rules) {
  std::unordered_map<std::string, std::uint64_t> out;
  for (const Rule& r : rules) out[r.to_string()] += r.count;
  return out;
}

}  // namespace

TEST_CASE("extraction collapses unary chains the way the footnote shows") {
  // (S (NP -NULL-) (VP (VB eat) (NP (QP (CD 1) (CD 2)))) (. .))
  //   -> S -> VP . ; VP -> VB QP ; QP -> CD CD
  auto tree = read_treebank(
      "(S (NP -NULL-) (VP (VB eat) (NP (QP (CD 1) (CD 2)))) (. .))")[0];
  auto norm = normalize(tree);
  REQUIRE(norm.has_value());
  auto counts = rule_counts(extract_rules(*norm));
  CHECK(counts.size() == 3);
  CHECK(counts["S -> VP ."] == 1);
  CHECK(counts["VP -> VB QP"] == 1);
  CHECK(counts["QP -> CD CD"] == 1);
}

TEST_CASE("extraction counts repeated rules within one tree") {
  auto tree = read_treebank(
      "(NP (NP (DT a) (NN b)) (CC c) (NP (DT d) (NN e)))")[0];
  auto counts = rule_counts(extract_rules(tree));
  CHECK(counts.size() == 2);
  CHECK(counts["NP -> NP CC NP"] == 1);
  CHECK(counts["NP -> DT NN"] == 2);
}

TEST_CASE("extraction basics and edge cases") {
  CHECK(rule_counts(extract_rules(
            read_treebank("(NP (DT a) (NN b))")[0]))["NP -> DT NN"] == 1);
  // A bare preterminal yields nothing.
  CHECK(extract_rules(read_treebank("(NN cat)")[0]).empty());
  // A unary chain down to a preterminal disappears into the parent rule.
  auto counts = rule_counts(
      extract_rules(read_treebank("(S (NP (NN cat)) (VP (VB sat)))")[0]));
  CHECK(counts.size() == 1);
  CHECK(counts["S -> NN VB"] == 1);
  // TOP wrapper never emits a rule.
  auto wrapped = rule_counts(
      extract_rules(read_treebank("( (S (NP (DT a) (NN b)) (VP (VB c))) )")[0]));
  CHECK(wrapped.count("S -> NP VP") == 1);
  for (const auto& [rule, n] : wrapped) CHECK(rule.find("TOP") == std::string::npos);
}

TEST_CASE("chains longer than two collapse to their bottom node") {
  auto tree = read_treebank("(S (A (B (C (T8 x) (T9 y)))) (VP (VB z)))")[0];
  auto counts = rule_counts(extract_rules(tree));
  CHECK(counts.size() == 2);
  CHECK(counts["S -> C VB"] == 1);
  CHECK(counts["C -> T8 T9"] == 1);
}

TEST_CASE("no extracted rule has a right-hand side shorter than two") {
  SplitMix64 rng(4242);
  GeneratorConfig cfg;
  cfg.base_grammar = grammar_from(kBaseGrammar50);
  cfg.flatten_probability = 0.4;
  cfg.max_depth = 7;
  cfg.sentence_count = 200;
  cfg.seed = 11;
  for (const Tree& tree : generate(cfg).trees) {
    for (const Rule& rule : extract_rules(tree)) {
      CHECK(rule.rhs.size() >= 2);
    }
  }
}

TEST_CASE("extraction is deterministic and order-stable") {
  auto tree = read_treebank(
      "( (S (NP (DT a) (NN b)) (VP (VB c) (NP (DT d) (NN e)))) )")[0];
  auto first = extract_rules(tree);
  auto second = extract_rules(tree);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].to_string() == second[i].to_string());
    CHECK(first[i].count == second[i].count);
  }
}

TEST_CASE("a label used as both preterminal and phrase is an input error") {
  auto tree = read_treebank("(S (FOO9 word) (VP (VB x)))")[0];
  extract_rules(tree);  // FOO9 observed as terminal
  auto bad = read_treebank("(S (FOO9 (NN word) (NN word2)) (VP (VB x)))")[0];
  CHECK_THROWS_AS(extract_rules(bad), InputError);
}

TEST_CASE("add_rules merges additively and validates") {
  Grammar g;
  g.add_rule(rule("NP", {"DT", "NN"}, 3));
  g.add_rule(rule("NP", {"DT", "NN"}, 2));
  CHECK(g.size() == 1);
  CHECK(g.find(rule("NP", {"DT", "NN"}))->count == 5);
  CHECK(g.lhs_total(cat("NP")) == 5);

  Grammar empty_target;
  empty_target.add_rules({rule("A", {"B", "C"}, 1)});
  CHECK(empty_target.size() == 1);

  // Count-0 rules are recorded but do not touch totals.
  g.add_rule(rule("NP", {"JJ", "NN"}, 0));
  CHECK(g.size() == 2);
  CHECK(g.lhs_total(cat("NP")) == 5);

  CHECK_THROWS_AS(g.add_rule(Rule(cat("NP"), {}, 1)), InputError);
}

TEST_CASE("probabilities stay normalized under add and remove") {
  SplitMix64 rng(77);
  RandomGrammarSpec spec;
  for (int trial = 0; trial < 25; ++trial) {
    Grammar g = random_grammar(&rng, spec);
    // Random removals, then re-adds.
    std::vector<Rule> rules = g.rules();
    for (const Rule& r : rules) {
      if (rng.next_below(2) == 0) g.remove_rule(r);
    }
    for (const Rule& r : rules) {
      if (g.find(r) == nullptr && rng.next_below(2) == 0) g.add_rule(r);
    }
    std::unordered_map<std::uint32_t, double> sums;
    for (const Rule& r : g.rules()) sums[r.lhs.id()] += g.probability(r);
    for (const auto& [_, sum] : sums) CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("growth curve samples at token boundaries") {
  auto trees = read_treebank(
      "(NP (DT a) (NN b))\n(NP (DT a) (NN b))");
  GrowthCurve curve = growth_curve(trees, 2);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0] == std::pair<std::uint64_t, std::uint64_t>{2, 1});
  CHECK(curve.points[1] == std::pair<std::uint64_t, std::uint64_t>{4, 1});
}

TEST_CASE("growth curve rises when every tree brings a new rule") {
  std::vector<Tree> trees;
  for (int i = 0; i < 5; ++i) {
    std::string tag = "X" + std::to_string(i);
    trees.push_back(read_treebank("(NP (" + tag + " a) (NN b))")[0]);
  }
  GrowthCurve curve = growth_curve(trees, 2);
  REQUIRE(curve.points.size() == 5);
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].second == i + 1);
    if (i > 0) CHECK(curve.points[i].first > curve.points[i - 1].first);
  }
}

TEST_CASE("zero-noise growth plateaus at the generator's own rule log") {
  GeneratorConfig cfg;
  cfg.base_grammar = grammar_from(kBaseGrammar50);
  cfg.flatten_probability = 0.0;
  cfg.max_depth = 7;
  cfg.sentence_count = 3000;
  cfg.seed = 5;
  GeneratedCorpus corpus = generate(cfg);
  Grammar extracted;
  for (const Tree& t : corpus.trees) extract_into(&extracted, t);
  CHECK(extracted.size() == corpus.used_rules.size());
  for (const Rule& used : corpus.used_rules)
    CHECK(extracted.find(used) != nullptr);
}

TEST_CASE("growth exponent of a noisy finite-grammar corpus is near sqrt") {
  Grammar base = grammar_from(R"(# root S 1
50 S -> NP VP .
60 NP -> DT NN
25 NP -> DT JJ NN
12 NP -> DT JJ JJ NN
18 NP -> NP PP
10 NP -> NP CC NP
40 VP -> VB NP
15 VP -> VBD PP
12 VP -> VB NP PP
30 PP -> IN NP
)");
  GeneratorConfig cfg;
  cfg.base_grammar = base;
  cfg.flatten_probability = 0.3;
  cfg.max_depth = 7;
  cfg.sentence_count = 5000;
  cfg.seed = 7;
  GeneratedCorpus corpus = generate(cfg);
  GrowthCurve curve = growth_curve(corpus.trees, 500);
  REQUIRE(curve.points.size() > 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [tokens, rules] : curve.points) {
    double x = std::log(static_cast<double>(tokens));
    double y = std::log(static_cast<double>(rules));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(exponent > 0.4);
  CHECK(exponent < 0.6);
}

TEST_CASE("grammar text round trips with counts and roots") {
  Grammar g;
  g.add_rule(rule("NP", {"DT", "NN"}, 5));
  g.add_rule(rule("S", {"NP", "VP"}, 2));
  g.add_rule(rule("VP", {"VB", "NP"}, 3));
  g.observe_root(cat("S"), 2);
  std::string text = write_grammar(g);
  Grammar back = read_grammar(text);
  CHECK(back.size() == g.size());
  for (const Rule& r : g.rules()) {
    const Rule* found = back.find(r);
    REQUIRE(found != nullptr);
    CHECK(found->count == r.count);
  }
  CHECK(back.roots().size() == 1);
  CHECK(back.roots_by_name()[0].second == 2);
  // write is sorted, so a second round trip is byte-identical.
  CHECK(write_grammar(back) == text);
}

TEST_CASE("grammar text round trips on random grammars") {
  SplitMix64 rng(31337);
  RandomGrammarSpec spec;
  for (int trial = 0; trial < 50; ++trial) {
    Grammar g = random_grammar(&rng, spec);
    Grammar back = read_grammar(write_grammar(g));
    REQUIRE(back.size() == g.size());
    for (const Rule& r : g.rules()) {
      const Rule* found = back.find(r);
      REQUIRE(found != nullptr);
      CHECK(found->count == r.count);
    }
  }
}

TEST_CASE("grammar reader rejects malformed lines with a line number") {
  CHECK(read_grammar("5 NP -> DT NN\n").find(rule("NP", {"DT", "NN"})) != nullptr);
  auto fails_with_line = [](const std::string& text, int line) {
    try {
      read_grammar(text);
      return false;
    } catch (const InputError& e) {
      return std::string(e.what()).find("line " + std::to_string(line)) !=
             std::string::npos;
    }
  };
  CHECK(fails_with_line("3 NP ->\n", 1));
  CHECK(fails_with_line("5 NP -> DT NN\n0 VP -> VB\n", 2));
  CHECK(fails_with_line("-2 NP -> DT NN\n", 1));
  CHECK(fails_with_line("5 NP => DT NN\n", 1));
  CHECK(fails_with_line("x NP -> DT NN\n", 1));
}

TEST_CASE("duplicate grammar lines merge additively") {
  Grammar g = read_grammar("2 NP -> DT NN\n3 NP -> DT NN\n");
  CHECK(g.size() == 1);
  CHECK(g.find(rule("NP", {"DT", "NN"}))->count == 5);
}
