#pragma once

#include <string>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/symbols.hpp"

namespace treegram::testing {

inline Grammar grammar_from(const std::string& text) {
  return read_grammar(text);
}

inline Category cat(const std::string& name) { return Category::intern(name); }

inline std::vector<Category> cats(const std::vector<std::string>& names) {
  std::vector<Category> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.push_back(cat(n));
  return out;
}

inline Rule rule(const std::string& lhs, const std::vector<std::string>& rhs,
                 std::uint64_t count = 1) {
  return Rule(Category::intern(lhs, SymbolKind::Nonterminal), cats(rhs), count);
}

// 50-rule PTB-flavored base grammar for the synthetic-corpus experiments.
// Every RHS has length >= 2 and every nonterminal terminates within depth 4.
// Four rules are flat-but-legitimate (parsable via the recursion rules, the
// way VP -> VB NP PP is parsable via VP -> VB NP and NP -> NP PP), with
// counts heavy enough that the flat reading stays the more probable one;
// naive compaction eliminates exactly those four.
inline const char* kBaseGrammar50 = R"(# root S 1
110 S -> NP VP .
46 S -> NP VP
5 S -> S CC S
10 S -> ADVP NP VP .
8 S -> PP , NP VP .
6 S -> SBAR , NP VP .
18 S -> NP VP PP .
160 NP -> DT NN
70 NP -> DT NNS
80 NP -> DT JJ NN
20 NP -> DT JJ JJ NN
30 NP -> DT NN NN
20 NP -> DT ADJP NN
40 NP -> JJ NNS
28 NP -> CD NNS
24 NP -> QP NNS
36 NP -> NNP NNP
44 NP -> DT NN CC DT NN
20 NP -> NP PP
10 NP -> NP CC NP
16 NP -> NNP POS NN
16 NP -> DT CD NNS
8 NP -> NP POS NN
20 QP -> RB CD
20 QP -> CD CD
70 VP -> VBD NP
65 VP -> VBZ NP
40 VP -> VBP NP
40 VP -> VB NP
55 VP -> VBD PP
32 VP -> VBP PP
30 VP -> VBZ ADJP
20 VP -> MD VB NP
28 VP -> VBD NP PP
14 VP -> VBG NP PP
16 VP -> VBZ VBG NP
16 VP -> VBD VBN PP
8 VP -> VBD SBAR
14 VP -> ADVP VBD NP
14 VP -> VBZ RB VBN
18 VP -> VP PP
66 PP -> IN NP
45 PP -> TO NP
20 PP -> RB IN NP
168 PP -> IN DT NN
30 ADJP -> RB JJ
20 ADJP -> JJ PP
20 ADVP -> RB RB
16 SBAR -> WDT VP
10 SBAR -> IN NP VBD)";

}  // namespace treegram::testing
