#pragma once

#include <cstdint>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/tree.hpp"

namespace treegram {

// Corpus generator over a known finite PCFG, with partial-bracketing noise
// injected by splicing out internal nodes. Ground truth for growth and
// compaction experiments.
struct GeneratorConfig {
  Grammar base_grammar;        // all RHS lengths >= 2, epsilon-free
  double flatten_probability = 0.0;
  int max_depth = 10;          // nonterminal expansion depth per derivation
  int sentence_count = 0;
  std::uint64_t seed = 0;
};

struct GeneratedCorpus {
  std::vector<Tree> trees;
  // Distinct base rules actually used, with usage counts.
  std::vector<Rule> used_rules;
};

// Samples trees top-down from the base grammar's maximum-likelihood rule
// probabilities. Derivations exceeding max_depth are resampled. Each
// sentence draws from an independent substream of the seed, so corpora are
// reproducible sentence by sentence. Flattening noise is applied after
// generation; the usage log records the rules of the unflattened derivation.
// Throws InputError if some nonterminal cannot terminate within max_depth or
// the base grammar breaks the config invariants.
GeneratedCorpus generate(const GeneratorConfig& config);

// Splices out each internal non-root, non-preterminal node independently
// with probability p (its children attach to its parent in place), walking
// top-down with the seeded stream. The yield is preserved exactly.
Tree flatten(const Tree& tree, double p, std::uint64_t seed);

}  // namespace treegram
