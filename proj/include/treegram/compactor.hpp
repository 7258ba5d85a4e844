#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/tree.hpp"

namespace treegram {

// Visiting order for the compaction loop. The default visits flattest rules
// first (RHS length descending, then lexicographic by names): the longest
// rules are the partial-bracketing suspects, and the order is reproducible.
enum class OrderPolicy { FlatFirst, Input, Random };

struct OrderSpec {
  OrderPolicy policy = OrderPolicy::FlatFirst;
  std::uint64_t seed = 0;  // Random only

  std::string to_string() const;
  static OrderSpec parse(const std::string& text, std::uint64_t seed);
};

enum class EliminationReason { Parsable, BelowThreshold, Outprobabilized };

std::string reason_name(EliminationReason reason);

struct Elimination {
  Rule rule;
  EliminationReason reason;
  // Derivation of the rule's RHS from its LHS over the rules present at
  // elimination time; absent for threshold eliminations.
  std::optional<Tree> witness;
};

struct CompactionReport {
  std::size_t initial_size = 0;
  std::size_t final_size = 0;
  std::vector<Elimination> eliminated;
  std::string order_used;

  double reduction_percent() const {
    if (initial_size == 0) return 0.0;
    return 100.0 *
           static_cast<double>(initial_size - final_size) /
           static_cast<double>(initial_size);
  }
};

// One pass over the rules in the given order: a rule is deleted iff its RHS
// can be parsed from its LHS using the other rules not already eliminated,
// with each deletion taking effect for the rules visited after it. Survivors
// keep their counts and roots.
std::pair<Grammar, CompactionReport> compact(const Grammar& grammar,
                                             const OrderSpec& order = {});

// Same loop over an explicit visiting order (every grammar rule exactly
// once); used by the order-independence property checks.
std::pair<Grammar, CompactionReport> compact_in_order(
    const Grammar& grammar, const std::vector<Rule>& order);

struct StagePoint {
  int stage = 0;                    // 1-based
  std::size_t extracted_size = 0;   // distinct rules over chunks 1..stage
  std::size_t compacted_size = 0;   // survivors after this stage's compaction
};

// Alternates rule addition and compaction: survivors of the previous stage
// plus the next chunk are compacted again, so new rules may oust old ones.
std::vector<StagePoint> staged_compact(
    const std::vector<std::vector<Rule>>& chunks);

// Removes rules with count < min_count and recomputes totals.
Grammar threshold(const Grammar& grammar, std::uint64_t min_count);

// Probability-guided elimination: a rule goes only when the best alternative
// derivation of its RHS is strictly more probable than ratio times the rule's
// own probability. All probabilities are frozen at the input grammar's counts
// and never renormalized during the loop; survivors keep original counts.
std::pair<Grammar, CompactionReport> linguistic_compact(const Grammar& grammar,
                                                        double ratio = 1.0);

}  // namespace treegram
