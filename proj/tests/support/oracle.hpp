#pragma once

// Exhaustive top-down derivation enumeration, independent of the chart
// parser. Recursion over (category, span) with an active-set guard on
// same-span unary re-entry: repeating a (category, span) along one path can
// only append a cycle of cost >= 0, so the optimum never needs it.

#include <limits>
#include <set>
#include <unordered_map>
#include <vector>

#include "treegram/grammar.hpp"
#include "treegram/symbols.hpp"

namespace treegram::testing {

struct OracleResult {
  bool recognized = false;
  double best_logprob = -std::numeric_limits<double>::infinity();
};

class DerivationOracle {
 public:
  DerivationOracle(const Grammar& grammar, bool weighted,
                   const std::vector<Rule>& excluded = {})
      : grammar_(grammar), weighted_(weighted) {
    for (const Rule& rule : grammar.rules()) {
      bool skip = false;
      for (const Rule& ex : excluded) {
        if (rule.same_key(ex)) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      double lp = weighted ? std::log(grammar.probability(rule)) : 0.0;
      rules_by_lhs_[rule.lhs.id()].emplace_back(&rule, lp);
    }
  }

  OracleResult derive(const std::vector<Category>& input, Category goal) const {
    std::set<std::uint32_t> active;
    double best = best_logprob(goal, 0, static_cast<int>(input.size()), input,
                               &active);
    OracleResult out;
    out.best_logprob = best;
    out.recognized = best > -std::numeric_limits<double>::infinity();
    return out;
  }

 private:
  double best_logprob(Category cat, int lo, int hi,
                      const std::vector<Category>& input,
                      std::set<std::uint32_t>* active) const {
    double best = -std::numeric_limits<double>::infinity();
    if (hi - lo == 1 && input[static_cast<std::size_t>(lo)] == cat)
      best = 0.0;  // a symbol derives itself as a leaf
    if (active->count(cat.id()) > 0) return best;
    auto it = rules_by_lhs_.find(cat.id());
    if (it == rules_by_lhs_.end()) return best;
    for (const auto& [rule, lp] : it->second) {
      int parts = static_cast<int>(rule->rhs.size());
      if (parts > hi - lo) continue;
      if (parts == 1) {
        active->insert(cat.id());
        double child = best_logprob(rule->rhs[0], lo, hi, input, active);
        active->erase(cat.id());
        if (child + lp > best) best = child + lp;
      } else {
        best_split(rule->rhs, 0, lo, hi, input, lp, &best);
      }
    }
    return best;
  }

  // Recursively places split points for rhs[index..]; children occupy fresh
  // smaller spans, so the active set resets.
  void best_split(const std::vector<Category>& rhs, std::size_t index, int lo,
                  int hi, const std::vector<Category>& input, double acc,
                  double* best) const {
    // Remaining factors are all <= 0, so a branch at or below the incumbent
    // cannot win.
    if (acc <= *best) return;
    if (index + 1 == rhs.size()) {
      std::set<std::uint32_t> active;
      double child = best_logprob(rhs[index], lo, hi, input, &active);
      if (acc + child > *best) *best = acc + child;
      return;
    }
    int remaining = static_cast<int>(rhs.size() - index - 1);
    for (int cut = lo + 1; cut + remaining <= hi; ++cut) {
      std::set<std::uint32_t> active;
      double child = best_logprob(rhs[index], lo, cut, input, &active);
      if (child == -std::numeric_limits<double>::infinity()) continue;
      best_split(rhs, index + 1, cut, hi, input, acc + child, best);
    }
  }

  const Grammar& grammar_;
  bool weighted_;
  std::unordered_map<std::uint32_t, std::vector<std::pair<const Rule*, double>>>
      rules_by_lhs_;
};

}  // namespace treegram::testing
