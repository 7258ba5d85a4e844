#include "treegram/compactor.hpp"

#include <algorithm>
#include <cmath>

#include "treegram/chart_parser.hpp"
#include "treegram/errors.hpp"
#include "treegram/rng.hpp"

namespace treegram {

std::string OrderSpec::to_string() const {
  switch (policy) {
    case OrderPolicy::FlatFirst: return "flat-first";
    case OrderPolicy::Input: return "input";
    case OrderPolicy::Random: return "random(seed=" + std::to_string(seed) + ")";
  }
  return "?";
}

OrderSpec OrderSpec::parse(const std::string& text, std::uint64_t seed) {
  if (text == "flat-first") return {OrderPolicy::FlatFirst, 0};
  if (text == "input") return {OrderPolicy::Input, 0};
  if (text == "random") return {OrderPolicy::Random, seed};
  throw InputError("unknown ordering policy: " + text +
                   " (expected flat-first|input|random)");
}

std::string reason_name(EliminationReason reason) {
  switch (reason) {
    case EliminationReason::Parsable: return "parsable";
    case EliminationReason::BelowThreshold: return "below-threshold";
    case EliminationReason::Outprobabilized: return "outprobabilized";
  }
  return "?";
}

namespace {

std::vector<Rule> visiting_order(const Grammar& grammar,
                                 const OrderSpec& order) {
  std::vector<Rule> rules = grammar.rules();
  switch (order.policy) {
    case OrderPolicy::Input:
      break;
    case OrderPolicy::FlatFirst:
      std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
        if (a.rhs.size() != b.rhs.size()) return a.rhs.size() > b.rhs.size();
        return rule_name_less(a, b);
      });
      break;
    case OrderPolicy::Random: {
      SplitMix64 rng(order.seed);
      for (std::size_t i = rules.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(rules[i - 1], rules[j]);
      }
      break;
    }
  }
  return rules;
}

Grammar survivors_of(const Grammar& grammar,
                     const std::vector<bool>& eliminated,
                     const ChartParser& parser) {
  Grammar out;
  for (const Rule& rule : grammar.rules()) {
    int id = parser.rule_id(rule);
    if (id < 0 || !eliminated[static_cast<std::size_t>(id)])
      out.add_rule(rule);
  }
  for (const auto& [root, count] : grammar.roots()) out.observe_root(root, count);
  return out;
}

std::pair<Grammar, CompactionReport> run_naive(const Grammar& grammar,
                                               const std::vector<Rule>& visit,
                                               const std::string& order_name) {
  ChartParser parser(grammar, ChartParser::Mode::Unweighted);
  std::vector<bool> excluded(static_cast<std::size_t>(parser.num_rules()),
                             false);
  CompactionReport report;
  report.initial_size = grammar.size();
  report.order_used = order_name;

  std::vector<bool> visited(excluded.size(), false);
  for (const Rule& rule : visit) {
    int id = parser.rule_id(rule);
    if (id < 0)
      throw InternalError("visiting order contains a rule missing from the "
                          "grammar: " + rule.to_string());
    std::size_t slot = static_cast<std::size_t>(id);
    if (visited[slot])
      throw InternalError("visiting order repeats a rule: " + rule.to_string());
    visited[slot] = true;
    excluded[slot] = true;
    ParseResult res = parser.parse(rule.rhs, rule.lhs, excluded);
    if (res.recognized) {
      report.eliminated.push_back(
          {rule, EliminationReason::Parsable, std::move(res.best_tree)});
    } else {
      excluded[slot] = false;
    }
  }

  Grammar survivors = survivors_of(grammar, excluded, parser);
  report.final_size = survivors.size();
  return {std::move(survivors), std::move(report)};
}

}  // namespace

std::pair<Grammar, CompactionReport> compact(const Grammar& grammar,
                                             const OrderSpec& order) {
  return run_naive(grammar, visiting_order(grammar, order), order.to_string());
}

std::pair<Grammar, CompactionReport> compact_in_order(
    const Grammar& grammar, const std::vector<Rule>& order) {
  if (order.size() != grammar.size())
    throw InputError("explicit visiting order must cover every rule exactly "
                     "once");
  return run_naive(grammar, order, "explicit");
}

std::vector<StagePoint> staged_compact(
    const std::vector<std::vector<Rule>>& chunks) {
  if (chunks.empty()) throw InputError("staged compaction needs >= 1 chunk");
  std::vector<StagePoint> points;
  Grammar running;    // survivors so far + current chunk
  Grammar cumulative; // everything extracted so far, never compacted
  int stage = 0;
  for (const std::vector<Rule>& chunk : chunks) {
    ++stage;
    running.add_rules(chunk);
    cumulative.add_rules(chunk);
    auto [survivors, report] = compact(running);
    running = std::move(survivors);
    points.push_back({stage, cumulative.size(), running.size()});
  }
  return points;
}

Grammar threshold(const Grammar& grammar, std::uint64_t min_count) {
  if (min_count < 1) throw InputError("threshold min_count must be >= 1");
  Grammar out;
  for (const Rule& rule : grammar.rules()) {
    if (rule.count >= min_count) out.add_rule(rule);
  }
  for (const auto& [root, count] : grammar.roots()) out.observe_root(root, count);
  return out;
}

std::pair<Grammar, CompactionReport> linguistic_compact(const Grammar& grammar,
                                                        double ratio) {
  if (!(ratio > 0.0))
    throw InputError("linguistic compaction ratio must be > 0");
  for (const Rule& rule : grammar.rules()) {
    if (rule.count == 0)
      throw InputError("linguistic compaction requires positive counts: " +
                       rule.to_string());
  }

  // The weighted parser snapshots probabilities from the input counts; they
  // stay frozen while rules are excluded below.
  ChartParser parser(grammar, ChartParser::Mode::Weighted);
  std::vector<bool> excluded(static_cast<std::size_t>(parser.num_rules()),
                             false);
  OrderSpec order;  // same deterministic default order as compact()
  CompactionReport report;
  report.initial_size = grammar.size();
  report.order_used = order.to_string();

  double log_ratio = std::log(ratio);
  for (const Rule& rule : visiting_order(grammar, order)) {
    int id = parser.rule_id(rule);
    std::size_t slot = static_cast<std::size_t>(id);
    excluded[slot] = true;
    ParseResult res = parser.parse(rule.rhs, rule.lhs, excluded);
    double own = std::log(grammar.probability(rule));
    if (res.recognized && *res.best_logprob > log_ratio + own) {
      report.eliminated.push_back(
          {rule, EliminationReason::Outprobabilized, std::move(res.best_tree)});
    } else {
      excluded[slot] = false;
    }
  }

  Grammar survivors = survivors_of(grammar, excluded, parser);
  report.final_size = survivors.size();
  return {std::move(survivors), std::move(report)};
}

}  // namespace treegram
