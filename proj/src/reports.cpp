#include "treegram/reports.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "treegram/chart_parser.hpp"

namespace treegram {

using ordered_json = nlohmann::ordered_json;

namespace {

// Stable rounding so report numbers do not wobble in the last ulp between
// otherwise identical runs.
double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

ordered_json compaction_report_json(const CompactionReport& report) {
  ordered_json j;
  j["initial_size"] = report.initial_size;
  j["final_size"] = report.final_size;
  j["reduction_percent"] = round2(report.reduction_percent());
  j["order_used"] = report.order_used;
  ordered_json eliminated = ordered_json::array();
  for (const Elimination& e : report.eliminated) {
    ordered_json entry;
    entry["rule"] = e.rule.to_string();
    entry["count"] = e.rule.count;
    entry["reason"] = reason_name(e.reason);
    if (e.witness)
      entry["witness"] = format_derivation(*e.witness);
    else
      entry["witness"] = nullptr;
    eliminated.push_back(std::move(entry));
  }
  j["eliminated"] = std::move(eliminated);
  return j;
}

ordered_json eval_report_json(const EvalReport& report) {
  ordered_json j;
  j["labelled"] = {{"recall", round2(report.labelled_recall)},
                   {"precision", round2(report.labelled_precision)},
                   {"matched", report.labelled_matched}};
  j["unlabelled"] = {{"recall", round2(report.unlabelled_recall)},
                     {"precision", round2(report.unlabelled_precision)},
                     {"matched", report.unlabelled_matched}};
  j["gold_brackets"] = report.gold_brackets;
  j["test_brackets"] = report.test_brackets;
  j["sentences_evaluated"] = report.sentences_evaluated;
  j["fallback_parses"] = report.fallback_parses;
  j["sentences_skipped"] = report.sentences_skipped;
  j["grammar_size"] = report.grammar_size;
  return j;
}

ordered_json growth_curve_json(const GrowthCurve& curve) {
  ordered_json points = ordered_json::array();
  for (const auto& [tokens, rules] : curve.points) {
    points.push_back({{"tokens", tokens}, {"distinct_rules", rules}});
  }
  ordered_json j;
  j["points"] = std::move(points);
  return j;
}

std::string growth_curve_csv(const GrowthCurve& curve) {
  std::string out = "tokens,distinct_rules\n";
  for (const auto& [tokens, rules] : curve.points) {
    out += std::to_string(tokens) + ',' + std::to_string(rules) + '\n';
  }
  return out;
}

std::string eval_report_table(const EvalReport& report,
                              std::optional<std::size_t> full_size) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  auto row = [&](const std::string& name, double value) {
    out << std::left << std::setw(22) << name << std::right << std::setw(8)
        << value << "%\n";
  };
  out << "Labelled evaluation\n";
  row("  Recall", report.labelled_recall);
  row("  Precision", report.labelled_precision);
  out << "Unlabelled evaluation\n";
  row("  Recall", report.unlabelled_recall);
  row("  Precision", report.unlabelled_precision);
  out << std::left << std::setw(22) << "Grammar size" << std::right
      << std::setw(9) << report.grammar_size << "\n";
  if (full_size && *full_size > 0) {
    double reduction = 100.0 *
                       static_cast<double>(*full_size - report.grammar_size) /
                       static_cast<double>(*full_size);
    row("Reduction (of full)", reduction);
  }
  out << std::left << std::setw(22) << "Sentences" << std::right
      << std::setw(9) << report.sentences_evaluated << "\n";
  out << std::left << std::setw(22) << "Fallback parses" << std::right
      << std::setw(9) << report.fallback_parses << "\n";
  if (report.sentences_skipped > 0) {
    out << std::left << std::setw(22) << "Skipped (yield)" << std::right
        << std::setw(9) << report.sentences_skipped << "\n";
  }
  return out.str();
}

}  // namespace treegram
