#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "treegram/compactor.hpp"
#include "treegram/evaluator.hpp"
#include "treegram/grammar.hpp"

namespace treegram {

// JSON renderings used by the CLI and the report files. Key order and array
// order are deterministic.
nlohmann::ordered_json compaction_report_json(const CompactionReport& report);
nlohmann::ordered_json eval_report_json(const EvalReport& report);
nlohmann::ordered_json growth_curve_json(const GrowthCurve& curve);

std::string growth_curve_csv(const GrowthCurve& curve);

// Aligned plain-text table with the recall/precision rows of both labelled
// and unlabelled evaluation plus grammar size; reduction is reported when the
// full grammar's size is known.
std::string eval_report_table(const EvalReport& report,
                              std::optional<std::size_t> full_size = {});

}  // namespace treegram
