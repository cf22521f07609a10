#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cadpipe/eval/evaluate.h"

namespace cadpipe::eval {

// Machine form: fold rows with confusion counts, positive-class and macro
// metrics in [0, 1], plus both means. 0/0 ratios are listed per fold under
// "undefined".
nlohmann::json report_to_json(const MetricsReport& report);
// Throws ParseError on missing fields.
MetricsReport report_from_json(const nlohmann::json& j);

// x in [0, 1] as a percentage with two decimals: 0.95364 -> "95.36".
std::string percent(double x);

// Aligned text table, one row per report, metrics as percentages.
std::string format_table(std::span<const MetricsReport> reports);

// Header "mode,model,fold,n_train,n_test,accuracy,recall,precision,f1,roc_auc"
// followed by one row per fold of every report, metrics as percentages.
std::string folds_csv_header();
std::string folds_csv_rows(std::span<const MetricsReport> reports, std::string_view mode);

}  // namespace cadpipe::eval
