#include "cadpipe/eval/report.h"

#include <algorithm>
#include <cstdio>

#include "cadpipe/core/error.h"
#include "cadpipe/models/registry.h"

namespace cadpipe::eval {
namespace {

using nlohmann::json;

json metrics_json(const Metrics& m) {
  return {{"recall", m.recall}, {"precision", m.precision}, {"f1", m.f1}, {"accuracy", m.accuracy}};
}

Metrics metrics_from(const json& j) {
  Metrics m;
  m.recall = j.at("recall").get<double>();
  m.precision = j.at("precision").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.accuracy = j.at("accuracy").get<double>();
  return m;
}

json means_json(const MetricMeans& m) {
  return {{"recall", m.recall},     {"precision", m.precision}, {"f1", m.f1},
          {"accuracy", m.accuracy}, {"roc_auc", m.roc_auc}};
}

MetricMeans means_from(const json& j) {
  return {j.at("recall").get<double>(), j.at("precision").get<double>(), j.at("f1").get<double>(),
          j.at("accuracy").get<double>(), j.at("roc_auc").get<double>()};
}

std::string model_title(const std::string& model) {
  try {
    return std::string(models::display_name(model));
  } catch (const ConfigError&) {
    return model;
  }
}

}  // namespace

json report_to_json(const MetricsReport& report) {
  json folds = json::array();
  for (const FoldResult& f : report.folds) {
    json row = {{"fold", f.fold},
                {"n_train", f.n_train},
                {"n_test", f.n_test},
                {"tp", f.counts.tp},
                {"fp", f.counts.fp},
                {"tn", f.counts.tn},
                {"fn", f.counts.fn},
                {"positive_class", metrics_json(f.positive)},
                {"macro", metrics_json(f.macro)},
                {"roc_auc", f.roc_auc}};
    json undefined = json::array();
    for (const auto& u : f.macro.undefined) undefined.push_back(u);
    row["undefined"] = undefined;
    folds.push_back(std::move(row));
  }
  return {{"model", report.model},
          {"folds", folds},
          {"mean_positive_class", means_json(report.mean)},
          {"mean_macro", means_json(report.macro_mean)}};
}

MetricsReport report_from_json(const json& j) {
  try {
    MetricsReport r;
    r.model = j.at("model").get<std::string>();
    for (const json& row : j.at("folds")) {
      FoldResult f;
      f.fold = row.at("fold").get<std::size_t>();
      f.n_train = row.at("n_train").get<std::size_t>();
      f.n_test = row.at("n_test").get<std::size_t>();
      f.counts = {row.at("tp").get<std::size_t>(), row.at("fp").get<std::size_t>(),
                  row.at("tn").get<std::size_t>(), row.at("fn").get<std::size_t>()};
      f.positive = metrics_from(row.at("positive_class"));
      f.macro = metrics_from(row.at("macro"));
      f.roc_auc = row.at("roc_auc").get<double>();
      for (const json& u : row.at("undefined")) {
        const auto name = u.get<std::string>();
        if (!name.starts_with("negative ")) f.positive.undefined.push_back(name);
        f.macro.undefined.push_back(name);
      }
      r.folds.push_back(std::move(f));
    }
    r.mean = means_from(j.at("mean_positive_class"));
    r.macro_mean = means_from(j.at("mean_macro"));
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("metrics report: ") + e.what());
  }
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
  return buf;
}

std::string format_table(std::span<const MetricsReport> reports) {
  const std::vector<std::string> header{"Model", "Recall", "Precision", "F1 Score", "Accuracy", "ROC AUC"};
  std::vector<std::vector<std::string>> rows{header};
  for (const MetricsReport& r : reports) {
    rows.push_back({model_title(r.model), percent(r.mean.recall), percent(r.mean.precision),
                    percent(r.mean.f1), percent(r.mean.accuracy), percent(r.mean.roc_auc)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      const std::string& cell = rows[i][c];
      const std::string pad(width[c] - cell.size(), ' ');
      out += c == 0 ? cell + pad : "  " + pad + cell;
    }
    out += '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out += std::string(total - 2, '-') + '\n';
    }
  }
  return out;
}

std::string folds_csv_header() {
  return "mode,model,fold,n_train,n_test,accuracy,recall,precision,f1,roc_auc\n";
}

std::string folds_csv_rows(std::span<const MetricsReport> reports, std::string_view mode) {
  std::string out;
  for (const MetricsReport& r : reports) {
    for (const FoldResult& f : r.folds) {
      out += std::string(mode) + "," + r.model + "," + std::to_string(f.fold) + "," +
             std::to_string(f.n_train) + "," + std::to_string(f.n_test) + "," +
             percent(f.positive.accuracy) + "," + percent(f.positive.recall) + "," +
             percent(f.positive.precision) + "," + percent(f.positive.f1) + "," +
             percent(f.roc_auc) + "\n";
    }
  }
  return out;
}

}  // namespace cadpipe::eval
