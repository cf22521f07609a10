#include "cadpipe/ingest/surrogate.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cadpipe/core/dataset_io.h"
#include "cadpipe/core/prng.h"

namespace cadpipe::ingest {
namespace {

double standard_normal(Prng& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string cell_for(const FeatureSpec& spec, double z) {
  switch (spec.kind) {
    case FeatureKind::kNumeric:
      return format_double(std::round((50.0 + 12.0 * z) * 10.0) / 10.0);
    case FeatureKind::kBinary:
      return spec.levels[z > 0.5 ? 1 : 0];
    case FeatureKind::kCategorical: {
      const double levels = static_cast<double>(spec.levels.size());
      const double idx = std::floor(z + levels / 2.0);
      return spec.levels[static_cast<std::size_t>(std::clamp(idx, 0.0, levels - 1.0))];
    }
  }
  return {};
}

}  // namespace

RawTable make_surrogate_table(const DatasetSchema& schema, const SurrogateOptions& options) {
  Prng rng(options.seed);
  const std::size_t d = schema.features.size();

  std::vector<double> effect(d, 0.0);
  for (auto& e : effect) {
    const bool null_feature = rng.uniform() < options.null_fraction;
    const double magnitude = rng.uniform(-1.0, 1.0) * options.separation;
    e = null_feature ? 0.0 : magnitude;
  }

  std::vector<bool> positive(options.n_positive + options.n_negative, false);
  std::fill(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(options.n_positive), true);
  for (std::size_t i = positive.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_index(i);
    const bool tmp = positive[i - 1];
    positive[i - 1] = positive[j];
    positive[j] = tmp;
  }

  RawTable table;
  for (const auto& f : schema.features) table.header.push_back(f.name);
  table.header.push_back(schema.label_name);
  for (const bool pos : positive) {
    std::vector<std::string> row;
    row.reserve(d + 1);
    for (std::size_t j = 0; j < d; ++j) {
      const auto& spec = schema.features[j];
      const double z = standard_normal(rng) + (pos ? 0.5 : -0.5) * effect[j];
      const bool constant = std::find(options.constant_columns.begin(),
                                      options.constant_columns.end(),
                                      spec.name) != options.constant_columns.end();
      if (constant) {
        row.push_back(spec.kind == FeatureKind::kNumeric ? "0" : spec.levels.front());
      } else {
        row.push_back(cell_for(spec, z));
      }
    }
    row.push_back(pos ? schema.positive_label : options.negative_label);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string table_to_csv(const RawTable& table) {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    return line + '\n';
  };
  std::string out = join(table.header);
  for (const auto& row : table.rows) out += join(row);
  return out;
}

}  // namespace cadpipe::ingest
