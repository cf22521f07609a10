#include "cadpipe/ingest/cleaning.h"

#include <algorithm>
#include <unordered_set>

namespace cadpipe::ingest {
namespace {

RawTable keep_columns(const RawTable& table, const std::vector<bool>& keep) {
  RawTable out;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (keep[c]) out.header.push_back(table.header[c]);
  }
  out.rows.reserve(table.n_rows());
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    cells.reserve(out.header.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (keep[c]) cells.push_back(row[c]);
    }
    out.rows.push_back(std::move(cells));
  }
  return out;
}

}  // namespace

CleaningResult remove_constant_columns(const RawTable& table, std::string_view label_name) {
  CleaningResult result;
  std::vector<bool> keep(table.n_cols(), true);
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const bool constant = std::all_of(table.rows.begin(), table.rows.end(), [&](const auto& row) {
      return row[c] == table.rows.front()[c];
    });
    if (!constant) continue;
    if (!label_name.empty() && table.header[c] == label_name) {
      result.warnings.push_back("label column '" + table.header[c] +
                                "' is constant; keeping it");
      continue;
    }
    keep[c] = false;
    result.removed.push_back(table.header[c]);
  }
  result.table = keep_columns(table, keep);
  return result;
}

RawTable drop_columns(const RawTable& table, const std::vector<std::string>& names) {
  const std::unordered_set<std::string> drop(names.begin(), names.end());
  std::vector<bool> keep(table.n_cols(), true);
  for (std::size_t c = 0; c < table.n_cols(); ++c) keep[c] = !drop.contains(table.header[c]);
  return keep_columns(table, keep);
}

}  // namespace cadpipe::ingest
