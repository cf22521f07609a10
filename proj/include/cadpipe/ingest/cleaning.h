#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cadpipe/ingest/csv.h"

namespace cadpipe::ingest {

struct CleaningResult {
  RawTable table;
  std::vector<std::string> removed;  // in original column order
  std::vector<std::string> warnings;
};

// Drops every column whose data cells hold a single distinct raw text
// value. The label column, when named, is kept even if constant and a
// warning is recorded instead.
CleaningResult remove_constant_columns(const RawTable& table, std::string_view label_name = {});

// Drops the named columns; names absent from the table are ignored.
RawTable drop_columns(const RawTable& table, const std::vector<std::string>& names);

}  // namespace cadpipe::ingest
