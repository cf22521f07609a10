#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cadpipe/core/dataset.h"

namespace cadpipe {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Columnar text format shared by every pipeline stage:
//
//   <feature_1>,...,<feature_d>,<label_name>[,provenance]
//   0.25,...,1,1[,original]
//
// Label cells are 1 (positive) or 0 (negative); values round-trip exactly.
std::string dataset_to_csv(const Dataset& ds);
std::string dataset_to_csv(const AugmentedDataset& ds);

Dataset dataset_from_csv(std::string_view text);
AugmentedDataset augmented_from_csv(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cadpipe
