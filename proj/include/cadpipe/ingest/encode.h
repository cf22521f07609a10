#pragma once

#include "cadpipe/core/dataset.h"
#include "cadpipe/ingest/csv.h"
#include "cadpipe/ingest/schema.h"

namespace cadpipe::ingest {

// Maps raw cells to reals: numeric cells are parsed, binary and categorical
// cells become the index of their level, and the label column becomes
// positive exactly when it equals `schema.positive_label`. Features keep
// table column order; schema features missing from the table (for example
// removed as constant) are skipped.
//
// Throws DataError naming (row, column) for an unparseable number, the
// offending value for an undeclared level, and the column for anything the
// schema does not declare.
Dataset encode(const RawTable& table, const DatasetSchema& schema);

// Every schema feature and the label must appear in the raw header.
void check_columns_declared(const RawTable& table, const DatasetSchema& schema);

}  // namespace cadpipe::ingest
