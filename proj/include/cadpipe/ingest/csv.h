#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cadpipe::ingest {

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return header.size(); }

  // Index of a header name, or npos.
  std::size_t column_index(std::string_view name) const;

  bool operator==(const RawTable&) const = default;
};

// Comma-delimited text with a header row. Double-quoted cells may contain
// commas and doubled quotes. Surrounding blanks of unquoted cells, a UTF-8
// BOM, CRLF line endings and blank trailing lines are tolerated.
// Throws ParseError on empty input or a ragged row ("row 3: expected 59
// cells, got 58"; rows counted from 1 after the header).
RawTable parse_csv(std::string_view text);

RawTable read_csv_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace cadpipe::ingest
