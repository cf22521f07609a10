#include "cadpipe/core/dataset_io.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <span>

#include "cadpipe/core/error.h"

namespace cadpipe {
namespace {

std::string to_csv(const Dataset& ds, std::span<const Provenance> provenance) {
  std::string out;
  for (const auto& name : ds.feature_names) {
    out += name;
    out += ',';
  }
  out += ds.label_name;
  if (!provenance.empty()) out += ",provenance";
  out += '\n';
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    for (double v : ds.features.row(r)) {
      out += format_double(v);
      out += ',';
    }
    out += ds.labels[r] == Label::kPositive ? '1' : '0';
    if (!provenance.empty()) {
      out += ',';
      out += to_string(provenance[r]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

AugmentedDataset from_csv(std::string_view text, bool with_provenance) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw ParseError("dataset file is empty");

  const auto header = split(lines.front());
  const std::size_t trailing = with_provenance ? 2 : 1;
  if (header.size() < trailing + 1) throw ParseError("dataset header has too few columns");
  if (with_provenance && header.back() != "provenance") {
    throw ParseError("dataset header lacks a trailing provenance column");
  }
  const std::size_t d = header.size() - trailing;

  AugmentedDataset out;
  Dataset& ds = out.dataset;
  for (std::size_t c = 0; c < d; ++c) ds.feature_names.emplace_back(header[c]);
  ds.label_name = std::string(header[d]);
  std::vector<double> values;
  values.reserve((lines.size() - 1) * d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(i) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < d; ++c) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (ec != std::errc() || ptr != cells[c].data() + cells[c].size()) {
        throw ParseError("row " + std::to_string(i) + ", column '" + ds.feature_names[c] +
                         "': not a number");
      }
      values.push_back(v);
    }
    if (cells[d] == "1") {
      ds.labels.push_back(Label::kPositive);
    } else if (cells[d] == "0") {
      ds.labels.push_back(Label::kNegative);
    } else {
      throw ParseError("row " + std::to_string(i) + ": label must be 0 or 1");
    }
    if (with_provenance) out.provenance.push_back(provenance_from_string(cells[d + 1]));
  }
  ds.features = Matrix(ds.labels.size(), d, std::move(values));
  return out;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string dataset_to_csv(const Dataset& ds) { return to_csv(ds, {}); }

std::string dataset_to_csv(const AugmentedDataset& ds) {
  ds.validate();
  return to_csv(ds.dataset, ds.provenance);
}

Dataset dataset_from_csv(std::string_view text) {
  return std::move(from_csv(text, false).dataset);
}

AugmentedDataset augmented_from_csv(std::string_view text) { return from_csv(text, true); }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace cadpipe
