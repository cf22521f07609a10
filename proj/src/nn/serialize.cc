#include "cadpipe/nn/serialize.h"

#include <charconv>
#include <sstream>

#include "cadpipe/core/dataset_io.h"
#include "cadpipe/core/error.h"

namespace cadpipe::nn {
namespace {

constexpr std::string_view kMagic = "cadpipe-network 1";

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  std::string_view next() {
    if (pos >= text.size()) throw ParseError("network file truncated at line " + std::to_string(line_no));
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return line;
  }
};

}  // namespace

std::string save_network(const Network& network) {
  std::string out(kMagic);
  out += "\nspec " + spec_to_json(network.spec()) + "\n";
  std::vector<std::pair<std::size_t, const Parameter*>> table;
  for (std::size_t i = 0; i < network.layer_count(); ++i) {
    for (const auto* p : network.layer(i).parameters()) table.emplace_back(i, p);
  }
  out += "tensors " + std::to_string(table.size()) + "\n";
  for (const auto& [layer, p] : table) {
    out += std::to_string(layer) + ' ' + network.layer(layer).kind() + ' ' + p->name + ' ' +
           std::to_string(p->value.rank());
    for (std::size_t d : p->value.shape()) out += ' ' + std::to_string(d);
    out += '\n';
  }
  out += "values\n";
  for (const auto& [layer, p] : table) {
    for (double v : p->value.values()) {
      out += format_double(v);
      out += '\n';
    }
  }
  return out;
}

Network load_network(std::string_view text) {
  LineReader reader{text};
  if (reader.next() != kMagic) throw ParseError("not a cadpipe network file");
  const auto spec_line = reader.next();
  if (!spec_line.starts_with("spec ")) throw ParseError("network file: missing spec line");
  const NetworkSpec spec = spec_from_json(spec_line.substr(5));

  Prng unused(0);
  Network net = Network::initialize(spec, unused);
  auto params = net.parameters();

  std::istringstream count_line{std::string(reader.next())};
  std::string word;
  std::size_t count = 0;
  count_line >> word >> count;
  if (word != "tensors" || count != params.size()) {
    throw ParseError("network file: expected " + std::to_string(params.size()) + " tensors");
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::istringstream row{std::string(reader.next())};
    std::size_t layer = 0, rank = 0;
    std::string kind, name;
    row >> layer >> kind >> name >> rank;
    Shape shape(rank);
    for (auto& d : shape) row >> d;
    if (!row || shape != params[i]->value.shape() || name != params[i]->name) {
      throw ParseError("network file: tensor " + std::to_string(i) +
                       " does not match the spec (expected " + params[i]->name + " " +
                       shape_to_string(params[i]->value.shape()) + ")");
    }
  }
  if (reader.next() != "values") throw ParseError("network file: missing values section");
  for (auto* p : params) {
    for (double& v : p->value.values()) {
      const auto line = reader.next();
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
      if (ec != std::errc() || ptr != line.data() + line.size()) {
        throw ParseError("network file: bad value at line " + std::to_string(reader.line_no));
      }
    }
  }
  return net;
}

}  // namespace cadpipe::nn
