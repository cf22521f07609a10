#pragma once

#include <string>
#include <string_view>

#include "cadpipe/nn/network.h"

namespace cadpipe::nn {

// Plain-text parameter file:
//
//   cadpipe-network 1
//   spec <NetworkSpec as one-line JSON>
//   tensors <count>
//   <layer> <kind> <name> <rank> <dim>...      (one line per tensor)
//   values
//   <value>                                    (row-major, table order)
//
// Values are written in shortest round-trip form, so save -> load is exact.
std::string save_network(const Network& network);
Network load_network(std::string_view text);

}  // namespace cadpipe::nn
