#pragma once

#include <array>
#include <string>
#include <vector>

#include "nhcurv/jet.hpp"

namespace nhcurv::app {

/// One nonzero component of the symbolic Heisenberg table. `block` is
/// gamma (c, a, b), schouten or wagner (d, a, b, c); 0-based indices.
struct OracleEntry {
  Point point;
  std::string block;
  std::vector<std::size_t> index;
  double value = 0.0;
};

const std::vector<OracleEntry>& heisenberg_oracle();
std::vector<Point> heisenberg_oracle_points();

}  // namespace nhcurv::app
