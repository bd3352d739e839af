#include "nhcurv_app/oracle.hpp"

namespace nhcurv::app {

// Output of tests/oracle/heisenberg_oracle.py (exact sympy evaluation).
// Components not listed are zero.
const std::vector<OracleEntry>& heisenberg_oracle() {
  static const std::vector<OracleEntry> table = {
    {{0.3, -0.7, 0.2}, "gamma", {0, 0, 1}, 0.15283842794759825},
    {{0.3, -0.7, 0.2}, "gamma", {1, 0, 1}, 0.065502183406113537},
    {{0.3, -0.7, 0.2}, "gamma", {0, 1, 0}, -0.15283842794759825},
    {{0.3, -0.7, 0.2}, "gamma", {1, 1, 0}, -0.065502183406113537},
    {{0.3, -0.7, 0.2}, "schouten", {0, 0, 1, 0}, 0.030033752216776949},
    {{0.3, -0.7, 0.2}, "schouten", {1, 0, 1, 0}, -0.64215022596823096},
    {{0.3, -0.7, 0.2}, "schouten", {0, 0, 1, 1}, 0.58494307888865582},
    {{0.3, -0.7, 0.2}, "schouten", {1, 0, 1, 1}, -0.030033752216776949},
    {{0.3, -0.7, 0.2}, "schouten", {0, 1, 0, 0}, -0.030033752216776949},
    {{0.3, -0.7, 0.2}, "schouten", {1, 1, 0, 0}, 0.64215022596823096},
    {{0.3, -0.7, 0.2}, "schouten", {0, 1, 0, 1}, -0.58494307888865582},
    {{0.3, -0.7, 0.2}, "schouten", {1, 1, 0, 1}, 0.030033752216776949},
    {{0.3, -0.7, 0.2}, "wagner", {0, 0, 2, 0}, -0.0022525314162582712},
    {{0.3, -0.7, 0.2}, "wagner", {1, 0, 2, 0}, 0.048161266947617322},
    {{0.3, -0.7, 0.2}, "wagner", {0, 0, 2, 1}, -0.043870730916649187},
    {{0.3, -0.7, 0.2}, "wagner", {1, 0, 2, 1}, 0.0022525314162582712},
    {{0.3, -0.7, 0.2}, "wagner", {0, 1, 2, 0}, 0.0052559066379359661},
    {{0.3, -0.7, 0.2}, "wagner", {1, 1, 2, 0}, -0.11237628954444042},
    {{0.3, -0.7, 0.2}, "wagner", {0, 1, 2, 1}, 0.10236503880551477},
    {{0.3, -0.7, 0.2}, "wagner", {1, 1, 2, 1}, -0.0052559066379359661},
    {{0.3, -0.7, 0.2}, "wagner", {0, 2, 0, 0}, 0.0022525314162582712},
    {{0.3, -0.7, 0.2}, "wagner", {1, 2, 0, 0}, -0.048161266947617322},
    {{0.3, -0.7, 0.2}, "wagner", {0, 2, 0, 1}, 0.043870730916649187},
    {{0.3, -0.7, 0.2}, "wagner", {1, 2, 0, 1}, -0.0022525314162582712},
    {{0.3, -0.7, 0.2}, "wagner", {0, 2, 1, 0}, -0.0052559066379359661},
    {{0.3, -0.7, 0.2}, "wagner", {1, 2, 1, 0}, 0.11237628954444042},
    {{0.3, -0.7, 0.2}, "wagner", {0, 2, 1, 1}, -0.10236503880551477},
    {{0.3, -0.7, 0.2}, "wagner", {1, 2, 1, 1}, 0.0052559066379359661},
    {{-1.2, 0.5, 2.0}, "gamma", {0, 0, 1}, -0.087873462214411248},
    {{-1.2, 0.5, 2.0}, "gamma", {1, 0, 1}, -0.21089630931458699},
    {{-1.2, 0.5, 2.0}, "gamma", {0, 1, 0}, 0.087873462214411248},
    {{-1.2, 0.5, 2.0}, "gamma", {1, 1, 0}, 0.21089630931458699},
    {{-1.2, 0.5, 2.0}, "schouten", {0, 0, 1, 0}, 0.055596566603142441},
    {{-1.2, 0.5, 2.0}, "schouten", {1, 0, 1, 0}, -0.39380901343892563},
    {{-1.2, 0.5, 2.0}, "schouten", {0, 0, 1, 1}, 0.50407553720182480},
    {{-1.2, 0.5, 2.0}, "schouten", {1, 0, 1, 1}, -0.055596566603142441},
    {{-1.2, 0.5, 2.0}, "schouten", {0, 1, 0, 0}, -0.055596566603142441},
    {{-1.2, 0.5, 2.0}, "schouten", {1, 1, 0, 0}, 0.39380901343892563},
    {{-1.2, 0.5, 2.0}, "schouten", {0, 1, 0, 1}, -0.50407553720182480},
    {{-1.2, 0.5, 2.0}, "schouten", {1, 1, 0, 1}, 0.055596566603142441},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 0, 2, 0}, 0.016678969980942732},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 0, 2, 0}, -0.11814270403167769},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 0, 2, 1}, 0.15122266116054744},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 0, 2, 1}, -0.016678969980942732},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 1, 2, 0}, -0.0069495708253928052},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 1, 2, 0}, 0.049226126679865703},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 1, 2, 1}, -0.063009442150228100},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 1, 2, 1}, 0.0069495708253928052},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 2, 0, 0}, -0.016678969980942732},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 2, 0, 0}, 0.11814270403167769},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 2, 0, 1}, -0.15122266116054744},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 2, 0, 1}, 0.016678969980942732},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 2, 1, 0}, 0.0069495708253928052},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 2, 1, 0}, -0.049226126679865703},
    {{-1.2, 0.5, 2.0}, "wagner", {0, 2, 1, 1}, 0.063009442150228100},
    {{-1.2, 0.5, 2.0}, "wagner", {1, 2, 1, 1}, -0.0069495708253928052},
    {{0.0, 0.0, 0.0}, "schouten", {1, 0, 1, 0}, -0.75000000000000000},
    {{0.0, 0.0, 0.0}, "schouten", {0, 0, 1, 1}, 0.75000000000000000},
    {{0.0, 0.0, 0.0}, "schouten", {1, 1, 0, 0}, 0.75000000000000000},
    {{0.0, 0.0, 0.0}, "schouten", {0, 1, 0, 1}, -0.75000000000000000},
  };
  return table;
}

std::vector<Point> heisenberg_oracle_points() {
  return {{0.3, -0.7, 0.2}, {-1.2, 0.5, 2.0}, {0.0, 0.0, 0.0}};
}

}  // namespace nhcurv::app
