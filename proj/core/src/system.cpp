#include "nhcurv/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhcurv/errors.hpp"

namespace nhcurv {

expr::Symbols SystemDef::symbols() const {
  expr::Symbols s;
  s.chart = chart;
  for (const auto& p : params) s.params.push_back(p.name);
  return s;
}

std::vector<double> SystemDef::param_values() const {
  std::vector<double> v;
  v.reserve(params.size());
  for (const auto& p : params) v.push_back(p.value);
  return v;
}

std::optional<std::size_t> SystemDef::param_index(const std::string& name) const {
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].name == name) return k;
  }
  return std::nullopt;
}

std::size_t SystemDef::coord_index(const std::string& name) const {
  auto it = std::find(chart.begin(), chart.end(), name);
  if (it == chart.end()) throw ValidationError("unknown coordinate '" + name + "'");
  return static_cast<std::size_t>(it - chart.begin());
}

SystemDef SystemDef::with_param(const std::string& name, double value) const {
  auto k = param_index(name);
  if (!k) throw ValidationError("system '" + id + "' has no parameter '" + name + "'");
  SystemDef out = *this;
  out.params[*k].value = value;
  return out;
}

SystemDef SystemDef::with_params(const std::vector<double>& values) const {
  if (values.size() != params.size()) throw ValidationError("parameter count mismatch");
  SystemDef out = *this;
  for (std::size_t k = 0; k < values.size(); ++k) out.params[k].value = values[k];
  return out;
}

void check_regular(const SystemDef& sys, const Point& q) {
  if (q.size() != sys.dim()) {
    throw ValidationError("point has " + std::to_string(q.size()) +
                          " coordinates, chart has " + std::to_string(sys.dim()));
  }
  const auto p = sys.param_values();
  for (std::size_t k = 0; k < sys.singular.size(); ++k) {
    const double v = expr::eval(sys.singular[k], q, p);
    if (std::abs(v) < kSingularTol) {
      std::ostringstream os;
      os << "point lies on the singular locus (" << sys.singular_text[k] << " = " << v << ")";
      throw SingularPointError(os.str());
    }
  }
}

void validate_shape(const SystemDef& sys) {
  const std::size_t n = sys.dim();
  if (n == 0) throw ValidationError("empty chart");
  if (sys.metric.size() != n) throw ValidationError("metric must be n x n");
  for (const auto& row : sys.metric) {
    if (row.size() != n) throw ValidationError("metric must be n x n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!(sys.metric[i][j] == sys.metric[j][i])) {
        throw ValidationError("metric entries " + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + " and " + std::to_string(j + 1) +
                              "," + std::to_string(i + 1) + " differ");
      }
    }
  }
  if (sys.levels.empty()) throw ValidationError("missing levels");
  for (std::size_t k = 1; k < sys.levels.size(); ++k) {
    if (sys.levels[k] <= sys.levels[k - 1]) {
      throw ValidationError("levels must be strictly increasing");
    }
  }
  if (sys.levels.back() != n) throw ValidationError("last level must equal chart dimension");
  if (sys.levels.front() == 0) throw ValidationError("first level must be positive");
  if (sys.frame.size() != n && sys.frame.size() != sys.levels.front()) {
    throw ValidationError("frame needs " + std::to_string(n) + " rows (or " +
                          std::to_string(sys.levels.front()) +
                          " rows to generate the complement)");
  }
  for (const auto& row : sys.frame) {
    if (row.size() != n) {
      throw ValidationError("frame rows need " + std::to_string(n) + " components");
    }
  }
  for (const auto& iv : sys.sample_box) {
    if (iv.coord >= n || !(iv.lo <= iv.hi)) throw ValidationError("bad sample interval");
  }
}

Point sample_point(const SystemDef& sys, std::mt19937_64& rng) {
  const auto p = sys.param_values();
  constexpr int kBudget = 1000;
  for (int attempt = 0; attempt < kBudget; ++attempt) {
    Point q(sys.dim());
    for (std::size_t i = 0; i < q.size(); ++i) {
      double lo = -1.0;
      double hi = 1.0;
      for (const auto& iv : sys.sample_box) {
        if (iv.coord == i) {
          lo = iv.lo;
          hi = iv.hi;
        }
      }
      q[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    bool ok = true;
    for (const auto& g : sys.sample_guards) {
      if (std::abs(expr::eval(g.expr, q, p)) < g.bound) {
        ok = false;
        break;
      }
    }
    for (const auto& s : sys.singular) {
      if (ok && std::abs(expr::eval(s, q, p)) < 1e-3) ok = false;
    }
    if (ok) return q;
  }
  throw SingularPointError("could not draw a regular sample point");
}

std::vector<double> sample_params(const SystemDef& sys, std::mt19937_64& rng) {
  std::vector<double> v;
  for (const auto& p : sys.params) {
    v.push_back(p.lo < p.hi ? std::uniform_real_distribution<double>(p.lo, p.hi)(rng)
                            : p.value);
  }
  return v;
}

}  // namespace nhcurv
