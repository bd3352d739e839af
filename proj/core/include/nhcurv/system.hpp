#pragma once

// System definition: chart, parameters, ambient metric, adapted frame and
// flag levels, all as parsed expressions.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nhcurv/expr.hpp"

namespace nhcurv {

struct ParamSpec {
  std::string name;
  double value = 0.0;
  // Range used when parameters are drawn at random.
  double lo = 0.0;
  double hi = 0.0;
};

struct SampleInterval {
  std::size_t coord = 0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Accept a sample only where |expr| >= bound.
struct SampleGuard {
  expr::Expr expr;
  double bound = 0.0;
  std::string text;
};

struct SystemDef {
  std::string id;
  std::vector<std::string> chart;
  std::vector<ParamSpec> params;
  /// Full symmetric n x n table g_ij.
  std::vector<std::vector<expr::Expr>> metric;
  /// Rows e_a with entries B^i_a. Either n rows, or only the first m rows
  /// when the complement is generated automatically.
  std::vector<std::vector<expr::Expr>> frame;
  std::vector<std::size_t> levels;
  /// Zero sets of these expressions are excluded.
  std::vector<expr::Expr> singular;
  std::vector<std::string> singular_text;
  std::vector<SampleInterval> sample_box;
  std::vector<SampleGuard> sample_guards;

  std::size_t dim() const noexcept { return chart.size(); }
  std::size_t rank() const noexcept { return levels.empty() ? 0 : levels.front(); }
  int degree() const noexcept { return static_cast<int>(levels.size()) - 1; }
  bool auto_frame() const noexcept { return frame.size() < dim(); }

  expr::Symbols symbols() const;
  std::vector<double> param_values() const;
  std::optional<std::size_t> param_index(const std::string& name) const;
  std::size_t coord_index(const std::string& name) const;

  SystemDef with_param(const std::string& name, double value) const;
  SystemDef with_params(const std::vector<double>& values) const;
};

/// Absolute threshold on the singular expressions.
inline constexpr double kSingularTol = 1e-9;

/// Throws SingularPointError when a declared singular expression vanishes.
void check_regular(const SystemDef& sys, const Point& q);

/// Structural checks (sizes, symmetry, level ordering); throws ValidationError.
void validate_shape(const SystemDef& sys);

Point sample_point(const SystemDef& sys, std::mt19937_64& rng);
std::vector<double> sample_params(const SystemDef& sys, std::mt19937_64& rng);

}  // namespace nhcurv
