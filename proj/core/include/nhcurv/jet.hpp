#pragma once

// Truncated multivariate Taylor expansions ("jets") of scalar fields.
//
// A Jet of order D over n chart variables carries every partial derivative
// of total order <= D at a fixed base point. Arithmetic and the elementary
// functions propagate all of them exactly (up to rounding), so repeated
// frame derivatives of composite expressions never need finite differences.
//
// Storage is dense in graded-lexicographic order. Internally coefficients
// are normalized Taylor coefficients (d^alpha f / alpha!), which turns the
// product into a plain convolution; partial() converts back.
//
// A Jet without a layout is an exact constant (default 0): it has no base
// point and infinite order, so it combines with any other jet. Mixing
// finite orders is allowed and truncates to the smaller order.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace nhcurv {

using Point = std::vector<double>;

class Jet;

/// Multi-index bookkeeping shared by every jet with the same (vars, order).
/// Layouts are interned and live for the whole process.
class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct DerivativeTerm {
    std::uint32_t src;
    double factor;
  };

  static const JetLayout& get(std::size_t vars, int order);

  std::size_t vars() const noexcept { return vars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return degrees_.size(); }

  /// Layout of the same variables truncated to a lower order.
  const JetLayout& truncated(int order) const;

  int degree(std::size_t k) const noexcept { return degrees_[k]; }
  std::span<const std::uint8_t> exponents(std::size_t k) const noexcept {
    return {exponents_.data() + k * vars_, vars_};
  }

  /// Position of a multi-index; throws NumericalError when |alpha| > order.
  std::size_t index_of(std::span<const int> alpha) const;

  std::span<const ProductTerm> product_terms() const noexcept {
    return products_;
  }

  /// Terms mapping this layout onto the (order - 1) layout for d/dq^var;
  /// entry k gives the coefficient of output slot k.
  std::span<const DerivativeTerm> derivative_terms(std::size_t var) const;

 private:
  JetLayout(std::size_t vars, int order, const JetLayout* lower);

  std::size_t vars_;
  int order_;
  const JetLayout* lower_;
  std::vector<int> degrees_;
  std::vector<std::uint8_t> exponents_;
  std::vector<ProductTerm> products_;
  std::vector<std::vector<DerivativeTerm>> derivatives_;
  std::vector<std::uint64_t> keys_;  // sorted encodings for index_of
  std::vector<std::uint32_t> key_slots_;
};

/// Evaluation context: a base point and a maximal order.
class JetSpace {
 public:
  JetSpace(Point point, int order);

  std::size_t vars() const noexcept { return point_->size(); }
  int order() const noexcept { return layout_->order(); }
  const Point& point() const noexcept { return *point_; }

  Jet constant(double value) const;
  Jet variable(std::size_t i) const;

 private:
  friend class Jet;
  std::shared_ptr<const Point> point_;
  const JetLayout* layout_;
};

class Jet {
 public:
  /// Exact constant zero.
  Jet() = default;
  explicit Jet(double constant) : constant_(constant) {}

  static constexpr int kExactOrder = 1 << 20;

  bool is_exact_constant() const noexcept { return layout_ == nullptr; }

  /// Order of the expansion; exact constants report kExactOrder.
  int order() const noexcept {
    return layout_ ? layout_->order() : kExactOrder;
  }
  /// Number of chart variables; 0 for exact constants.
  std::size_t vars() const noexcept { return layout_ ? layout_->vars() : 0; }
  double value() const noexcept { return layout_ ? coeffs_[0] : constant_; }
  const Point* base_point() const noexcept { return point_.get(); }

  /// d^alpha f at the base point.
  double partial(std::span<const int> alpha) const;
  double partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }

  /// d f / d q^var, one order lower.
  Jet derivative(std::size_t var) const;

  Jet truncated(int order) const;

  /// Normalized Taylor coefficients in layout order.
  std::span<const double> taylor_coefficients() const noexcept {
    return coeffs_;
  }

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(const Jet& f);
  friend Jet operator*(const Jet& lhs, const Jet& rhs);

  /// Univariate composition g(f) from the Taylor coefficients of g at
  /// f.value(): taylor[k] = g^(k)(f0) / k!. Needs taylor.size() > order().
  friend Jet compose(const Jet& f, std::span<const double> taylor);

 private:
  friend class JetSpace;
  Jet(std::shared_ptr<const Point> point, const JetLayout* layout,
      std::vector<double> coeffs)
      : point_(std::move(point)), layout_(layout), coeffs_(std::move(coeffs)) {}

  void check_compatible(const Jet& rhs) const;

  std::shared_ptr<const Point> point_;
  const JetLayout* layout_ = nullptr;
  std::vector<double> coeffs_;
  double constant_ = 0.0;
};

/// Jet of the coordinate function q^i at `point`.
Jet lift_variable(std::size_t i, const Point& point, int order);

inline Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
inline Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
inline Jet operator/(Jet lhs, const Jet& rhs) { return lhs /= rhs; }
inline Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
inline Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
inline Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
inline Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
inline Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
inline Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
inline Jet operator-(double lhs, const Jet& rhs) { return (-rhs) += lhs; }
Jet operator/(double lhs, const Jet& rhs);

Jet sin(const Jet& f);
Jet cos(const Jet& f);
/// Errors when |cos(value)| < 1e-12.
Jet tan(const Jet& f);
/// Errors unless value > 0.
Jet sqrt(const Jet& f);
/// Errors when |value| < 1e-12.
Jet recip(const Jet& f);
Jet pow_int(const Jet& f, int exponent);

/// Threshold below which division and tan report a pole.
inline constexpr double kPoleThreshold = 1e-12;

}  // namespace nhcurv
