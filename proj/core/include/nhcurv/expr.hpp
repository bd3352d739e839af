#pragma once

// Scalar-field expressions over chart coordinates and named parameters.
//
// Grammar (whitespace ignored):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := base ('^' ['-'] integer)?
//   base   := number | ident | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | tan | sqrt
// '^' binds tighter than unary minus, so -x^2 is -(x^2). Identifiers must
// be declared chart or parameter names; `pi` is predeclared unless shadowed.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nhcurv/errors.hpp"
#include "nhcurv/jet.hpp"

namespace nhcurv::expr {

enum class NodeKind { constant, coordinate, parameter, negate, add, sub, mul, div, pow, call };
enum class Func { sin, cos, tan, sqrt };

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;          // constant
  std::size_t slot = 0;        // coordinate / parameter index
  std::string name;            // coordinate / parameter name
  Func func = Func::sin;       // call
  int exponent = 0;            // pow
  std::vector<std::shared_ptr<const Node>> children;
};

struct Symbols {
  std::vector<std::string> chart;
  std::vector<std::string> params;
};

/// Immutable expression tree.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static Expr constant(double value);

  const Node& root() const { return *root_; }
  const std::shared_ptr<const Node>& root_ptr() const { return root_; }
  bool empty() const noexcept { return root_ == nullptr; }

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  /// Homomorphic evaluation; T is double or Jet.
  template <class T>
  T evaluate(std::span<const T> coords, std::span<const double> params) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const Node> root_;
};

bool structurally_equal(const Node& a, const Node& b);
inline bool operator==(const Expr& a, const Expr& b) {
  return structurally_equal(*a.root_, *b.root_);
}

Expr parse(std::string_view text, const Symbols& symbols);

/// a * b as a tree node.
Expr multiply(const Expr& a, const Expr& b);

/// Jet of the expression at `point`, with coordinates lifted to order D.
Jet eval_jet(const Expr& e, const Point& point, std::span<const double> params,
             int order);

double eval(const Expr& e, std::span<const double> coords,
            std::span<const double> params);

// ---------------------------------------------------------------------------

namespace detail {

inline double apply(Func f, double x) {
  switch (f) {
    case Func::sin:
      return std::sin(x);
    case Func::cos:
      return std::cos(x);
    case Func::tan:
      if (std::abs(std::cos(x)) < kPoleThreshold) {
        throw NumericalError("tan pole at value " + std::to_string(x));
      }
      return std::tan(x);
    case Func::sqrt:
      if (x < 0.0) throw NumericalError("sqrt of negative value");
      return std::sqrt(x);
  }
  return 0.0;
}

inline Jet apply(Func f, const Jet& x) {
  switch (f) {
    case Func::sin:
      return sin(x);
    case Func::cos:
      return cos(x);
    case Func::tan:
      return tan(x);
    case Func::sqrt:
      return sqrt(x);
  }
  return Jet();
}

inline double power(double x, int e) {
  if (e < 0 && std::abs(x) < kPoleThreshold) {
    throw NumericalError("division by zero in negative power");
  }
  return std::pow(x, e);
}
inline Jet power(const Jet& x, int e) { return pow_int(x, e); }

inline double divide(double a, double b) {
  if (std::abs(b) < kPoleThreshold) throw NumericalError("division by zero");
  return a / b;
}
inline Jet divide(const Jet& a, const Jet& b) { return a / b; }

template <class T>
T lift_constant(double v) {
  return T(v);
}

template <class T>
T evaluate_node(const Node& n, std::span<const T> coords,
                std::span<const double> params) {
  switch (n.kind) {
    case NodeKind::constant:
      return lift_constant<T>(n.value);
    case NodeKind::coordinate:
      return coords[n.slot];
    case NodeKind::parameter:
      return lift_constant<T>(params[n.slot]);
    case NodeKind::negate:
      return -evaluate_node<T>(*n.children[0], coords, params);
    case NodeKind::add:
      return evaluate_node<T>(*n.children[0], coords, params) +
             evaluate_node<T>(*n.children[1], coords, params);
    case NodeKind::sub:
      return evaluate_node<T>(*n.children[0], coords, params) -
             evaluate_node<T>(*n.children[1], coords, params);
    case NodeKind::mul:
      return evaluate_node<T>(*n.children[0], coords, params) *
             evaluate_node<T>(*n.children[1], coords, params);
    case NodeKind::div:
      return divide(evaluate_node<T>(*n.children[0], coords, params),
                    evaluate_node<T>(*n.children[1], coords, params));
    case NodeKind::pow:
      return power(evaluate_node<T>(*n.children[0], coords, params), n.exponent);
    case NodeKind::call:
      return apply(n.func, evaluate_node<T>(*n.children[0], coords, params));
  }
  return lift_constant<T>(0.0);
}

}  // namespace detail

template <class T>
T Expr::evaluate(std::span<const T> coords, std::span<const double> params) const {
  return detail::evaluate_node<T>(*root_, coords, params);
}

}  // namespace nhcurv::expr
