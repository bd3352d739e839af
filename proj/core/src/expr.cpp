#include "nhcurv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numbers>
#include <sstream>

namespace nhcurv::expr {
namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_leaf(NodeKind kind, double value, std::size_t slot, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  n->slot = slot;
  n->name = std::move(name);
  return n;
}

NodePtr make_op(NodeKind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const Symbols& symbols)
      : text_(text), symbols_(symbols) {}

  NodePtr parse_all() {
    auto e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced parenthesis", pos_);
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'",
                       pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_op(NodeKind::add, {lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make_op(NodeKind::sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_op(NodeKind::mul, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make_op(NodeKind::div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_op(NodeKind::negate, {parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_base();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == digits) throw ParseError("non-integer exponent", start);
    if (pos_ < text_.size() &&
        (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
         std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
         text_[pos_] == '_')) {
      throw ParseError("non-integer exponent", start);
    }
    int value = 0;
    const auto res =
        std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (res.ec != std::errc()) throw ParseError("exponent out of range", start);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::pow;
    n->exponent = negative ? -value : value;
    n->children = {base};
    return n;
  }

  NodePtr parse_base() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      auto inner = parse_expr();
      if (!accept(')')) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unbalanced parenthesis", pos_);
        (void)open;
        throw ParseError(std::string("expected ')' but found '") + text_[pos_] + "'",
                         pos_);
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      throw ParseError("malformed number", start);
    }
    return make_leaf(NodeKind::constant, value, 0, {});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    auto find = [&](const std::vector<std::string>& names) -> std::ptrdiff_t {
      auto it = std::find(names.begin(), names.end(), name);
      return it == names.end() ? -1 : it - names.begin();
    };
    if (auto k = find(symbols_.chart); k >= 0) {
      return make_leaf(NodeKind::coordinate, 0.0, static_cast<std::size_t>(k), name);
    }
    if (auto k = find(symbols_.params); k >= 0) {
      return make_leaf(NodeKind::parameter, 0.0, static_cast<std::size_t>(k), name);
    }

    static const std::pair<const char*, Func> kFuncs[] = {
        {"sin", Func::sin}, {"cos", Func::cos}, {"tan", Func::tan}, {"sqrt", Func::sqrt}};
    for (const auto& [fname, f] : kFuncs) {
      if (name != fname) continue;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '(') {
        throw ParseError("expected '(' after " + name, pos_);
      }
      ++pos_;
      auto arg = parse_expr();
      if (!accept(')')) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unbalanced parenthesis", pos_);
        throw ParseError(std::string("expected ')' but found '") + text_[pos_] + "'",
                         pos_);
      }
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::call;
      n->func = f;
      n->children = {arg};
      return n;
    }
    if (name == "pi") return make_leaf(NodeKind::constant, std::numbers::pi, 0, {});
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view text_;
  const Symbols& symbols_;
  std::size_t pos_ = 0;
};

const char* func_name(Func f) {
  switch (f) {
    case Func::sin:
      return "sin";
    case Func::cos:
      return "cos";
    case Func::tan:
      return "tan";
    case Func::sqrt:
      return "sqrt";
  }
  return "?";
}

void print(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case NodeKind::constant: {
      std::ostringstream num;
      num.precision(17);
      num << n.value;
      // Negative literals cannot be produced by the parser; keep them atomic.
      if (n.value < 0) {
        os << "(-" << num.str().substr(1) << ")";
      } else {
        os << num.str();
      }
      return;
    }
    case NodeKind::coordinate:
    case NodeKind::parameter:
      os << n.name;
      return;
    case NodeKind::negate:
      os << "(-";
      print(*n.children[0], os);
      os << ")";
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      const char op = n.kind == NodeKind::add   ? '+'
                      : n.kind == NodeKind::sub ? '-'
                      : n.kind == NodeKind::mul ? '*'
                                                : '/';
      os << "(";
      print(*n.children[0], os);
      os << op;
      print(*n.children[1], os);
      os << ")";
      return;
    }
    case NodeKind::pow:
      os << "(";
      print(*n.children[0], os);
      os << ")^" << n.exponent;
      return;
    case NodeKind::call:
      os << func_name(n.func) << "(";
      print(*n.children[0], os);
      os << ")";
      return;
  }
}

}  // namespace

Expr Expr::constant(double value) {
  return Expr(make_leaf(NodeKind::constant, value, 0, {}));
}

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::constant:
      if (a.value != b.value) return false;
      break;
    case NodeKind::coordinate:
    case NodeKind::parameter:
      if (a.slot != b.slot || a.name != b.name) return false;
      break;
    case NodeKind::pow:
      if (a.exponent != b.exponent) return false;
      break;
    case NodeKind::call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

Expr parse(std::string_view text, const Symbols& symbols) {
  return Expr(Parser(text, symbols).parse_all());
}

Expr multiply(const Expr& a, const Expr& b) {
  return Expr(make_op(NodeKind::mul, {a.root_ptr(), b.root_ptr()}));
}

Jet eval_jet(const Expr& e, const Point& point, std::span<const double> params,
             int order) {
  JetSpace space(point, order);
  std::vector<Jet> coords;
  coords.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) coords.push_back(space.variable(i));
  Jet r = e.evaluate<Jet>(coords, params);
  // Constant expressions still carry the requested order and base point.
  if (r.is_exact_constant()) return space.constant(r.value());
  return r;
}

double eval(const Expr& e, std::span<const double> coords,
            std::span<const double> params) {
  return e.evaluate<double>(coords, params);
}

}  // namespace nhcurv::expr
