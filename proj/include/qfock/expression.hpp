#pragma once

// Recursive-descent parser and evaluator for deformation-function
// expressions in the variables q and n.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?          right-associative
//   unary  := "-" unary | atom
//   atom   := NUMBER | "q" | "n" | FUNC "(" expr ")" | "(" expr ")"
//   FUNC   := exp | ln | sinh | cosh | tanh | sqrt

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfock {

/// Raised for malformed expression text. `position()` is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, unknown_function };

  ParseError(Kind kind, std::size_t position, const std::string& message)
      : std::runtime_error("at position " + std::to_string(position) + ": " + message),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Raised when a well-formed expression cannot be evaluated to a finite number.
class EvalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class NodeKind { number, var_q, var_n, negate, add, sub, mul, div, pow, func };
enum class Func { exp, ln, sinh, cosh, tanh, sqrt };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;       // number
  Func func = Func::exp;    // func
  std::shared_ptr<const ExprNode> lhs;  // unary operand, function argument, or left operand
  std::shared_ptr<const ExprNode> rhs;
};

inline const char* func_name(Func f) {
  switch (f) {
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::sinh: return "sinh";
    case Func::cosh: return "cosh";
    case Func::tanh: return "tanh";
    case Func::sqrt: return "sqrt";
  }
  return "?";
}

/// Immutable parsed expression. Copies share the node graph.
class ExpressionTree {
 public:
  explicit ExpressionTree(std::shared_ptr<const ExprNode> root, std::string source = {})
      : root_(std::move(root)), source_(std::move(source)) {}

  const ExprNode& root() const { return *root_; }
  const std::string& source() const { return source_; }

  bool uses_variables() const { return uses_variables(*root_); }

  /// Evaluates with the given bindings. Throws EvalError on division by zero
  /// or a non-finite result anywhere in the tree.
  double evaluate(double q, double n) const { return eval(*root_, q, n); }

  /// Prefix rendering, e.g. "(/ (- (^ q n) ...) ...)".
  std::string to_sexpr() const { return sexpr(*root_); }

 private:
  static bool uses_variables(const ExprNode& node) {
    if (node.kind == NodeKind::var_q || node.kind == NodeKind::var_n) return true;
    if (node.lhs && uses_variables(*node.lhs)) return true;
    return node.rhs && uses_variables(*node.rhs);
  }

  static double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite value from ") + what);
    return v;
  }

  static double eval(const ExprNode& node, double q, double n) {
    switch (node.kind) {
      case NodeKind::number: return node.value;
      case NodeKind::var_q: return q;
      case NodeKind::var_n: return n;
      case NodeKind::negate: return -eval(*node.lhs, q, n);
      case NodeKind::add: return checked(eval(*node.lhs, q, n) + eval(*node.rhs, q, n), "+");
      case NodeKind::sub: return checked(eval(*node.lhs, q, n) - eval(*node.rhs, q, n), "-");
      case NodeKind::mul: return checked(eval(*node.lhs, q, n) * eval(*node.rhs, q, n), "*");
      case NodeKind::div: {
        const double num = eval(*node.lhs, q, n);
        const double den = eval(*node.rhs, q, n);
        if (den == 0.0) throw EvalError("division by zero");
        return checked(num / den, "/");
      }
      case NodeKind::pow: return checked(std::pow(eval(*node.lhs, q, n), eval(*node.rhs, q, n)), "^");
      case NodeKind::func: {
        const double x = eval(*node.lhs, q, n);
        double v = 0.0;
        switch (node.func) {
          case Func::exp: v = std::exp(x); break;
          case Func::ln: v = std::log(x); break;
          case Func::sinh: v = std::sinh(x); break;
          case Func::cosh: v = std::cosh(x); break;
          case Func::tanh: v = std::tanh(x); break;
          case Func::sqrt: v = std::sqrt(x); break;
        }
        return checked(v, func_name(node.func));
      }
    }
    throw EvalError("corrupt expression node");
  }

  static std::string sexpr(const ExprNode& node) {
    auto bin = [&](const char* op) {
      return std::string("(") + op + " " + sexpr(*node.lhs) + " " + sexpr(*node.rhs) + ")";
    };
    switch (node.kind) {
      case NodeKind::number: {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, node.value);
        return std::string(buf, res.ptr);
      }
      case NodeKind::var_q: return "q";
      case NodeKind::var_n: return "n";
      case NodeKind::negate: return "(neg " + sexpr(*node.lhs) + ")";
      case NodeKind::add: return bin("+");
      case NodeKind::sub: return bin("-");
      case NodeKind::mul: return bin("*");
      case NodeKind::div: return bin("/");
      case NodeKind::pow: return bin("^");
      case NodeKind::func: return std::string("(") + func_name(node.func) + " " + sexpr(*node.lhs) + ")";
    }
    return "?";
  }

  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::shared_ptr<const ExprNode> parse_all() {
    skip_ws();
    if (pos_ == src_.size()) fail("expected expression, found end of input");
    auto node = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("expected operator or end of input, found " + describe_here());
    return node;
  }

 private:
  using NodePtr = std::shared_ptr<const ExprNode>;

  static NodePtr make(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto node = std::make_shared<ExprNode>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::syntax) const {
    throw ParseError(kind, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string describe_here() const {
    if (pos_ >= src_.size()) return "end of input";
    return std::string("'") + src_[pos_] + "'";
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "', found " + describe_here());
  }

  NodePtr expr() {
    auto node = term();
    for (;;) {
      if (accept('+')) node = make(NodeKind::add, node, term());
      else if (accept('-')) node = make(NodeKind::sub, node, term());
      else return node;
    }
  }

  NodePtr term() {
    auto node = factor();
    for (;;) {
      if (accept('*')) node = make(NodeKind::mul, node, factor());
      else if (accept('/')) node = make(NodeKind::div, node, factor());
      else return node;
    }
  }

  NodePtr factor() {
    auto base = unary();
    if (accept('^')) return make(NodeKind::pow, base, factor());
    return base;
  }

  NodePtr unary() {
    if (accept('-')) return make(NodeKind::negate, unary());
    return atom();
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected number, variable, function or '(', found end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("expected number, variable, function or '(', found " + describe_here());
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++count;
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("expected digits in number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("expected exponent digits, found " + describe_here());
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || end != src_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("number out of range");
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = NodeKind::number;
    node->value = value;
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';

    if (!call) {
      if (name == "q") return make(NodeKind::var_q);
      if (name == "n") return make(NodeKind::var_n);
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "' (expected q or n)", ParseError::Kind::unknown_identifier);
    }

    static constexpr std::pair<std::string_view, Func> kFuncs[] = {
        {"exp", Func::exp}, {"ln", Func::ln}, {"sinh", Func::sinh},
        {"cosh", Func::cosh}, {"tanh", Func::tanh}, {"sqrt", Func::sqrt}};
    std::optional<Func> func;
    for (const auto& [fname, f] : kFuncs)
      if (fname == name) func = f;
    if (!func) {
      pos_ = start;
      fail("unknown function '" + std::string(name) + "'", ParseError::Kind::unknown_function);
    }
    ++pos_;  // '('
    auto arg = expr();
    expect(')');
    auto node = std::make_shared<ExprNode>();
    node->kind = NodeKind::func;
    node->func = *func;
    node->lhs = std::move(arg);
    return node;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExpressionTree parse_deformation(std::string_view source) {
  for (std::size_t i = 0; i < source.size(); ++i)
    if (static_cast<unsigned char>(source[i]) > 0x7f)
      throw ParseError(ParseError::Kind::syntax, i, "non-ASCII character");
  detail::Parser parser(source);
  return ExpressionTree(parser.parse_all(), std::string(source));
}

/// Parses and evaluates an expression that must not reference q or n.
inline double evaluate_constant(std::string_view source) {
  auto tree = parse_deformation(source);
  if (tree.uses_variables()) throw ParseError(ParseError::Kind::unknown_identifier, 0, "constant expression may not use q or n");
  return tree.evaluate(0.0, 0.0);
}

}  // namespace qfock
