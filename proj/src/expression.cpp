#include "groundstate/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <utility>

#include "groundstate/error.hpp"

namespace groundstate {

struct Expression::Node {
  enum class Op { constant, var_x, var_y, var_z, add, sub, mul, div, pow, neg, cos, sin, exp, sqrt, abs };
  Op op = Op::constant;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr leaf(Op op, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  return n;
}

NodePtr unary(Op op, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("expression '" + std::string(text_) + "': " + what + " at position " +
                          std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_primary() {
    const char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        lhs = binary(c == '+' ? Op::add : Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = signed_factor();
    for (;;) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        lhs = binary(c == '*' ? Op::mul : Op::div, lhs, signed_factor());
      } else if (starts_primary()) {
        lhs = binary(Op::mul, lhs, power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr signed_factor() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return unary(Op::neg, signed_factor());
    }
    if (c == '+') {
      ++pos_;
      return signed_factor();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return binary(Op::pow, base, signed_factor());
    }
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(c == '\0' ? "unexpected end of input" : "unexpected character");
  }

  NodePtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    // strtod needs a terminated buffer; copy the remainder.
    const std::string rest(begin, text_.size() - pos_);
    const double value = std::strtod(rest.c_str(), &end);
    const auto consumed = static_cast<std::size_t>(end - rest.c_str());
    if (consumed == 0) fail("malformed number");
    pos_ += consumed;
    return leaf(Op::constant, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return leaf(Op::var_x);
    if (name == "y") return leaf(Op::var_y);
    if (name == "z") return leaf(Op::var_z);
    if (name == "pi") return leaf(Op::constant, std::numbers::pi);

    Op op;
    if (name == "cos") {
      op = Op::cos;
    } else if (name == "sin") {
      op = Op::sin;
    } else if (name == "exp") {
      op = Op::exp;
    } else if (name == "sqrt") {
      op = Op::sqrt;
    } else if (name == "abs") {
      op = Op::abs;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (peek() == '(') {
      ++pos_;
      NodePtr arg = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return unary(op, std::move(arg));
    }
    return unary(op, leaf(Op::var_x));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double evaluate(const Node& n, double x, double y, double z) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::var_x:
      return x;
    case Op::var_y:
      return y;
    case Op::var_z:
      return z;
    case Op::add:
      return evaluate(*n.lhs, x, y, z) + evaluate(*n.rhs, x, y, z);
    case Op::sub:
      return evaluate(*n.lhs, x, y, z) - evaluate(*n.rhs, x, y, z);
    case Op::mul:
      return evaluate(*n.lhs, x, y, z) * evaluate(*n.rhs, x, y, z);
    case Op::div:
      return evaluate(*n.lhs, x, y, z) / evaluate(*n.rhs, x, y, z);
    case Op::pow:
      return std::pow(evaluate(*n.lhs, x, y, z), evaluate(*n.rhs, x, y, z));
    case Op::neg:
      return -evaluate(*n.lhs, x, y, z);
    case Op::cos:
      return std::cos(evaluate(*n.lhs, x, y, z));
    case Op::sin:
      return std::sin(evaluate(*n.lhs, x, y, z));
    case Op::exp:
      return std::exp(evaluate(*n.lhs, x, y, z));
    case Op::sqrt:
      return std::sqrt(evaluate(*n.lhs, x, y, z));
    case Op::abs:
      return std::abs(evaluate(*n.lhs, x, y, z));
  }
  return 0.0;
}

}  // namespace

Expression::Expression(std::string_view source) : source_(source), root_(Parser(source).parse()) {}

double Expression::operator()(double x, double y, double z) const { return evaluate(*root_, x, y, z); }

}  // namespace groundstate
