#include "pdwg/expression.hpp"

#include "pdwg/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace pdwg {

struct Expression::Node {
  enum class Kind {
    constant, var_x, var_y,
    add, sub, mul, div, pow, neg,
    fn_sin, fn_cos, fn_exp, fn_ln,
  };
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::var_x: return x;
      case Kind::var_y: return y;
      case Kind::add: return a->eval(x, y) + b->eval(x, y);
      case Kind::sub: return a->eval(x, y) - b->eval(x, y);
      case Kind::mul: return a->eval(x, y) * b->eval(x, y);
      case Kind::div: return a->eval(x, y) / b->eval(x, y);
      case Kind::pow: return std::pow(a->eval(x, y), b->eval(x, y));
      case Kind::neg: return -a->eval(x, y);
      case Kind::fn_sin: return std::sin(a->eval(x, y));
      case Kind::fn_cos: return std::cos(a->eval(x, y));
      case Kind::fn_exp: return std::exp(a->eval(x, y));
      case Kind::fn_ln: return std::log(a->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + text_ + "': " + what +
                          " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (consume('+')) left = make(Node::Kind::add, left, term());
      else if (consume('-')) left = make(Node::Kind::sub, left, term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    while (true) {
      if (consume('*')) left = make(Node::Kind::mul, left, unary());
      else if (consume('/')) left = make(Node::Kind::div, left, unary());
      else return left;
    }
  }

  // power binds tighter than unary minus: -x^2 is -(x^2)
  NodePtr unary() {
    if (consume('-')) return make(Node::Kind::neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (consume('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<size_t>(end - begin);
      return make_const(v);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    // UTF-8 pi sign
    if (static_cast<unsigned char>(c) == 0xCF && pos_ + 1 < text_.size() &&
        static_cast<unsigned char>(text_[pos_ + 1]) == 0x80) {
      pos_ += 2;
      return make_const(M_PI);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      const std::string name = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "x") return make(Node::Kind::var_x);
      if (name == "y") return make(Node::Kind::var_y);
      if (name == "pi") return make_const(M_PI);
      Node::Kind fn;
      if (name == "sin") fn = Node::Kind::fn_sin;
      else if (name == "cos") fn = Node::Kind::fn_cos;
      else if (name == "exp") fn = Node::Kind::fn_exp;
      else if (name == "ln") fn = Node::Kind::fn_ln;
      else fail("unknown identifier '" + name + "'");
      if (!consume('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!consume(')')) fail("expected ')'");
      return make(fn, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

} // namespace

Expression Expression::parse(const std::string& text) {
  return Expression(Parser(text).run(), text);
}

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

double Expression::operator()(double x, double y) const {
  return root_->eval(x, y);
}

} // namespace pdwg
