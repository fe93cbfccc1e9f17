#include "geodecomp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "geodecomp/errors.hpp"
#include "geodecomp/numerics.hpp"

namespace geodecomp {

namespace {

enum class Op {
  Const, VarR, VarTheta, VarX,
  Add, Sub, Mul, Div, Pow, Neg,
  Cosh, Sinh, Tanh, Exp, Log, Sqrt, Abs, Cos, Sin,
};

} // namespace

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

double Expr::eval(const ExprEnv& env) const {
  struct Eval {
    const ExprEnv& e;
    double run(const Node& n) const {
      switch (n.op) {
        case Op::Const: return n.value;
        case Op::VarR: return e.r;
        case Op::VarTheta: return e.theta;
        case Op::VarX: return e.x;
        case Op::Add: return run(*n.a) + run(*n.b);
        case Op::Sub: return run(*n.a) - run(*n.b);
        case Op::Mul: return run(*n.a) * run(*n.b);
        case Op::Div: return run(*n.a) / run(*n.b);
        case Op::Pow: return std::pow(run(*n.a), run(*n.b));
        case Op::Neg: return -run(*n.a);
        case Op::Cosh: return std::cosh(run(*n.a));
        case Op::Sinh: return std::sinh(run(*n.a));
        case Op::Tanh: return std::tanh(run(*n.a));
        case Op::Exp: return std::exp(run(*n.a));
        case Op::Log: return std::log(run(*n.a));
        case Op::Sqrt: return std::sqrt(run(*n.a));
        case Op::Abs: return std::abs(run(*n.a));
        case Op::Cos: return std::cos(run(*n.a));
        case Op::Sin: return std::sin(run(*n.a));
      }
      return 0.0;
    }
  };
  return Eval{env}.run(*root_);
}

namespace {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
  double number = 0.0;
  std::string ident;
  int line = 1, col = 1;
};

class Lexer {
public:
  Lexer(const std::string& text, int line0, int col0)
      : text_(text), line_(line0), col_(col0) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      t.number = std::strtod(begin, &end);
      if (end == begin)
        fail(ErrorCode::ParseError, err("malformed number"));
      std::size_t len = static_cast<std::size_t>(end - begin);
      advance(len);
      t.kind = Token::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance(1);
      t.kind = Token::Ident;
      t.ident = text_.substr(start, pos_ - start);
      return t;
    }
    advance(1);
    switch (c) {
      case '+': t.kind = Token::Plus; return t;
      case '-': t.kind = Token::Minus; return t;
      case '*': t.kind = Token::Star; return t;
      case '/': t.kind = Token::Slash; return t;
      case '^': t.kind = Token::Caret; return t;
      case '(': t.kind = Token::LParen; return t;
      case ')': t.kind = Token::RParen; return t;
      default:
        fail(ErrorCode::ParseError,
             err(std::string("unexpected character '") + c + "'"));
    }
    return t; // unreachable
  }

  std::string err(const std::string& msg) const {
    std::ostringstream os;
    os << "expression error at line " << line_ << ", column " << col_ << ": " << msg;
    return os.str();
  }

private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }
  void advance(std::size_t n) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_, col_;
};

using NodePtr = std::shared_ptr<const Expr::Node>;

} // namespace

// Recursive descent: expr := term (('+'|'-') term)*
//                    term := factor (('*'|'/') factor)*
//                    factor := unary ('^' factor)?
//                    unary := '-'* primary
//                    primary := number | const | var | fn '(' expr ')' | '(' expr ')'
namespace {

class Parser {
public:
  Parser(const std::string& text, const std::string& allowed, int line0, int col0)
      : lex_(text, line0, col0), allowed_(allowed) {
    cur_ = lex_.next();
  }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (cur_.kind != Token::End)
      fail(ErrorCode::ParseError, at_cur("trailing input after expression"));
    return e;
  }

  bool uses_r = false, uses_theta = false, uses_x = false;

private:
  std::string at_cur(const std::string& msg) const {
    std::ostringstream os;
    os << "expression error at line " << cur_.line << ", column " << cur_.col
       << ": " << msg;
    return os.str();
  }

  void bump() { cur_ = lex_.next(); }

  NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->value = v;
    return n;
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
      Op op = cur_.kind == Token::Plus ? Op::Add : Op::Sub;
      bump();
      e = make(op, e, parse_term());
    }
    return e;
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    while (cur_.kind == Token::Star || cur_.kind == Token::Slash) {
      Op op = cur_.kind == Token::Star ? Op::Mul : Op::Div;
      bump();
      e = make(op, e, parse_factor());
    }
    return e;
  }

  // Unary minus binds looser than ^, so -r^2 means -(r^2).
  NodePtr parse_factor() {
    if (cur_.kind == Token::Minus) {
      bump();
      return make(Op::Neg, parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (cur_.kind == Token::Caret) {
      bump();
      return make(Op::Pow, base, parse_factor()); // right associative
    }
    return base;
  }

  NodePtr parse_primary() {
    if (cur_.kind == Token::Number) {
      double v = cur_.number;
      bump();
      return make(Op::Const, nullptr, nullptr, v);
    }
    if (cur_.kind == Token::LParen) {
      bump();
      NodePtr e = parse_expr();
      if (cur_.kind != Token::RParen)
        fail(ErrorCode::ParseError, at_cur("expected ')'"));
      bump();
      return e;
    }
    if (cur_.kind == Token::Ident) {
      std::string name = cur_.ident;
      Token ident_tok = cur_;
      bump();
      if (cur_.kind == Token::LParen) {
        Op op;
        if (name == "cosh") op = Op::Cosh;
        else if (name == "sinh") op = Op::Sinh;
        else if (name == "tanh") op = Op::Tanh;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "sqrt") op = Op::Sqrt;
        else if (name == "abs") op = Op::Abs;
        else if (name == "cos") op = Op::Cos;
        else if (name == "sin") op = Op::Sin;
        else {
          std::ostringstream os;
          os << "expression error at line " << ident_tok.line << ", column "
             << ident_tok.col << ": unknown function '" << name << "'";
          fail(ErrorCode::ParseError, os.str());
        }
        bump();
        NodePtr arg = parse_expr();
        if (cur_.kind != Token::RParen)
          fail(ErrorCode::ParseError, at_cur("expected ')' closing function call"));
        bump();
        return make(op, arg);
      }
      if (name == "pi") return make(Op::Const, nullptr, nullptr, kPi);
      if (name == "e") return make(Op::Const, nullptr, nullptr, std::exp(1.0));
      if (name == "r" || name == "theta" || name == "x") {
        char key = name == "theta" ? 't' : name[0];
        if (allowed_.find(key) == std::string::npos) {
          std::ostringstream os;
          os << "expression error at line " << ident_tok.line << ", column "
             << ident_tok.col << ": variable '" << name
             << "' is not allowed in this context";
          fail(ErrorCode::ParseError, os.str());
        }
        if (name == "r") { uses_r = true; return make(Op::VarR); }
        if (name == "theta") { uses_theta = true; return make(Op::VarTheta); }
        uses_x = true;
        return make(Op::VarX);
      }
      std::ostringstream os;
      os << "expression error at line " << ident_tok.line << ", column "
         << ident_tok.col << ": unknown identifier '" << name << "'";
      fail(ErrorCode::ParseError, os.str());
    }
    fail(ErrorCode::ParseError, at_cur("expected a value"));
    return nullptr; // unreachable
  }

  Lexer lex_;
  Token cur_;
  std::string allowed_;
};

} // namespace

Expr Expr::parse(const std::string& text, const std::string& allowed, int line0,
                 int col0) {
  Parser p(text, allowed, line0, col0);
  Expr e;
  e.root_ = p.parse_all();
  e.source_ = text;
  e.uses_r_ = p.uses_r;
  e.uses_theta_ = p.uses_theta;
  e.uses_x_ = p.uses_x;
  return e;
}

} // namespace geodecomp
