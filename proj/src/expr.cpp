#include "jetlag/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <sstream>

namespace jetlag {

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokKind kind = TokKind::End;
  double number = 0.0;
  std::string ident;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    cur_ = Token{};
    cur_.span = {line_, col_, col_};
    if (pos_ >= text_.size()) {
      cur_.kind = TokKind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      cur_.number = std::strtod(start, &end);
      std::size_t len = static_cast<std::size_t>(end - start);
      if (len == 0) {
        throw ParseError("malformed number", line_, col_);
      }
      for (std::size_t i = 0; i < len; ++i) bump();
      cur_.kind = TokKind::Number;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        id += text_[pos_];
        bump();
      }
      cur_.kind = TokKind::Ident;
      cur_.ident = id;
    } else {
      switch (c) {
        case '+': cur_.kind = TokKind::Plus; break;
        case '-': cur_.kind = TokKind::Minus; break;
        case '*': cur_.kind = TokKind::Star; break;
        case '/': cur_.kind = TokKind::Slash; break;
        case '^': cur_.kind = TokKind::Caret; break;
        case '(': cur_.kind = TokKind::LParen; break;
        case ')': cur_.kind = TokKind::RParen; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      bump();
    }
    cur_.span.col_end = col_;
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
};

std::optional<FuncId> func_by_name(const std::string& name) {
  if (name == "sin") return FuncId::Sin;
  if (name == "cos") return FuncId::Cos;
  if (name == "tan") return FuncId::Tan;
  if (name == "exp") return FuncId::Exp;
  if (name == "log") return FuncId::Log;
  if (name == "sqrt") return FuncId::Sqrt;
  if (name == "sinh") return FuncId::Sinh;
  if (name == "cosh") return FuncId::Cosh;
  return std::nullopt;
}

const char* func_name(FuncId fn) {
  switch (fn) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Tan: return "tan";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
    case FuncId::Sqrt: return "sqrt";
    case FuncId::Sinh: return "sinh";
    case FuncId::Cosh: return "cosh";
  }
  return "?";
}

ExprPtr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

class Parser {
 public:
  Parser(const std::string& text, int p, int n) : lex_(text), p_(p), n_(n) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    const Token& t = lex_.peek();
    if (t.kind != TokKind::End) {
      throw ParseError("unexpected trailing input", t.span.line, t.span.col_begin);
    }
    return e;
  }

 private:
  ExprPtr sum() {
    ExprPtr lhs = term();
    while (true) {
      TokKind k = lex_.peek().kind;
      if (k != TokKind::Plus && k != TokKind::Minus) return lhs;
      Token op = lex_.take();
      ExprPtr rhs = term();
      ExprNode node;
      node.kind = k == TokKind::Plus ? ExprKind::Add : ExprKind::Sub;
      node.span = op.span;
      node.children = {lhs, rhs};
      lhs = make_node(std::move(node));
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (true) {
      TokKind k = lex_.peek().kind;
      if (k != TokKind::Star && k != TokKind::Slash) return lhs;
      Token op = lex_.take();
      ExprPtr rhs = unary();
      ExprNode node;
      node.kind = k == TokKind::Star ? ExprKind::Mul : ExprKind::Div;
      node.span = op.span;
      node.children = {lhs, rhs};
      lhs = make_node(std::move(node));
    }
  }

  ExprPtr unary() {
    if (lex_.peek().kind == TokKind::Minus) {
      Token op = lex_.take();
      ExprPtr inner = unary();
      ExprNode node;
      node.kind = ExprKind::Neg;
      node.span = op.span;
      node.children = {inner};
      return make_node(std::move(node));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (lex_.peek().kind != TokKind::Caret) return base;
    Token op = lex_.take();
    // Right-associative; the exponent subtree must fold to a constant.
    ExprPtr expo = lex_.peek().kind == TokKind::Minus ? unary() : power();
    double value = 0.0;
    if (!fold_constant(expo, value)) {
      throw ParseError("exponent of ^ must be a constant expression",
                       expo->span.line, expo->span.col_begin);
    }
    ExprNode node;
    node.kind = ExprKind::Pow;
    node.constant = value;
    node.span = op.span;
    node.children = {base};
    return make_node(std::move(node));
  }

  ExprPtr atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case TokKind::Number: {
        ExprNode node;
        node.kind = ExprKind::Constant;
        node.constant = t.number;
        node.span = t.span;
        return make_node(std::move(node));
      }
      case TokKind::LParen: {
        ExprPtr e = sum();
        Token close = lex_.take();
        if (close.kind != TokKind::RParen) {
          throw ParseError("expected ')'", close.span.line, close.span.col_begin);
        }
        return e;
      }
      case TokKind::Ident:
        return ident_atom(t);
      default:
        throw ParseError("expected a number, variable, function call, or '('",
                         t.span.line, t.span.col_begin);
    }
  }

  ExprPtr ident_atom(const Token& t) {
    if (t.ident == "pi") {
      ExprNode node;
      node.kind = ExprKind::Constant;
      node.constant = std::numbers::pi;
      node.span = t.span;
      return make_node(std::move(node));
    }
    if (auto fn = func_by_name(t.ident)) {
      Token open = lex_.take();
      if (open.kind != TokKind::LParen) {
        throw ParseError("expected '(' after function name '" + t.ident + "'",
                         open.span.line, open.span.col_begin);
      }
      ExprPtr arg = sum();
      Token close = lex_.take();
      if (close.kind != TokKind::RParen) {
        throw ParseError("expected ')' to close call to '" + t.ident + "'",
                         close.span.line, close.span.col_begin);
      }
      ExprNode node;
      node.kind = ExprKind::Call;
      node.fn = *fn;
      node.span = t.span;
      node.children = {arg};
      return make_node(std::move(node));
    }
    if ((t.ident[0] == 't' || t.ident[0] == 'x') && t.ident.size() > 1) {
      bool digits = true;
      for (std::size_t i = 1; i < t.ident.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t.ident[i]))) digits = false;
      }
      if (digits) {
        int idx = std::atoi(t.ident.c_str() + 1);
        bool temporal = t.ident[0] == 't';
        int bound = temporal ? p_ : n_;
        if (idx < 1 || idx > bound) {
          throw ParseError("variable '" + t.ident + "' out of range (limit " +
                               std::to_string(bound) + ")",
                           t.span.line, t.span.col_begin);
        }
        ExprNode node;
        node.kind = temporal ? ExprKind::TemporalVar : ExprKind::SpatialVar;
        node.var_index = idx - 1;
        node.span = t.span;
        return make_node(std::move(node));
      }
    }
    throw ParseError("unknown identifier '" + t.ident + "'", t.span.line, t.span.col_begin);
  }

  static bool fold_constant(const ExprPtr& e, double& out) {
    switch (e->kind) {
      case ExprKind::Constant:
        out = e->constant;
        return true;
      case ExprKind::Neg: {
        double v;
        if (!fold_constant(e->children[0], v)) return false;
        out = -v;
        return true;
      }
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        double a, b;
        if (!fold_constant(e->children[0], a) || !fold_constant(e->children[1], b)) return false;
        switch (e->kind) {
          case ExprKind::Add: out = a + b; break;
          case ExprKind::Sub: out = a - b; break;
          case ExprKind::Mul: out = a * b; break;
          default: out = a / b; break;
        }
        return true;
      }
      case ExprKind::Pow: {
        double a;
        if (!fold_constant(e->children[0], a)) return false;
        out = std::pow(a, e->constant);
        return true;
      }
      default:
        return false;
    }
  }

  Lexer lex_;
  int p_;
  int n_;
};

void print_rec(const ExprPtr& e, std::ostream& os) {
  switch (e->kind) {
    case ExprKind::Constant: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e->constant;
      os << tmp.str();
      break;
    }
    case ExprKind::TemporalVar:
      os << 't' << (e->var_index + 1);
      break;
    case ExprKind::SpatialVar:
      os << 'x' << (e->var_index + 1);
      break;
    case ExprKind::Neg:
      os << "(-";
      print_rec(e->children[0], os);
      os << ')';
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      char op = e->kind == ExprKind::Add   ? '+'
                : e->kind == ExprKind::Sub ? '-'
                : e->kind == ExprKind::Mul ? '*'
                                           : '/';
      os << '(';
      print_rec(e->children[0], os);
      os << op;
      print_rec(e->children[1], os);
      os << ')';
      break;
    }
    case ExprKind::Pow: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e->constant;
      os << '(';
      print_rec(e->children[0], os);
      os << '^';
      std::string es = tmp.str();
      if (!es.empty() && es[0] == '-') {
        os << '(' << es << ')';
      } else {
        os << es;
      }
      os << ')';
      break;
    }
    case ExprKind::Call:
      os << func_name(e->fn) << '(';
      print_rec(e->children[0], os);
      os << ')';
      break;
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& text, int p, int n) {
  if (p < 0 || n < 0) throw ConfigError("parse_expression: negative dimensions");
  return Parser(text, p, n).parse();
}

std::string print_expression(const ExprPtr& e) {
  std::ostringstream os;
  print_rec(e, os);
  return os.str();
}

Jet eval_expression(const ExprPtr& e, const JetEnv& env) {
  switch (e->kind) {
    case ExprKind::Constant: {
      if (env.t.empty() && env.x.empty()) {
        throw ConfigError("eval_expression: empty environment");
      }
      const Jet& ref = !env.t.empty() ? env.t[0] : env.x[0];
      return Jet::constant(e->constant, ref.num_vars(), ref.order());
    }
    case ExprKind::TemporalVar:
      if (static_cast<std::size_t>(e->var_index) >= env.t.size()) {
        throw ConfigError("temporal variable t" + std::to_string(e->var_index + 1) +
                          " unbound in evaluation environment");
      }
      return env.t[static_cast<std::size_t>(e->var_index)];
    case ExprKind::SpatialVar:
      if (static_cast<std::size_t>(e->var_index) >= env.x.size()) {
        throw ConfigError("spatial variable x" + std::to_string(e->var_index + 1) +
                          " unbound in evaluation environment");
      }
      return env.x[static_cast<std::size_t>(e->var_index)];
    default:
      break;
  }
  try {
    switch (e->kind) {
      case ExprKind::Neg:
        return -eval_expression(e->children[0], env);
      case ExprKind::Add:
        return eval_expression(e->children[0], env) + eval_expression(e->children[1], env);
      case ExprKind::Sub:
        return eval_expression(e->children[0], env) - eval_expression(e->children[1], env);
      case ExprKind::Mul:
        return eval_expression(e->children[0], env) * eval_expression(e->children[1], env);
      case ExprKind::Div:
        return eval_expression(e->children[0], env) / eval_expression(e->children[1], env);
      case ExprKind::Pow:
        return pow(eval_expression(e->children[0], env), e->constant);
      case ExprKind::Call: {
        Jet a = eval_expression(e->children[0], env);
        switch (e->fn) {
          case FuncId::Sin: return sin(a);
          case FuncId::Cos: return cos(a);
          case FuncId::Tan: return tan(a);
          case FuncId::Exp: return exp(a);
          case FuncId::Log: return log(a);
          case FuncId::Sqrt: return sqrt(a);
          case FuncId::Sinh: return sinh(a);
          case FuncId::Cosh: return cosh(a);
        }
        break;
      }
      default:
        break;
    }
  } catch (const SingularPointError& err) {
    std::string msg = err.what();
    if (msg.find("(line ") != std::string::npos) throw;  // innermost span wins
    std::ostringstream os;
    os << msg << " (line " << e->span.line << ", col " << e->span.col_begin << ")";
    throw SingularPointError(os.str());
  }
  throw Error("eval_expression: unreachable node kind");
}

bool references_temporal(const ExprPtr& e) {
  if (e->kind == ExprKind::TemporalVar) return true;
  for (const auto& c : e->children) {
    if (references_temporal(c)) return true;
  }
  return false;
}

bool references_spatial(const ExprPtr& e) {
  if (e->kind == ExprKind::SpatialVar) return true;
  for (const auto& c : e->children) {
    if (references_spatial(c)) return true;
  }
  return false;
}

}  // namespace jetlag
