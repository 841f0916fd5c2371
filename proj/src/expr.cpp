#include "lrinv/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace lrinv::expr {

namespace {

constexpr int kMaxDepth = 256;

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  double value = 0.0;
  std::string text;
  std::size_t offset = 0;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  Token next() {
    while (pos < src.size() &&
           (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' || src[pos] == '\r')) {
      ++pos;
    }
    const std::size_t at = pos;
    if (pos >= src.size()) return {Tok::end, 0.0, "", at};
    const char c = src[pos];
    switch (c) {
      case '+': ++pos; return {Tok::plus, 0.0, "+", at};
      case '-': ++pos; return {Tok::minus, 0.0, "-", at};
      case '*': ++pos; return {Tok::star, 0.0, "*", at};
      case '/': ++pos; return {Tok::slash, 0.0, "/", at};
      case '^': ++pos; return {Tok::caret, 0.0, "^", at};
      case '(': ++pos; return {Tok::lparen, 0.0, "(", at};
      case ')': ++pos; return {Tok::rparen, 0.0, ")", at};
      default: break;
    }
    if (is_digit(c) || (c == '.' && pos + 1 < src.size() && is_digit(src[pos + 1]))) {
      return lex_number(at);
    }
    if (is_alpha(c)) {
      while (pos < src.size() && (is_alpha(src[pos]) || is_digit(src[pos]))) ++pos;
      return {Tok::ident, 0.0, std::string(src.substr(at, pos - at)), at};
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
  }

  Token lex_number(std::size_t at) {
    while (pos < src.size() && is_digit(src[pos])) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && is_digit(src[pos])) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      const std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && is_digit(src[pos])) {
        while (pos < src.size() && is_digit(src[pos])) ++pos;
      } else {
        pos = mark;  // "2e" lexes as number 2 followed by identifier e
      }
    }
    const std::string_view sv = src.substr(at, pos - at);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size()) {
      throw ParseError("malformed number '" + std::string(sv) + "'", at);
    }
    return {Tok::number, v, std::string(sv), at};
  }
};

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_node(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool lookup_func(const std::string& name, Func& out) {
  if (name == "sin") out = Func::sin;
  else if (name == "cos") out = Func::cos;
  else if (name == "tan") out = Func::tan;
  else if (name == "exp") out = Func::exp;
  else if (name == "log") out = Func::log;
  else if (name == "sqrt") out = Func::sqrt;
  else if (name == "abs") out = Func::abs;
  else return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_{src, 0} { advance(); }

  NodePtr run() {
    NodePtr e = parse_expr(0);
    if (cur_.kind != Tok::end) {
      throw ParseError("unexpected trailing input; expected an operator or end of input",
                       cur_.offset);
    }
    return e;
  }

 private:
  Lexer lex_;
  Token cur_;

  void advance() { cur_ = lex_.next(); }

  static void check_depth(int depth, std::size_t offset) {
    if (depth > kMaxDepth) throw ParseError("expression nests too deeply", offset);
  }

  NodePtr parse_expr(int depth) {
    check_depth(depth, cur_.offset);
    NodePtr lhs = parse_term(depth + 1);
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const bool add = cur_.kind == Tok::plus;
      advance();
      NodePtr rhs = parse_term(depth + 1);
      lhs = make_node(add ? Node::Kind::add : Node::Kind::sub, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_term(int depth) {
    check_depth(depth, cur_.offset);
    NodePtr lhs = parse_factor(depth + 1);
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const bool mul = cur_.kind == Tok::star;
      advance();
      NodePtr rhs = parse_factor(depth + 1);
      lhs = make_node(mul ? Node::Kind::mul : Node::Kind::div, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_factor(int depth) {
    check_depth(depth, cur_.offset);
    if (cur_.kind == Tok::minus) {
      advance();
      return make_node(Node::Kind::negate, parse_factor(depth + 1));
    }
    return parse_power(depth + 1);
  }

  NodePtr parse_power(int depth) {
    check_depth(depth, cur_.offset);
    NodePtr base = parse_atom(depth + 1);
    if (cur_.kind == Tok::caret) {
      advance();
      NodePtr exponent = parse_factor(depth + 1);  // right-associative
      return make_node(Node::Kind::pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  NodePtr parse_atom(int depth) {
    check_depth(depth, cur_.offset);
    switch (cur_.kind) {
      case Tok::number: {
        const double v = cur_.value;
        advance();
        return make_const(v);
      }
      case Tok::lparen: {
        advance();
        NodePtr e = parse_expr(depth + 1);
        if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.offset);
        advance();
        return e;
      }
      case Tok::ident: {
        const std::string name = cur_.text;
        const std::size_t at = cur_.offset;
        advance();
        if (name == "t") {
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::time_var;
          return n;
        }
        Func f{};
        if (cur_.kind != Tok::lparen) {
          if (lookup_func(name, f)) {
            throw ParseError("function '" + name + "' needs a parenthesized argument",
                             cur_.offset);
          }
          throw ParseError("unknown variable '" + name + "'; only 't' is available", at);
        }
        if (!lookup_func(name, f)) {
          throw ParseError("unknown function '" + name +
                               "'; available: sin, cos, tan, exp, log, sqrt, abs",
                           at);
        }
        advance();  // consume '('
        NodePtr arg = parse_expr(depth + 1);
        if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.offset);
        advance();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->func = f;
        n->lhs = std::move(arg);
        return n;
      }
      default:
        throw ParseError("expected a number, 't', a function name, '(' or '-'", cur_.offset);
    }
  }
};

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
  }
  return "?";
}

double ensure_finite(double v, const char* what, double t) {
  if (!std::isfinite(v)) {
    throw EvalError(std::string("non-finite result from '") + what + "' at t=" + fmt(t));
  }
  return v;
}

double eval_node(const Node& n, double t) {
  switch (n.kind) {
    case Node::Kind::constant: return n.value;
    case Node::Kind::time_var: return t;
    case Node::Kind::negate: return -eval_node(*n.lhs, t);
    case Node::Kind::add: return ensure_finite(eval_node(*n.lhs, t) + eval_node(*n.rhs, t), "+", t);
    case Node::Kind::sub: return ensure_finite(eval_node(*n.lhs, t) - eval_node(*n.rhs, t), "-", t);
    case Node::Kind::mul: return ensure_finite(eval_node(*n.lhs, t) * eval_node(*n.rhs, t), "*", t);
    case Node::Kind::div: return ensure_finite(eval_node(*n.lhs, t) / eval_node(*n.rhs, t), "/", t);
    case Node::Kind::pow:
      return ensure_finite(std::pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t)), "^", t);
    case Node::Kind::call: {
      const double a = eval_node(*n.lhs, t);
      double v = 0.0;
      switch (n.func) {
        case Func::sin: v = std::sin(a); break;
        case Func::cos: v = std::cos(a); break;
        case Func::tan: v = std::tan(a); break;
        case Func::exp: v = std::exp(a); break;
        case Func::log: v = std::log(a); break;
        case Func::sqrt: v = std::sqrt(a); break;
        case Func::abs: v = std::abs(a); break;
      }
      return ensure_finite(v, func_name(n.func), t);
    }
  }
  throw EvalError("corrupt expression node");
}

// Precedence classes used by the printer; must agree with the grammar.
int prec(const Node& n) {
  switch (n.kind) {
    case Node::Kind::add:
    case Node::Kind::sub: return 1;
    case Node::Kind::mul:
    case Node::Kind::div: return 2;
    case Node::Kind::negate: return 3;
    case Node::Kind::pow: return 4;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_wrapped(const Node& n, std::string& out, bool wrap) {
  if (wrap) out += '(';
  print_node(n, out);
  if (wrap) out += ')';
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::constant:
      if (std::signbit(n.value)) {
        // Negative constants cannot come out of the parser, but keep the
        // printed form reparseable for programmatically built trees.
        out += "(-";
        out += fmt(-n.value);
        out += ')';
      } else {
        out += fmt(n.value);
      }
      return;
    case Node::Kind::time_var: out += 't'; return;
    case Node::Kind::negate:
      out += '-';
      print_wrapped(*n.lhs, out, prec(*n.lhs) < 3);
      return;
    case Node::Kind::add:
    case Node::Kind::sub: {
      print_wrapped(*n.lhs, out, prec(*n.lhs) < 1);
      out += n.kind == Node::Kind::add ? '+' : '-';
      // Same-precedence right operands stay parenthesized so the reparsed
      // tree (and therefore floating-point evaluation order) is identical.
      print_wrapped(*n.rhs, out, prec(*n.rhs) <= 1);
      return;
    }
    case Node::Kind::mul:
    case Node::Kind::div: {
      print_wrapped(*n.lhs, out, prec(*n.lhs) < 2);
      out += n.kind == Node::Kind::mul ? '*' : '/';
      print_wrapped(*n.rhs, out, prec(*n.rhs) <= 2);
      return;
    }
    case Node::Kind::pow:
      print_wrapped(*n.lhs, out, prec(*n.lhs) < 5);  // base must be an atom
      out += '^';
      print_wrapped(*n.rhs, out, prec(*n.rhs) < 3);  // "-x" and "a^b" are factors
      return;
    case Node::Kind::call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

ExprAst ExprAst::parse(std::string_view source) {
  Parser p(source);
  return ExprAst(p.run());
}

double ExprAst::evaluate(double t) const { return eval_node(*root_, t); }

std::string ExprAst::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

TimeFunction::TimeFunction()
    : fn_(std::make_shared<const std::function<double(double)>>([](double) { return 0.0; })),
      label_("0") {}

TimeFunction TimeFunction::parse(std::string_view source) {
  TimeFunction f;
  f.ast_ = std::make_shared<const ExprAst>(ExprAst::parse(source));
  f.fn_ = nullptr;
  f.label_ = std::string(source);
  return f;
}

TimeFunction TimeFunction::constant(double value) {
  TimeFunction f;
  f.fn_ = std::make_shared<const std::function<double(double)>>(
      [value](double) { return value; });
  f.label_ = fmt(value);
  return f;
}

TimeFunction TimeFunction::native(std::string label, std::function<double(double)> fn) {
  TimeFunction f;
  f.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  f.label_ = std::move(label);
  return f;
}

double TimeFunction::operator()(double t) const {
  if (ast_) return ast_->evaluate(t);
  const double v = (*fn_)(t);
  if (!std::isfinite(v)) {
    throw EvalError("time function '" + label_ + "' returned a non-finite value at t=" + fmt(t));
  }
  return v;
}

}  // namespace lrinv::expr
