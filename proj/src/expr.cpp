#include "infmat/expr.hpp"

#include <memory>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace infmat::expr {

ParseError::ParseError(std::size_t position, std::string expected,
                       std::string found)
    : Error("E_PARSE", "parse error at offset " + std::to_string(position) +
                           ": expected " + expected + ", found '" + found +
                           "'"),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

EvalError::EvalError(Kind kind, const std::string& message)
    : Error(kind == Kind::division_by_zero ? "E_EVAL_DIVZERO"
            : kind == Kind::domain         ? "E_EVAL_DOMAIN"
                                           : "E_EVAL_UNBOUND",
            message),
      kind_(kind) {}

namespace {

struct FunctionInfo {
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<FunctionInfo, 8> kFunctions{{
    {"if", 3},
    {"delta", 2},
    {"fact", 1},
    {"exp", 1},
    {"ln", 1},
    {"abs", 1},
    {"min", 2},
    {"max", 2},
}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& info : kFunctions)
    if (info.name == name) return &info;
  return nullptr;
}

enum class TokenKind {
  number,
  identifier,
  plus,
  minus,
  star,
  slash,
  caret,
  equal_equal,
  lparen,
  rparen,
  comma,
  end,
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::size_t position = 0;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    Token tok;
    tok.position = pos_;
    if (pos_ >= src_.size()) {
      tok.kind = TokenKind::end;
      return tok;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) ||
              src_[end] == '_'))
        ++end;
      tok.kind = TokenKind::identifier;
      tok.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return tok;
    }
    tok.text = std::string(1, c);
    ++pos_;
    switch (c) {
      case '+': tok.kind = TokenKind::plus; return tok;
      case '-': tok.kind = TokenKind::minus; return tok;
      case '*': tok.kind = TokenKind::star; return tok;
      case '/': tok.kind = TokenKind::slash; return tok;
      case '^': tok.kind = TokenKind::caret; return tok;
      case '(': tok.kind = TokenKind::lparen; return tok;
      case ')': tok.kind = TokenKind::rparen; return tok;
      case ',': tok.kind = TokenKind::comma; return tok;
      case '=':
        if (pos_ < src_.size() && src_[pos_] == '=') {
          ++pos_;
          tok.kind = TokenKind::equal_equal;
          tok.text = "==";
          return tok;
        }
        break;
      default:
        break;
    }
    throw ParseError(tok.position, "token", tok.text);
  }

 private:
  Token lex_number() {
    Token tok;
    tok.position = pos_;
    std::size_t end = pos_;
    bool digits = false;
    while (end < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[end]))) {
      ++end;
      digits = true;
    }
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[end]))) {
        ++end;
        digits = true;
      }
    }
    if (!digits)
      throw ParseError(pos_, "number", std::string(src_.substr(pos_, end - pos_)));
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
      if (exp < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[exp]))) {
        while (exp < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[exp])))
          ++exp;
        end = exp;
      }
    }
    tok.kind = TokenKind::number;
    tok.text = std::string(src_.substr(pos_, end - pos_));
    tok.number = std::strtod(tok.text.c_str(), nullptr);
    pos_ = end;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  Node parse() {
    Node root = comparison();
    if (current_.kind != TokenKind::end)
      throw ParseError(current_.position, "end of input", current_.text);
    return root;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  static std::string describe(const Token& tok) {
    return tok.kind == TokenKind::end ? "end of input" : tok.text;
  }

  static Node binary(NodeKind kind, Node lhs, Node rhs) {
    Node node;
    node.kind = kind;
    node.args.push_back(std::move(lhs));
    node.args.push_back(std::move(rhs));
    return node;
  }

  Node comparison() {
    Node lhs = additive();
    if (current_.kind == TokenKind::equal_equal) {
      advance();
      lhs = binary(NodeKind::equal, std::move(lhs), additive());
    }
    return lhs;
  }

  Node additive() {
    Node lhs = multiplicative();
    while (current_.kind == TokenKind::plus ||
           current_.kind == TokenKind::minus) {
      const NodeKind kind =
          current_.kind == TokenKind::plus ? NodeKind::add : NodeKind::subtract;
      advance();
      lhs = binary(kind, std::move(lhs), multiplicative());
    }
    return lhs;
  }

  Node multiplicative() {
    Node lhs = unary();
    while (current_.kind == TokenKind::star ||
           current_.kind == TokenKind::slash) {
      const NodeKind kind = current_.kind == TokenKind::star
                                ? NodeKind::multiply
                                : NodeKind::divide;
      advance();
      lhs = binary(kind, std::move(lhs), unary());
    }
    return lhs;
  }

  Node unary() {
    if (current_.kind == TokenKind::minus) {
      advance();
      Node node;
      node.kind = NodeKind::negate;
      node.args.push_back(unary());
      return node;
    }
    return power();
  }

  Node power() {
    Node base = atom();
    if (current_.kind == TokenKind::caret) {
      advance();
      return binary(NodeKind::power, std::move(base), unary());
    }
    return base;
  }

  Node atom() {
    const Token tok = current_;
    switch (tok.kind) {
      case TokenKind::number: {
        advance();
        Node node;
        node.kind = NodeKind::number;
        node.value = tok.number;
        return node;
      }
      case TokenKind::lparen: {
        advance();
        Node inner = comparison();
        expect(TokenKind::rparen, "')'");
        return inner;
      }
      case TokenKind::identifier:
        return identifier(tok);
      default:
        throw ParseError(tok.position, "expression", describe(tok));
    }
  }

  Node identifier(const Token& tok) {
    advance();
    if (tok.text == "i" || tok.text == "j" || tok.text == "k") {
      Node node;
      node.kind = NodeKind::variable;
      node.variable = tok.text[0];
      return node;
    }
    const FunctionInfo* info = find_function(tok.text);
    if (info == nullptr)
      throw ParseError(tok.position, "variable i, j, k or a function name",
                       tok.text);
    expect(TokenKind::lparen, "'('");
    Node node;
    node.kind = NodeKind::call;
    node.function = tok.text;
    if (current_.kind != TokenKind::rparen) {
      node.args.push_back(comparison());
      while (current_.kind == TokenKind::comma) {
        advance();
        node.args.push_back(comparison());
      }
    }
    if (node.args.size() != info->arity)
      throw ParseError(tok.position,
                       std::to_string(info->arity) + " argument(s) to " +
                           tok.text,
                       std::to_string(node.args.size()) + " argument(s)");
    expect(TokenKind::rparen, "')'");
    return node;
  }

  void expect(TokenKind kind, const char* what) {
    if (current_.kind != kind)
      throw ParseError(current_.position, what, describe(current_));
    advance();
  }

  Lexer lexer_;
  Token current_;
};

double factorial(double n) {
  const double rounded = std::round(n);
  if (n < 0.0 || std::abs(n - rounded) > 1e-9)
    throw EvalError(EvalError::Kind::domain,
                    "fact requires a non-negative integer");
  double result = 1.0;
  for (double f = 2.0; f <= rounded && std::isfinite(result); f += 1.0)
    result *= f;
  return result;
}

double evaluate(const Node& node, const Bindings& b) {
  switch (node.kind) {
    case NodeKind::number:
      return node.value;
    case NodeKind::variable: {
      const auto& slot = node.variable == 'i'   ? b.i
                         : node.variable == 'j' ? b.j
                                                : b.k;
      if (!slot)
        throw EvalError(EvalError::Kind::unbound_variable,
                        std::string("unbound variable ") + node.variable);
      return *slot;
    }
    case NodeKind::negate:
      return -evaluate(node.args[0], b);
    case NodeKind::add:
      return evaluate(node.args[0], b) + evaluate(node.args[1], b);
    case NodeKind::subtract:
      return evaluate(node.args[0], b) - evaluate(node.args[1], b);
    case NodeKind::multiply:
      return evaluate(node.args[0], b) * evaluate(node.args[1], b);
    case NodeKind::divide: {
      const double num = evaluate(node.args[0], b);
      const double den = evaluate(node.args[1], b);
      if (den == 0.0)
        throw EvalError(EvalError::Kind::division_by_zero, "division by zero");
      return num / den;
    }
    case NodeKind::power: {
      const double base = evaluate(node.args[0], b);
      const double exponent = evaluate(node.args[1], b);
      const double result = std::pow(base, exponent);
      if (std::isnan(result) && !std::isnan(base) && !std::isnan(exponent))
        throw EvalError(EvalError::Kind::domain,
                        "power of a negative base to a non-integer exponent");
      if (base == 0.0 && exponent < 0.0)
        throw EvalError(EvalError::Kind::division_by_zero,
                        "zero raised to a negative power");
      return result;
    }
    case NodeKind::equal:
      return evaluate(node.args[0], b) == evaluate(node.args[1], b) ? 1.0 : 0.0;
    case NodeKind::call:
      break;
  }

  const std::string& fn = node.function;
  if (fn == "if")
    return evaluate(node.args[0], b) != 0.0 ? evaluate(node.args[1], b)
                                            : evaluate(node.args[2], b);
  if (fn == "delta")
    return evaluate(node.args[0], b) == evaluate(node.args[1], b) ? 1.0 : 0.0;
  if (fn == "fact") return factorial(evaluate(node.args[0], b));
  if (fn == "exp") return std::exp(evaluate(node.args[0], b));
  if (fn == "ln") {
    const double x = evaluate(node.args[0], b);
    if (!(x > 0.0))
      throw EvalError(EvalError::Kind::domain, "ln of a non-positive value");
    return std::log(x);
  }
  if (fn == "abs") return std::abs(evaluate(node.args[0], b));
  if (fn == "min")
    return std::min(evaluate(node.args[0], b), evaluate(node.args[1], b));
  if (fn == "max")
    return std::max(evaluate(node.args[0], b), evaluate(node.args[1], b));
  throw EvalError(EvalError::Kind::domain, "unknown function " + fn);
}

bool mentions(const Node& node, char variable) {
  if (node.kind == NodeKind::variable && node.variable == variable) return true;
  for (const auto& arg : node.args)
    if (mentions(arg, variable)) return true;
  return false;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

Expr Expr::parse(std::string_view source) {
  Parser parser(source);
  return Expr(std::make_shared<const Node>(parser.parse()),
              std::string(source));
}

double Expr::eval(const Bindings& bindings) const {
  return evaluate(*root_, bindings);
}

double Expr::eval(std::size_t i, std::size_t j,
                  std::optional<std::size_t> k) const {
  Bindings b;
  b.i = static_cast<double>(i);
  b.j = static_cast<double>(j);
  if (k) b.k = static_cast<double>(*k);
  return evaluate(*root_, b);
}

bool Expr::uses(char variable) const { return mentions(*root_, variable); }

std::string pretty_print(const Node& node) {
  auto bin = [&](const char* op) {
    return "(" + pretty_print(node.args[0]) + " " + op + " " +
           pretty_print(node.args[1]) + ")";
  };
  switch (node.kind) {
    case NodeKind::number:
      return format_number(node.value);
    case NodeKind::variable:
      return std::string(1, node.variable);
    case NodeKind::negate:
      return "(-" + pretty_print(node.args[0]) + ")";
    case NodeKind::add: return bin("+");
    case NodeKind::subtract: return bin("-");
    case NodeKind::multiply: return bin("*");
    case NodeKind::divide: return bin("/");
    case NodeKind::power: return bin("^");
    case NodeKind::equal: return bin("==");
    case NodeKind::call: {
      std::string out = node.function + "(";
      for (std::size_t idx = 0; idx < node.args.size(); ++idx) {
        if (idx > 0) out += ", ";
        out += pretty_print(node.args[idx]);
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace infmat::expr
