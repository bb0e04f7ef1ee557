#pragma once

// Entry-formula language used by the JSON matrix specs.
//
//   comparison := additive ( "==" additive )?
//   additive   := multiplicative ( ("+" | "-") multiplicative )*
//   multiplicative := unary ( ("*" | "/") unary )*
//   unary      := "-" unary | power
//   power      := atom ( "^" unary )?          right associative
//   atom       := number | i | j | k | "(" comparison ")" | name "(" args ")"
//
// Functions: if(c,t,e) delta(a,b) fact(n) exp(x) ln(x) abs(x) min(a,b)
// max(a,b). Comparison yields 0 or 1. Only the taken branch of `if` is
// evaluated.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infmat/error.hpp"

namespace infmat::expr {

enum class NodeKind {
  number,
  variable,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,
  equal,
  call,
};

struct Node {
  NodeKind kind = NodeKind::number;
  double value = 0.0;     // number
  char variable = 0;      // variable: 'i', 'j' or 'k'
  std::string function;   // call
  std::vector<Node> args;  // operands, or call arguments

  friend bool operator==(const Node&, const Node&) = default;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected, std::string found);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

class EvalError : public Error {
 public:
  enum class Kind { division_by_zero, domain, unbound_variable };

  EvalError(Kind kind, const std::string& message);

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Bindings {
  std::optional<double> i;
  std::optional<double> j;
  std::optional<double> k;
};

// Immutable parsed formula. Copies share the tree.
class Expr {
 public:
  static Expr parse(std::string_view source);

  double eval(const Bindings& bindings) const;
  double eval(std::size_t i, std::size_t j,
              std::optional<std::size_t> k = std::nullopt) const;

  const Node& root() const { return *root_; }
  const std::string& source() const { return source_; }
  bool uses(char variable) const;

 private:
  Expr(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

// Fully parenthesized rendering; re-parses to an identical tree.
std::string pretty_print(const Node& node);

}  // namespace infmat::expr
