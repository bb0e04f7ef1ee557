#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "infmat/expr.hpp"

using infmat::expr::Bindings;
using infmat::expr::EvalError;
using infmat::expr::Expr;
using infmat::expr::ParseError;

namespace {

double eval0(const std::string& s) { return Expr::parse(s).eval(Bindings{}); }

}  // namespace

TEST(Expr, Precedence) {
  EXPECT_EQ(eval0("2+3*4"), 14.0);
  EXPECT_EQ(eval0("2^3^2"), 512.0);
  EXPECT_EQ(eval0("-2^2"), -4.0);
  EXPECT_EQ(eval0("(2+3)*4"), 20.0);
  EXPECT_EQ(eval0("2^-1"), 0.5);
  EXPECT_EQ(eval0("8/4/2"), 1.0);
  EXPECT_EQ(eval0("1-2-3"), -4.0);
  EXPECT_EQ(eval0("1+1==2"), 1.0);
}

TEST(Expr, EntryFormulas) {
  EXPECT_DOUBLE_EQ(Expr::parse("1/2^(i+j)").eval(1, 1), 0.25);
  const auto d = Expr::parse("if(j==i+1, j, 0)");
  EXPECT_EQ(d.eval(1, 2), 2.0);
  EXPECT_EQ(d.eval(1, 3), 0.0);
  const auto delta = Expr::parse("delta(i,j)");
  EXPECT_EQ(delta.eval(3, 3), 1.0);
  EXPECT_EQ(delta.eval(3, 4), 0.0);
  EXPECT_DOUBLE_EQ(Expr::parse("1/fact(j-1)").eval(1, 4), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(Expr::parse("exp(ln(3)) + abs(-2) + min(1,4) + max(1,4)").eval(1, 1),
                   3.0 + 2.0 + 1.0 + 4.0);
  EXPECT_EQ(Expr::parse("k*i").eval(2, 1, 5), 10.0);
}

TEST(Expr, IfIsLazy) {
  EXPECT_EQ(Expr::parse("if(i==1, 7, 1/0)").eval(1, 1), 7.0);
}

TEST(Expr, ParseErrorPosition) {
  try {
    Expr::parse("2^^3");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
    EXPECT_EQ(e.code(), "E_PARSE");
  }
  for (const char* bad : {"", "2+", "(1", "foo(1)", "1 2", "i==j==k", "delta(1)", "@"})
    EXPECT_THROW(Expr::parse(bad), ParseError) << bad;
}

TEST(Expr, EvalErrors) {
  try {
    Expr::parse("i/0").eval(3, 1);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind(), EvalError::Kind::division_by_zero);
  }
  EXPECT_THROW(Expr::parse("ln(0-1)").eval(1, 1), EvalError);
  EXPECT_THROW(Expr::parse("fact(0.5)").eval(1, 1), EvalError);
  EXPECT_THROW(Expr::parse("k").eval(1, 1), EvalError);
}

TEST(Expr, PrettyPrintRoundTrip) {
  const std::vector<std::string> corpus = {
      "2+3*4", "2^3^2", "-2^2", "1/2^(i+j)", "if(j==i+1, j, 0)",
      "delta(i,j) + 0.5*delta(i,1)*delta(j,1)", "1/fact(j-1)", "-(-i)",
      "min(i,j)/max(i,j)", "exp(-i-j)*abs(i-j)", "0.1+1e-3*k", "--i^-j"};
  for (const auto& s : corpus) {
    const auto e = Expr::parse(s);
    const auto printed = infmat::expr::pretty_print(e.root());
    EXPECT_EQ(Expr::parse(printed).root(), e.root()) << s << " -> " << printed;
  }
}

TEST(Expr, EvalIsBitIdentical) {
  const auto e = Expr::parse("exp(-i/7)*ln(j+1)/fact(3)");
  for (std::size_t i = 1; i < 20; ++i) {
    const double a = e.eval(i, i + 1);
    const double b = e.eval(i, i + 1);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  }
}

TEST(Expr, Uses) {
  const auto e = Expr::parse("i + k");
  EXPECT_TRUE(e.uses('i'));
  EXPECT_FALSE(e.uses('j'));
  EXPECT_TRUE(e.uses('k'));
}
