#include <gtest/gtest.h>

#include <numbers>

#include "qtori/errors.hpp"
#include "qtori/qexpr.hpp"

using qtori::Quaternion;
using qtori::qexpr::Expr;
using qtori::qexpr::evaluate;
using qtori::qexpr::parse;

namespace {

void expect_value(const char* text, const Quaternion& want, double tol = 1e-12) {
  const Quaternion got = evaluate(text);
  EXPECT_TRUE(qtori::approx_equal(got, want, tol)) << text << " -> " << got;
}

std::size_t syntax_offset(const char* text) {
  try {
    parse(text);
  } catch (const qtori::SyntaxError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no syntax error for " << text;
  return 0;
}

}  // namespace

TEST(Qexpr, ProductTree) {
  const Expr e = parse("i*j");
  ASSERT_EQ(e.kind, Expr::Kind::Mul);
  EXPECT_EQ(e.args[0].kind, Expr::Kind::UnitI);
  EXPECT_EQ(e.args[1].kind, Expr::Kind::UnitJ);
  expect_value("i*j", Quaternion::k());
  expect_value("j*i", -Quaternion::k());
}

TEST(Qexpr, Omega) { expect_value("1/2*(-1+i+j+k)", Quaternion(-0.5, 0.5, 0.5, 0.5)); }

TEST(Qexpr, EulerPower) {
  const Expr e = parse("e^((pi/3)*i)");
  ASSERT_EQ(e.kind, Expr::Kind::Pow);
  EXPECT_EQ(e.args[0].kind, Expr::Kind::Euler);
  expect_value("e^((pi/3)*i)", Quaternion(0.5, std::sqrt(3.0) / 2, 0, 0));
  expect_value("exp(pi/3*i)", Quaternion(0.5, std::sqrt(3.0) / 2, 0, 0));
  expect_value("e^0", Quaternion(1.0));
}

TEST(Qexpr, Literals) {
  expect_value("3*j+1/10", Quaternion(0.1, 0, 3, 0));
  expect_value("4*k+1/1000", Quaternion(0.001, 0, 0, 4));
  expect_value("2.5", Quaternion(2.5));
  expect_value(".5", Quaternion(0.5));
  expect_value("pi", Quaternion(std::numbers::pi));
  expect_value("e", Quaternion(std::numbers::e));
}

TEST(Qexpr, Precedence) {
  expect_value("1+2*i", Quaternion(1, 2, 0, 0));
  expect_value("1-2-3", Quaternion(-4.0));
  expect_value("8/2/2", Quaternion(2.0));
  expect_value("-i*j", -Quaternion::k());
  expect_value("2*-i", Quaternion(0, -2, 0, 0));
  expect_value("e^i*j", qtori::quat_exp(Quaternion::i()) * Quaternion::j());
}

TEST(Qexpr, ImplicitProduct) {
  expect_value("2i", Quaternion(0, 2, 0, 0));
  expect_value("3(1+i)", Quaternion(3, 3, 0, 0));
  expect_value("(1+i)(1-i)", Quaternion(2.0));
  expect_value("(1+i)j", Quaternion(0, 0, 1, 1));
  expect_value("4j+3k", Quaternion(0, 0, 4, 3));
  // a unit on the left does not start an implicit product
  EXPECT_THROW(parse("i j"), qtori::SyntaxError);
  EXPECT_THROW(parse("2 3"), qtori::SyntaxError);
}

TEST(Qexpr, RightDivision) {
  // i / j = i j^{-1} = -i j = -k
  expect_value("i/j", -Quaternion::k());
  EXPECT_THROW(evaluate("1/(i-i)"), qtori::DivisionByZero);
}

TEST(Qexpr, Errors) {
  EXPECT_EQ(syntax_offset("pi(2)"), 2u);
  EXPECT_EQ(syntax_offset("1 + foo"), 4u);
  EXPECT_EQ(syntax_offset("(1+i"), 4u);
  EXPECT_EQ(syntax_offset("1+"), 2u);
  EXPECT_EQ(syntax_offset("1 $ 2"), 2u);
  EXPECT_EQ(syntax_offset("."), 0u);
  EXPECT_EQ(syntax_offset(""), 0u);
  EXPECT_THROW(parse("exp 2"), qtori::SyntaxError);
  EXPECT_THROW(parse("1)"), qtori::SyntaxError);
  EXPECT_THROW(evaluate("2^i"), qtori::ExponentBaseUnsupported);
}

TEST(Qexpr, RoundTrip) {
  const char* inputs[] = {"e^((pi/3)*i)", "1/2*(-1+i+j+k)", "3(1+i)j - 2/k", "-(-i)^0", "exp(1+2i)*(e^(j))",
                          "4*k+1/1000", "2i/3j", "--1"};
  for (const char* t : inputs) {
    Quaternion a;
    try {
      a = evaluate(t);
    } catch (const qtori::ExponentBaseUnsupported&) {
      continue;
    }
    const std::string printed = to_string(parse(t));
    const Quaternion b = evaluate(printed);
    EXPECT_TRUE(qtori::approx_equal(a, b, 1e-12)) << t << " -> " << printed;
  }
}

TEST(Qexpr, Homomorphism) {
  const Quaternion a = evaluate("1+2i-j");
  const Quaternion b = evaluate("e^(pi/5*k)");
  EXPECT_EQ(evaluate("(1+2i-j)*(e^(pi/5*k))"), a * b);
  EXPECT_EQ(evaluate("(1+2i-j)+(e^(pi/5*k))"), a + b);
}
