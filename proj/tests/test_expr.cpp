#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hamforge/error.hpp"
#include "hamforge/expr.hpp"
#include "random_expr.hpp"

using namespace hamforge;
using hamforge::testing::ExprGenerator;

namespace {

const Chart kXYZ{"x", "y", "z"};
const ParamSet kOnes{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 0}};

Expr X() { return Expr::var("x"); }
Expr Y() { return Expr::var("y"); }
Expr Z() { return Expr::var("z"); }
Expr A() { return Expr::par("a"); }
Expr B() { return Expr::par("b"); }
Expr C() { return Expr::par("c"); }

ExpPoly::Key key(std::vector<int> powers, std::vector<Rational> freqs = {}) {
  ExpPoly::Key k{std::move(powers), std::move(freqs)};
  k.normalize();
  return k;
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-0.125"), Rational(-1, 8));
  EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_EQ(Rational::parse("2.5E+2"), Rational(250));
  EXPECT_EQ(Rational::parse(" 7 "), Rational(7));
  EXPECT_EQ(Rational::parse("0.1") * Rational(10), Rational(1));
  EXPECT_THROW(Rational::parse("1/0"), Error);
  EXPECT_THROW(Rational::parse("abc"), Error);
  EXPECT_THROW(Rational::parse(""), Error);
}

TEST(Rational, ApproximateRecoversSmallFractions) {
  EXPECT_EQ(Rational::approximate(2.0 / 3.0, 1000), Rational(2, 3));
  EXPECT_EQ(Rational::approximate(-14.0 / 3.0 + 1e-12, 1000), Rational(-14, 3));
  EXPECT_EQ(Rational::approximate(0.0, 1000), Rational(0));
}

TEST(Canonicalize, ExpandsProductOverSum) {
  ExpPoly p = canonicalize(X() * (B() * Y() + C() * Z()), kXYZ, kOnes);
  ASSERT_EQ(p.term_count(), 2u);
  EXPECT_EQ(p.coefficient(key({1, 1})), Rational(1));
  EXPECT_EQ(p.coefficient(key({1, 0, 1})), Rational(1));
}

TEST(Canonicalize, CommutativityCancels) {
  EXPECT_TRUE(canonicalize(Y() * Z() - Z() * Y(), kXYZ, kOnes).is_zero());
}

TEST(Canonicalize, ExponentialFrequenciesAdd) {
  const Chart q{"q1"};
  const Expr q1 = Expr::var("q1");
  const Expr e = pow(exp(A() / 2 * q1), 2) - exp(A() * q1);
  EXPECT_TRUE(canonicalize(e, q, {{"a", 1}}).is_zero());

  // Pointwise oracle: the tree itself evaluates to zero.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Point pt{{"q1", u(rng)}};
    EXPECT_NEAR(to_double(eval(e, pt, {{"a", 1}})), 0.0, 1e-12);
  }
}

TEST(Canonicalize, Errors) {
  EXPECT_THROW(canonicalize(A() * X(), kXYZ, {}), Error);
  try {
    canonicalize(exp(X() * Y()), kXYZ, kOnes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonAffineExponent);
  }
  try {
    canonicalize(exp(X() + 1), kXYZ, kOnes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonAffineExponent);
  }
  try {
    canonicalize(Expr(1) / (X() + Y()), kXYZ, kOnes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativePower);
  }
}

TEST(Canonicalize, SingleTermDivisionIsLaurent) {
  ExpPoly p = canonicalize(X() * X() / Z(), kXYZ, kOnes);
  EXPECT_EQ(p.coefficient(key({2, 0, -1})), Rational(1));
  EXPECT_EQ(canonicalize(X() / X(), kXYZ, kOnes), ExpPoly(1));
  const Chart q{"q1"};
  EXPECT_EQ(canonicalize(exp(Expr::var("q1")) * exp(-Expr::var("q1")), q, {}), ExpPoly(1));
}

TEST(Diff, Examples) {
  EXPECT_EQ(canonicalize(diff(Y() * Z(), kXYZ, "y"), kXYZ, kOnes), canonicalize(Z(), kXYZ, kOnes));
  const ParamSet p{{"a", Rational(3, 2)}, {"b", -2}, {"c", 5}};
  const Expr h2 = X() * (A() * X() - 2 * B() * Y() + 2 * C() * Z());
  EXPECT_EQ(canonicalize(diff(h2, kXYZ, "x"), kXYZ, p),
            canonicalize(2 * A() * X() - 2 * B() * Y() + 2 * C() * Z(), kXYZ, p));
  const Chart q{"q1"};
  const Expr e = exp(-A() * Expr::var("q1"));
  EXPECT_EQ(canonicalize(diff(e, q, "q1"), q, p), canonicalize(-A() * e, q, p));
  EXPECT_THROW(diff(e, q, "q9"), Error);
}

TEST(Diff, TreeAndCanonicalRoutesAgree) {
  ExprGenerator gen({"x", "y", "z"}, 11);
  for (int i = 0; i < 50; ++i) {
    Expr e = gen.expr();
    for (std::size_t v = 0; v < 3; ++v)
      EXPECT_EQ(canonicalize(diff(e, kXYZ, kXYZ.name(v)), kXYZ, kOnes), canonicalize(e, kXYZ, kOnes).diff(v));
  }
}

TEST(Eval, Examples) {
  const Point one{{"x", Rational(1)}, {"y", Rational(1)}, {"z", Rational(1)}};
  EXPECT_EQ(std::get<Rational>(eval(Y() * Z(), one, kOnes)), Rational(1));
  EXPECT_EQ(std::get<Rational>(eval(X() * (A() * X() - 2 * B() * Y() + 2 * C() * Z()), one, kOnes)), Rational(1));
  EXPECT_EQ(std::get<Rational>(eval(X() * (B() * Y() + C() * Z()), one, kOnes)), Rational(2));
  EXPECT_TRUE(std::holds_alternative<double>(eval(exp(X()), one, kOnes)));
  EXPECT_THROW(eval(X() * Y(), Point{{"x", 1.0}}, kOnes), Error);
  EXPECT_THROW(eval(A() * X(), one, {}), Error);
}

TEST(Equal, Examples) {
  EXPECT_FALSE(equal(X(), X() + 1, kXYZ, kOnes).equal);
  const Chart q{"q1"};
  const Expr q1 = Expr::var("q1");
  auto r = equal(exp(q1) * exp(-q1), Expr(1), q, {}, EqualMode::sampled(200, 1e-12));
  EXPECT_TRUE(r.equal);
  EXPECT_LE(r.residual, 1e-12);
  auto ex = equal(exp(q1) * exp(-q1), Expr(1), q, {});
  EXPECT_TRUE(ex.equal);
  EXPECT_EQ(ex.residual, 0.0);
  EXPECT_FALSE(equal(X(), Y(), kXYZ, kOnes, EqualMode::sampled(20, 1e-9)).equal);
}

// Canonicalization is a ring homomorphism on the closure class.
TEST(CanonicalizeProperty, RingHomomorphism) {
  ExprGenerator gen({"x", "y", "z"}, 7);
  const ParamSet p{{"a", Rational(2, 3)}, {"b", -3}, {"c", Rational(5, 4)}};
  for (int i = 0; i < 200; ++i) {
    Expr e1 = gen.expr(), e2 = gen.expr();
    ExpPoly c1 = canonicalize(e1, kXYZ, p), c2 = canonicalize(e2, kXYZ, p);
    EXPECT_EQ(canonicalize(e1 + e2, kXYZ, p), c1 + c2);
    EXPECT_EQ(canonicalize(e1 * e2, kXYZ, p), c1 * c2);
  }
}

TEST(CanonicalizeProperty, MixedPartialsCommute) {
  ExprGenerator gen({"x", "y", "z"}, 8);
  for (int i = 0; i < 100; ++i) {
    ExpPoly e = canonicalize(gen.expr(), kXYZ, kOnes);
    for (std::size_t u = 0; u < 3; ++u)
      for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(e.diff(u).diff(v), e.diff(v).diff(u));
  }
}

TEST(CanonicalizeProperty, EvaluationAgreesWithTree) {
  ExprGenerator poly_gen({"x", "y", "z"}, 9, /*with_exp=*/false);
  ExprGenerator exp_gen({"x", "y", "z"}, 10);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Rational> pt;
    Point named;
    for (const auto& n : kXYZ.names()) {
      pt.push_back(hamforge::testing::random_rational(rng));
      named[n] = pt.back();
    }
    Expr e = poly_gen.expr();
    EXPECT_EQ(*canonicalize(e, kXYZ, kOnes).eval_exact(pt), std::get<Rational>(eval(e, named, kOnes)));

    Expr f = exp_gen.expr();
    std::vector<double> ptd;
    for (const auto& r : pt) ptd.push_back(r.to_double());
    const double tree = to_double(eval(f, named, kOnes));
    const double canon = canonicalize(f, kXYZ, kOnes).eval(ptd);
    EXPECT_LE(std::abs(tree - canon), 1e-12 * std::max(1.0, std::abs(tree)));
  }
}

TEST(ExpPoly, ComposeAndShift) {
  // (x + y)^2 with x -> z, y -> 1
  ExpPoly p = (ExpPoly::variable(0) + ExpPoly::variable(1)).pow(2);
  std::vector<ExpPoly> images{ExpPoly::variable(2), ExpPoly(1)};
  EXPECT_EQ(p.compose(images), (ExpPoly::variable(2) + 1).pow(2));
  ExpPoly e = ExpPoly::exponential({Rational(2)});
  EXPECT_EQ(e.substitute(0, ExpPoly::variable(1).scaled(Rational(1, 2))), ExpPoly::exponential({0, 1}));
  EXPECT_EQ(p.shifted(1).shifted(-1), p);
  EXPECT_THROW(p.shifted(-1), Error);
  EXPECT_EQ(ExpPoly::variable(0).str(kXYZ), "x");
}

TEST(ExpPoly, EigenProducts) {
  PolyMatrix m(2, 2);
  m << ExpPoly::variable(0), ExpPoly(1), ExpPoly(0), ExpPoly::variable(1);
  PolyMatrix sq = m * m;
  EXPECT_EQ(sq(0, 1), ExpPoly::variable(0) + ExpPoly::variable(1));
  PolyVector v(2);
  v << ExpPoly(1), ExpPoly(2);
  PolyVector mv = m * v;
  EXPECT_EQ(mv(0), ExpPoly::variable(0) + 2);
}
