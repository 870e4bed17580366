#include <gtest/gtest.h>

#include <random>

#include "hamforge/error.hpp"
#include "hamforge/lvmodels.hpp"
#include "random_expr.hpp"

using namespace hamforge;
using hamforge::testing::random_rational;
namespace m = hamforge::models;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

ExpPoly over_state(const Expr& e, const ParamSet& p) { return canonicalize(e, m::state_chart(), p); }

bool same(const m::Object& a, const m::Object& b) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T* y = std::get_if<T>(&b);
        if (!y) return false;
        if constexpr (std::is_same_v<T, m::Function>) return x.chart == y->chart && x.value == y->value;
        if constexpr (std::is_same_v<T, VectorField>) return x == *y;
        if constexpr (std::is_same_v<T, Bivector>) return x.chart == y->chart && x.entries == y->entries;
        if constexpr (std::is_same_v<T, SmoothMap>) return x.source == y->source && x.components == y->components;
        if constexpr (std::is_same_v<T, JetSystem>) return x.equations == y->equations && x.solved == y->solved;
        if constexpr (std::is_same_v<T, m::MatrixBasis>) return x.elements == y->elements;
        if constexpr (std::is_same_v<T, m::FieldBasis>) return x.elements == y->elements;
        return false;
      },
      a);
}

}  // namespace

TEST(Catalog, ClosedFormObjects) {
  const ParamSet p{{"a", 2}, {"b", 3}, {"c", 5}};
  const Expr x = Expr::var("x"), y = Expr::var("y"), z = Expr::var("z");
  EXPECT_EQ(m::function("H1", p).value, over_state(y * z, p));
  const Bivector pi2 = m::bivector("pi2", p);
  EXPECT_EQ(pi2(0, 1), over_state(5 * x, p));
  EXPECT_EQ(pi2(1, 0), over_state(-5 * x, p));
  const ParamSet q = p.with("d", 7);
  const Expr q1 = Expr::var("q1"), p1 = Expr::var("p1"), p2 = Expr::var("p2");
  const Expr w = 2 * p2 - pow(p1, 2) + 4 * 9 * 25 * pow(q1, 2);
  EXPECT_EQ(m::function("Htilde_s3", q).value,
            canonicalize(105 * pow(q1, 2) - pow(w, 2) / 1680, m::phase_chart(), q));
}

TEST(Catalog, EveryKeyBuildsAndRoundTrips) {
  for (const std::string& key : m::keys()) {
    const m::Entry e1 = m::build(key), e2 = m::build(key);
    EXPECT_FALSE(e1.anchor.empty()) << key;
    EXPECT_EQ(e1.key, key);
    EXPECT_TRUE(same(e1.object, e2.object)) << key;
  }
  EXPECT_EQ(code_of([] { m::build("nope"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { m::field("H1"); }), ErrorCode::InvalidArgument);
}

TEST(Catalog, ParameterConstraints) {
  EXPECT_EQ(code_of([] { m::build("pi", {{"d", 0}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("pi1", {{"a", 0}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("V", {{"c", 0}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("V", {{"d", 1}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("J1", {{"b", 1}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("newton_s2", {{"b", 0}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(code_of([] { m::build("Xmaster", {{"k1", 0}}); }), ErrorCode::ParamConstraint);
  EXPECT_EQ(m::build("pi").params.get("d"), Rational(1));
  EXPECT_EQ(m::build("J1").params.get("b"), Rational(0));
}

TEST(Catalog, ZeroDLimit) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 3; ++i) {
    const ParamSet p{{"a", random_rational(rng)}, {"b", random_rational(rng, -64, 64)}, {"c", random_rational(rng)}};
    EXPECT_EQ(m::field("lv", p.with("d", 0)), m::field("lv_d0", p));
  }
}

TEST(Catalog, ConstantsOfMotion) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 5; ++i) {
    const ParamSet p{{"a", random_rational(rng)}, {"b", random_rational(rng, -64, 64)}, {"c", random_rational(rng)}};
    const VectorField v = m::field("V", p);
    EXPECT_TRUE(apply(v, m::function("H1", p).value).is_zero());
    EXPECT_TRUE(apply(v, m::function("H2", p).value).is_zero());
    const ParamSet q = p.with("d", random_rational(rng));
    const VectorField lv = m::field("lv", q);
    EXPECT_TRUE(apply(lv, m::function("H", q).value).is_zero());
    EXPECT_TRUE(apply(lv, m::function("C", q).value).is_zero());
  }
}

TEST(FGRelations, FirstPairSatisfiesAll) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 3; ++i) {
    const ParamSet p{{"a", random_rational(rng)}, {"c", random_rational(rng)}};
    for (const ExpPoly& r : m::fg_relation_residuals(1, p)) EXPECT_TRUE(r.is_zero()) << r.str(m::phase_chart());
  }
}

TEST(FGRelations, SecondPairMeasured) {
  const ParamSet p{{"a", 2}, {"c", 3}};
  const auto r = m::fg_relation_residuals(2, p);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_TRUE(r[0].is_zero()) << r[0].str(m::phase_chart());
  // measured: the second relation leaves 2 a p1^2 e^{-a q1}
  const ExpPoly expect = canonicalize(2 * Expr::par("a") * pow(Expr::var("p1"), 2) * exp(-(Expr::par("a") * Expr::var("q1"))),
                                      m::phase_chart(), p);
  EXPECT_EQ(r[1], expect) << r[1].str(m::phase_chart());
  EXPECT_TRUE(r[2].is_zero()) << r[2].str(m::phase_chart());
}

TEST(FGRelations, ZeroPairAtBZero) {
  for (const ExpPoly& r : m::fg_relation_residuals(ExpPoly(), ExpPoly(), {{"a", 1}, {"c", 1}}))
    EXPECT_TRUE(r.is_zero());
}

TEST(Transport, ZAndYMeasured) {
  for (int k : {0, 1, -2}) {
    const m::TransportReport r = m::zsym_transport_check({{"a", 1}, {"c", 1}}, Rational(k));
    EXPECT_TRUE(is_zero(r.z_pi1_minus_pi2)) << "k=" << k;
    // measured: Z sends H1 to -H2
    EXPECT_FALSE(r.z_h1_minus_h2.is_zero());
    EXPECT_TRUE(r.z_h1_plus_h2.is_zero());
    EXPECT_TRUE(is_zero(r.y_pi1_minus));
    EXPECT_TRUE(r.y_h1_minus.is_zero());
    EXPECT_TRUE(r.master());
  }
  EXPECT_EQ(code_of([] { m::zsym_transport_check({{"b", 1}}, 0); }), ErrorCode::ParamConstraint);
}

TEST(Transport, RandomParameters) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 3; ++i) {
    const ParamSet p{{"a", random_rational(rng)}, {"c", random_rational(rng, -128, -32)}};
    const m::TransportReport r = m::zsym_transport_check(p, random_rational(rng));
    EXPECT_TRUE(is_zero(r.z_pi1_minus_pi2));
    EXPECT_TRUE(r.z_h1_plus_h2.is_zero());
    EXPECT_TRUE(r.master());
  }
}

TEST(Transport, YIsSymmetryOfThePushedSystem) {
  // Z is obtained from Z1, which is a symmetry of the canonical flow; check
  // that Z commutes with V on the b = 0 system.
  const ParamSet p{{"a", 1}, {"b", 0}, {"c", 1}, {"k", 1}};
  EXPECT_TRUE(is_zero(lie_bracket(m::field("Zvec", p), m::field("V", p))));
}
