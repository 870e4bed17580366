#include <gtest/gtest.h>

#include <random>

#include "hamforge/lvmodels.hpp"
#include "hamforge/maps.hpp"
#include "random_expr.hpp"

using namespace hamforge;
using hamforge::testing::random_rational;
namespace m = hamforge::models;

namespace {

const ParamSet kOnes{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 0}};
const ParamSet kS3{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}};

ParamSet random_params(std::mt19937_64& rng, bool with_d) {
  return {{"a", random_rational(rng)},
          {"b", random_rational(rng, -128, -32)},
          {"c", random_rational(rng)},
          {"d", with_d ? random_rational(rng, -96, -16) : Rational(0)}};
}

ExpPoly at(const PolyMatrix& j, int r, int c) { return j(r, c); }

}  // namespace

TEST(Jacobian, ChainRuleExamples) {
  const ParamSet p{{"a", 3}, {"b", 2}, {"c", 5}, {"d", 0}};
  const PolyMatrix j2 = jacobian(m::map("phi_s2", p));
  // rows x, y, z; columns q1, q2, p1, p2
  EXPECT_EQ(at(j2, 2, 0), canonicalize(-(Expr::par("a") / 2) * exp(-(Expr::par("a") * Expr::var("q1")) / 2),
                                       m::phase_chart(), p));
  EXPECT_EQ(at(j2, 1, 3), canonicalize(exp(Expr::par("a") * Expr::var("q1") / 2), m::phase_chart(), p));
  const ParamSet q = p.with("d", 7);
  const PolyMatrix j3 = jacobian(m::map("phi_s3", q));
  EXPECT_EQ(at(j3, 0, 2), canonicalize(Expr(Rational(1, 3)) - Expr::var("p1") / 21, m::phase_chart(), q));
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& [key, p] :
       std::vector<std::pair<std::string, ParamSet>>{{"phi_s2", kOnes.with("a", Rational(3, 2))}, {"phi_s3", kS3}}) {
    const SmoothMap phi = m::map(key, p);
    const PolyMatrix sym = jacobian(phi);
    for (int s = 0; s < 20; ++s) {
      Eigen::VectorXd x(4);
      for (int i = 0; i < 4; ++i) x(i) = u(rng);
      const Eigen::MatrixXd exact = evaluate(sym, x);
      const double h = 1e-6;
      for (int k = 0; k < 4; ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const Eigen::VectorXd fd = (evaluate(phi, xp) - evaluate(phi, xm)) / (2 * h);
        for (int r = 0; r < 3; ++r)
          EXPECT_LE(std::abs(fd(r) - exact(r, k)), 1e-6 * std::max(1.0, std::abs(exact(r, k)))) << key;
      }
    }
  }
}

TEST(Pushforward, ExponentialRealization) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 4; ++i) {
    const ParamSet p = random_params(rng, false);
    const SmoothMap phi = m::map("phi_s2", p);
    const VectorField ham = hamiltonian_field(m::bivector("J0"), m::function("Htilde_s2", p).value);
    EXPECT_EQ(ham, m::field("hamilton_s2", p));
    EXPECT_TRUE(is_zero(pushforward_residual(phi, ham, m::field("V", p))));
    EXPECT_TRUE(is_zero(bracket_pushforward_residual(phi, m::bivector("J0"), m::bivector("pi1", p))));
  }
}

TEST(Pushforward, PolynomialRealization) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 4; ++i) {
    const ParamSet p = random_params(rng, true);
    const SmoothMap phi = m::map("phi_s3", p);
    const VectorField ham = hamiltonian_field(m::bivector("J0"), m::function("Htilde_s3", p).value);
    EXPECT_EQ(ham, m::field("hamilton_s3", p));
    EXPECT_TRUE(is_zero(pushforward_residual(phi, ham, m::field("lv", p))));
    EXPECT_TRUE(is_zero(bracket_pushforward_residual(phi, m::bivector("J0"), m::bivector("pi", p))));
  }
}

TEST(Pushforward, IdentityAndCasimirNullTests) {
  const SmoothMap id = identity_map(m::state_chart());
  const VectorField v = m::field("V", kOnes);
  EXPECT_TRUE(is_zero(pushforward_residual(id, v, v)));
  EXPECT_TRUE(is_zero(bracket_pushforward_residual(id, m::bivector("pi1", kOnes), m::bivector("pi1", kOnes))));
  const VectorField cas = hamiltonian_field(m::bivector("pi1", kOnes), m::function("H1", kOnes).value);
  EXPECT_TRUE(is_zero(cas));
  EXPECT_TRUE(is_zero(pushforward_residual(id, cas, zero_field(m::state_chart()))));
  EXPECT_FALSE(is_zero(pushforward_residual(id, v, zero_field(m::state_chart()))));
}

TEST(ConservedPullback, ExponentialRealization) {
  const ParamSet p{{"a", 2}, {"b", Rational(-1, 2)}, {"c", 3}, {"d", 0}};
  const auto res = conserved_pullback_check(
      m::map("phi_s2", p), {{"H2", m::function("Htilde_s2", p).value, m::function("H2", p).value},
                            {"H1", ExpPoly::variable(3), m::function("H1", p).value}});
  ASSERT_EQ(res.size(), 2u);
  EXPECT_TRUE(res[0].holds());
  EXPECT_TRUE(res[1].holds());
}

TEST(ConservedPullback, PolynomialRealizationCasimirOffset) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 3; ++i) {
    const ParamSet p = random_params(rng, true);
    const auto res = conserved_pullback_check(
        m::map("phi_s3", p), {{"H", m::function("Htilde_s3", p).value, m::function("H", p).value},
                              {"C", ExpPoly::variable(3), m::function("C", p).value}});
    EXPECT_TRUE(res[0].holds());
    // measured: C o phi = p2 - d^2/a, a constant offset
    EXPECT_FALSE(res[1].holds());
    EXPECT_TRUE(res[1].constant_offset());
    const Rational d = p.get("d"), a = p.get("a");
    EXPECT_EQ(res[1].residual, ExpPoly(d * d / a));
  }
}

TEST(Realization, SubmersionRankAndInverseBranch) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.5, 1.5), pos(0.2, 3.0);
  const ParamSet p{{"a", Rational(3, 2)}, {"b", Rational(-2, 5)}, {"c", Rational(7, 4)}, {"d", 0}};
  const SmoothMap phi = m::map("phi_s2", p);
  for (int s = 0; s < 50; ++s) {
    const Eigen::Vector3d target(u(rng), u(rng), pos(rng));
    const Eigen::Vector4d src = exponential_realization_inverse(target, 1.5, -0.4, 1.75, u(rng));
    EXPECT_LE((evaluate(phi, src) - target).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(jacobian_rank(phi, src), 3);
  }
  EXPECT_THROW(exponential_realization_inverse(Eigen::Vector3d(1, 1, -1), 1.5, -0.4, 1.75), Error);
  const SmoothMap phi3 = m::map("phi_s3", kS3);
  EXPECT_EQ(jacobian_rank(phi3, Eigen::Vector4d(0.3, 0.1, -0.2, 0.7)), 3);
}
