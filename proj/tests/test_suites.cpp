#include <gtest/gtest.h>

#include <set>

#include "hamforge/error.hpp"
#include "hamforge/suites.hpp"

using namespace hamforge;

namespace {

std::set<std::string> failed_ids(const std::vector<CheckRecord>& rs) {
  std::set<std::string> out;
  for (const auto& r : rs)
    if (!r.pass && !r.skipped) out.insert(r.id);
  return out;
}

const CheckRecord& find(const std::vector<CheckRecord>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  throw std::runtime_error("no record " + id);
}

}  // namespace

TEST(Suites, DefaultRunHasExactlyTheMeasuredFailures) {
  const auto rs = run_suite("all", {});
  const std::set<std::string> want{"realization.omega2.fg_relations", "realization.omega2.jacobi",
                                   "realization.s3.pullback_C", "symmetries.transport.Z_H1"};
  EXPECT_EQ(failed_ids(rs), want);
  const SuiteSummary s = summarize(rs);
  EXPECT_EQ(s.total, static_cast<int>(rs.size()));
  EXPECT_EQ(s.failed, 4);
  EXPECT_EQ(s.skipped, 0);
  EXPECT_TRUE(std::is_sorted(rs.begin(), rs.end(), [](auto& a, auto& b) { return a.id < b.id; }));
  EXPECT_NE(find(rs, "realization.s3.pullback_C").detail.find("constant offset"), std::string::npos);
  EXPECT_NE(find(rs, "symmetries.transport.Z_H1").detail.find("-H2"), std::string::npos);
}

TEST(Suites, AllIsTheUnionOfTheParts) {
  std::size_t n = 0;
  for (const auto& s : suite_names())
    if (s != "all") n += run_suite(s, {}).size();
  EXPECT_EQ(run_suite("all", {}).size(), n);
}

TEST(Suites, Deterministic) {
  SuiteConfig c;
  c.seed = 7;
  const auto a = run_suite("all", c), b = run_suite("all", c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].pass, b[i].pass);
    EXPECT_EQ(a[i].residual, b[i].residual);
    EXPECT_EQ(a[i].detail, b[i].detail);
  }
}

TEST(Suites, StructureHoldsForOtherParameters) {
  SuiteConfig c;
  c.params = ParamSet{{"a", Rational(2)}, {"b", Rational(-1, 3)}, {"c", Rational(3, 2)}};
  for (const auto& suite : {"structure", "symmetries", "liegroups", "newton"}) {
    const auto rs = run_suite(suite, c);
    for (const auto& r : rs) {
      if (r.id == "symmetries.transport.Z_H1") continue;
      EXPECT_TRUE(r.pass) << r.id << ": " << r.detail;
    }
  }
}

TEST(Suites, ExplicitZeroSkipsDependentRecords) {
  SuiteConfig c;
  c.params = ParamSet{{"b", Rational(0)}, {"d", Rational(0)}};
  const auto rs = run_suite("all", c);
  EXPECT_TRUE(find(rs, "liegroups.commutators.X").skipped);
  EXPECT_TRUE(find(rs, "structure.jacobi.pi").skipped);
  EXPECT_TRUE(find(rs, "newton.s3.symmetries").skipped);
  EXPECT_FALSE(find(rs, "realization.s3.pullback_C").pass);
  EXPECT_GT(summarize(rs).skipped, 0);
  EXPECT_TRUE(find(rs, "structure.jacobi.pi1").pass);
}

TEST(Suites, BadInput) {
  EXPECT_THROW(run_suite("nope", {}), Error);
  try {
    SuiteConfig c;
    c.params = ParamSet{{"a", Rational(0)}};
    run_suite("structure", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParamConstraint);
  }
  EXPECT_THROW(validate_params(ParamSet{{"zeta", Rational(1)}}), Error);
  EXPECT_NO_THROW(validate_params(ParamSet{{"k2", Rational(5)}}));
}

TEST(Suites, TrajectoryToleranceIsHonoured) {
  SuiteConfig c;
  c.stepping.dt = 1e-1;
  c.trajectory_tol = 1e-14;
  const auto rs = run_suite("realization", c);
  EXPECT_FALSE(find(rs, "realization.s2.trajectory").pass);
  EXPECT_EQ(find(rs, "realization.s2.trajectory").mode, CheckMode::Sampled);
}
