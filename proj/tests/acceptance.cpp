// One line per acceptance criterion; exits 1 when any line is red.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hamforge/detsys.hpp"
#include "hamforge/error.hpp"
#include "hamforge/integrate.hpp"
#include "hamforge/liealg.hpp"
#include "hamforge/lvmodels.hpp"
#include "hamforge/suites.hpp"

using namespace hamforge;
namespace m = hamforge::models;

namespace {

// pinned tolerances
constexpr double kGroupTol = 1e-10;
constexpr double kTrajectoryTol = 1e-5;
constexpr double kDriftTol = 1e-6;
constexpr double kOrderTarget = 4.0, kOrderWindow = 0.3;

struct Verdict {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
  void info(const std::string& what) { note += (note.empty() ? "" : "; ") + what; }
};

Rational random_rational(std::mt19937_64& rng, bool nonzero = true) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  int n = 0;
  do n = num(rng);
  while (nonzero && n == 0);
  return Rational(n, den(rng));
}

ParamSet random_params(std::mt19937_64& rng, bool b_zero, bool d_zero) {
  ParamSet p;
  p.set("a", random_rational(rng));
  p.set("b", b_zero ? Rational(0) : random_rational(rng));
  p.set("c", random_rational(rng));
  p.set("d", d_zero ? Rational(0) : random_rational(rng));
  return p;
}

bool zero(const VectorField& f) { return is_zero(f); }
bool zero(const Bivector& b) { return is_zero(b); }
bool zero(const Tensor3& t) { return t.is_zero(); }
bool zero(const ExpPoly& e) { return e.is_zero(); }
bool zero(const PolyVector& v) { return is_zero(v); }
bool zero(const PolyMatrix& v) { return is_zero(v); }
bool zero(const std::vector<ExpPoly>& v) { return all_zero(v); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int red = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(secs < budget_s, "over time budget");
  red += !v.pass;
  std::printf("[%s] criterion %2d  %-44s %7.3fs  %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              v.note.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::mt19937_64 rng(20261014);

  criterion(1, "exact conservation of H1, H2", 1, [&](Verdict& v) {
    for (int i = 0; i < 5; ++i) {
      const ParamSet p = random_params(rng, false, true);
      const VectorField f = m::field("V", p);
      v.require(zero(apply(f, m::function("H1", p).value)), "V(H1) at " + p.str());
      v.require(zero(apply(f, m::function("H2", p).value)), "V(H2) at " + p.str());
    }
    v.info("5 random parameter sets");
  });

  criterion(2, "bi-Hamiltonian identity and Casimirs", 1, [&](Verdict& v) {
    for (int i = 0; i < 5; ++i) {
      const ParamSet p = random_params(rng, false, true);
      const Bivector pi1 = m::bivector("pi1", p), pi2 = m::bivector("pi2", p);
      const ExpPoly h1 = m::function("H1", p).value, h2 = m::function("H2", p).value;
      const VectorField rhs = m::field("V", p);
      v.require(zero(hamiltonian_field(pi1, h2) - rhs), "pi1 grad H2");
      v.require(zero(hamiltonian_field(pi2, h1) - rhs), "pi2 grad H1");
      v.require(zero(casimir_residual(pi1, h1)), "pi1 grad H1");
      v.require(zero(casimir_residual(pi2, h2)), "pi2 grad H2");
      const ParamSet q = random_params(rng, false, false);
      v.require(zero(casimir_residual(m::bivector("pi", q), m::function("C", q).value)), "pi grad C");
      v.require(zero(hamiltonian_field(m::bivector("pi", q), m::function("H", q).value) - m::field("lv", q)),
                "pi grad H");
    }
  });

  criterion(3, "Jacobi identities; J0 + J2 not Poisson", 5, [&](Verdict& v) {
    for (int i = 0; i < 3; ++i) {
      const ParamSet p = random_params(rng, false, true), q = random_params(rng, false, false),
                     r = random_params(rng, true, true);
      const Bivector pi1 = m::bivector("pi1", p), pi2 = m::bivector("pi2", p);
      v.require(zero(jacobi_residual(pi1)), "pi1");
      v.require(zero(jacobi_residual(pi2)), "pi2");
      v.require(zero(jacobi_residual(pi1 + pi2)), "pi1 + pi2");
      v.require(zero(jacobi_residual(m::bivector("pi", q))), "pi");
      v.require(zero(jacobi_residual(m::bivector("J0", r))), "J0");
      v.require(zero(jacobi_residual(m::bivector("J1", r))), "J1");
      v.require(!zero(jacobi_residual(m::bivector("J0", r) + m::bivector("J2", r))), "J0 + J2 is Poisson");
    }
  });

  criterion(4, "conformal symmetry X", 1, [&](Verdict& v) {
    for (int i = 0; i < 5; ++i) {
      const ParamSet p = random_params(rng, false, true);
      const VectorField x = spatial_part(m::field("X", p));
      for (const char* k : {"pi1", "pi2"}) {
        const Bivector pi = m::bivector(k, p);
        v.require(zero(lie_derivative(x, pi) + pi), std::string("L_X ") + k);
      }
      for (const char* k : {"H1", "H2"}) {
        const ExpPoly h = m::function(k, p).value;
        v.require(zero(apply(x, h) - Rational(2) * h), std::string("X ") + k);
      }
    }
  });

  criterion(5, "master symmetry", 1, [&](Verdict& v) {
    for (int i = 0; i < 3; ++i) {
      const ParamSet p =
          random_params(rng, false, true).with("k1", random_rational(rng, false)).with("k2", random_rational(rng, false));
      const VectorField xm = m::field("Xmaster", p), f = m::field("V", p);
      v.require(zero(lie_bracket(xm, f) - p.get("k1") * f), "[Xm, V] = k1 V at " + p.str());
      v.require(zero(lie_bracket(lie_bracket(xm, f), f)), "[[Xm, V], V] at " + p.str());
    }
  });

  criterion(6, "symplectic realizations", 10, [&](Verdict& v) {
    Stepping st;
    st.dt = 1e-3;
    {
      const ParamSet p = m::effective_params("phi_s2", ParamSet{{"b", Rational(0)}});
      const SmoothMap phi = m::map("phi_s2", p);
      v.require(zero(pushforward_residual(phi, m::field("hamilton_s2", p), m::field("V", p))), "s2 pushforward");
      v.require(zero(bracket_pushforward_residual(phi, m::bivector("J0", p), m::bivector("pi1", p))), "s2 bracket");
      const auto pb = conserved_pullback_check(
          phi, {{"H2", m::function("Htilde_s2", p).value, m::function("H2", p).value},
                {"H1", ExpPoly::variable(3), m::function("H1", p).value}});
      for (const auto& r : pb) v.require(r.holds(), "s2 pullback " + r.name);
      Eigen::VectorXd x0(4);
      x0 << 0, 0, 1, 1;
      const double dev = realization_compare("s2", p, x0, 5.0, st).max_deviation;
      v.require(dev <= kTrajectoryTol, "s2 trajectory " + num(dev));
      v.info("s2 deviation " + num(dev));
    }
    {
      const ParamSet p = m::effective_params("phi_s3", {});
      const SmoothMap phi = m::map("phi_s3", p);
      v.require(zero(pushforward_residual(phi, m::field("hamilton_s3", p), m::field("lv", p))), "s3 pushforward");
      v.require(zero(bracket_pushforward_residual(phi, m::bivector("J0", p), m::bivector("pi", p))), "s3 bracket");
      const auto pb = conserved_pullback_check(
          phi, {{"H", m::function("Htilde_s3", p).value, m::function("H", p).value},
                {"C", ExpPoly::variable(3), m::function("C", p).value}});
      for (const auto& r : pb)
        v.require(r.holds(), "s3 pullback " + r.name + (r.constant_offset() ? " off by constant " + r.residual.str() : ""));
      Eigen::VectorXd x0(4);
      x0 << 0, 0, 0.5, 1;
      const double dev = realization_compare("s3", p, x0, 5.0, st).max_deviation;
      v.require(dev <= kTrajectoryTol, "s3 trajectory " + num(dev));
      v.info("s3 deviation " + num(dev));
    }
  });

  criterion(7, "Z0 relations and Z1 = R Z0", 2, [&](Verdict& v) {
    for (int i = 0; i < 3; ++i) {
      const ParamSet p = random_params(rng, true, true);
      const VectorField z0 = spatial_part(m::field("Z0", p));
      const Bivector j0 = m::bivector("J0", p), j1 = m::bivector("J1", p);
      const ExpPoly h = m::function("Htilde_s2", p).value;
      v.require(zero(lie_derivative(z0, j0) + j0), "L_Z0 J0");
      v.require(zero(lie_derivative(z0, j1) + j1), "L_Z0 J1");
      v.require(zero(apply(z0, h) - Rational(2) * h), "Z0 Htilde");
      v.require(zero(recursion_apply(recursion_operator(j1, j0), z0) - m::field("Z1", p)), "Z1 = R Z0");
    }
  });

  criterion(8, "Lie algebras, groups, Bianchi type", 5, [&](Verdict& v) {
    const std::vector<std::string> en{"E1", "E2", "E3"};
    const auto e = e_basis();
    StructureTable te = structure_table(std::span<const RatMatrix>(e), en);
    StructureTable we(en);
    RatVector c(3);
    c << 0, Rational(-1, 2), 0;
    we.set(0, 1, c);
    c << 0, 0, Rational(1, 2);
    we.set(0, 2, c);
    v.require(te == we, "g1 commutators");
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      const ParamSet p = random_params(rng, false, true), q = random_params(rng, true, true);
      const Rational a = p.get("a"), b = p.get("b"), cc = p.get("c");
      const auto x = x_basis(p);
      StructureTable wx({"X1", "X2", "X3"});
      c << cc, 0, 0;
      wx.set(0, 1, c);
      c << b, 0, 0;
      wx.set(0, 2, c);
      c << a, -b, cc;
      wx.set(1, 2, c);
      v.require(structure_table(std::span<const RatMatrix>(x), {"X1", "X2", "X3"}) == wx, "g2 X at " + p.str());
      const auto y = y_basis(q);
      StructureTable wy({"Y1", "Y2", "Y3"});
      c << q.get("c"), 0, 0;
      wy.set(0, 1, c);
      c << q.get("a"), 0, q.get("c");
      wy.set(1, 2, c);
      v.require(structure_table(std::span<const RatMatrix>(y), {"Y1", "Y2", "Y3"}) == wy, "g2 Y at " + q.str());
      const m::FieldBasis u = m::field_basis("u", p);
      StructureTable wu(u.names);
      c << 0, 1, 0;
      wu.set(0, 1, c);
      c << 0, 0, 1;
      wu.set(0, 2, c);
      const StructureTable tu = structure_table(std::span<const VectorField>(u.elements), u.names);
      v.require(tu == wu, "u commutators at " + p.str());
      if (i == 0) v.require(classify_bianchi(tu).label == "V", "Bianchi type of u is " + classify_bianchi(tu).label);
      for (const auto& [f, pp] : {std::pair{GroupFamily::G1, p}, std::pair{GroupFamily::G2, p},
                                  std::pair{GroupFamily::G2b0, q}}) {
        const GroupCheck g = group_element_check(f, pp, 100 + static_cast<std::uint64_t>(i), 5);
        worst = std::max({worst, g.product_error, g.substitution_error, g.identity_error});
      }
    }
    v.require(worst <= kGroupTol, "group element error " + num(worst));
    v.info("10 parameter sets, group error " + num(worst));
  });

  criterion(9, "determining equations solver", 20, [&](Verdict& v) {
    const Expr a = Expr::par("a"), t = Expr::var("t"), q2 = Expr::var("q2");
    for (std::uint64_t seed : {42u, 7u})
      for (int degree : {1, 2, 3}) {
        const ParamSet p2 = m::effective_params("newton_s2", {}), p3 = m::effective_params("newton_s3", {});
        const JetSystem s2 = m::system("newton_s2", p2), s3 = m::system("newton_s3", p3);
        const SymmetrySearch r2 = find_symmetries(s2, degree, std::nullopt, seed);
        const SymmetrySearch r3 = find_symmetries(s3, degree, std::nullopt, seed);
        const auto f2 = [&](Expr x, Expr e1, Expr e2) { return make_field(s2.base, {x, e1, e2}, p2); };
        const auto f3 = [&](Expr x, Expr e1, Expr e2) { return make_field(s3.base, {x, e1, e2}, p3); };
        const std::string where = " (degree " + std::to_string(degree) + ", seed " + std::to_string(seed) + ")";
        v.require(r2.basis.dimension() == 3, "s2 dimension " + std::to_string(r2.basis.dimension()) + where);
        v.require(same_span(make_ansatz(s2.base, degree), r2.basis.fields,
                            {f2(a * t, 2, a * q2), f2(1, 0, 0), f2(0, 0, 1)}),
                  "s2 span" + where);
        v.require(r3.basis.dimension() == 2, "s3 dimension " + std::to_string(r3.basis.dimension()) + where);
        v.require(same_span(make_ansatz(s3.base, degree), r3.basis.fields, {f3(1, 0, 0), f3(0, 0, 1)}),
                  "s3 span" + where);
      }
    const Chart base{"t", "q"};
    const JetSystem free = second_order_system("free", base, {ExpPoly::variable(jet_chart(base, 2).index("q_tt"))});
    const std::size_t d = find_symmetries(free, 2).basis.dimension();
    v.require(d == 8, "free particle dimension " + std::to_string(d));
    v.info("dimensions 3 and 2 at degrees 1-3, seeds 42 and 7; free particle 8");
  });

  criterion(10, "Noether variational symmetries", 1, [&](Verdict& v) {
    for (const char* which : {"s2", "s3"}) {
      const std::string lag = std::string("L_") + which;
      const ParamSet p = m::effective_params(lag, {});
      const ExpPoly l = m::function(lag, p).value;
      const Chart& base = m::newton_base();
      v.require(zero(noether_residual(make_field(base, {Expr(1), Expr(0), Expr(0)}, p), l)), lag + " v1");
      v.require(zero(noether_residual(make_field(base, {Expr(0), Expr(0), Expr(1)}, p), l)), lag + " v2");
    }
  });

  criterion(11, "integrator order and invariant drift", 10, [&](Verdict& v) {
    const ParamSet p{{"a", Rational(1)}, {"b", Rational(1)}, {"c", Rational(1)}, {"d", Rational(0)}};
    const Eigen::Vector3d x0(1, 1, 1);
    // measured before the finite-time blow-up of this orbit
    const double order = convergence_order("V", p, x0, 0.5, {1e-2, 5e-3, 2.5e-3}).order();
    v.require(std::abs(order - kOrderTarget) <= kOrderWindow, "order " + num(order));
    v.info("RK4 order " + num(order));
    Stepping st;
    st.dt = 1e-3;
    try {
      const Trajectory traj = integrate("V", p, x0, 10.0, st);
      const double rel = drift(traj, std::vector<std::string>{"H1"}).worst_relative();
      v.require(rel <= kDriftTol, "H1 drift on [0,10] " + num(rel));
    } catch (const Error& e) {
      v.require(false, "H1 drift on [0,10] unavailable: " + std::string(e.what()));
      const double rel = drift(integrate("V", p, x0, 1.0, st), std::vector<std::string>{"H1"}).worst_relative();
      v.info("H1 drift on [0,1] " + num(rel));
    }
    Eigen::Vector4d y0(0, 0, 1, 1);
    const double d2 = drift(integrate("hamilton_s2", m::effective_params("hamilton_s2", ParamSet{{"b", Rational(0)}}),
                                      y0, 5.0, st),
                            std::vector<std::string>{"p2"})
                          .invariants[0]
                          .max_abs;
    y0 << 0, 0, 0.5, 1;
    const double d3 =
        drift(integrate("hamilton_s3", m::effective_params("hamilton_s3", {}), y0, 5.0, st), std::vector<std::string>{"p2"})
            .invariants[0]
            .max_abs;
    v.require(d2 == 0.0 && d3 == 0.0, "p2 drift " + num(d2) + ", " + num(d3));
  });

  criterion(12, "Z and Y transport, reported", 5, [&](Verdict& v) {
    SuiteConfig cfg;
    const auto first = run_suite("symmetries", cfg), second = run_suite("symmetries", cfg);
    bool same = first.size() == second.size();
    for (std::size_t i = 0; same && i < first.size(); ++i)
      same = first[i].id == second[i].id && first[i].pass == second[i].pass && first[i].detail == second[i].detail &&
             first[i].residual == second[i].residual;
    v.require(same, "report not deterministic");
    for (int i = 0; i < 3; ++i) {
      const ParamSet p = random_params(rng, true, true);
      const auto t = m::zsym_transport_check(p, random_rational(rng, false));
      v.require(t.master(), "Y master conditions at " + p.str());
      v.require(zero(t.y_pi1_minus) && zero(t.y_h1_minus), "Y transport at " + p.str());
    }
    for (const auto& r : first)
      if (r.id.rfind("symmetries.transport.", 0) == 0 && !r.pass) v.info("surfaced " + r.id + ": " + r.detail);
  });

  std::printf("%d of 12 criteria red\n", red);
  return red == 0 ? 0 : 1;
}
