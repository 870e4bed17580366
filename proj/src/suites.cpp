#include "hamforge/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "hamforge/detsys.hpp"
#include "hamforge/error.hpp"
#include "hamforge/liealg.hpp"
#include "hamforge/lvmodels.hpp"
#include "hamforge/maps.hpp"
#include "hamforge/poisson.hpp"

namespace hamforge {

namespace m = models;

std::string to_string(CheckMode mode) { return mode == CheckMode::Exact ? "exact" : "sampled"; }

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"structure", "symmetries", "realization", "liegroups", "newton", "all"};
  return names;
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{"a", "b", "c", "d", "k", "k1", "k2", "alpha", "beta", "gamma"};
  return names;
}

void validate_params(const ParamSet& params) {
  const auto& names = parameter_names();
  for (const auto& [name, value] : params.values()) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw Error(ErrorCode::ParamConstraint, "unknown parameter '" + name + "'");
    if ((name == "a" || name == "c") && value == 0) throw Error(ErrorCode::ParamConstraint, name + " must be nonzero");
  }
}

SuiteSummary summarize(const std::vector<CheckRecord>& records) {
  SuiteSummary s;
  for (const auto& r : records) {
    ++s.total;
    if (r.skipped)
      ++s.skipped;
    else if (r.pass)
      ++s.passed;
    else
      ++s.failed;
  }
  return s;
}

namespace {

struct Outcome {
  CheckMode mode = CheckMode::Exact;
  double residual = 0;
  bool pass = false;
  std::string detail;
  ParamSet params;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string clip(std::string s) {
  if (s.size() > 240) s = s.substr(0, 237) + "...";
  return s;
}

std::vector<ExpPoly> flat(const VectorField& f) { return {f.components.begin(), f.components.end()}; }
std::vector<ExpPoly> flat(const PolyVector& v) { return {v.begin(), v.end()}; }
std::vector<ExpPoly> flat(const PolyMatrix& m) { return {m.reshaped().begin(), m.reshaped().end()}; }
std::vector<ExpPoly> flat(const Bivector& b) {
  std::vector<ExpPoly> out;
  for (Eigen::Index i = 0; i < b.entries.rows(); ++i)
    for (Eigen::Index j = i + 1; j < b.entries.cols(); ++j) out.push_back(b.entries(i, j));
  return out;
}
std::vector<ExpPoly> flat(const Tensor3& t) {
  std::vector<ExpPoly> out;
  for (const auto& [i, j, k, v] : t.nonzero()) out.push_back(v);
  return out;
}

class Runner {
 public:
  Runner(const SuiteConfig& cfg, std::vector<CheckRecord>& out) : cfg_(cfg), out_(out) {}

  const SuiteConfig& cfg() const { return cfg_; }

  // the d = 0 world; b as given
  ParamSet p0() const { return cfg_.params.with("d", 0); }
  // the b = 0, d = 0 world
  ParamSet p00() const { return cfg_.params.with("d", 0).with("b", 0); }
  // the d != 0 world; d defaults to 1 in the catalog
  ParamSet p3() const { return cfg_.params; }

  void add(const std::string& id, const std::string& anchor, const std::function<Outcome()>& fn) {
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.seed = cfg_.seed;
    try {
      const Outcome o = fn();
      r.mode = o.mode;
      r.residual = o.residual;
      r.pass = o.pass;
      r.detail = o.detail;
      r.params = o.params;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParamConstraint) {
        r.skipped = true;
        r.detail = e.what();
      } else if (e.code() == ErrorCode::Divergence || e.code() == ErrorCode::StepUnderflow) {
        r.mode = CheckMode::Sampled;
        r.residual = std::numeric_limits<double>::infinity();
        r.detail = e.what();
      } else {
        throw;
      }
    }
    out_.push_back(std::move(r));
  }

  // largest |value| of the residual components over deterministic points in [1/2, 2]
  double magnitude(const std::vector<ExpPoly>& rs) const {
    std::size_t n = 0;
    for (const auto& r : rs) n = std::max(n, r.span());
    std::mt19937_64 rng(cfg_.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    double worst = 0;
    std::vector<double> x(n);
    for (int s = 0; s < 16; ++s) {
      for (double& v : x) v = u(rng);
      for (const auto& r : rs) worst = std::max(worst, std::abs(r.eval(x)));
    }
    return worst;
  }

  Outcome zero(const std::vector<ExpPoly>& rs, const ParamSet& params, const Chart& chart = {}) const {
    Outcome o;
    o.params = params;
    o.pass = std::all_of(rs.begin(), rs.end(), [](const ExpPoly& r) { return r.is_zero(); });
    if (!o.pass) {
      o.residual = magnitude(rs);
      for (const auto& r : rs)
        if (!r.is_zero()) {
          o.detail = clip("residual " + (chart.size() >= r.span() ? r.str(chart) : r.str()));
          break;
        }
    }
    return o;
  }
  Outcome zero(const ExpPoly& r, const ParamSet& p) const { return zero(std::vector<ExpPoly>{r}, p); }
  Outcome zero(const VectorField& f, const ParamSet& p) const { return zero(flat(f), p); }
  Outcome zero(const Bivector& b, const ParamSet& p) const { return zero(flat(b), p); }
  Outcome zero(const PolyVector& v, const ParamSet& p) const { return zero(flat(v), p); }
  Outcome zero(const PolyMatrix& m, const ParamSet& p) const { return zero(flat(m), p); }
  Outcome zero(const Tensor3& t, const ParamSet& p) const { return zero(flat(t), p); }

  // claims that something does not vanish
  Outcome nonzero(const std::vector<ExpPoly>& rs, const ParamSet& params) const {
    Outcome o;
    o.params = params;
    o.pass = std::any_of(rs.begin(), rs.end(), [](const ExpPoly& r) { return !r.is_zero(); });
    o.residual = 0;
    o.detail = o.pass ? clip("nonzero as claimed; magnitude " + num(magnitude(rs))) : "identically zero";
    return o;
  }

  Outcome sampled(double residual, double tol, const ParamSet& params, std::string detail = {}) const {
    Outcome o;
    o.mode = CheckMode::Sampled;
    o.residual = residual;
    o.pass = residual <= tol;
    o.params = params;
    o.detail = std::move(detail);
    return o;
  }

 private:
  const SuiteConfig& cfg_;
  std::vector<CheckRecord>& out_;
};

ParamSet eff(const std::string& key, const ParamSet& p) { return m::effective_params(key, p); }

double numeric_jacobi(const Bivector& pi, std::mt19937_64& rng, int samples) {
  const std::size_t n = pi.dim();
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst = 0;
  std::vector<double> x(n);
  for (int s = 0; s < samples; ++s) {
    for (double& v : x) v = u(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          double acc = 0;
          for (std::size_t l = 0; l < n; ++l)
            acc += pi(i, l).eval(x) * pi(j, k).diff(l).eval(x) + pi(j, l).eval(x) * pi(k, i).diff(l).eval(x) +
                   pi(k, l).eval(x) * pi(i, j).diff(l).eval(x);
          worst = std::max(worst, std::abs(acc));
        }
  }
  return worst;
}

void structure(Runner& r) {
  const std::string cons = "constants of motion of the d = 0 system";
  r.add("structure.conservation.V_H1", cons, [&] {
    const ParamSet p = r.p0();
    return r.zero(apply(m::field("V", p), m::function("H1", p).value), eff("V", p));
  });
  r.add("structure.conservation.V_H2", cons, [&] {
    const ParamSet p = r.p0();
    return r.zero(apply(m::field("V", p), m::function("H2", p).value), eff("V", p));
  });
  r.add("structure.conservation.lv_H", "Hamiltonian of the d != 0 system", [&] {
    const ParamSet p = r.p3();
    return r.zero(apply(m::field("lv", eff("pi", p)), m::function("H", p).value), eff("pi", p));
  });
  r.add("structure.conservation.lv_C", "Casimir of the d != 0 system is conserved", [&] {
    const ParamSet p = r.p3();
    return r.zero(apply(m::field("lv", eff("pi", p)), m::function("C", p).value), eff("pi", p));
  });
  const std::string biham = "bi-Hamiltonian form pi1 grad H2 = pi2 grad H1 = V";
  r.add("structure.bihamiltonian.pi1_H2", biham, [&] {
    const ParamSet p = r.p0();
    return r.zero(hamiltonian_field(m::bivector("pi1", p), m::function("H2", p).value) - m::field("V", p),
                  eff("pi1", p));
  });
  r.add("structure.bihamiltonian.pi2_H1", biham, [&] {
    const ParamSet p = r.p0();
    return r.zero(hamiltonian_field(m::bivector("pi2", p), m::function("H1", p).value) - m::field("V", p),
                  eff("pi2", p));
  });
  r.add("structure.bihamiltonian.pi_H", "Lie-Poisson form of the d != 0 system", [&] {
    const ParamSet p = eff("pi", r.p3());
    return r.zero(hamiltonian_field(m::bivector("pi", p), m::function("H", p).value) - m::field("lv", p), p);
  });
  r.add("structure.casimir.pi1_H1", "H1 is a Casimir of pi1", [&] {
    const ParamSet p = r.p0();
    return r.zero(casimir_residual(m::bivector("pi1", p), m::function("H1", p).value), eff("pi1", p));
  });
  r.add("structure.casimir.pi2_H2", "H2 is a Casimir of pi2", [&] {
    const ParamSet p = r.p0();
    return r.zero(casimir_residual(m::bivector("pi2", p), m::function("H2", p).value), eff("pi2", p));
  });
  r.add("structure.casimir.pi_C", "C is a Casimir of pi", [&] {
    const ParamSet p = eff("pi", r.p3());
    return r.zero(casimir_residual(m::bivector("pi", p), m::function("C", p).value), p);
  });
  for (const char* key : {"pi1", "pi2"})
    r.add(std::string("structure.jacobi.") + key, std::string(key) + " is a Poisson tensor",
          [&, key] { return r.zero(jacobi_residual(m::bivector(key, r.p0())), eff(key, r.p0())); });
  r.add("structure.jacobi.pi", "pi is a Poisson tensor",
        [&] { return r.zero(jacobi_residual(m::bivector("pi", r.p3())), eff("pi", r.p3())); });
  r.add("structure.jacobi.pi1_plus_pi2", "pi1 and pi2 are compatible", [&] {
    const ParamSet p = r.p0();
    return r.zero(compatibility_residual(m::bivector("pi1", p), m::bivector("pi2", p)), eff("pi1", p));
  });
  r.add("structure.jacobi.J0", "canonical Poisson tensor",
        [&] { return r.zero(jacobi_residual(m::bivector("J0", r.p0())), eff("J0", r.p0())); });
  r.add("structure.jacobi.J1", "first non-canonical bracket is Poisson",
        [&] { return r.zero(jacobi_residual(m::bivector("J1", r.p00())), eff("J1", r.p00())); });
  r.add("structure.jacobi.J0_plus_J1", "first non-canonical bracket is compatible with the canonical one", [&] {
    const ParamSet p = r.p00();
    return r.zero(compatibility_residual(m::bivector("J0", p), m::bivector("J1", p)), eff("J1", p));
  });
  r.add("structure.jacobi.J0_plus_J2_nonzero", "second non-canonical bracket is not compatible", [&] {
    const ParamSet p = r.p00();
    return r.nonzero(flat(jacobi_residual(m::bivector("J0", p) + m::bivector("J2", p))), eff("J2", p));
  });
  r.add("structure.jacobi.linear_sampled", "numeric Jacobi oracle for pi1, pi2, pi at 100 points", [&] {
    std::mt19937_64 rng(r.cfg().seed);
    const double w = std::max({numeric_jacobi(m::bivector("pi1", r.p0()), rng, 100),
                               numeric_jacobi(m::bivector("pi2", r.p0()), rng, 100),
                               numeric_jacobi(m::bivector("pi", r.p3()), rng, 100)});
    return r.sampled(w, r.cfg().tol, eff("pi1", r.p0()));
  });
  const std::string conf = "X is a conformal symmetry: L_X pi_i = -pi_i, X(H_i) = 2 H_i";
  r.add("structure.conformal.X_pi1", conf, [&] {
    const ParamSet p = r.p0();
    const VectorField x = spatial_part(m::field("X", p));
    const Bivector pi = m::bivector("pi1", p);
    return r.zero(lie_derivative(x, pi) + pi, eff("X", p));
  });
  r.add("structure.conformal.X_pi2", conf, [&] {
    const ParamSet p = r.p0();
    const VectorField x = spatial_part(m::field("X", p));
    const Bivector pi = m::bivector("pi2", p);
    return r.zero(lie_derivative(x, pi) + pi, eff("X", p));
  });
  r.add("structure.conformal.X_H1", conf, [&] {
    const ParamSet p = r.p0();
    const ExpPoly h = m::function("H1", p).value;
    return r.zero(apply(spatial_part(m::field("X", p)), h) - Rational(2) * h, eff("X", p));
  });
  r.add("structure.conformal.X_H2", conf, [&] {
    const ParamSet p = r.p0();
    const ExpPoly h = m::function("H2", p).value;
    return r.zero(apply(spatial_part(m::field("X", p)), h) - Rational(2) * h, eff("X", p));
  });
  r.add("structure.master.Xmaster_V", "master symmetry: [Xm, V] = k1 V", [&] {
    const ParamSet p = eff("Xmaster", r.p0());
    const VectorField v = m::field("V", p);
    return r.zero(lie_bracket(m::field("Xmaster", p), v) - p.get("k1") * v, p);
  });
  r.add("structure.master.Xmaster_VV", "master symmetry: [[Xm, V], V] = 0", [&] {
    const ParamSet p = eff("Xmaster", r.p0());
    const VectorField v = m::field("V", p);
    return r.zero(lie_bracket(lie_bracket(m::field("Xmaster", p), v), v), p);
  });
}

void symmetries(Runner& r) {
  r.add("symmetries.prolongation.X", "X is a Lie point symmetry of the d = 0 system", [&] {
    const ParamSet p = r.p0();
    const JetSystem sys = first_order_system("lv_d0", m::field("V", p));
    return r.zero(first_prolongation_residual(m::field("X", p), sys), eff("X", p));
  });
  const std::string z0 = "Z0 relations: L_Z0 J0 = -J0, L_Z0 J1 = -J1, Z0(Htilde) = 2 Htilde";
  r.add("symmetries.z0.J0", z0, [&] {
    const ParamSet p = r.p00();
    const Bivector j = m::bivector("J0", p);
    return r.zero(lie_derivative(spatial_part(m::field("Z0", p)), j) + j, eff("Z0", p));
  });
  r.add("symmetries.z0.J1", z0, [&] {
    const ParamSet p = r.p00();
    const Bivector j = m::bivector("J1", p);
    return r.zero(lie_derivative(spatial_part(m::field("Z0", p)), j) + j, eff("Z0", p));
  });
  r.add("symmetries.z0.Htilde", z0, [&] {
    const ParamSet p = r.p00();
    const ExpPoly h = m::function("Htilde_s2", p).value;
    return r.zero(apply(spatial_part(m::field("Z0", p)), h) - Rational(2) * h, eff("Z0", p));
  });
  r.add("symmetries.recursion.Z1", "Z1 = R Z0 with R = J1 J0^-1", [&] {
    const ParamSet p = r.p00();
    const RecursionOperator rec = recursion_operator(m::bivector("J1", p), m::bivector("J0", p));
    return r.zero(recursion_apply(rec, spatial_part(m::field("Z0", p))) - m::field("Z1", p), eff("Z1", p));
  });
  const auto transport = [&] {
    const ParamSet p = eff("Zvec", r.p00());
    return std::pair{m::zsym_transport_check(p, p.get("k")), p};
  };
  r.add("symmetries.transport.Z_pi1", "Z sends pi1 to pi2", [&] {
    const auto [t, p] = transport();
    return r.zero(t.z_pi1_minus_pi2, p);
  });
  r.add("symmetries.transport.Z_H1", "Z sends H1 to H2", [&] {
    const auto [t, p] = transport();
    Outcome o = r.zero({t.z_h1_minus_h2}, p, m::state_chart());
    if (!o.pass && t.z_h1_plus_h2.is_zero()) o.detail = "measured Z(H1) = -H2; " + o.detail;
    return o;
  });
  r.add("symmetries.transport.Y_pi1", "Y sends pi1 to pi2 - pi1", [&] {
    const auto [t, p] = transport();
    return r.zero(t.y_pi1_minus, p);
  });
  r.add("symmetries.transport.Y_H1", "Y sends H1 to 2 H1 - H2", [&] {
    const auto [t, p] = transport();
    return r.zero(t.y_h1_minus, p);
  });
  r.add("symmetries.transport.Y_master", "Y is a master symmetry: [Y, V] != 0, [[Y, V], V] = 0", [&] {
    const auto [t, p] = transport();
    Outcome o = r.zero(t.y_v_v, p);
    if (is_zero(t.y_v)) {
      o.pass = false;
      o.detail = "[Y, V] vanishes";
    }
    return o;
  });
}

void realization_branch(Runner& r, const std::string& which) {
  const bool s2 = which == "s2";
  const std::string phi_key = "phi_" + which, ham = "Htilde_" + which, eqs = "hamilton_" + which,
                    target = s2 ? "V" : "lv", pi = s2 ? "pi1" : "pi", pre = "realization." + which + ".";
  const auto params = [&, s2] { return s2 ? (r.cfg().params.has("b") ? r.p0() : r.p00()) : r.p3(); };
  const std::string anchor = s2 ? "exponential symplectic realization" : "polynomial symplectic realization";
  r.add(pre + "hamilton_equations", anchor + ": J0 grad Htilde gives the stated Hamilton equations", [&] {
    const ParamSet p = eff(phi_key, params());
    return r.zero(hamiltonian_field(m::bivector("J0", p), m::function(ham, p).value) - m::field(eqs, p), p);
  });
  r.add(pre + "pushforward", anchor + ": Hamilton's equations map onto the system", [&] {
    const ParamSet p = eff(phi_key, params());
    return r.zero(pushforward_residual(m::map(phi_key, p), m::field(eqs, p), m::field(target, p)), p);
  });
  r.add(pre + "bracket", anchor + ": canonical bracket maps onto " + pi, [&] {
    const ParamSet p = eff(phi_key, params());
    return r.zero(bracket_pushforward_residual(m::map(phi_key, p), m::bivector("J0", p), m::bivector(pi, p)), p);
  });
  const std::vector<std::pair<std::string, std::string>> pulls =
      s2 ? std::vector<std::pair<std::string, std::string>>{{"H2", "Htilde"}, {"H1", "p2"}}
         : std::vector<std::pair<std::string, std::string>>{{"H", "Htilde"}, {"C", "p2"}};
  for (const auto& [target_fn, source] : pulls)
    r.add(pre + "pullback_" + target_fn, anchor + ": " + target_fn + " pulls back to " + source, [&, target_fn, source] {
      const ParamSet p = eff(phi_key, params());
      const ExpPoly src = source == "p2" ? ExpPoly::variable(3) : m::function(ham, p).value;
      const auto res = conserved_pullback_check(m::map(phi_key, p), {{target_fn, src, m::function(target_fn, p).value}});
      Outcome o = r.zero(res[0].residual, p);
      if (res[0].constant_offset()) o.detail = "constant offset: " + o.detail;
      return o;
    });
  r.add(pre + "rank", anchor + ": submersion (Jacobian rank 3 at sampled points)", [&] {
    const ParamSet p = eff(phi_key, params());
    const SmoothMap phi = m::map(phi_key, p);
    std::mt19937_64 rng(r.cfg().seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int bad = 0;
    for (int s = 0; s < 20; ++s) {
      Eigen::VectorXd x(4);
      for (int i = 0; i < 4; ++i) x(i) = u(rng);
      bad += jacobian_rank(phi, x) != 3;
    }
    return r.sampled(bad, 0, p, std::to_string(bad) + " of 20 points rank-deficient");
  });
  r.add(pre + "trajectory", anchor + ": mapped canonical flow matches the system flow", [&] {
    const ParamSet p = eff(phi_key, params());
    Eigen::VectorXd x0(4);
    if (s2)
      x0 << 0, 0, 1, 1;
    else
      x0 << 0, 0, 0.5, 1;
    const RealizationComparison c = realization_compare(which, p, x0, r.cfg().t_end, r.cfg().stepping);
    return r.sampled(c.max_deviation, r.cfg().trajectory_tol, p,
                     "dt " + num(r.cfg().stepping.dt) + ", t_end " + num(r.cfg().t_end));
  });
}

void realization(Runner& r) {
  realization_branch(r, "s2");
  realization_branch(r, "s3");
  r.add("realization.s2.inverse_branch", "exponential realization onto z > 0: explicit preimages", [&] {
    const ParamSet p = eff("phi_s2", r.p0());
    const SmoothMap phi = m::map("phi_s2", p);
    std::mt19937_64 rng(r.cfg().seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5), pos(0.2, 3.0);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const Eigen::Vector3d target(u(rng), u(rng), pos(rng));
      const Eigen::Vector4d src = exponential_realization_inverse(target, p.get("a").to_double(),
                                                                  p.get("b").to_double(), p.get("c").to_double(), u(rng));
      worst = std::max(worst, (evaluate(phi, src) - target).cwiseAbs().maxCoeff());
    }
    return r.sampled(worst, 1e-10, p, "surjectivity onto all of R^3 not claimed: image has z > 0");
  });
  for (int which : {1, 2})
    r.add("realization.omega" + std::to_string(which) + ".fg_relations",
          "relations on F, G for the b = 0 bracket " + std::to_string(which), [&, which] {
            const ParamSet p = eff("J1", r.p00());
            return r.zero(m::fg_relation_residuals(which, p), p, m::phase_chart());
          });
  r.add("realization.omega2.jacobi", "second non-canonical bracket is Poisson", [&] {
    const ParamSet p = eff("J2", r.p00());
    return r.zero(flat(jacobi_residual(m::bivector("J2", p))), p, m::phase_chart());
  });
}

StructureTable expected_table(const std::vector<std::string>& names,
                       std::initializer_list<std::tuple<int, int, std::vector<Rational>>> rel) {
  StructureTable t(names);
  for (const auto& [i, j, c] : rel) {
    RatVector v(3);
    for (int k = 0; k < 3; ++k) v(k) = c[static_cast<std::size_t>(k)];
    t.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
  }
  return t;
}

Outcome table_match(const Runner& r, const StructureTable& got, const StructureTable& want, const ParamSet& p) {
  Outcome o = r.zero(std::vector<ExpPoly>{}, p);
  o.pass = got == want;
  if (!o.pass) o.detail = "computed " + got.str() + " expected " + want.str();
  return o;
}

void liegroups(Runner& r) {
  r.add("liegroups.commutators.E", "commutation relations of g1", [&] {
    const auto e = e_basis();
    const StructureTable got = structure_table(std::span<const RatMatrix>(e), {"E1", "E2", "E3"});
    const auto want = expected_table({"E1", "E2", "E3"}, {{0, 1, {0, Rational(-1, 2), 0}}, {0, 2, {0, 0, Rational(1, 2)}}});
    return table_match(r, got, want, {});
  });
  r.add("liegroups.commutators.X", "commutation relations of g2 for b != 0", [&] {
    const ParamSet p = eff("Xbasis", r.p0());
    const Rational a = p.get("a"), b = p.get("b"), c = p.get("c");
    const auto x = x_basis(p);
    const StructureTable got = structure_table(std::span<const RatMatrix>(x), {"X1", "X2", "X3"});
    const auto want = expected_table({"X1", "X2", "X3"}, {{0, 1, {c, 0, 0}}, {0, 2, {b, 0, 0}}, {1, 2, {a, -b, c}}});
    return table_match(r, got, want, p);
  });
  r.add("liegroups.commutators.Y", "commutation relations of g2 for b = 0", [&] {
    const ParamSet p = eff("Ybasis", r.p00());
    const Rational a = p.get("a"), c = p.get("c");
    const auto y = y_basis(p);
    const StructureTable got = structure_table(std::span<const RatMatrix>(y), {"Y1", "Y2", "Y3"});
    const auto want = expected_table({"Y1", "Y2", "Y3"}, {{0, 1, {c, 0, 0}}, {1, 2, {a, 0, c}}});
    return table_match(r, got, want, p);
  });
  r.add("liegroups.commutators.u", "Newton symmetry algebra u1, u2, u3", [&] {
    const ParamSet p = eff("u", r.p0());
    const m::FieldBasis u = m::field_basis("u", p);
    const StructureTable got = structure_table(std::span<const VectorField>(u.elements), u.names);
    const auto want = expected_table(u.names, {{0, 1, {0, 1, 0}}, {0, 2, {0, 0, 1}}});
    return table_match(r, got, want, p);
  });
  r.add("liegroups.bianchi.u", "Newton symmetry algebra has Bianchi type V", [&] {
    const ParamSet p = eff("u", r.p0());
    const m::FieldBasis u = m::field_basis("u", p);
    const BianchiType t = classify_bianchi(structure_table(std::span<const VectorField>(u.elements), u.names));
    Outcome o = r.zero(std::vector<ExpPoly>{}, p);
    o.pass = t.label == "V";
    o.detail = "classified " + t.str();
    return o;
  });
  r.add("liegroups.bianchi.g1", "g1 classification (reported)", [&] {
    const auto e = e_basis();
    const BianchiType t = classify_bianchi(structure_table(std::span<const RatMatrix>(e), {"E1", "E2", "E3"}));
    Outcome o = r.zero(std::vector<ExpPoly>{}, {});
    o.pass = true;
    o.detail = "classified " + t.str();
    return o;
  });
  const auto group = [&](GroupFamily f, const ParamSet& p) {
    const GroupCheck g = group_element_check(f, p, r.cfg().seed, 20);
    const double w = std::max({g.product_error, g.substitution_error, g.identity_error,
                               g.closure_fit ? g.closure_error : 0.0, g.inverse_fit ? g.inverse_error : 0.0});
    Outcome o = r.sampled(w, 1e-10, p);
    o.pass = f == GroupFamily::G2 ? g.pass_within_chart() : g.pass();
    o.detail = "product " + num(g.product_error) + ", outside chart: " +
               std::to_string(g.closure_outside) + " products, " + std::to_string(g.inverse_outside) +
               " inverses of " + std::to_string(g.trials) + ", mismatches " + std::to_string(g.mismatches);
    return o;
  };
  r.add("liegroups.group.G1", "generic element of G1 as a product of exponentials",
        [&] { return group(GroupFamily::G1, eff("E", r.p0())); });
  r.add("liegroups.group.G2", "generic element of G2 (b != 0) on the chart v, w > 0",
        [&] { return group(GroupFamily::G2, eff("Xbasis", r.p0())); });
  r.add("liegroups.group.G2b0", "generic element of G2 for b = 0",
        [&] { return group(GroupFamily::G2b0, eff("Ybasis", r.p00())); });
}

void newton(Runner& r) {
  const auto search = [&](const std::string& key, const ParamSet& p, std::size_t want,
                          const std::vector<VectorField>& family) {
    const JetSystem sys = m::system(key, p);
    const int degree = 2;
    const SymmetrySearch s = find_symmetries(sys, degree, std::nullopt, r.cfg().seed);
    const bool spans = same_span(make_ansatz(sys.base, degree), s.basis.fields, family);
    Outcome o = r.sampled(s.basis.largest_dropped, r.cfg().tol, p);
    o.pass = o.pass && s.basis.dimension() == want && spans;
    o.detail = "dimension " + std::to_string(s.basis.dimension()) + " (second draw " +
               std::to_string(s.second_dimension) + "), unknowns " + std::to_string(s.unknowns) + ", degree " +
               std::to_string(degree) + (spans ? ", spans the known family" : ", span differs from the known family");
    return o;
  };
  const auto pt = [](const ParamSet& p, std::vector<Expr> c) { return make_field(m::newton_base(), std::move(c), p); };
  r.add("newton.s2.symmetries", "point symmetries of the exponential Newton system: dimension 3", [&] {
    const ParamSet p = eff("newton_s2", r.p0());
    const Expr a = Expr::par("a"), t = Expr::var("t"), q2 = Expr::var("q2");
    return search("newton_s2", p, 3,
                  {pt(p, {a * t, Expr(2), a * q2}), pt(p, {Expr(1), Expr(0), Expr(0)}), pt(p, {Expr(0), Expr(0), Expr(1)})});
  });
  r.add("newton.s3.symmetries", "point symmetries of the polynomial Newton system: dimension 2", [&] {
    const ParamSet p = eff("newton_s3", r.p3());
    return search("newton_s3", p, 2, {pt(p, {Expr(1), Expr(0), Expr(0)}), pt(p, {Expr(0), Expr(0), Expr(1)})});
  });
  r.add("newton.s2.family", "closed-form symmetry family of the exponential Newton system", [&] {
    const ParamSet p = eff("sym_s2", r.p0());
    return r.zero(second_prolongation_residual(m::field("sym_s2", p), m::system("newton_s2", p)), p);
  });
  r.add("newton.s3.family", "closed-form symmetry family of the polynomial Newton system", [&] {
    const ParamSet p = eff("sym_s3", r.p3());
    return r.zero(second_prolongation_residual(m::field("sym_s3", p), m::system("newton_s3", p)), p);
  });
  for (const std::string which : {"s2", "s3"}) {
    const std::string lag = "L_" + which;
    const auto world = [&, which] { return which == "s2" ? r.p0() : r.p3(); };
    r.add("newton." + which + ".noether_v1", "d/dt is a variational symmetry of " + lag, [&, lag, world] {
      const ParamSet p = eff(lag, world());
      return r.zero(noether_residual(pt(p, {Expr(1), Expr(0), Expr(0)}), m::function(lag, p).value), p);
    });
    r.add("newton." + which + ".noether_v2", "d/dq2 is a variational symmetry of " + lag, [&, lag, world] {
      const ParamSet p = eff(lag, world());
      return r.zero(noether_residual(pt(p, {Expr(0), Expr(0), Expr(1)}), m::function(lag, p).value), p);
    });
    r.add("newton." + which + ".lagrange", "Euler-Lagrange equations of " + lag + " are the Newton system",
          [&, lag, world, which] {
            const ParamSet p = eff(lag, world());
            const LagrangianMatch lm = lagrangian_match(m::function(lag, p).value, m::system("newton_" + which, p));
            Outcome o = r.zero(lm.on_shell, p);
            if (lm.hessian_det.is_zero()) {
              o.pass = false;
              o.detail = "degenerate Lagrangian";
            }
            return o;
          });
  }
}

}  // namespace

std::vector<CheckRecord> run_suite(const std::string& suite, const SuiteConfig& config) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  validate_params(config.params);
  const SuiteConfig& cfg = config;
  std::vector<CheckRecord> out;
  Runner r(cfg, out);
  const bool all = suite == "all";
  if (all || suite == "structure") structure(r);
  if (all || suite == "symmetries") symmetries(r);
  if (all || suite == "realization") realization(r);
  if (all || suite == "liegroups") liegroups(r);
  if (all || suite == "newton") newton(r);
  std::sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  return out;
}

}  // namespace hamforge
