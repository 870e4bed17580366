#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamforge/chart.hpp"
#include "hamforge/exppoly.hpp"
#include "hamforge/expr.hpp"

namespace hamforge {

/// Vector field sum_i X^i d/dx_i over a chart. A chart starting with the time
/// coordinate describes a point field xi d/dt + sum_i eta_i d/dq_i.
struct VectorField {
  Chart chart;
  PolyVector components;

  std::size_t dim() const { return static_cast<std::size_t>(components.size()); }
  const ExpPoly& operator[](std::size_t i) const { return components(static_cast<Eigen::Index>(i)); }
  std::string str() const;
};

VectorField make_field(const Chart& chart, const std::vector<Expr>& components, const ParamSet& params);
VectorField make_field(const Chart& chart, std::vector<ExpPoly> components);
VectorField zero_field(const Chart& chart);

bool is_zero(const VectorField& f);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Rational& s, const VectorField& f);
bool operator==(const VectorField& a, const VectorField& b);

/// X(f) = sum_i X^i df/dx_i.
ExpPoly apply(const VectorField& field, const ExpPoly& f);

/// [X,Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i). Throws ChartMismatch.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Drops the leading time component of a point field; the remaining
/// components must not depend on time.
VectorField spatial_part(const VectorField& point_field);
/// Prepends a time component xi (a function over the time-extended chart).
VectorField with_time(const VectorField& spatial, const ExpPoly& xi, const std::string& time = "t");

/// Equations on a jet space (t, q, q_t[, q_tt]) that must vanish, optionally
/// with a solved form for the highest derivatives.
struct JetSystem {
  std::string name;
  Chart base;  // (t, q_1..q_n)
  Chart jet;   // base, velocities q_i_t, and for order 2 accelerations q_i_tt
  std::size_t dof = 0;
  int order = 1;
  std::vector<ExpPoly> equations;
  /// Highest derivatives as functions of the lower jet coordinates.
  std::optional<std::vector<ExpPoly>> solved;
  /// Solved form is invalid where any of these vanish.
  std::vector<ExpPoly> excluded;

  std::size_t time_index() const { return 0; }
  std::size_t q(std::size_t i) const { return 1 + i; }
  std::size_t velocity(std::size_t i) const { return 1 + dof + i; }
  std::size_t acceleration(std::size_t i) const { return 1 + 2 * dof + i; }
};

/// Jet chart for a base chart (t, q...): appends q_t names, and q_tt names for order 2.
Chart jet_chart(const Chart& base, int order);

/// First-order system q_t = f(q) for an autonomous field over the state chart.
JetSystem first_order_system(std::string name, const VectorField& rhs, const std::string& time = "t");

/// Second-order system from equations linear in the accelerations. With
/// solve = true the accelerations are solved by dividing through the
/// determinant of the leading coefficient matrix, which is recorded as the
/// excluded set. Throws SingularSolvedForm when that determinant vanishes
/// identically or is not invertible in the expression class.
JetSystem second_order_system(std::string name, const Chart& base, std::vector<ExpPoly> equations, bool solve = true);

/// Total time derivative on the jet space of sys.
ExpPoly total_derivative(const JetSystem& sys, const ExpPoly& f);

/// Replaces the highest derivatives by the solved form.
ExpPoly on_shell(const JetSystem& sys, const ExpPoly& f);

/// Prolonged coefficients eta^(1)_i and, for order 2, eta^(2)_i.
std::vector<ExpPoly> prolongation(const VectorField& sym, const JetSystem& sys, int order);

/// pr^(1)(sym) applied to each equation, on shell. Zero iff sym is a Lie-point
/// symmetry. Throws MissingSolvedForm.
std::vector<ExpPoly> first_prolongation_residual(const VectorField& sym, const JetSystem& sys);
/// pr^(2)(sym) applied to each equation, on shell.
std::vector<ExpPoly> second_prolongation_residual(const VectorField& sym, const JetSystem& sys);

bool all_zero(std::span<const ExpPoly> values);

/// r such that sum_i x_i df/dx_i = r f for every component (first nvars
/// variables), or nullopt. Also nullopt when every component is zero.
std::optional<Rational> homogeneity_degree(std::span<const ExpPoly> components, std::size_t nvars);

}  // namespace hamforge
