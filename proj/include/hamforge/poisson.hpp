#pragma once

#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hamforge/field.hpp"

namespace hamforge {

/// Antisymmetric matrix of functions; entry (i, j) is the bracket {x_i, x_j}.
struct Bivector {
  Chart chart;
  PolyMatrix entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  const ExpPoly& operator()(std::size_t i, std::size_t j) const {
    return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

/// One bracket {x_i, x_j} = value, named by coordinate.
struct BracketEntry {
  std::string left;
  std::string right;
  Expr value;
};

/// Builds the antisymmetric matrix from listed brackets; unlisted pairs are zero.
Bivector make_bivector(const Chart& chart, const std::vector<BracketEntry>& brackets, const ParamSet& params);
/// Throws InvalidArgument unless entries are exactly antisymmetric.
Bivector make_bivector(const Chart& chart, PolyMatrix entries);
Bivector make_constant_bivector(const Chart& chart, const RatMatrix& entries);

Bivector operator+(const Bivector& a, const Bivector& b);
Bivector operator-(const Bivector& a, const Bivector& b);
Bivector operator*(const Rational& s, const Bivector& b);
bool is_zero(const Bivector& b);

PolyVector gradient(const ExpPoly& f, std::size_t dim);

/// {f, g} = grad(f)^T pi grad(g).
ExpPoly bracket(const Bivector& pi, const ExpPoly& f, const ExpPoly& g);

/// (pi grad H)^i = sum_j pi^{ij} d_j H.
VectorField hamiltonian_field(const Bivector& pi, const ExpPoly& h);

/// Antisymmetric rank-3 array R^{ijk}; zero iff pi satisfies Jacobi.
struct Tensor3 {
  std::size_t n = 0;
  std::vector<ExpPoly> data;

  const ExpPoly& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data[(i * n + j) * n + k]; }
  ExpPoly& operator()(std::size_t i, std::size_t j, std::size_t k) { return data[(i * n + j) * n + k]; }
  bool is_zero() const;
  /// Independent nonzero components (i < j < k).
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, ExpPoly>> nonzero() const;
};

/// R^{ijk} = sum_l (pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij}).
Tensor3 jacobi_residual(const Bivector& pi);

/// pi grad C; zero iff C is a Casimir.
VectorField casimir_residual(const Bivector& pi, const ExpPoly& c);

/// (L_X pi)^{ij} = sum_l (X^l d_l pi^{ij} - pi^{lj} d_l X^i - pi^{il} d_l X^j).
Bivector lie_derivative(const VectorField& x, const Bivector& pi);

struct ConformalScalars {
  std::optional<Rational> lambda;  // L_X pi = lambda pi
  std::optional<Rational> nu;      // X(H) = nu H
};

/// Exact proportionality factor: s with lhs = s * rhs, or nullopt.
std::optional<Rational> proportionality(const PolyMatrix& lhs, const PolyMatrix& rhs);
std::optional<Rational> proportionality(const ExpPoly& lhs, const ExpPoly& rhs);

ConformalScalars conformal_check(const VectorField& x, const Bivector& pi, const ExpPoly& h);

/// jacobi_residual(pi1 + pi2). Throws NotPoisson when either input fails Jacobi.
Tensor3 compatibility_residual(const Bivector& pi1, const Bivector& pi2);

/// R = J1 J0^{-1} for a constant invertible J0.
struct RecursionOperator {
  Chart chart;
  PolyMatrix matrix;
};

/// Throws SingularBase unless J0 is constant and invertible.
RecursionOperator recursion_operator(const Bivector& j1, const Bivector& j0);
VectorField recursion_apply(const RecursionOperator& r, const VectorField& x);

/// Numeric rank at a point: singular values above 1e-10 times the largest.
int rank(const Bivector& pi, std::span<const double> point);

}  // namespace hamforge
