#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hamforge/field.hpp"

namespace hamforge {

/// Polynomial point-field ansatz xi, eta_1..eta_n of total degree <= D in
/// (t, q_1..q_n). Labels run function-major, then by degree, then
/// lexicographically with higher powers of earlier variables first.
struct Ansatz {
  Chart base;
  int degree = 0;
  std::vector<std::string> labels;
  /// One basis field per label: the monomial in a single component.
  std::vector<VectorField> fields;

  std::size_t size() const { return labels.size(); }
};

/// Throws InvalidArgument for a negative degree.
Ansatz make_ansatz(const Chart& base, int degree);
/// Coefficients of a field in the ansatz, or nullopt if it falls outside.
std::optional<RatVector> ansatz_coordinates(const Ansatz& ansatz, const VectorField& field);
VectorField ansatz_field(const Ansatz& ansatz, const RatVector& coefficients);

struct DeterminingSystem {
  Ansatz ansatz;
  /// residuals[j][e]: exact on-shell residual of equation e for basis field j
  std::vector<std::vector<ExpPoly>> residuals;
  /// rows: (sample, equation), columns: ansatz labels
  Eigen::MatrixXd matrix;
  int samples = 0;
  int singular_samples = 0;
  std::uint64_t seed = 0;
};

/// Default sample count: four times the unknown count.
int default_samples(const Ansatz& ansatz);

/// Samples the on-shell second-prolongation residual at random rational
/// points with magnitudes in [1/2, 2]. Points where an excluded factor
/// (nearly) vanishes are redrawn and counted. Throws InvalidArgument when
/// samples < 2 * unknowns, MissingSolvedForm without a solved form.
DeterminingSystem assemble(const JetSystem& sys, const Ansatz& ansatz, int samples, std::uint64_t seed);
/// Reuses already computed exact residuals with a fresh draw.
DeterminingSystem resample(const DeterminingSystem& base, const JetSystem& sys, int samples, std::uint64_t seed);

struct SymmetryBasis {
  std::vector<std::string> labels;
  /// Reduced row echelon form; one row per generator.
  RatMatrix coefficients;
  std::vector<VectorField> fields;
  std::vector<Eigen::Index> pivots;
  /// Smallest singular value kept and largest dropped, relative to the top one.
  double smallest_kept = 0;
  double largest_dropped = 0;

  std::size_t dimension() const { return fields.size(); }
};

/// Numerical nullspace (SVD, relative threshold 1e-9), reduced in label
/// order, rationalized by continued fractions and then re-verified against
/// the exact residuals. Throws UnverifiedBasis if rationalization fails.
SymmetryBasis nullspace(const DeterminingSystem& system, double threshold = 1e-9);

struct SymmetrySearch {
  SymmetryBasis basis;
  std::size_t unknowns = 0;
  int samples = 0;
  int singular_samples = 0;
  std::uint64_t seed = 0;
  /// nullspace dimension of the first draw and of the second (doubled) draw
  std::size_t first_dimension = 0;
  std::size_t second_dimension = 0;
};

/// Two independent draws, the second with twice the samples. Throws
/// RankDeficientSampling if the dimensions or spans differ.
SymmetrySearch find_symmetries(const JetSystem& sys, int degree, std::optional<int> samples = std::nullopt,
                               std::uint64_t seed = 42);

/// Whether two families of fields span the same space inside the ansatz.
bool same_span(const Ansatz& ansatz, const std::vector<VectorField>& a, const std::vector<VectorField>& b);

/// First-order jet data (t, q, q_t) for a base chart (t, q...).
JetSystem lagrangian_jet(const Chart& base);

/// pr^(1)(v) L + L D_t(xi). Zero iff v is a variational symmetry.
ExpPoly noether_residual(const VectorField& v, const ExpPoly& lagrangian);

/// dL/dq_i - D_t(dL/dq_i_t) over the second-order jet chart of the base.
std::vector<ExpPoly> euler_lagrange(const ExpPoly& lagrangian, const Chart& base);

struct LagrangianMatch {
  /// Euler-Lagrange expressions reduced on the solutions of the system
  std::vector<ExpPoly> on_shell;
  /// det of d^2 L / dq_t dq_t; the equivalence needs it nonzero
  ExpPoly hessian_det;

  bool holds() const;
};

/// Euler-Lagrange equations of L vanish on solutions of sys and L is regular.
LagrangianMatch lagrangian_match(const ExpPoly& lagrangian, const JetSystem& sys);

/// Continued-fraction approximation with denominator <= max_den, or nullopt
/// when no such fraction is within tol.
std::optional<Rational> rationalize(double x, double tol = 1e-9, long max_den = 1000000);

}  // namespace hamforge
