#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hamforge/error.hpp"
#include "hamforge/poisson.hpp"
#include "hamforge/rational.hpp"

namespace hamforge {

/// AB - BA. Throws DimensionMismatch.
RatMatrix commutator(const RatMatrix& a, const RatMatrix& b);

namespace detail {
inline double as_double(double x) { return x; }
inline double as_double(const Rational& r) { return r.to_double(); }
}  // namespace detail

/// Matrix exponential. Diagonal and nilpotent inputs use the closed form
/// (the nilpotent series is summed in the input scalar, so exactly for
/// Rational); anything else goes to Eigen's scaling-and-squaring Pade.
template <typename Derived>
Eigen::MatrixXd mat_exp(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat a = input;
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "mat_exp: matrix is not square");
  const Eigen::Index n = a.rows();
  const auto zero = [](const Scalar& s) { return s == Scalar(0); };

  bool diagonal = true;
  for (Eigen::Index i = 0; i < n && diagonal; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && !zero(a(i, j))) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = std::exp(detail::as_double(a(i, i)));
    return out;
  }

  // A^n = 0 for nilpotent A, so n steps decide it.
  Mat sum = Mat::Identity(n, n), power = Mat::Identity(n, n);
  Scalar factorial(1);
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power * a;
    if (std::all_of(power.data(), power.data() + power.size(), zero))
      return sum.unaryExpr([](const Scalar& s) { return detail::as_double(s); });
    factorial = factorial * Scalar(static_cast<int>(k));
    sum += power / factorial;
  }
  const Eigen::MatrixXd d = a.unaryExpr([](const Scalar& s) { return detail::as_double(s); });
  return d.exp();
}

/// Structure constants: [b_i, b_j] = sum_k C(i, j, k) b_k.
class StructureTable {
 public:
  explicit StructureTable(std::vector<std::string> names);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[index(i, j, k)]; }
  RatVector bracket(std::size_t i, std::size_t j) const;
  /// Sets [b_i, b_j] = coeffs and [b_j, b_i] = -coeffs.
  StructureTable& set(std::size_t i, std::size_t j, const RatVector& coeffs);
  /// Raw write, no antisymmetrization (tests use this to build broken tables).
  StructureTable& set_raw(std::size_t i, std::size_t j, const RatVector& coeffs);

  friend bool operator==(const StructureTable& a, const StructureTable& b) { return a.c_ == b.c_; }
  std::string str() const;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dim() + j) * dim() + k; }
  std::vector<std::string> names_;
  std::vector<Rational> c_;
};

bool is_antisymmetric(const StructureTable& t);
bool satisfies_jacobi(const StructureTable& t);

/// Coordinates of m in the span of basis, or nullopt.
std::optional<RatVector> coordinates(std::span<const RatMatrix> basis, const RatMatrix& m);
std::optional<RatVector> coordinates(std::span<const VectorField> basis, const VectorField& f);

/// Table of a matrix (or vector field) basis. Throws InvalidArgument when a
/// bracket leaves the span.
StructureTable structure_table(std::span<const RatMatrix> basis, std::vector<std::string> names);
StructureTable structure_table(std::span<const VectorField> basis, std::vector<std::string> names);

/// Reads C(i, j, k) as the coefficient of x_k in pi^{ij}. Throws
/// InvalidArgument unless every entry is linear and homogeneous.
StructureTable linear_bracket_table(const Bivector& pi, std::vector<std::string> names);

struct BianchiType {
  std::string label;        // I, II, III, IV, V, VI_0, VI_h, VII_0, VII_h, VIII, IX
  std::optional<Rational> h;
  bool class_a = true;
  RatVector a;
  RatMatrix n;
  std::string str() const;
};

/// Decomposes C^k_ij = eps_ijl n^lk + delta^k_j a_i - delta^k_i a_j.
/// Throws NotJacobi for tables that are not 3-dimensional Lie algebras.
BianchiType classify_bianchi(const StructureTable& t);

std::vector<RatMatrix> e_basis();
/// Throws ParamConstraint when b = 0 or c = 0.
std::vector<RatMatrix> x_basis(const ParamSet& params);
std::vector<RatMatrix> y_basis(const ParamSet& params);
/// X basis for b != 0, Y basis for b = 0.
std::vector<RatMatrix> g2_basis(const ParamSet& params);

enum class GroupFamily { G1, G2, G2b0 };
std::string to_string(GroupFamily f);
/// Accepts "G1", "G2", "G2b0".
GroupFamily parse_family(const std::string& s);
std::vector<RatMatrix> family_basis(GroupFamily f, const ParamSet& params);

/// Generic element in the family's chart: (u, v, w) for G1 and G2, with v, w > 0
/// for G2 (ConstraintViolation otherwise); (alpha, beta, gamma) for G2b0.
Eigen::Matrix3d group_element(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& coords);
/// exp(e1 B1) exp(e2 B2) exp(e3 B3) over the family basis.
Eigen::Matrix3d exponential_product(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& exponents);
/// The closed form of that product as a function of the exponents.
Eigen::Matrix3d product_closed_form(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& exponents);
/// Chart coordinates -> exponents: (2u, v e^u, w e^-u), (u, ln v, ln w), identity.
Eigen::Vector3d chart_exponents(GroupFamily f, const Eigen::Vector3d& coords);
/// Recovers chart coordinates from designated entries and accepts them when
/// the rebuilt element matches m within tol (max abs entry difference).
std::optional<Eigen::Vector3d> fit_element(GroupFamily f, const ParamSet& params, const Eigen::Matrix3d& m,
                                           double tol = 1e-10);
/// Whether the designated entries admit chart coordinates at all (positivity
/// of the quantities that are logged or raised to real powers).
bool in_chart_domain(GroupFamily f, const ParamSet& params, const Eigen::Matrix3d& m);

struct GroupCheck {
  GroupFamily family = GroupFamily::G1;
  double product_error = 0;       // exponential_product vs product_closed_form
  double substitution_error = 0;  // product_closed_form(chart_exponents) vs group_element
  double identity_error = 0;
  double closure_error = 0;       // rebuilt fit of g*h vs g*h
  double inverse_error = 0;       // rebuilt fit of g^-1 vs g^-1
  bool closure_fit = false;
  bool inverse_fit = false;
  // Over random trials: products / inverses whose entries fall outside the
  // chart domain, and in-domain fits that failed to rebuild the matrix.
  int trials = 1;
  int closure_outside = 0;
  int inverse_outside = 0;
  int mismatches = 0;
  Eigen::Vector3d closure_coords = Eigen::Vector3d::Zero();
  Eigen::Vector3d inverse_coords = Eigen::Vector3d::Zero();
  /// Everything closes inside the chart.
  bool pass(double tol = 1e-10) const;
  /// Exponential product and substitution hold, and every element that lies
  /// in the chart domain is rebuilt exactly; elements leaving the chart are
  /// tolerated.
  bool pass_within_chart(double tol = 1e-10) const;
};

GroupCheck group_element_check(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& g,
                               const Eigen::Vector3d& h, double tol = 1e-10);
/// Worst case over random chart points.
GroupCheck group_element_check(GroupFamily f, const ParamSet& params, std::uint64_t seed, int trials = 20,
                               double tol = 1e-10);

}  // namespace hamforge
