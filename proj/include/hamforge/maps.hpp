#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamforge/poisson.hpp"

namespace hamforge {

/// Coordinate map source -> target, one component per target variable,
/// written over the source chart.
struct SmoothMap {
  Chart source;
  Chart target;
  PolyVector components;
};

SmoothMap make_map(const Chart& source, const Chart& target, const std::vector<Expr>& components, const ParamSet& params);
SmoothMap identity_map(const Chart& chart);

/// J(i, j) = d(component i) / d(source j).
PolyMatrix jacobian(const SmoothMap& phi);

/// f o phi for f over the target chart.
ExpPoly pullback(const SmoothMap& phi, const ExpPoly& f);

/// D(phi) Xsrc - Xtgt o phi, over the source chart.
PolyVector pushforward_residual(const SmoothMap& phi, const VectorField& src, const VectorField& tgt);

/// D(phi) Jsrc D(phi)^T - pi_tgt o phi, over the source chart.
PolyMatrix bracket_pushforward_residual(const SmoothMap& phi, const Bivector& src, const Bivector& tgt);

struct PullbackPair {
  std::string name;
  ExpPoly source;  // over the source chart
  ExpPoly target;  // over the target chart
};

struct PullbackResult {
  std::string name;
  ExpPoly residual;  // source - target o phi
  bool holds() const { return residual.is_zero(); }
  /// Residual is a nonzero constant: the pair agrees up to an additive constant.
  bool constant_offset() const { return !residual.is_zero() && residual.as_constant().has_value(); }
};

std::vector<PullbackResult> conserved_pullback_check(const SmoothMap& phi, const std::vector<PullbackPair>& pairs);

Eigen::VectorXd evaluate(const SmoothMap& phi, const Eigen::VectorXd& point);
Eigen::MatrixXd evaluate(const PolyMatrix& m, const Eigen::VectorXd& point);

/// Rank of the evaluated Jacobian (singular values above 1e-10 times the largest).
int jacobian_rank(const SmoothMap& phi, const Eigen::VectorXd& point);

/// Inverse branch of the exponential realization map onto z > 0:
/// q1 = -(2/a) ln z, p2 = y z, p1 = a x - b y + c z, q2 = q2_choice.
/// Throws InvalidArgument when z <= 0.
Eigen::Vector4d exponential_realization_inverse(const Eigen::Vector3d& target, double a, double b, double c,
                                                double q2_choice = 0.0);

}  // namespace hamforge
