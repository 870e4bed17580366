#include "hamforge/maps.hpp"

#include <cmath>

#include "hamforge/error.hpp"

namespace hamforge {

SmoothMap make_map(const Chart& source, const Chart& target, const std::vector<Expr>& components, const ParamSet& params) {
  if (components.size() != target.size()) throw Error(ErrorCode::DimensionMismatch, "map needs one component per target variable");
  SmoothMap phi{source, target, PolyVector(static_cast<Eigen::Index>(components.size()))};
  for (std::size_t i = 0; i < components.size(); ++i)
    phi.components(static_cast<Eigen::Index>(i)) = canonicalize(components[i], source, params);
  return phi;
}

SmoothMap identity_map(const Chart& chart) {
  SmoothMap phi{chart, chart, PolyVector(static_cast<Eigen::Index>(chart.size()))};
  for (std::size_t i = 0; i < chart.size(); ++i) phi.components(static_cast<Eigen::Index>(i)) = ExpPoly::variable(i);
  return phi;
}

PolyMatrix jacobian(const SmoothMap& phi) {
  const auto m = phi.components.size();
  const auto n = static_cast<Eigen::Index>(phi.source.size());
  PolyMatrix j(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < n; ++k) j(i, k) = phi.components(i).diff(static_cast<std::size_t>(k));
  return j;
}

ExpPoly pullback(const SmoothMap& phi, const ExpPoly& f) {
  std::vector<ExpPoly> images(phi.components.data(), phi.components.data() + phi.components.size());
  return f.compose(images);
}

PolyVector pushforward_residual(const SmoothMap& phi, const VectorField& src, const VectorField& tgt) {
  require_same_chart(src.chart, phi.source, "pushforward source");
  require_same_chart(tgt.chart, phi.target, "pushforward target");
  PolyVector pushed = jacobian(phi) * src.components;
  for (Eigen::Index i = 0; i < pushed.size(); ++i) pushed(i) -= pullback(phi, tgt.components(i));
  return pushed;
}

PolyMatrix bracket_pushforward_residual(const SmoothMap& phi, const Bivector& src, const Bivector& tgt) {
  require_same_chart(src.chart, phi.source, "bracket pushforward source");
  require_same_chart(tgt.chart, phi.target, "bracket pushforward target");
  const PolyMatrix j = jacobian(phi);
  PolyMatrix r = j * src.entries * PolyMatrix(j.transpose());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index k = 0; k < r.cols(); ++k) r(i, k) -= pullback(phi, tgt.entries(i, k));
  return r;
}

std::vector<PullbackResult> conserved_pullback_check(const SmoothMap& phi, const std::vector<PullbackPair>& pairs) {
  std::vector<PullbackResult> out;
  for (const auto& p : pairs) out.push_back({p.name, p.source - pullback(phi, p.target)});
  return out;
}

Eigen::VectorXd evaluate(const SmoothMap& phi, const Eigen::VectorXd& point) {
  std::span<const double> pt(point.data(), static_cast<std::size_t>(point.size()));
  Eigen::VectorXd out(phi.components.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = phi.components(i).eval(pt);
  return out;
}

Eigen::MatrixXd evaluate(const PolyMatrix& m, const Eigen::VectorXd& point) {
  std::span<const double> pt(point.data(), static_cast<std::size_t>(point.size()));
  return m.unaryExpr([&](const ExpPoly& p) { return p.eval(pt); });
}

int jacobian_rank(const SmoothMap& phi, const Eigen::VectorXd& point) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(evaluate(jacobian(phi), point));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0)) ++r;
  return r;
}

Eigen::Vector4d exponential_realization_inverse(const Eigen::Vector3d& target, double a, double b, double c,
                                                double q2_choice) {
  const double x = target(0), y = target(1), z = target(2);
  if (!(z > 0.0)) throw Error(ErrorCode::InvalidArgument, "inverse branch needs z > 0");
  const double q1 = -(2.0 / a) * std::log(z);
  const double p2 = y * z;
  const double p1 = a * x - b * y + c * z;
  return {q1, q2_choice, p1, p2};
}

}  // namespace hamforge
