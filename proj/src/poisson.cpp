#include "hamforge/poisson.hpp"

#include <Eigen/SVD>

#include "hamforge/error.hpp"

namespace hamforge {

Bivector make_bivector(const Chart& chart, const std::vector<BracketEntry>& brackets, const ParamSet& params) {
  const auto n = static_cast<Eigen::Index>(chart.size());
  PolyMatrix m = PolyMatrix::Constant(n, n, ExpPoly());
  for (const auto& b : brackets) {
    const auto i = static_cast<Eigen::Index>(chart.index(b.left));
    const auto j = static_cast<Eigen::Index>(chart.index(b.right));
    if (i == j) throw Error(ErrorCode::InvalidArgument, "diagonal bracket {" + b.left + "," + b.left + "}");
    ExpPoly v = canonicalize(b.value, chart, params);
    m(i, j) = v;
    m(j, i) = -v;
  }
  return {chart, std::move(m)};
}

Bivector make_bivector(const Chart& chart, PolyMatrix entries) {
  if (entries.rows() != static_cast<Eigen::Index>(chart.size()) || entries.cols() != entries.rows())
    throw Error(ErrorCode::DimensionMismatch, "bivector must be square over the chart");
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      if (!(entries(i, j) + entries(j, i)).is_zero())
        throw Error(ErrorCode::InvalidArgument, "bivector entries are not antisymmetric");
  return {chart, std::move(entries)};
}

Bivector make_constant_bivector(const Chart& chart, const RatMatrix& entries) {
  return make_bivector(chart, to_poly(entries));
}

Bivector operator+(const Bivector& a, const Bivector& b) {
  require_same_chart(a.chart, b.chart, "bivector sum");
  return {a.chart, a.entries + b.entries};
}

Bivector operator-(const Bivector& a, const Bivector& b) {
  require_same_chart(a.chart, b.chart, "bivector difference");
  return {a.chart, a.entries - b.entries};
}

Bivector operator*(const Rational& s, const Bivector& b) {
  return {b.chart, b.entries.unaryExpr([&](const ExpPoly& p) { return p.scaled(s); })};
}

bool is_zero(const Bivector& b) { return is_zero(b.entries); }

PolyVector gradient(const ExpPoly& f, std::size_t dim) {
  PolyVector g(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) g(static_cast<Eigen::Index>(i)) = f.diff(i);
  return g;
}

ExpPoly bracket(const Bivector& pi, const ExpPoly& f, const ExpPoly& g) {
  const PolyVector gf = gradient(f, pi.dim()), gg = gradient(g, pi.dim());
  ExpPoly r;
  for (std::size_t i = 0; i < pi.dim(); ++i)
    for (std::size_t j = 0; j < pi.dim(); ++j)
      if (!pi(i, j).is_zero()) r += gf(static_cast<Eigen::Index>(i)) * pi(i, j) * gg(static_cast<Eigen::Index>(j));
  return r;
}

VectorField hamiltonian_field(const Bivector& pi, const ExpPoly& h) {
  return {pi.chart, pi.entries * gradient(h, pi.dim())};
}

bool Tensor3::is_zero() const {
  for (const auto& v : data)
    if (!v.is_zero()) return false;
  return true;
}

std::vector<std::tuple<std::size_t, std::size_t, std::size_t, ExpPoly>> Tensor3::nonzero() const {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, ExpPoly>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (!(*this)(i, j, k).is_zero()) out.emplace_back(i, j, k, (*this)(i, j, k));
  return out;
}

Tensor3 jacobi_residual(const Bivector& pi) {
  const std::size_t n = pi.dim();
  // d[l][i][j] = d_l pi^{ij}
  std::vector<PolyMatrix> d(n);
  for (std::size_t l = 0; l < n; ++l) d[l] = pi.entries.unaryExpr([l](const ExpPoly& p) { return p.diff(l); });
  auto term = [&](std::size_t i, std::size_t j, std::size_t k) {
    ExpPoly s;
    for (std::size_t l = 0; l < n; ++l)
      if (!pi(i, l).is_zero()) s += pi(i, l) * d[l](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    return s;
  };
  Tensor3 r{n, std::vector<ExpPoly>(n * n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        ExpPoly v = term(i, j, k) + term(j, k, i) + term(k, i, j);
        // totally antisymmetric: fill all permutations
        r(i, j, k) = v;
        r(j, k, i) = v;
        r(k, i, j) = v;
        r(j, i, k) = -v;
        r(i, k, j) = -v;
        r(k, j, i) = -v;
      }
  return r;
}

VectorField casimir_residual(const Bivector& pi, const ExpPoly& c) { return hamiltonian_field(pi, c); }

Bivector lie_derivative(const VectorField& x, const Bivector& pi) {
  require_same_chart(x.chart, pi.chart, "lie_derivative");
  const std::size_t n = pi.dim();
  PolyMatrix dx(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));  // dx(i, l) = d_l X^i
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) dx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = x[i].diff(l);
  PolyMatrix transport = pi.entries.unaryExpr([&](const ExpPoly& p) { return apply(x, p); });
  PolyMatrix left = dx * pi.entries;
  PolyMatrix right = pi.entries * PolyMatrix(dx.transpose());
  return {pi.chart, transport - left - right};
}

std::optional<Rational> proportionality(const PolyMatrix& lhs, const PolyMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) return std::nullopt;
  std::optional<Rational> s;
  for (Eigen::Index i = 0; i < rhs.size() && !s; ++i) {
    const ExpPoly& r = rhs.data()[i];
    if (r.is_zero()) continue;
    const auto& [key, coef] = *r.terms().begin();
    s = lhs.data()[i].coefficient(key) / coef;
  }
  if (!s) return is_zero(lhs) ? std::optional<Rational>(Rational(0)) : std::nullopt;
  for (Eigen::Index i = 0; i < rhs.size(); ++i)
    if (!(lhs.data()[i] - rhs.data()[i].scaled(*s)).is_zero()) return std::nullopt;
  return s;
}

std::optional<Rational> proportionality(const ExpPoly& lhs, const ExpPoly& rhs) {
  PolyMatrix l(1, 1), r(1, 1);
  l(0, 0) = lhs;
  r(0, 0) = rhs;
  return proportionality(l, r);
}

ConformalScalars conformal_check(const VectorField& x, const Bivector& pi, const ExpPoly& h) {
  return {proportionality(lie_derivative(x, pi).entries, pi.entries), proportionality(apply(x, h), h)};
}

Tensor3 compatibility_residual(const Bivector& pi1, const Bivector& pi2) {
  require_same_chart(pi1.chart, pi2.chart, "compatibility_residual");
  if (!jacobi_residual(pi1).is_zero()) throw Error(ErrorCode::NotPoisson, "first bivector fails the Jacobi identity");
  if (!jacobi_residual(pi2).is_zero()) throw Error(ErrorCode::NotPoisson, "second bivector fails the Jacobi identity");
  return jacobi_residual(pi1 + pi2);
}

RecursionOperator recursion_operator(const Bivector& j1, const Bivector& j0) {
  require_same_chart(j1.chart, j0.chart, "recursion_operator");
  const auto n = static_cast<Eigen::Index>(j0.dim());
  RatMatrix base(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      auto c = j0.entries(i, j).as_constant();
      if (!c) throw Error(ErrorCode::SingularBase, "base tensor must have constant entries");
      base(i, j) = *c;
    }
  auto inv = invert(base);
  if (!inv) throw Error(ErrorCode::SingularBase, "base tensor is not invertible");
  return {j1.chart, j1.entries * to_poly(*inv)};
}

VectorField recursion_apply(const RecursionOperator& r, const VectorField& x) {
  require_same_chart(r.chart, x.chart, "recursion_apply");
  return {x.chart, r.matrix * x.components};
}

int rank(const Bivector& pi, std::span<const double> point) {
  const auto n = static_cast<Eigen::Index>(pi.dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = pi.entries(i, j).eval(point);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0)) ++r;
  return r;
}

}  // namespace hamforge
