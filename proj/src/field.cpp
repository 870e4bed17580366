#include "hamforge/field.hpp"

#include <sstream>

#include "hamforge/error.hpp"

namespace hamforge {

std::string VectorField::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim(); ++i) {
    if ((*this)[i].is_zero()) continue;
    os << (first ? "" : " + ") << "(" << (*this)[i].str(chart) << ")*d/d" << chart.name(i);
    first = false;
  }
  return first ? "0" : os.str();
}

VectorField make_field(const Chart& chart, const std::vector<Expr>& components, const ParamSet& params) {
  return make_field(chart, canonicalize(components, chart, params));
}

VectorField make_field(const Chart& chart, std::vector<ExpPoly> components) {
  if (components.size() != chart.size())
    throw Error(ErrorCode::DimensionMismatch, "vector field needs one component per chart variable");
  VectorField f{chart, PolyVector(static_cast<Eigen::Index>(components.size()))};
  for (std::size_t i = 0; i < components.size(); ++i) f.components(static_cast<Eigen::Index>(i)) = std::move(components[i]);
  return f;
}

VectorField zero_field(const Chart& chart) {
  return make_field(chart, std::vector<ExpPoly>(chart.size()));
}

bool is_zero(const VectorField& f) { return is_zero(f.components); }

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart, b.chart, "field sum");
  return {a.chart, a.components + b.components};
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart, b.chart, "field difference");
  return {a.chart, a.components - b.components};
}

VectorField operator*(const Rational& s, const VectorField& f) {
  return {f.chart, f.components.unaryExpr([&](const ExpPoly& p) { return p.scaled(s); })};
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.chart == b.chart && a.components == b.components;
}

ExpPoly apply(const VectorField& field, const ExpPoly& f) {
  ExpPoly r;
  for (std::size_t i = 0; i < field.dim(); ++i)
    if (!field[i].is_zero()) r += field[i] * f.diff(i);
  return r;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart, y.chart, "lie_bracket");
  std::vector<ExpPoly> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = apply(x, y[i]) - apply(y, x[i]);
  return make_field(x.chart, std::move(out));
}

VectorField spatial_part(const VectorField& point_field) {
  if (point_field.dim() == 0) throw Error(ErrorCode::DimensionMismatch, "spatial_part of an empty field");
  std::vector<std::string> names(point_field.chart.names().begin() + 1, point_field.chart.names().end());
  std::vector<ExpPoly> comps;
  for (std::size_t i = 1; i < point_field.dim(); ++i) comps.push_back(point_field[i].shifted(-1));
  return make_field(Chart(std::move(names)), std::move(comps));
}

VectorField with_time(const VectorField& spatial, const ExpPoly& xi, const std::string& time) {
  std::vector<std::string> names{time};
  names.insert(names.end(), spatial.chart.names().begin(), spatial.chart.names().end());
  std::vector<ExpPoly> comps{xi};
  for (std::size_t i = 0; i < spatial.dim(); ++i) comps.push_back(spatial[i].shifted(1));
  return make_field(Chart(std::move(names)), std::move(comps));
}

Chart jet_chart(const Chart& base, int order) {
  if (base.size() < 2) throw Error(ErrorCode::InvalidArgument, "jet chart needs time and at least one coordinate");
  if (order < 1 || order > 2) throw Error(ErrorCode::InvalidArgument, "jet order must be 1 or 2");
  std::vector<std::string> extra;
  for (std::size_t i = 1; i < base.size(); ++i) extra.push_back(base.name(i) + "_t");
  if (order == 2)
    for (std::size_t i = 1; i < base.size(); ++i) extra.push_back(base.name(i) + "_tt");
  return base.extended(extra);
}

JetSystem first_order_system(std::string name, const VectorField& rhs, const std::string& time) {
  JetSystem sys;
  sys.name = std::move(name);
  std::vector<std::string> base_names{time};
  base_names.insert(base_names.end(), rhs.chart.names().begin(), rhs.chart.names().end());
  sys.base = Chart(std::move(base_names));
  sys.jet = jet_chart(sys.base, 1);
  sys.dof = rhs.dim();
  sys.order = 1;
  std::vector<ExpPoly> solved;
  for (std::size_t i = 0; i < sys.dof; ++i) {
    ExpPoly f = rhs[i].shifted(1);
    sys.equations.push_back(ExpPoly::variable(sys.velocity(i)) - f);
    solved.push_back(std::move(f));
  }
  sys.solved = std::move(solved);
  return sys;
}

namespace {

ExpPoly determinant(const PolyMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  ExpPoly det;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    PolyMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    ExpPoly t = m(0, j) * determinant(minor);
    det += (j % 2 == 0) ? t : -t;
  }
  return det;
}

PolyMatrix adjugate(const PolyMatrix& m) {
  const Eigen::Index n = m.rows();
  PolyMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = ExpPoly(1);
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      PolyMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c)
          if (c != j) minor(rr, cc++) = m(r, c);
        ++rr;
      }
      ExpPoly cof = determinant(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

}  // namespace

JetSystem second_order_system(std::string name, const Chart& base, std::vector<ExpPoly> equations, bool solve) {
  JetSystem sys;
  sys.name = std::move(name);
  sys.base = base;
  sys.jet = jet_chart(base, 2);
  sys.dof = base.size() - 1;
  sys.order = 2;
  if (equations.size() != sys.dof) throw Error(ErrorCode::DimensionMismatch, "need one equation per coordinate");
  sys.equations = std::move(equations);
  if (!solve) return sys;

  const auto n = static_cast<Eigen::Index>(sys.dof);
  PolyMatrix lead(n, n);
  PolyVector rest(n);
  std::vector<ExpPoly> zero_acc;
  for (std::size_t k = 0; k < sys.jet.size(); ++k)
    zero_acc.push_back(k >= sys.acceleration(0) ? ExpPoly() : ExpPoly::variable(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    const ExpPoly& e = sys.equations[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      lead(i, j) = e.diff(sys.acceleration(static_cast<std::size_t>(j)));
      for (std::size_t k = 0; k < sys.dof; ++k)
        if (lead(i, j).depends_on(sys.acceleration(k)))
          throw Error(ErrorCode::InvalidArgument, "equations must be linear in the accelerations");
    }
    rest(i) = e.compose(zero_acc);
  }
  ExpPoly det = determinant(lead);
  if (det.is_zero()) throw Error(ErrorCode::SingularSolvedForm, "leading coefficient matrix is singular");
  if (det.term_count() != 1)
    throw Error(ErrorCode::SingularSolvedForm, "leading determinant '" + det.str(sys.jet) + "' is not invertible in the class");
  PolyVector acc = adjugate(lead) * rest;
  const ExpPoly inv = -det.inverse();
  std::vector<ExpPoly> solved;
  for (Eigen::Index i = 0; i < n; ++i) solved.push_back(acc(i) * inv);
  sys.solved = std::move(solved);
  if (!det.as_constant()) sys.excluded.push_back(det);
  return sys;
}

ExpPoly total_derivative(const JetSystem& sys, const ExpPoly& f) {
  const std::size_t top = sys.order == 1 ? sys.velocity(0) : sys.acceleration(0);
  for (std::size_t k = top; k < sys.jet.size(); ++k)
    if (f.depends_on(k))
      throw Error(ErrorCode::InvalidArgument, "total derivative needs a jet coordinate beyond the system order");
  ExpPoly r = f.diff(sys.time_index());
  for (std::size_t i = 0; i < sys.dof; ++i) {
    r += ExpPoly::variable(sys.velocity(i)) * f.diff(sys.q(i));
    if (sys.order == 2) r += ExpPoly::variable(sys.acceleration(i)) * f.diff(sys.velocity(i));
  }
  return r;
}

ExpPoly on_shell(const JetSystem& sys, const ExpPoly& f) {
  if (!sys.solved) throw Error(ErrorCode::MissingSolvedForm, "system '" + sys.name + "' has no solved form");
  const std::size_t top = sys.order == 1 ? sys.velocity(0) : sys.acceleration(0);
  std::vector<ExpPoly> images;
  for (std::size_t k = 0; k < sys.jet.size(); ++k)
    images.push_back(k >= top ? (*sys.solved)[k - top] : ExpPoly::variable(k));
  return f.compose(images);
}

std::vector<ExpPoly> prolongation(const VectorField& sym, const JetSystem& sys, int order) {
  require_same_chart(sym.chart, sys.base, "prolongation");
  if (order > sys.order) throw Error(ErrorCode::InvalidArgument, "prolongation order exceeds the jet order");
  const ExpPoly dxi = total_derivative(sys, sym[0]);
  std::vector<ExpPoly> out;
  for (std::size_t i = 0; i < sys.dof; ++i)
    out.push_back(total_derivative(sys, sym[1 + i]) - ExpPoly::variable(sys.velocity(i)) * dxi);
  if (order == 2)
    for (std::size_t i = 0; i < sys.dof; ++i)
      out.push_back(total_derivative(sys, out[i]) - ExpPoly::variable(sys.acceleration(i)) * dxi);
  return out;
}

namespace {

std::vector<ExpPoly> prolongation_residual(const VectorField& sym, const JetSystem& sys, int order) {
  if (!sys.solved) throw Error(ErrorCode::MissingSolvedForm, "system '" + sys.name + "' has no solved form");
  if (sys.order != order)
    throw Error(ErrorCode::InvalidArgument, "system '" + sys.name + "' has order " + std::to_string(sys.order));
  const std::vector<ExpPoly> pr = prolongation(sym, sys, order);
  std::vector<ExpPoly> out;
  for (const ExpPoly& e : sys.equations) {
    ExpPoly r = sym[0] * e.diff(sys.time_index());
    for (std::size_t i = 0; i < sys.dof; ++i) {
      r += sym[1 + i] * e.diff(sys.q(i));
      r += pr[i] * e.diff(sys.velocity(i));
      if (order == 2) r += pr[sys.dof + i] * e.diff(sys.acceleration(i));
    }
    out.push_back(on_shell(sys, r));
  }
  return out;
}

}  // namespace

std::vector<ExpPoly> first_prolongation_residual(const VectorField& sym, const JetSystem& sys) {
  return prolongation_residual(sym, sys, 1);
}

std::vector<ExpPoly> second_prolongation_residual(const VectorField& sym, const JetSystem& sys) {
  return prolongation_residual(sym, sys, 2);
}

bool all_zero(std::span<const ExpPoly> values) {
  for (const auto& v : values)
    if (!v.is_zero()) return false;
  return true;
}

std::optional<Rational> homogeneity_degree(std::span<const ExpPoly> components, std::size_t nvars) {
  std::optional<Rational> degree;
  for (const ExpPoly& f : components) {
    if (f.is_zero()) continue;
    if (!degree) {
      const auto& k = f.terms().begin()->first;
      if (!k.freqs.empty()) return std::nullopt;
      degree = Rational(k.total_degree());
    }
    ExpPoly euler;
    for (std::size_t i = 0; i < nvars; ++i) euler += ExpPoly::variable(i) * f.diff(i);
    if (!(euler - f.scaled(*degree)).is_zero()) return std::nullopt;
  }
  return degree;
}

}  // namespace hamforge
