#include "hamforge/liealg.hpp"

#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace hamforge {

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "commutator: matrices must be square of equal size");
  return a * b - b * a;
}

StructureTable::StructureTable(std::vector<std::string> names)
    : names_(std::move(names)), c_(names_.size() * names_.size() * names_.size()) {}

RatVector StructureTable::bracket(std::size_t i, std::size_t j) const {
  RatVector v(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) v(static_cast<Eigen::Index>(k)) = (*this)(i, j, k);
  return v;
}

StructureTable& StructureTable::set_raw(std::size_t i, std::size_t j, const RatVector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != dim())
    throw Error(ErrorCode::DimensionMismatch, "structure table: coefficient count differs from dimension");
  for (std::size_t k = 0; k < dim(); ++k) c_[index(i, j, k)] = coeffs(static_cast<Eigen::Index>(k));
  return *this;
}

StructureTable& StructureTable::set(std::size_t i, std::size_t j, const RatVector& coeffs) {
  set_raw(i, j, coeffs);
  return set_raw(j, i, -coeffs);
}

std::string StructureTable::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i + 1; j < dim(); ++j) {
      if (!first) os << ", ";
      first = false;
      os << "[" << names_[i] << "," << names_[j] << "] = ";
      bool any = false;
      for (std::size_t k = 0; k < dim(); ++k) {
        const Rational& c = (*this)(i, j, k);
        if (c.is_zero()) continue;
        if (any) os << " + ";
        if (c == Rational(1))
          os << names_[k];
        else
          os << c.str() << "*" << names_[k];
        any = true;
      }
      if (!any) os << "0";
    }
  return os.str();
}

bool is_antisymmetric(const StructureTable& t) {
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j)
      for (std::size_t k = 0; k < t.dim(); ++k)
        if (t(i, j, k) != -t(j, i, k)) return false;
  return true;
}

bool satisfies_jacobi(const StructureTable& t) {
  const std::size_t n = t.dim();
  // sum over cyclic (i,j,k) of C^l_{jk} C^m_{il}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          Rational s;
          for (std::size_t l = 0; l < n; ++l)
            s += t(j, k, l) * t(i, l, m) + t(k, i, l) * t(j, l, m) + t(i, j, l) * t(k, l, m);
          if (!s.is_zero()) return false;
        }
  return true;
}

std::optional<RatVector> coordinates(std::span<const RatMatrix> basis, const RatMatrix& m) {
  if (basis.empty()) return is_zero(m) ? std::optional<RatVector>(RatVector(0)) : std::nullopt;
  const Eigen::Index size = m.size();
  RatMatrix a(size, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    if (basis[c].rows() != m.rows() || basis[c].cols() != m.cols())
      throw Error(ErrorCode::DimensionMismatch, "coordinates: basis element shape differs");
    a.col(static_cast<Eigen::Index>(c)) = basis[c].reshaped();
  }
  return solve(a, m.reshaped());
}

std::optional<RatVector> coordinates(std::span<const VectorField> basis, const VectorField& f) {
  std::map<std::pair<std::size_t, ExpPoly::Key>, Eigen::Index> rows;
  const auto collect = [&](const VectorField& v) {
    for (std::size_t i = 0; i < v.dim(); ++i)
      for (const auto& [key, coef] : v[i].terms()) rows.try_emplace({i, key}, 0);
  };
  for (const auto& b : basis) {
    require_same_chart(b.chart, f.chart, "coordinates");
    collect(b);
  }
  collect(f);
  Eigen::Index r = 0;
  for (auto& [k, idx] : rows) idx = r++;
  RatMatrix a = RatMatrix::Zero(r, static_cast<Eigen::Index>(basis.size()));
  RatVector rhs = RatVector::Zero(r);
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t i = 0; i < basis[c].dim(); ++i)
      for (const auto& [key, coef] : basis[c][i].terms()) a(rows.at({i, key}), static_cast<Eigen::Index>(c)) = coef;
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (const auto& [key, coef] : f[i].terms()) rhs(rows.at({i, key})) = coef;
  return solve(a, rhs);
}

namespace {

template <typename Element, typename Bracket>
StructureTable table_from(std::span<const Element> basis, std::vector<std::string> names, Bracket br) {
  if (names.size() != basis.size())
    throw Error(ErrorCode::DimensionMismatch, "structure_table: one name per basis element");
  StructureTable t(std::move(names));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      auto c = coordinates(basis, br(basis[i], basis[j]));
      if (!c)
        throw Error(ErrorCode::InvalidArgument,
                    "structure_table: [" + t.names()[i] + "," + t.names()[j] + "] leaves the span");
      t.set(i, j, *c);
    }
  return t;
}

}  // namespace

StructureTable structure_table(std::span<const RatMatrix> basis, std::vector<std::string> names) {
  return table_from(basis, std::move(names), [](const RatMatrix& a, const RatMatrix& b) { return commutator(a, b); });
}

StructureTable structure_table(std::span<const VectorField> basis, std::vector<std::string> names) {
  return table_from(basis, std::move(names),
                    [](const VectorField& a, const VectorField& b) { return lie_bracket(a, b); });
}

StructureTable linear_bracket_table(const Bivector& pi, std::vector<std::string> names) {
  const std::size_t n = pi.dim();
  if (names.size() != n) throw Error(ErrorCode::DimensionMismatch, "linear_bracket_table: one name per coordinate");
  StructureTable t(std::move(names));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatVector row = RatVector::Zero(static_cast<Eigen::Index>(n));
      for (const auto& [key, coef] : pi(i, j).terms()) {
        const bool linear = key.total_degree() == 1 && key.freqs.empty() && key.powers.size() <= n &&
                            std::all_of(key.powers.begin(), key.powers.end(), [](int p) { return p == 0 || p == 1; });
        if (!linear) throw Error(ErrorCode::InvalidArgument, "linear_bracket_table: entry is not linear homogeneous");
        row(static_cast<Eigen::Index>(key.powers.size() - 1)) = coef;
      }
      t.set_raw(i, j, row);
    }
  return t;
}

namespace {

int eps(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return 0;
  // even permutations of (0,1,2)
  return ((i + 1) % 3 == j) ? 1 : -1;
}

}  // namespace

std::string BianchiType::str() const {
  if (label == "VI_h" || label == "VII_h") return label.substr(0, label.size() - 1) + "{" + h->str() + "}";
  return label;
}

BianchiType classify_bianchi(const StructureTable& t) {
  if (t.dim() != 3) throw Error(ErrorCode::NotJacobi, "classify_bianchi: table must be 3-dimensional");
  if (!is_antisymmetric(t)) throw Error(ErrorCode::NotJacobi, "classify_bianchi: table is not antisymmetric");
  if (!satisfies_jacobi(t)) throw Error(ErrorCode::NotJacobi, "classify_bianchi: Jacobi identity fails");

  BianchiType out;
  out.a = RatVector::Zero(3);
  out.n = RatMatrix::Zero(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    Rational s;
    for (std::size_t k = 0; k < 3; ++k) s += t(i, k, k);
    out.a(static_cast<Eigen::Index>(i)) = s / Rational(2);
  }
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t k = 0; k < 3; ++k) {
      Rational s;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (int e = eps(i, j, m)) s += Rational(e) * t(i, j, k);
      s /= Rational(2);
      for (std::size_t i = 0; i < 3; ++i)
        if (int e = eps(i, k, m)) s -= Rational(e) * out.a(static_cast<Eigen::Index>(i));
      out.n(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = s;
    }

  const RatMatrix& n = out.n;
  RatMatrix adj(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      const Eigen::Index r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj(i, j) = n(r0, c0) * n(r1, c1) - n(r0, c1) * n(r1, c0);
    }
  const Rational trace = n.trace(), sigma2 = adj.trace();
  const Rational det = n(0, 0) * adj(0, 0) + n(0, 1) * adj(1, 0) + n(0, 2) * adj(2, 0);
  const Eigen::Index r = rank(n);
  out.class_a = is_zero(RatMatrix(out.a));

  if (out.class_a) {
    switch (r) {
      case 0: out.label = "I"; break;
      case 1: out.label = "II"; break;
      case 2: out.label = sigma2.sign() > 0 ? "VII_0" : "VI_0"; break;
      default: out.label = (sigma2.sign() > 0 && (trace * det).sign() > 0) ? "IX" : "VIII"; break;
    }
    return out;
  }
  switch (r) {
    case 0: out.label = "V"; return out;
    case 1: out.label = "IV"; return out;
    case 2: break;
    default: throw Error(ErrorCode::NotJacobi, "classify_bianchi: class B requires rank n <= 2");
  }
  // a_i a_j = h adj(n)_ij
  for (Eigen::Index i = 0; i < 9 && !out.h; ++i)
    if (!adj(i / 3, i % 3).is_zero()) out.h = out.a(i / 3) * out.a(i % 3) / adj(i / 3, i % 3);
  if (!out.h) throw Error(ErrorCode::NotJacobi, "classify_bianchi: degenerate class B invariants");
  if (sigma2.sign() < 0)
    out.label = (*out.h == Rational(-1)) ? "III" : "VI_h";
  else
    out.label = "VII_h";
  return out;
}

namespace {

RatMatrix mat3(std::initializer_list<Rational> entries) {
  RatMatrix m(3, 3);
  auto it = entries.begin();
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = *it++;
  return m;
}

void require_nonzero(const ParamSet& p, const char* name, const char* what) {
  if (p.get(name).is_zero()) throw Error(ErrorCode::ParamConstraint, std::string(what) + " requires " + name + " != 0");
}

}  // namespace

std::vector<RatMatrix> e_basis() {
  const Rational h(1, 2);
  return {mat3({-h, 0, 0, 0, h, 0, 0, 0, 0}), mat3({0, 0, 1, 0, 0, 0, 0, 0, 0}), mat3({0, 0, 0, 0, 0, 1, 0, 0, 0})};
}

std::vector<RatMatrix> x_basis(const ParamSet& p) {
  require_nonzero(p, "b", "X basis");
  const Rational &a = p.get("a"), &b = p.get("b"), &c = p.get("c");
  return {mat3({0, 1, 0, 0, 0, 0, 0, 0, 0}), mat3({-c, a / b, c, 0, 0, 0, 0, a / b, c}),
          mat3({-b, 0, b, 0, 0, 0, 0, 0, b})};
}

std::vector<RatMatrix> y_basis(const ParamSet& p) {
  const Rational &a = p.get("a"), &c = p.get("c");
  return {mat3({0, 1, 0, 0, 0, 0, 0, 0, 0}), mat3({c, a, -c, 0, 2 * c, 0, 0, a, 0}),
          mat3({0, 0, -1, 0, 0, 0, 0, 0, 0})};
}

std::vector<RatMatrix> g2_basis(const ParamSet& p) { return p.get("b").is_zero() ? y_basis(p) : x_basis(p); }

std::string to_string(GroupFamily f) {
  switch (f) {
    case GroupFamily::G1: return "G1";
    case GroupFamily::G2: return "G2";
    case GroupFamily::G2b0: return "G2b0";
  }
  return "?";
}

GroupFamily parse_family(const std::string& s) {
  if (s == "G1") return GroupFamily::G1;
  if (s == "G2") return GroupFamily::G2;
  if (s == "G2b0") return GroupFamily::G2b0;
  throw Error(ErrorCode::InvalidArgument, "unknown group family '" + s + "'");
}

namespace {

struct Abc {
  double a, b, c;
};

Abc family_params(GroupFamily f, const ParamSet& p) {
  if (f == GroupFamily::G1) return {0, 0, 0};
  require_nonzero(p, "a", to_string(f).c_str());
  require_nonzero(p, "c", to_string(f).c_str());
  if (f == GroupFamily::G2) require_nonzero(p, "b", "G2");
  if (f == GroupFamily::G2b0 && !p.get("b").is_zero())
    throw Error(ErrorCode::ParamConstraint, "G2b0 requires b = 0");
  return {p.get("a").to_double(), p.get("b").to_double(), p.get("c").to_double()};
}

double max_abs(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<RatMatrix> family_basis(GroupFamily f, const ParamSet& params) {
  switch (f) {
    case GroupFamily::G1: return e_basis();
    case GroupFamily::G2: return x_basis(params);
    case GroupFamily::G2b0:
      family_params(f, params);
      return y_basis(params);
  }
  return {};
}

Eigen::Matrix3d group_element(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& x) {
  const Abc k = family_params(f, params);
  Eigen::Matrix3d m;
  switch (f) {
    case GroupFamily::G1:
      m << std::exp(-x(0)), 0, x(1), 0, std::exp(x(0)), x(2), 0, 0, 1;
      break;
    case GroupFamily::G2: {
      if (!(x(1) > 0) || !(x(2) > 0))
        throw Error(ErrorCode::ConstraintViolation, "G2 chart requires v > 0 and w > 0");
      const double vc = std::pow(x(1), k.c), wb = std::pow(x(2), k.b);
      m << 1 / (vc * wb), x(0) + k.a / (2 * k.b * k.c) * (vc - 1 / vc), 0.5 * (vc * wb - 1 / (vc * wb)), 0, 1, 0, 0,
          k.a / (k.b * k.c) * (vc - 1), vc * wb;
      break;
    }
    case GroupFamily::G2b0: {
      const double e = std::exp(x(1) * k.c), e2 = e * e;
      m << e, k.a / (2 * k.c) * (e2 - 1) + x(0) * e2, 1 - (1 + x(2)) * e, 0, e2, 0, 0, k.a / (2 * k.c) * (e2 - 1), 1;
      break;
    }
  }
  return m;
}

Eigen::Matrix3d exponential_product(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& e) {
  const auto basis = family_basis(f, params);
  Eigen::Matrix3d out = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i) out = out * mat_exp(Eigen::MatrixXd(e(i) * to_double(basis[static_cast<std::size_t>(i)])));
  return out;
}

Eigen::Matrix3d product_closed_form(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& e) {
  const Abc k = family_params(f, params);
  Eigen::Matrix3d m;
  switch (f) {
    case GroupFamily::G1: {
      const double lo = std::exp(-e(0) / 2), hi = std::exp(e(0) / 2);
      m << lo, 0, e(1) * lo, 0, hi, e(2) * hi, 0, 0, 1;
      break;
    }
    case GroupFamily::G2: {
      const double p = std::exp(e(1) * k.c), q = std::exp(e(1) * k.c + e(2) * k.b);
      m << 1 / q, e(0) + k.a / (2 * k.b * k.c) * (p - 1 / p), 0.5 * (q - 1 / q), 0, 1, 0, 0, k.a / (k.b * k.c) * (p - 1),
          q;
      break;
    }
    case GroupFamily::G2b0:
      m = group_element(f, params, e);
      break;
  }
  return m;
}

Eigen::Vector3d chart_exponents(GroupFamily f, const Eigen::Vector3d& x) {
  switch (f) {
    case GroupFamily::G1: return {2 * x(0), x(1) * std::exp(x(0)), x(2) * std::exp(-x(0))};
    case GroupFamily::G2:
      if (!(x(1) > 0) || !(x(2) > 0))
        throw Error(ErrorCode::ConstraintViolation, "G2 chart requires v > 0 and w > 0");
      return {x(0), std::log(x(1)), std::log(x(2))};
    case GroupFamily::G2b0: return x;
  }
  return x;
}

bool in_chart_domain(GroupFamily f, const ParamSet& params, const Eigen::Matrix3d& m) {
  const Abc k = family_params(f, params);
  switch (f) {
    case GroupFamily::G1: return m(0, 0) > 0;
    case GroupFamily::G2: {
      const double s = 1 + k.b * k.c / k.a * m(2, 1);
      return s > 0 && m(2, 2) / s > 0;
    }
    case GroupFamily::G2b0: return m(1, 1) > 0;
  }
  return false;
}

std::optional<Eigen::Vector3d> fit_element(GroupFamily f, const ParamSet& params, const Eigen::Matrix3d& m,
                                           double tol) {
  if (!in_chart_domain(f, params, m)) return std::nullopt;
  const Abc k = family_params(f, params);
  Eigen::Vector3d x;
  switch (f) {
    case GroupFamily::G1:
      x << -std::log(m(0, 0)), m(0, 2), m(1, 2);
      break;
    case GroupFamily::G2: {
      const double s = 1 + k.b * k.c / k.a * m(2, 1);
      x << m(0, 1) - k.a / (2 * k.b * k.c) * (s - 1 / s), std::pow(s, 1 / k.c), std::pow(m(2, 2) / s, 1 / k.b);
      break;
    }
    case GroupFamily::G2b0: {
      const double beta = std::log(m(1, 1)) / (2 * k.c), e = std::exp(beta * k.c), e2 = m(1, 1);
      x << (m(0, 1) - k.a / (2 * k.c) * (e2 - 1)) / e2, beta, (1 - m(0, 2)) / e - 1;
      break;
    }
  }
  if (!x.allFinite()) return std::nullopt;
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(group_element(f, params, x) - m) > tol * scale) return std::nullopt;
  return x;
}

bool GroupCheck::pass_within_chart(double tol) const {
  return mismatches == 0 && product_error <= tol && substitution_error <= tol && identity_error <= tol &&
         (closure_fit ? closure_error <= tol : closure_outside > 0) &&
         (inverse_fit ? inverse_error <= tol : inverse_outside > 0);
}

bool GroupCheck::pass(double tol) const {
  return pass_within_chart(tol) && closure_outside == 0 && inverse_outside == 0 && closure_fit && inverse_fit;
}

GroupCheck group_element_check(GroupFamily f, const ParamSet& params, const Eigen::Vector3d& g,
                               const Eigen::Vector3d& h, double tol) {
  GroupCheck out;
  out.family = f;
  const Eigen::Matrix3d mg = group_element(f, params, g), mh = group_element(f, params, h);
  const auto rel = [](const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    return max_abs(a - b) / std::max(1.0, std::max(max_abs(a), max_abs(b)));
  };
  const Eigen::Vector3d e = chart_exponents(f, g);
  const Eigen::Matrix3d closed = product_closed_form(f, params, e);
  out.product_error = rel(exponential_product(f, params, e), closed);
  out.substitution_error = rel(closed, mg);
  const Eigen::Vector3d id = f == GroupFamily::G2 ? Eigen::Vector3d(0, 1, 1) : Eigen::Vector3d::Zero();
  out.identity_error = rel(group_element(f, params, id), Eigen::Matrix3d::Identity());

  const auto check = [&](const Eigen::Matrix3d& m, bool& ok, double& err, Eigen::Vector3d& coords, int& outside) {
    ok = false;
    err = 0;
    if (!in_chart_domain(f, params, m)) {
      ++outside;
      return;
    }
    auto fit = fit_element(f, params, m, tol);
    if (!fit) {
      ++out.mismatches;
      err = std::numeric_limits<double>::infinity();
      return;
    }
    ok = true;
    coords = *fit;
    err = rel(group_element(f, params, *fit), m);
  };
  check(mg * mh, out.closure_fit, out.closure_error, out.closure_coords, out.closure_outside);
  check(mg.inverse(), out.inverse_fit, out.inverse_error, out.inverse_coords, out.inverse_outside);
  return out;
}

GroupCheck group_element_check(GroupFamily f, const ParamSet& params, std::uint64_t seed, int trials, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> any(-1.0, 1.0), positive(0.5, 2.0);
  const auto draw = [&] {
    if (f == GroupFamily::G2) return Eigen::Vector3d(any(rng), positive(rng), positive(rng));
    return Eigen::Vector3d(any(rng), any(rng), any(rng));
  };
  GroupCheck worst;
  worst.family = f;
  worst.trials = trials;
  worst.closure_fit = worst.inverse_fit = false;
  for (int t = 0; t < trials; ++t) {
    const Eigen::Vector3d g = draw(), h = draw();
    const GroupCheck c = group_element_check(f, params, g, h, tol);
    worst.product_error = std::max(worst.product_error, c.product_error);
    worst.substitution_error = std::max(worst.substitution_error, c.substitution_error);
    worst.identity_error = std::max(worst.identity_error, c.identity_error);
    worst.closure_outside += c.closure_outside;
    worst.inverse_outside += c.inverse_outside;
    worst.mismatches += c.mismatches;
    if (c.closure_fit && (!worst.closure_fit || c.closure_error >= worst.closure_error)) {
      worst.closure_error = c.closure_error;
      worst.closure_coords = c.closure_coords;
    }
    if (c.inverse_fit && (!worst.inverse_fit || c.inverse_error >= worst.inverse_error)) {
      worst.inverse_error = c.inverse_error;
      worst.inverse_coords = c.inverse_coords;
    }
    worst.closure_fit = worst.closure_fit || c.closure_fit;
    worst.inverse_fit = worst.inverse_fit || c.inverse_fit;
  }
  return worst;
}

}  // namespace hamforge
