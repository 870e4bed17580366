#include "hamforge/detsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "hamforge/error.hpp"

namespace hamforge {

namespace {

// exponent vectors of total degree <= d in n variables, ordered by degree and
// then with higher powers of earlier variables first
std::vector<std::vector<int>> monomials(std::size_t n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  for (int deg = 0; deg <= d; ++deg) {
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (i + 1 == n) {
        cur[i] = left;
        out.push_back(cur);
        return;
      }
      for (int p = left; p >= 0; --p) {
        cur[i] = p;
        self(self, i + 1, left - p);
      }
    };
    rec(rec, 0, deg);
  }
  return out;
}

std::string monomial_name(const Chart& base, const std::vector<int>& powers) {
  std::string s;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += base.name(i);
    if (powers[i] > 1) s += "^" + std::to_string(powers[i]);
  }
  return s.empty() ? "1" : s;
}

ExpPoly monomial(const std::vector<int>& powers) {
  ExpPoly m(1);
  for (std::size_t i = 0; i < powers.size(); ++i)
    if (powers[i]) m *= ExpPoly::variable(i, powers[i]);
  return m;
}

// rational with numerator and denominator drawn so that |x| in [1/2, 2]
double draw_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(32, 128), sign(0, 1);
  const double v = num(rng) / 64.0;
  return sign(rng) ? -v : v;
}

void fill_matrix(DeterminingSystem& out, const JetSystem& sys, int samples, std::uint64_t seed) {
  const std::size_t n = out.ansatz.size(), neq = sys.equations.size();
  std::mt19937_64 rng(seed);
  out.samples = samples;
  out.seed = seed;
  out.singular_samples = 0;
  out.matrix.resize(static_cast<Eigen::Index>(samples * neq), static_cast<Eigen::Index>(n));
  std::vector<double> point(sys.jet.size(), 0.0);
  const std::size_t top = sys.acceleration(0);
  for (int s = 0; s < samples; ++s) {
    for (;;) {
      for (std::size_t k = 0; k < top; ++k) point[k] = draw_rational(rng);
      const bool singular = std::any_of(sys.excluded.begin(), sys.excluded.end(),
                                        [&](const ExpPoly& e) { return std::abs(e.eval(point)) < 1e-8; });
      if (!singular) break;
      ++out.singular_samples;
    }
    for (std::size_t e = 0; e < neq; ++e) {
      const Eigen::Index row = static_cast<Eigen::Index>(s * neq + e);
      for (std::size_t j = 0; j < n; ++j) out.matrix(row, static_cast<Eigen::Index>(j)) = out.residuals[j][e].eval(point);
      const double scale = out.matrix.row(row).cwiseAbs().maxCoeff();
      if (scale > 0) out.matrix.row(row) /= scale;
    }
  }
}

}  // namespace

Ansatz make_ansatz(const Chart& base, int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "ansatz degree must be >= 0");
  if (base.size() < 2) throw Error(ErrorCode::InvalidArgument, "ansatz base needs time and at least one coordinate");
  Ansatz a;
  a.base = base;
  a.degree = degree;
  const auto monos = monomials(base.size(), degree);
  for (std::size_t f = 0; f < base.size(); ++f) {
    const std::string fname = f == 0 ? "xi" : "eta" + std::to_string(f);
    for (const auto& m : monos) {
      a.labels.push_back(fname + "[" + monomial_name(base, m) + "]");
      std::vector<ExpPoly> comps(base.size());
      comps[f] = monomial(m);
      a.fields.push_back(make_field(base, comps));
    }
  }
  return a;
}

std::optional<RatVector> ansatz_coordinates(const Ansatz& ansatz, const VectorField& field) {
  if (!(field.chart == ansatz.base)) throw Error(ErrorCode::ChartMismatch, "field is not over the ansatz base");
  RatVector c = RatVector::Zero(static_cast<Eigen::Index>(ansatz.size()));
  std::size_t matched = 0;
  for (std::size_t j = 0; j < ansatz.size(); ++j) {
    const VectorField& b = ansatz.fields[j];
    for (std::size_t f = 0; f < b.dim(); ++f) {
      if (b[f].is_zero()) continue;
      const Rational v = field[f].coefficient(b[f].terms().begin()->first);
      c(static_cast<Eigen::Index>(j)) = v;
      if (v != 0) ++matched;
    }
  }
  std::size_t total = 0;
  for (std::size_t f = 0; f < field.dim(); ++f) total += field[f].term_count();
  if (total != matched) return std::nullopt;
  return c;
}

VectorField ansatz_field(const Ansatz& ansatz, const RatVector& coefficients) {
  if (static_cast<std::size_t>(coefficients.size()) != ansatz.size())
    throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match the ansatz");
  VectorField out = zero_field(ansatz.base);
  for (std::size_t j = 0; j < ansatz.size(); ++j) {
    const Rational& c = coefficients(static_cast<Eigen::Index>(j));
    if (c != 0) out = out + c * ansatz.fields[j];
  }
  return out;
}

int default_samples(const Ansatz& ansatz) { return 4 * static_cast<int>(ansatz.size()); }

DeterminingSystem assemble(const JetSystem& sys, const Ansatz& ansatz, int samples, std::uint64_t seed) {
  if (sys.order != 2) throw Error(ErrorCode::InvalidArgument, "determining equations need a second-order system");
  if (!(sys.base == ansatz.base)) throw Error(ErrorCode::ChartMismatch, "ansatz base differs from the system base");
  if (samples < 2 * static_cast<int>(ansatz.size()))
    throw Error(ErrorCode::InvalidArgument, "need at least twice as many samples as unknowns");
  DeterminingSystem out;
  out.ansatz = ansatz;
  out.residuals.reserve(ansatz.size());
  for (const VectorField& f : ansatz.fields) out.residuals.push_back(second_prolongation_residual(f, sys));
  fill_matrix(out, sys, samples, seed);
  return out;
}

DeterminingSystem resample(const DeterminingSystem& base, const JetSystem& sys, int samples, std::uint64_t seed) {
  if (samples < 2 * static_cast<int>(base.ansatz.size()))
    throw Error(ErrorCode::InvalidArgument, "need at least twice as many samples as unknowns");
  DeterminingSystem out;
  out.ansatz = base.ansatz;
  out.residuals = base.residuals;
  fill_matrix(out, sys, samples, seed);
  return out;
}

std::optional<Rational> rationalize(double x, double tol, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // convergents h/k of the continued fraction of x
  long double h0 = 0, h1 = 1, k0 = 1, k1 = 0, r = x;
  for (int it = 0; it < 64; ++it) {
    const long double a = std::floor(r);
    const long double h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(static_cast<double>(h1 / k1) - x) <= tol * std::max(1.0, std::abs(x)))
      return Rational(mpq_class(mpz_class(static_cast<long>(h1)), mpz_class(static_cast<long>(k1))));
    const long double frac = r - a;
    if (frac == 0) break;
    r = 1 / frac;
  }
  return std::nullopt;
}

SymmetryBasis nullspace(const DeterminingSystem& system, double threshold) {
  const Eigen::Index n = system.matrix.cols();
  SymmetryBasis out;
  out.labels = system.ansatz.labels;
  // column scaling keeps monomials of different degree comparable
  Eigen::VectorXd colscale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = system.matrix.col(j).norm();
    colscale(j) = c > 0 ? c : 1.0;
  }
  const Eigen::MatrixXd scaled = system.matrix * colscale.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > threshold * top) ++rank;
  out.smallest_kept = rank > 0 ? sv(rank - 1) / top : 0.0;
  out.largest_dropped = rank < sv.size() && top > 0 ? sv(rank) / top : 0.0;

  const Eigen::Index k = n - rank;
  Eigen::MatrixXd basis = (colscale.cwiseInverse().asDiagonal() * svd.matrixV().rightCols(k)).transpose();

  // reduced row echelon in label order with partial pivoting
  out.pivots.clear();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < n && row < k; ++col) {
    Eigen::Index best = row;
    for (Eigen::Index r = row + 1; r < k; ++r)
      if (std::abs(basis(r, col)) > std::abs(basis(best, col))) best = r;
    if (std::abs(basis(best, col)) < 1e-7 * std::max(1.0, basis.cwiseAbs().maxCoeff())) continue;
    basis.row(row).swap(basis.row(best));
    basis.row(row) /= basis(row, col);
    for (Eigen::Index r = 0; r < k; ++r)
      if (r != row) basis.row(r) -= basis(r, col) * basis.row(row);
    out.pivots.push_back(col);
    ++row;
  }

  out.coefficients = RatMatrix::Zero(k, n);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      if (std::abs(basis(r, c)) < 1e-9) continue;
      auto q = rationalize(basis(r, c), 1e-7);
      if (!q) throw Error(ErrorCode::UnverifiedBasis, "coefficient " + out.labels[c] + " does not rationalize");
      out.coefficients(r, c) = *q;
    }

  const std::size_t neq = system.residuals.empty() ? 0 : system.residuals.front().size();
  for (Eigen::Index r = 0; r < k; ++r) {
    const RatVector coef = out.coefficients.row(r).transpose();
    for (std::size_t e = 0; e < neq; ++e) {
      ExpPoly res;
      for (Eigen::Index c = 0; c < n; ++c)
        if (coef(c) != 0) res += system.residuals[c][e].scaled(coef(c));
      if (!res.is_zero())
        throw Error(ErrorCode::UnverifiedBasis, "generator " + std::to_string(r) + " fails the exact residual");
    }
    out.fields.push_back(ansatz_field(system.ansatz, coef));
  }
  return out;
}

bool same_span(const Ansatz& ansatz, const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
  const auto stack = [&](const std::vector<VectorField>& fs, RatMatrix& m, Eigen::Index offset) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto c = ansatz_coordinates(ansatz, fs[i]);
      if (!c) return false;
      m.row(offset + static_cast<Eigen::Index>(i)) = c->transpose();
    }
    return true;
  };
  const auto n = static_cast<Eigen::Index>(ansatz.size());
  RatMatrix ma(static_cast<Eigen::Index>(a.size()), n), mb(static_cast<Eigen::Index>(b.size()), n),
      both(static_cast<Eigen::Index>(a.size() + b.size()), n);
  if (!stack(a, ma, 0) || !stack(b, mb, 0) || !stack(a, both, 0) ||
      !stack(b, both, static_cast<Eigen::Index>(a.size())))
    return false;
  const Eigen::Index ra = rank(ma), rb = rank(mb);
  return ra == rb && rank(both) == ra;
}

SymmetrySearch find_symmetries(const JetSystem& sys, int degree, std::optional<int> samples, std::uint64_t seed) {
  const Ansatz ansatz = make_ansatz(sys.base, degree);
  const int s = samples.value_or(default_samples(ansatz));
  const DeterminingSystem first = assemble(sys, ansatz, s, seed);
  // an independent stream for the second draw
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  const std::uint64_t seed2 = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  const DeterminingSystem second = resample(first, sys, 2 * s, seed2);

  SymmetrySearch out;
  out.unknowns = ansatz.size();
  out.samples = s;
  out.seed = seed;
  out.basis = nullspace(first);
  const SymmetryBasis other = nullspace(second);
  out.singular_samples = first.singular_samples + second.singular_samples;
  out.first_dimension = out.basis.dimension();
  out.second_dimension = other.dimension();
  if (out.first_dimension != out.second_dimension || !(out.basis.coefficients == other.coefficients))
    throw Error(ErrorCode::RankDeficientSampling,
                "nullspace differs between draws (" + std::to_string(out.first_dimension) + " vs " +
                    std::to_string(out.second_dimension) + ")");
  return out;
}

JetSystem lagrangian_jet(const Chart& base) {
  JetSystem j;
  j.name = "lagrangian";
  j.base = base;
  j.jet = jet_chart(base, 1);
  j.dof = base.size() - 1;
  j.order = 1;
  return j;
}

ExpPoly noether_residual(const VectorField& v, const ExpPoly& lagrangian) {
  const JetSystem jet = lagrangian_jet(v.chart);
  if (lagrangian.span() > jet.jet.size())
    throw Error(ErrorCode::ChartMismatch, "Lagrangian depends on more than (t, q, q_t)");
  const std::vector<ExpPoly> pr = prolongation(v, jet, 1);
  ExpPoly r = v[0] * lagrangian.diff(jet.time_index());
  for (std::size_t i = 0; i < jet.dof; ++i) {
    r += v[1 + i] * lagrangian.diff(jet.q(i));
    r += pr[i] * lagrangian.diff(jet.velocity(i));
  }
  return r + lagrangian * total_derivative(jet, v[0]);
}

std::vector<ExpPoly> euler_lagrange(const ExpPoly& lagrangian, const Chart& base) {
  JetSystem jet;
  jet.base = base;
  jet.jet = jet_chart(base, 2);
  jet.dof = base.size() - 1;
  jet.order = 2;
  if (lagrangian.span() > jet.acceleration(0))
    throw Error(ErrorCode::ChartMismatch, "Lagrangian depends on more than (t, q, q_t)");
  std::vector<ExpPoly> out;
  for (std::size_t i = 0; i < jet.dof; ++i)
    out.push_back(lagrangian.diff(jet.q(i)) - total_derivative(jet, lagrangian.diff(jet.velocity(i))));
  return out;
}

bool LagrangianMatch::holds() const { return all_zero(on_shell) && !hessian_det.is_zero(); }

LagrangianMatch lagrangian_match(const ExpPoly& lagrangian, const JetSystem& sys) {
  if (sys.order != 2) throw Error(ErrorCode::InvalidArgument, "Lagrangian match needs a second-order system");
  LagrangianMatch m;
  for (const ExpPoly& e : euler_lagrange(lagrangian, sys.base)) m.on_shell.push_back(on_shell(sys, e));
  PolyMatrix h(static_cast<Eigen::Index>(sys.dof), static_cast<Eigen::Index>(sys.dof));
  for (std::size_t i = 0; i < sys.dof; ++i)
    for (std::size_t j = 0; j < sys.dof; ++j)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          lagrangian.diff(sys.velocity(i)).diff(sys.velocity(j));
  // Leibniz expansion; dof is small
  std::vector<int> perm(sys.dof);
  for (std::size_t i = 0; i < sys.dof; ++i) perm[i] = static_cast<int>(i);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    ExpPoly term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < perm.size(); ++i) term *= h(static_cast<Eigen::Index>(i), perm[i]);
    m.hessian_det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return m;
}

}  // namespace hamforge
