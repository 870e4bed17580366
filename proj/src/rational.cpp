#include "hamforge/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "hamforge/error.hpp"

namespace hamforge {

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  q_ = mpq_class(num, 1);
  q_ /= mpq_class(den, 1);
  q_.canonicalize();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { throw Error(ErrorCode::InvalidArgument, "cannot parse rational '" + std::string(text) + "'"); };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse(s.substr(0, slash));
    Rational den = parse(s.substr(slash + 1));
    if (den.is_zero()) fail();
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    bool eneg = false;
    if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
      eneg = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) fail();
    exponent = std::stol(std::string(ex));
    if (eneg) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty())) fail();
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) fail();
    digits = std::string(s);
  }
  mpq_class q{mpz_class(digits, 10)};
  if (exponent > 0) q *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) q /= pow10(static_cast<unsigned long>(-exponent));
  if (negative) q = -q;
  return Rational(q);
}

Rational Rational::approximate(double value, long max_den) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "cannot approximate non-finite value");
  // Continued-fraction convergents, stopping before the denominator bound.
  long double x = value;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    long double fl = std::floor(x);
    mpz_class a(static_cast<double>(fl));
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    long double frac = x - fl;
    if (frac < 1e-15L) break;
    x = 1.0L / frac;
  }
  if (q1 == 0) return Rational(0);
  return Rational(mpq_class(p1, q1));
}

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
  return Rational(mpq_class(1) / q_);
}

Rational Rational::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  mpq_class r(1), b(q_);
  unsigned e = static_cast<unsigned>(n);
  while (e) {
    if (e & 1U) r *= b;
    b *= b;
    e >>= 1U;
  }
  return Rational(r);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

bool is_zero(const RatMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!m.data()[i].is_zero()) return false;
  return true;
}

Eigen::MatrixXd to_double(const RatMatrix& m) {
  return m.unaryExpr([](const Rational& r) { return r.to_double(); });
}

Rref rref(RatMatrix a) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < a.cols() && row < a.rows(); ++c) {
    Eigen::Index p = row;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    a.row(row).swap(a.row(p));
    const Rational piv = a(row, c).inverse();
    a.row(row) *= piv;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, c).is_zero()) continue;
      const Rational f = a(r, c);
      a.row(r) -= f * a.row(row);
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

Eigen::Index rank(const RatMatrix& m) { return static_cast<Eigen::Index>(rref(m).pivots.size()); }

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (a.rows() != b.size()) throw Error(ErrorCode::DimensionMismatch, "solve: row count differs from rhs length");
  RatMatrix aug(a.rows(), a.cols() + 1);
  aug << a, b;
  const Rref r = rref(std::move(aug));
  if (!r.pivots.empty() && r.pivots.back() == a.cols()) return std::nullopt;
  RatVector x = RatVector::Zero(a.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i)
    x(r.pivots[i]) = r.matrix(static_cast<Eigen::Index>(i), a.cols());
  return x;
}

std::optional<RatMatrix> invert(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "invert: matrix is not square");
  const Eigen::Index n = m.rows();
  RatMatrix aug(n, 2 * n);
  aug << m, RatMatrix::Identity(n, n);
  Rref r = rref(std::move(aug));
  if (static_cast<Eigen::Index>(r.pivots.size()) < n || r.pivots[static_cast<std::size_t>(n - 1)] != n - 1)
    return std::nullopt;
  return RatMatrix(r.matrix.rightCols(n));
}

}  // namespace hamforge
