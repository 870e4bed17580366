#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hamforge {

/// Exact rational number backed by GMP. Always stored in lowest terms with a
/// positive denominator.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I n) : q_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "p", "p/q", or a finite decimal such as "-0.125" or "1e-3"; the
  /// decimal form is converted exactly.
  static Rational parse(std::string_view text);

  /// Nearest rational with denominator at most max_den (continued fractions).
  static Rational approximate(double value, long max_den);

  const mpq_class& raw() const noexcept { return q_; }
  double to_double() const { return q_.get_d(); }
  std::string str() const { return q_.get_str(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  Rational abs() const { return Rational(::abs(q_)); }
  Rational inverse() const;
  Rational pow(int n) const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class q_;
};

// Eigen interop: abs() and friends found by ADL.
inline Rational abs(const Rational& r) { return r.abs(); }
inline const Rational& conj(const Rational& r) { return r; }
inline const Rational& real(const Rational& r) { return r; }
inline Rational imag(const Rational&) { return Rational(0); }
inline Rational abs2(const Rational& r) { return r * r; }

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

bool is_zero(const RatMatrix& m);
Eigen::MatrixXd to_double(const RatMatrix& m);


}  // namespace hamforge

namespace Eigen {
template <>
struct NumTraits<hamforge::Rational> : GenericNumTraits<hamforge::Rational> {
  using Real = hamforge::Rational;
  using NonInteger = hamforge::Rational;
  using Nested = hamforge::Rational;
  using Literal = hamforge::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 40,
    MulCost = 80
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace hamforge {

/// Reduced row echelon form; pivot columns in ascending order.
struct Rref {
  RatMatrix matrix;
  std::vector<Eigen::Index> pivots;
};
Rref rref(RatMatrix m);
Eigen::Index rank(const RatMatrix& m);
/// Some x with a x = b, or nullopt when inconsistent. Free variables are 0.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);
/// Exact inverse; nullopt when singular.
std::optional<RatMatrix> invert(const RatMatrix& m);

}  // namespace hamforge
