#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hamforge/chart.hpp"
#include "hamforge/rational.hpp"

namespace hamforge {

/// Canonical exponential-polynomial: a finite sum of terms
///   coefficient * prod_i x_i^{p_i} * exp(sum_i f_i x_i)
/// with rational coefficients and frequencies and integer (possibly negative,
/// i.e. Laurent) powers. Distinct keys are linearly independent functions on
/// the open set where no coordinate vanishes, so two values are equal exactly
/// when their term maps coincide.
///
/// Variables are positional; a Chart supplies names. Keys are stored with
/// trailing zeros trimmed, so a value over a chart is also a value over any
/// chart that extends it.
class ExpPoly {
 public:
  struct Key {
    std::vector<int> powers;
    std::vector<Rational> freqs;

    int power(std::size_t i) const { return i < powers.size() ? powers[i] : 0; }
    Rational freq(std::size_t i) const { return i < freqs.size() ? freqs[i] : Rational(0); }
    int total_degree() const;
    void normalize();

    friend bool operator==(const Key&, const Key&) = default;
    friend std::strong_ordering operator<=>(const Key& a, const Key& b) {
      if (auto c = a.powers <=> b.powers; c != 0) return c;
      return a.freqs <=> b.freqs;
    }
  };
  using Terms = std::map<Key, Rational>;

  ExpPoly() = default;
  ExpPoly(int c) : ExpPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  ExpPoly(const Rational& c);               // NOLINT(google-explicit-constructor)

  static ExpPoly variable(std::size_t index, int power = 1);
  static ExpPoly exponential(std::vector<Rational> freqs);
  static ExpPoly term(Key key, Rational coefficient);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }
  std::optional<Rational> as_constant() const;
  Rational coefficient(const Key& key) const;
  /// One past the highest variable index any term touches.
  std::size_t span() const;
  bool depends_on(std::size_t index) const;
  bool has_exponential() const;

  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator-(const ExpPoly& a) { return a.scaled(Rational(-1)); }
  friend bool operator==(const ExpPoly&, const ExpPoly&) = default;

  ExpPoly scaled(const Rational& s) const;
  /// Negative n requires a single-term value (throws NegativePower otherwise).
  ExpPoly pow(int n) const;
  ExpPoly inverse() const;
  ExpPoly diff(std::size_t index) const;

  /// Simultaneous substitution: variable j is replaced by images[j]. Requires
  /// images.size() >= span(). Negative powers require a single-term image;
  /// exponentials require the combined exponent to stay linear.
  ExpPoly compose(std::span<const ExpPoly> images) const;
  ExpPoly substitute(std::size_t index, const ExpPoly& replacement) const;
  /// Moves variable i to i + offset. A negative offset requires the value to be
  /// independent of the dropped leading variables.
  ExpPoly shifted(int offset) const;

  double eval(std::span<const double> point) const;
  /// Exact value; nullopt when an exponential term is present.
  std::optional<Rational> eval_exact(std::span<const Rational> point) const;

  std::string str(const Chart& chart) const;
  std::string str() const;

 private:
  void add_term(const Key& key, const Rational& coef);
  Terms terms_;
};

/// exp(arg) for arg linear in the variables (no constant part). Throws
/// NonAffineExponent otherwise.
ExpPoly exp_of_linear(const ExpPoly& arg);

inline const ExpPoly& conj(const ExpPoly& p) { return p; }
inline const ExpPoly& real(const ExpPoly& p) { return p; }
inline ExpPoly imag(const ExpPoly&) { return ExpPoly(); }
inline ExpPoly abs2(const ExpPoly& p) { return p * p; }

using PolyVector = Eigen::Matrix<ExpPoly, Eigen::Dynamic, 1>;
using PolyMatrix = Eigen::Matrix<ExpPoly, Eigen::Dynamic, Eigen::Dynamic>;

bool is_zero(const PolyVector& v);
bool is_zero(const PolyMatrix& m);
PolyMatrix to_poly(const RatMatrix& m);

}  // namespace hamforge

namespace Eigen {
template <>
struct NumTraits<hamforge::ExpPoly> : GenericNumTraits<hamforge::ExpPoly> {
  using Real = hamforge::ExpPoly;
  using NonInteger = hamforge::ExpPoly;
  using Nested = hamforge::ExpPoly;
  using Literal = hamforge::ExpPoly;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 20,
    AddCost = 200,
    MulCost = 1000
  };
};
}  // namespace Eigen
