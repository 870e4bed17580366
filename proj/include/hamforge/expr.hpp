#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hamforge/chart.hpp"
#include "hamforge/exppoly.hpp"
#include "hamforge/rational.hpp"

namespace hamforge {

/// Immutable symbolic expression over named variables and parameters. The
/// nodes are shared; copying an Expr is cheap.
class Expr {
 public:
  enum class Kind { Constant, Parameter, Variable, Sum, Product, Power, Exp };

  Expr();
  Expr(int c) : Expr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Expr(Rational c);                   // NOLINT(google-explicit-constructor)
  static Expr var(std::string name);
  static Expr par(std::string name);

  Kind kind() const;
  const Rational& value() const;
  const std::string& name() const;
  const std::vector<Expr>& operands() const;
  int exponent() const;
  bool is_constant(const Rational& c) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Division is pow(b, -1); canonicalize accepts it when b is a single term.
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, int n);
  friend Expr exp(const Expr& arg);

  std::string str() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind kind, std::vector<Expr> ops, int exponent = 0);
  std::shared_ptr<const Node> node_;
};

ExpPoly canonicalize(const Expr& e, const Chart& chart, const ParamSet& params);
std::vector<ExpPoly> canonicalize(const std::vector<Expr>& es, const Chart& chart, const ParamSet& params);

/// Symbolic partial derivative (tree level). Throws UnknownVariable when v is
/// not a coordinate of chart.
Expr diff(const Expr& e, const Chart& chart, std::string_view v);

/// Rebuilds an expression tree from a canonical form.
Expr to_expr(const ExpPoly& p, const Chart& chart);

using Number = std::variant<Rational, double>;
using Point = std::map<std::string, Number, std::less<>>;
double to_double(const Number& n);

/// Exact when every input is rational and no exp node is reached; IEEE double
/// otherwise.
Number eval(const Expr& e, const Point& point, const ParamSet& params);

struct SampleBox {
  double lo = 0.5;
  double hi = 2.0;
};

struct EqualMode {
  enum class Kind { Exact, Sampled } kind = Kind::Exact;
  int samples = 100;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  SampleBox box{};

  static EqualMode exact() { return {}; }
  static EqualMode sampled(int n, double tol, std::uint64_t seed = 42) {
    return {Kind::Sampled, n, tol, seed, {}};
  }
};

struct EqualResult {
  bool equal = false;
  /// 0 for an exact match; otherwise the max relative pointwise difference
  /// |v1 - v2| / max(1, |v1|, |v2|) over the samples (exact mode samples the
  /// canonical difference to report a magnitude).
  double residual = 0.0;
};

EqualResult equal(const Expr& e1, const Expr& e2, const Chart& chart, const ParamSet& params,
                  const EqualMode& mode = EqualMode::exact());

/// Max |p| over uniform samples from box; 0 for the zero polynomial.
double sampled_magnitude(const ExpPoly& p, std::size_t dim, int samples = 64, std::uint64_t seed = 42,
                         SampleBox box = {});

}  // namespace hamforge
