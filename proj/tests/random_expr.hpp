#pragma once

#include <random>
#include <string>
#include <vector>

#include "hamforge/expr.hpp"

namespace hamforge::testing {

/// Random expressions in the exp-poly closure class: sums and products of
/// variables, parameters, small rational constants, non-negative powers and
/// exponentials of linear forms.
class ExprGenerator {
 public:
  ExprGenerator(std::vector<std::string> vars, std::uint64_t seed, bool with_exp = true)
      : vars_(std::move(vars)), rng_(seed), with_exp_(with_exp) {}

  Expr constant() {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    return Expr(Rational(num(rng_), den(rng_)));
  }

  Expr atom() {
    std::uniform_int_distribution<int> pick(0, 9);
    const int p = pick(rng_);
    if (p < 2) return constant();
    if (p < 3) return Expr::par(params_[pick(rng_) % params_.size()]);
    if (p < 4 && with_exp_) return exp(linear());
    return Expr::var(vars_[static_cast<std::size_t>(pick(rng_)) % vars_.size()]);
  }

  Expr linear() {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    Expr e(0);
    for (const auto& v : vars_)
      if (std::bernoulli_distribution(0.5)(rng_)) e = e + Expr(Rational(num(rng_), den(rng_))) * Expr::var(v);
    return e;
  }

  Expr expr(int depth = 3) {
    if (depth == 0) return atom();
    std::uniform_int_distribution<int> pick(0, 5);
    switch (pick(rng_)) {
      case 0:
      case 1: return expr(depth - 1) + expr(depth - 1);
      case 2:
      case 3: return expr(depth - 1) * expr(depth - 1);
      case 4: return pow(expr(depth - 1), std::uniform_int_distribution<int>(0, 2)(rng_));
      default: return atom();
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::vector<std::string> vars_;
  std::vector<std::string> params_{"a", "b", "c"};
  std::mt19937_64 rng_;
  bool with_exp_;
};

inline Rational random_rational(std::mt19937_64& rng, int lo_num = 32, int hi_num = 128, int den = 64) {
  return Rational(std::uniform_int_distribution<int>(lo_num, hi_num)(rng), den);
}

}  // namespace hamforge::testing
