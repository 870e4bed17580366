#include "hamforge/exppoly.hpp"

#include <cmath>
#include <sstream>

#include "hamforge/error.hpp"

namespace hamforge {

int ExpPoly::Key::total_degree() const {
  int d = 0;
  for (int p : powers) d += p;
  return d;
}

void ExpPoly::Key::normalize() {
  while (!powers.empty() && powers.back() == 0) powers.pop_back();
  while (!freqs.empty() && freqs.back().is_zero()) freqs.pop_back();
}

namespace {

ExpPoly::Key key_product(const ExpPoly::Key& a, const ExpPoly::Key& b) {
  ExpPoly::Key k;
  k.powers.resize(std::max(a.powers.size(), b.powers.size()), 0);
  for (std::size_t i = 0; i < k.powers.size(); ++i) k.powers[i] = a.power(i) + b.power(i);
  k.freqs.resize(std::max(a.freqs.size(), b.freqs.size()));
  for (std::size_t i = 0; i < k.freqs.size(); ++i) k.freqs[i] = a.freq(i) + b.freq(i);
  k.normalize();
  return k;
}

}  // namespace

ExpPoly::ExpPoly(const Rational& c) {
  if (!c.is_zero()) terms_.emplace(Key{}, c);
}

ExpPoly ExpPoly::variable(std::size_t index, int power) {
  Key k;
  k.powers.assign(index + 1, 0);
  k.powers[index] = power;
  k.normalize();
  return term(std::move(k), Rational(1));
}

ExpPoly ExpPoly::exponential(std::vector<Rational> freqs) {
  Key k;
  k.freqs = std::move(freqs);
  k.normalize();
  return term(std::move(k), Rational(1));
}

ExpPoly ExpPoly::term(Key key, Rational coefficient) {
  ExpPoly p;
  key.normalize();
  if (!coefficient.is_zero()) p.terms_.emplace(std::move(key), std::move(coefficient));
  return p;
}

std::optional<Rational> ExpPoly::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first == Key{}) return terms_.begin()->second;
  return std::nullopt;
}

Rational ExpPoly::coefficient(const Key& key) const {
  Key k = key;
  k.normalize();
  auto it = terms_.find(k);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t ExpPoly::span() const {
  std::size_t s = 0;
  for (const auto& [k, c] : terms_) s = std::max({s, k.powers.size(), k.freqs.size()});
  return s;
}

bool ExpPoly::depends_on(std::size_t index) const {
  for (const auto& [k, c] : terms_)
    if (k.power(index) != 0 || !k.freq(index).is_zero()) return true;
  return false;
}

bool ExpPoly::has_exponential() const {
  for (const auto& [k, c] : terms_)
    if (!k.freqs.empty()) return true;
  return false;
}

void ExpPoly::add_term(const Key& key, const Rational& coef) {
  if (coef.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) r.add_term(key_product(ka, kb), ca * cb);
  return r;
}

ExpPoly ExpPoly::scaled(const Rational& s) const {
  ExpPoly r;
  if (s.is_zero()) return r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, c * s);
  return r;
}

ExpPoly ExpPoly::inverse() const {
  if (terms_.size() != 1)
    throw Error(ErrorCode::NegativePower, "cannot invert '" + str() + "': only single-term values have an inverse");
  const auto& [k, c] = *terms_.begin();
  Key inv;
  for (int p : k.powers) inv.powers.push_back(-p);
  for (const auto& f : k.freqs) inv.freqs.push_back(-f);
  return term(std::move(inv), c.inverse());
}

ExpPoly ExpPoly::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  ExpPoly result(1), base = *this;
  unsigned e = static_cast<unsigned>(n);
  while (e) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e) base *= base;
  }
  return result;
}

ExpPoly ExpPoly::diff(std::size_t index) const {
  ExpPoly r;
  for (const auto& [k, c] : terms_) {
    const int p = k.power(index);
    if (p != 0) {
      Key d = k;
      d.powers[index] -= 1;
      d.normalize();
      r.add_term(d, c * Rational(p));
    }
    const Rational f = k.freq(index);
    if (!f.is_zero()) r.add_term(k, c * f);
  }
  return r;
}

ExpPoly ExpPoly::compose(std::span<const ExpPoly> images) const {
  if (images.size() < span())
    throw Error(ErrorCode::DimensionMismatch, "compose: too few images for '" + str() + "'");
  std::map<std::pair<std::size_t, int>, ExpPoly> power_cache;
  auto power_of = [&](std::size_t j, int p) -> const ExpPoly& {
    auto [it, inserted] = power_cache.try_emplace({j, p});
    if (inserted) it->second = images[j].pow(p);
    return it->second;
  };
  ExpPoly r;
  for (const auto& [k, c] : terms_) {
    ExpPoly t(c);
    for (std::size_t j = 0; j < k.powers.size(); ++j)
      if (k.powers[j] != 0) t *= power_of(j, k.powers[j]);
    if (!k.freqs.empty()) {
      ExpPoly arg;
      for (std::size_t j = 0; j < k.freqs.size(); ++j)
        if (!k.freqs[j].is_zero()) arg += images[j].scaled(k.freqs[j]);
      t *= exp_of_linear(arg);
    }
    r += t;
  }
  return r;
}

ExpPoly ExpPoly::substitute(std::size_t index, const ExpPoly& replacement) const {
  std::vector<ExpPoly> images;
  const std::size_t n = std::max(span(), index + 1);
  images.reserve(n);
  for (std::size_t j = 0; j < n; ++j) images.push_back(j == index ? replacement : variable(j));
  return compose(images);
}

ExpPoly ExpPoly::shifted(int offset) const {
  ExpPoly r;
  for (const auto& [k, c] : terms_) {
    Key s;
    if (offset >= 0) {
      if (!k.powers.empty()) {
        s.powers.assign(static_cast<std::size_t>(offset), 0);
        s.powers.insert(s.powers.end(), k.powers.begin(), k.powers.end());
      }
      if (!k.freqs.empty()) {
        s.freqs.assign(static_cast<std::size_t>(offset), Rational(0));
        s.freqs.insert(s.freqs.end(), k.freqs.begin(), k.freqs.end());
      }
    } else {
      const std::size_t drop = static_cast<std::size_t>(-offset);
      for (std::size_t j = 0; j < drop; ++j)
        if (k.power(j) != 0 || !k.freq(j).is_zero())
          throw Error(ErrorCode::InvalidArgument, "shifted: value depends on a dropped variable");
      if (k.powers.size() > drop) s.powers.assign(k.powers.begin() + static_cast<long>(drop), k.powers.end());
      if (k.freqs.size() > drop) s.freqs.assign(k.freqs.begin() + static_cast<long>(drop), k.freqs.end());
    }
    s.normalize();
    r.terms_.emplace(std::move(s), c);
  }
  return r;
}

double ExpPoly::eval(std::span<const double> point) const {
  if (point.size() < span()) throw Error(ErrorCode::UnboundVariable, "eval: point has too few coordinates");
  double sum = 0.0;
  for (const auto& [k, c] : terms_) {
    double t = c.to_double();
    for (std::size_t j = 0; j < k.powers.size(); ++j)
      if (k.powers[j] != 0) t *= std::pow(point[j], k.powers[j]);
    if (!k.freqs.empty()) {
      double arg = 0.0;
      for (std::size_t j = 0; j < k.freqs.size(); ++j) arg += k.freqs[j].to_double() * point[j];
      t *= std::exp(arg);
    }
    sum += t;
  }
  return sum;
}

std::optional<Rational> ExpPoly::eval_exact(std::span<const Rational> point) const {
  if (point.size() < span()) throw Error(ErrorCode::UnboundVariable, "eval: point has too few coordinates");
  if (has_exponential()) return std::nullopt;
  Rational sum(0);
  for (const auto& [k, c] : terms_) {
    Rational t = c;
    for (std::size_t j = 0; j < k.powers.size(); ++j)
      if (k.powers[j] != 0) t *= point[j].pow(k.powers[j]);
    sum += t;
  }
  return sum;
}

namespace {

std::string var_name(const Chart* chart, std::size_t j) {
  if (chart && j < chart->size()) return chart->name(j);
  return "v" + std::to_string(j);
}

std::string format_term(const ExpPoly::Key& k, const Rational& c, const Chart* chart, bool first) {
  std::ostringstream os;
  std::vector<std::string> factors;
  for (std::size_t j = 0; j < k.powers.size(); ++j) {
    if (k.powers[j] == 0) continue;
    std::string f = var_name(chart, j);
    if (k.powers[j] != 1) f += "^" + (k.powers[j] < 0 ? "(" + std::to_string(k.powers[j]) + ")" : std::to_string(k.powers[j]));
    factors.push_back(f);
  }
  if (!k.freqs.empty()) {
    std::string arg;
    for (std::size_t j = 0; j < k.freqs.size(); ++j) {
      const Rational& f = k.freqs[j];
      if (f.is_zero()) continue;
      const bool neg = f.sign() < 0;
      if (arg.empty()) arg += neg ? "-" : "";
      else arg += neg ? " - " : " + ";
      const Rational m = f.abs();
      if (m != Rational(1)) arg += m.str() + "*";
      arg += var_name(chart, j);
    }
    factors.push_back("exp(" + arg + ")");
  }
  const bool neg = c.sign() < 0;
  if (first) os << (neg ? "-" : "");
  else os << (neg ? " - " : " + ");
  const Rational m = c.abs();
  if (factors.empty()) {
    os << m.str();
  } else {
    if (m != Rational(1)) os << m.str() << "*";
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

std::string format(const ExpPoly::Terms& terms, const Chart* chart) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, c] : terms) {
    s += format_term(k, c, chart, first);
    first = false;
  }
  return s;
}

}  // namespace

std::string ExpPoly::str(const Chart& chart) const { return format(terms_, &chart); }
std::string ExpPoly::str() const { return format(terms_, nullptr); }

ExpPoly exp_of_linear(const ExpPoly& arg) {
  std::vector<Rational> freqs(arg.span(), Rational(0));
  for (const auto& [k, c] : arg.terms()) {
    if (!k.freqs.empty())
      throw Error(ErrorCode::NonAffineExponent, "exponent contains an exponential: " + arg.str());
    if (k.powers.empty())
      throw Error(ErrorCode::NonAffineExponent, "exponent has a constant part (not representable): " + arg.str());
    std::size_t nonzero = 0, where = 0;
    for (std::size_t j = 0; j < k.powers.size(); ++j)
      if (k.powers[j] != 0) {
        ++nonzero;
        where = j;
      }
    if (nonzero != 1 || k.powers[where] != 1)
      throw Error(ErrorCode::NonAffineExponent, "exponent is not linear in the variables: " + arg.str());
    freqs[where] += c;
  }
  return ExpPoly::exponential(std::move(freqs));
}

bool is_zero(const PolyVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) return false;
  return true;
}

bool is_zero(const PolyMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

PolyMatrix to_poly(const RatMatrix& m) {
  PolyMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = ExpPoly(m(i, j));
  return r;
}

}  // namespace hamforge
