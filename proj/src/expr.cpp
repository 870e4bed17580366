#include "hamforge/expr.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hamforge/error.hpp"

namespace hamforge {

struct Expr::Node {
  Kind kind;
  Rational value;
  std::string name;
  std::vector<Expr> ops;
  int exponent = 0;
};

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(Rational c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = std::move(c);
  node_ = std::move(n);
}

Expr Expr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::par(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Parameter;
  n->name = std::move(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(Kind kind, std::vector<Expr> ops, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->ops = std::move(ops);
  n->exponent = exponent;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->ops; }
int Expr::exponent() const { return node_->exponent; }
bool Expr::is_constant(const Rational& c) const { return kind() == Kind::Constant && value() == c; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant(0)) return b;
  if (b.is_constant(0)) return a;
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant) return Expr(a.value() + b.value());
  std::vector<Expr> ops;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == Expr::Kind::Sum) ops.insert(ops.end(), e->operands().begin(), e->operands().end());
    else ops.push_back(*e);
  }
  return Expr::make(Expr::Kind::Sum, std::move(ops));
}

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Constant) return Expr(-a.value());
  return Expr(Rational(-1)) * a;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant(0) || b.is_constant(0)) return Expr(0);
  if (a.is_constant(1)) return b;
  if (b.is_constant(1)) return a;
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant) return Expr(a.value() * b.value());
  std::vector<Expr> ops;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == Expr::Kind::Product) ops.insert(ops.end(), e->operands().begin(), e->operands().end());
    else ops.push_back(*e);
  }
  return Expr::make(Expr::Kind::Product, std::move(ops));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.kind() == Expr::Kind::Constant) return a * Expr(b.value().inverse());
  return a * pow(b, -1);
}

Expr pow(const Expr& base, int n) {
  if (n == 0) return Expr(1);
  if (n == 1) return base;
  if (base.kind() == Expr::Kind::Constant) return Expr(base.value().pow(n));
  return Expr::make(Expr::Kind::Power, {base}, n);
}

Expr exp(const Expr& arg) { return Expr::make(Expr::Kind::Exp, {arg}); }

std::string Expr::str() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::Constant:
      if (value().sign() < 0 || !value().is_integer()) os << "(" << value() << ")";
      else os << value();
      break;
    case Kind::Parameter:
    case Kind::Variable: os << name(); break;
    case Kind::Sum:
      os << "(";
      for (std::size_t i = 0; i < operands().size(); ++i) os << (i ? " + " : "") << operands()[i].str();
      os << ")";
      break;
    case Kind::Product:
      for (std::size_t i = 0; i < operands().size(); ++i) os << (i ? "*" : "") << operands()[i].str();
      break;
    case Kind::Power: os << "(" << operands()[0].str() << ")^" << exponent(); break;
    case Kind::Exp: os << "exp(" << operands()[0].str() << ")"; break;
  }
  return os.str();
}

ExpPoly canonicalize(const Expr& e, const Chart& chart, const ParamSet& params) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return ExpPoly(e.value());
    case Expr::Kind::Parameter: return ExpPoly(params.get(e.name()));
    case Expr::Kind::Variable: {
      auto i = chart.find(e.name());
      if (!i) throw Error(ErrorCode::UnboundVariable, "variable '" + e.name() + "' is not in the chart");
      return ExpPoly::variable(*i);
    }
    case Expr::Kind::Sum: {
      ExpPoly r;
      for (const auto& op : e.operands()) r += canonicalize(op, chart, params);
      return r;
    }
    case Expr::Kind::Product: {
      ExpPoly r(1);
      for (const auto& op : e.operands()) {
        r *= canonicalize(op, chart, params);
        if (r.is_zero()) break;
      }
      return r;
    }
    case Expr::Kind::Power: {
      ExpPoly base = canonicalize(e.operands()[0], chart, params);
      if (e.exponent() < 0 && base.term_count() != 1)
        throw Error(ErrorCode::NegativePower, "division by '" + base.str(chart) + "' is not representable");
      return base.pow(e.exponent());
    }
    case Expr::Kind::Exp: return exp_of_linear(canonicalize(e.operands()[0], chart, params));
  }
  return {};
}

std::vector<ExpPoly> canonicalize(const std::vector<Expr>& es, const Chart& chart, const ParamSet& params) {
  std::vector<ExpPoly> r;
  r.reserve(es.size());
  for (const auto& e : es) r.push_back(canonicalize(e, chart, params));
  return r;
}

namespace {

Expr diff_impl(const Expr& e, std::string_view v) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Parameter: return Expr(0);
    case Expr::Kind::Variable: return Expr(e.name() == v ? 1 : 0);
    case Expr::Kind::Sum: {
      Expr r(0);
      for (const auto& op : e.operands()) r = r + diff_impl(op, v);
      return r;
    }
    case Expr::Kind::Product: {
      Expr r(0);
      const auto& ops = e.operands();
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr d = diff_impl(ops[i], v);
        if (d.is_constant(0)) continue;
        Expr t = d;
        for (std::size_t j = 0; j < ops.size(); ++j)
          if (j != i) t = t * ops[j];
        r = r + t;
      }
      return r;
    }
    case Expr::Kind::Power: {
      const Expr& b = e.operands()[0];
      return Expr(e.exponent()) * pow(b, e.exponent() - 1) * diff_impl(b, v);
    }
    case Expr::Kind::Exp: return e * diff_impl(e.operands()[0], v);
  }
  return Expr(0);
}

}  // namespace

Expr diff(const Expr& e, const Chart& chart, std::string_view v) {
  chart.index(v);
  return diff_impl(e, v);
}

Expr to_expr(const ExpPoly& p, const Chart& chart) {
  Expr sum(0);
  for (const auto& [k, c] : p.terms()) {
    Expr t(c);
    for (std::size_t j = 0; j < k.powers.size(); ++j)
      if (k.powers[j] != 0) t = t * pow(Expr::var(chart.name(j)), k.powers[j]);
    if (!k.freqs.empty()) {
      Expr arg(0);
      for (std::size_t j = 0; j < k.freqs.size(); ++j)
        if (!k.freqs[j].is_zero()) arg = arg + Expr(k.freqs[j]) * Expr::var(chart.name(j));
      t = t * exp(arg);
    }
    sum = sum + t;
  }
  return sum;
}

double to_double(const Number& n) {
  return std::visit([](const auto& v) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>) return v.to_double();
    else return v;
  }, n);
}

namespace {

Number add(const Number& a, const Number& b) {
  if (auto* ra = std::get_if<Rational>(&a))
    if (auto* rb = std::get_if<Rational>(&b)) return *ra + *rb;
  return to_double(a) + to_double(b);
}

Number mul(const Number& a, const Number& b) {
  if (auto* ra = std::get_if<Rational>(&a))
    if (auto* rb = std::get_if<Rational>(&b)) return *ra * *rb;
  return to_double(a) * to_double(b);
}

}  // namespace

Number eval(const Expr& e, const Point& point, const ParamSet& params) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e.value();
    case Expr::Kind::Parameter: return params.get(e.name());
    case Expr::Kind::Variable: {
      auto it = point.find(e.name());
      if (it == point.end()) throw Error(ErrorCode::UnboundVariable, "variable '" + e.name() + "' is not bound");
      return it->second;
    }
    case Expr::Kind::Sum: {
      Number r = Rational(0);
      for (const auto& op : e.operands()) r = add(r, eval(op, point, params));
      return r;
    }
    case Expr::Kind::Product: {
      Number r = Rational(1);
      for (const auto& op : e.operands()) r = mul(r, eval(op, point, params));
      return r;
    }
    case Expr::Kind::Power: {
      Number b = eval(e.operands()[0], point, params);
      if (auto* rb = std::get_if<Rational>(&b)) {
        if (e.exponent() < 0 && rb->is_zero()) return std::pow(0.0, e.exponent());
        return rb->pow(e.exponent());
      }
      return std::pow(std::get<double>(b), e.exponent());
    }
    case Expr::Kind::Exp: return std::exp(to_double(eval(e.operands()[0], point, params)));
  }
  return Rational(0);
}

namespace {

double relative_gap(double v1, double v2) {
  return std::abs(v1 - v2) / std::max({1.0, std::abs(v1), std::abs(v2)});
}

}  // namespace

double sampled_magnitude(const ExpPoly& p, std::size_t dim, int samples, std::uint64_t seed, SampleBox box) {
  if (p.is_zero()) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(box.lo, box.hi);
  std::vector<double> pt(std::max(dim, p.span()));
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (auto& x : pt) x = u(rng);
    worst = std::max(worst, std::abs(p.eval(pt)));
  }
  return worst;
}

EqualResult equal(const Expr& e1, const Expr& e2, const Chart& chart, const ParamSet& params, const EqualMode& mode) {
  if (mode.kind == EqualMode::Kind::Exact) {
    ExpPoly d = canonicalize(e1, chart, params) - canonicalize(e2, chart, params);
    if (d.is_zero()) return {true, 0.0};
    return {false, sampled_magnitude(d, chart.size(), 64, mode.seed, mode.box)};
  }
  std::mt19937_64 rng(mode.seed);
  std::uniform_real_distribution<double> u(mode.box.lo, mode.box.hi);
  double worst = 0.0;
  for (int s = 0; s < mode.samples; ++s) {
    Point pt;
    for (const auto& n : chart.names()) pt[n] = u(rng);
    worst = std::max(worst, relative_gap(to_double(eval(e1, pt, params)), to_double(eval(e2, pt, params))));
  }
  return {worst <= mode.tol, worst};
}

}  // namespace hamforge
