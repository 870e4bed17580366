#include "hamforge/lvmodels.hpp"

#include <algorithm>
#include <functional>

#include "hamforge/error.hpp"

namespace hamforge::models {

const Chart& state_chart() {
  static const Chart c{"x", "y", "z"};
  return c;
}
const Chart& state_time_chart() {
  static const Chart c{"t", "x", "y", "z"};
  return c;
}
const Chart& phase_chart() {
  static const Chart c{"q1", "q2", "p1", "p2"};
  return c;
}
const Chart& phase_time_chart() {
  static const Chart c{"t", "q1", "q2", "p1", "p2"};
  return c;
}
const Chart& newton_base() {
  static const Chart c{"t", "q1", "q2"};
  return c;
}
const Chart& lagrangian_chart() {
  static const Chart c = jet_chart(newton_base(), 1);
  return c;
}

ParamSet default_params() {
  return {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 0}, {"k", 0}, {"k1", 1}, {"k2", 0},
          {"alpha", 1}, {"beta", 1}, {"gamma", 1}};
}

namespace {

const Expr a = Expr::par("a"), b = Expr::par("b"), c = Expr::par("c"), d = Expr::par("d");
const Expr x = Expr::var("x"), y = Expr::var("y"), z = Expr::var("z"), t = Expr::var("t");
const Expr q1 = Expr::var("q1"), q2 = Expr::var("q2"), p1 = Expr::var("p1"), p2 = Expr::var("p2");
const Expr q1t = Expr::var("q1_t"), q2t = Expr::var("q2_t"), q1tt = Expr::var("q1_tt"), q2tt = Expr::var("q2_tt");
const Expr half = Expr(Rational(1, 2));

// e^{(a/2) q1}, e^{-(a/2) q1}
Expr eplus() { return exp(a * q1 / 2); }
Expr eminus() { return exp(-(a * q1) / 2); }
// ap2 - p1^2 + 4 b^2 c^2 q1^2
Expr w_s3() { return a * p2 - pow(p1, 2) + 4 * pow(b, 2) * pow(c, 2) * pow(q1, 2); }

Function fn(const Chart& chart, const Expr& e, const ParamSet& p) { return {chart, canonicalize(e, chart, p)}; }

VectorField lv_field(const ParamSet& p) {
  return make_field(state_chart(), {x * (b * y + c * z), y * (a * x - b * y + c * z + d), z * (-a * x + b * y - c * z - d)},
                    p);
}

Bivector pi1(const ParamSet& p) {
  return make_bivector(state_chart(), {{"x", "y", -half * y}, {"x", "z", half * z}}, p);
}

Bivector pi2(const ParamSet& p) {
  return make_bivector(state_chart(), {{"x", "y", c * x}, {"x", "z", b * x}, {"y", "z", a * x - b * y + c * z}}, p);
}

ExpPoly h1(const ParamSet& p) { return canonicalize(y * z, state_chart(), p); }
ExpPoly h2(const ParamSet& p) { return canonicalize(x * (a * x - 2 * b * y + 2 * c * z), state_chart(), p); }

VectorField euler_field() { return make_field(state_chart(), {x, y, z}, {}); }

Expr zvec_y_component() {
  const Expr k = Expr::par("k");
  return -Expr(Rational(1, 4)) * (4 * a * pow(x, 2) / z + 8 * c * x + pow(a, 2) * x * pow(y, 2) * z +
                                  a * c * pow(y, 2) * pow(z, 2) - 2 * a * k * x * y - 2 * c * k * y * z);
}

VectorField zvec(const ParamSet& p) {
  const Expr k = Expr::par("k");
  const Expr quarter = Expr(Rational(1, 4));
  return make_field(state_chart(),
                    {c * quarter * x * z * (2 * k - a * y * z), zvec_y_component(),
                     -(z * quarter) * (a * x + c * z) * (2 * k - a * y * z)},
                    p);
}

std::pair<Expr, Expr> fg_exprs(int which) {
  if (which == 1) return {p1, -(a * pow(c, 2) / 2) * exp(-(a * q1))};
  if (which == 2) return {p1 + exp(-(a * q1)), -(a / 2) * exp(-(a * q1)) * (2 * p1 + pow(c, 2))};
  throw Error(ErrorCode::InvalidArgument, "F/G pair index must be 1 or 2");
}

Bivector omega_tilde_b(const ExpPoly& f, const ExpPoly& g, const ParamSet& p) {
  const Chart& ch = phase_chart();
  const Expr E = exp(a * q1), Em = exp(-(a * q1));
  Bivector base = make_bivector(ch,
                                {{"q1", "p2", 2 / a * p1},
                                 {"q2", "p2", 2 * b / a * (c - b * p2 * E)},
                                 {"p1", "p2", pow(b, 2) * pow(p2, 2) * E - pow(c, 2) * Em},
                                 {"q1", "p1", 2 * b / a * (b * p2 * E - c)}},
                                p);
  PolyMatrix m = base.entries;
  const Eigen::Index iq1 = 0, iq2 = 1, ip1 = 2;
  m(iq1, iq2) = f;
  m(iq2, iq1) = -f;
  m(ip1, iq2) = g;
  m(iq2, ip1) = -g;
  return make_bivector(ch, std::move(m));
}

JetSystem newton_s2(const ParamSet& p) {
  const Chart jet = jet_chart(newton_base(), 2);
  const Expr Em = exp(-(a * q1));
  return second_order_system(
      "newton_s2", newton_base(),
      canonicalize({q1tt - a / (2 * pow(b, 2)) * Em * pow(q2t, 2) + 2 * c / b * Em * q2t,
                    q2tt - a * q1t * q2t + 2 * b * c * q1t},
                   jet, p));
}

JetSystem newton_s3(const ParamSet& p) {
  const Chart jet = jet_chart(newton_base(), 2);
  return second_order_system(
      "newton_s3", newton_base(),
      canonicalize({4 * q2tt * q2t - pow(a, 2) * q1 * q1t,
                    4 * pow(a, 2) * q1tt * pow(q2t, 2) - 64 * pow(b, 2) * pow(c, 2) * pow(q2t, 4) * q1 -
                        16 * a * b * c * d * pow(q2t, 3) * q1 - pow(a, 4) * pow(q1t, 2) * q1},
                   jet, p));
}

enum class Req { Any, Zero, NonZero };

struct Recipe {
  const char* key;
  const char* anchor;
  Req b;
  Req d;
  std::function<Object(const ParamSet&)> make;
  bool k1_nonzero = false;
};

const std::vector<Recipe>& registry() {
  static const std::vector<Recipe> recipes = {
      {"lv", "Lotka-Volterra type system with parameters a, b, c, d", Req::Any, Req::Any,
       [](const ParamSet& p) { return Object(lv_field(p)); }},
      {"lv_d0", "the system at d = 0", Req::Any, Req::Zero, [](const ParamSet& p) { return Object(lv_field(p)); }},
      {"V", "vector field of the d = 0 system", Req::Any, Req::Zero,
       [](const ParamSet& p) { return Object(lv_field(p)); }},
      {"H1", "constant of motion H1 = yz", Req::Any, Req::Zero,
       [](const ParamSet& p) { return Object(Function{state_chart(), h1(p)}); }},
      {"H2", "constant of motion H2 = x(ax - 2by + 2cz)", Req::Any, Req::Zero,
       [](const ParamSet& p) { return Object(Function{state_chart(), h2(p)}); }},
      {"pi1", "linear Poisson structure with Casimir H1", Req::Any, Req::Zero,
       [](const ParamSet& p) { return Object(pi1(p)); }},
      {"pi2", "linear Poisson structure with Casimir H2", Req::Any, Req::Zero,
       [](const ParamSet& p) { return Object(pi2(p)); }},
      {"X", "scaling field -t d/dt + x d/dx + y d/dy + z d/dz", Req::Any, Req::Zero,
       [](const ParamSet&) { return Object(scaling_symmetry(-1)); }},
      {"Xmaster", "master symmetry k1 (x,y,z) + k2 V", Req::Any, Req::Zero,
       [](const ParamSet& p) {
         const Expr k1 = Expr::par("k1"), k2 = Expr::par("k2");
         return Object(make_field(state_chart(),
                                  {k1 * x + k2 * b * x * y + k2 * c * x * z,
                                   k1 * y + k2 * a * x * y - k2 * b * pow(y, 2) + k2 * c * y * z,
                                   k1 * z - k2 * a * x * z + k2 * b * y * z - k2 * c * pow(z, 2)},
                                  p));
       },
       true},
      {"phi_s2", "exponential realization map onto the d = 0 system", Req::Any, Req::Zero,
       [](const ParamSet& p) {
         return Object(make_map(phase_chart(), state_chart(),
                                {p1 / a + b / a * p2 * eplus() - c / a * eminus(), p2 * eplus(), eminus()}, p));
       }},
      {"Htilde_s2", "canonical Hamiltonian of the exponential realization", Req::Any, Req::Zero,
       [](const ParamSet& p) {
         return Object(fn(phase_chart(), (pow(p1, 2) - pow(b * p2 * eplus() - c * eminus(), 2)) / a, p));
       }},
      {"hamilton_s2", "Hamilton's equations of the exponential realization", Req::Any, Req::Zero,
       [](const ParamSet& p) {
         const Expr E = exp(a * q1), Em = exp(-(a * q1));
         return Object(make_field(phase_chart(),
                                  {2 / a * p1, -(2 * pow(b, 2) / a) * p2 * E + 2 * b * c / a,
                                   -pow(c, 2) * Em + pow(b, 2) * pow(p2, 2) * E, Expr(0)},
                                  p));
       }},
      {"J0", "canonical Poisson tensor of dp1^dq1 + dp2^dq2", Req::Any, Req::Any,
       [](const ParamSet&) {
         RatMatrix m = RatMatrix::Zero(4, 4);
         m(0, 2) = 1;
         m(2, 0) = -1;
         m(1, 3) = 1;
         m(3, 1) = -1;
         return Object(make_constant_bivector(phase_chart(), m));
       }},
      {"J1", "non-canonical bracket with (F1, G1) at b = 0", Req::Zero, Req::Zero,
       [](const ParamSet& p) {
         auto [f, g] = fg_pair(1, p);
         return Object(omega_tilde(f, g, p));
       }},
      {"J2", "non-canonical bracket with (F2, G2) at b = 0", Req::Zero, Req::Zero,
       [](const ParamSet& p) {
         auto [f, g] = fg_pair(2, p);
         return Object(omega_tilde(f, g, p));
       }},
      {"Z0", "symmetry Z0 of Hamilton's equations", Req::Any, Req::Zero,
       [](const ParamSet& p) {
         return Object(make_field(phase_time_chart(),
                                  {-t, -(2 / a), Expr(Rational(3, 2)) * a * p2 - q2, p1, 2 * p2}, p));
       }},
      {"Z1", "symmetry Z1 in closed form", Req::Zero, Req::Zero,
       [](const ParamSet& p) {
         const Expr Em = exp(-(a * q1));
         return Object(make_field(phase_chart(),
                                  {p1 / a * (a * p2 - 2 * q2), pow(p1, 2) - pow(c, 2) * Em,
                                   half * pow(c, 2) * Em * (2 * q2 - a * p2), 2 / a * (pow(p1, 2) - pow(c, 2) * Em)},
                                  p));
       }},
      {"Zvec", "symmetry Z of the d = 0 system at b = 0", Req::Zero, Req::Zero,
       [](const ParamSet& p) { return Object(zvec(p)); }},
      {"Yvec", "master symmetry Y = Z + (x,y,z) at b = 0", Req::Zero, Req::Zero,
       [](const ParamSet& p) { return Object(zvec(p) + euler_field()); }},
      {"pi", "Lie-Poisson structure for d != 0", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         return Object(make_bivector(state_chart(),
                                     {{"x", "y", c / (a * d) * (a * x - 2 * b * y)},
                                      {"x", "z", b / (a * d) * (a * x + 2 * c * z)},
                                      {"y", "z", (a * x - b * y + c * z + d) / d}},
                                     p));
       }},
      {"H", "Hamiltonian H = dyz", Req::Any, Req::NonZero,
       [](const ParamSet& p) { return Object(fn(state_chart(), d * y * z, p)); }},
      {"C", "Casimir C = x(ax - 2by + 2cz + 2d) - (4bc/a) yz", Req::Any, Req::NonZero,
       [](const ParamSet& p) {
         return Object(fn(state_chart(), x * (a * x - 2 * b * y + 2 * c * z + 2 * d) - 4 * b * c / a * y * z, p));
       }},
      {"phi_s3", "polynomial realization map onto the d != 0 system", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         const Expr w = w_s3();
         return Object(make_map(phase_chart(), state_chart(),
                                {p1 / a + w / (2 * a * d) - d / a, c * q1 + w / (4 * b * d), b * q1 - w / (4 * c * d)},
                                p));
       }},
      {"Htilde_s3", "canonical Hamiltonian of the polynomial realization", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         return Object(fn(phase_chart(), b * c * d * pow(q1, 2) - pow(w_s3(), 2) / (16 * b * c * d), p));
       }},
      {"hamilton_s3", "Hamilton's equations of the polynomial realization", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         const Expr w = w_s3();
         return Object(make_field(phase_chart(),
                                  {p1 * w / (4 * b * c * d), -(a / (8 * b * c * d)) * w,
                                   -2 * b * c * d * q1 + b * c / d * w * q1, Expr(0)},
                                  p));
       }},
      {"newton_s2", "Newton's equations of the exponential realization", Req::NonZero, Req::Zero,
       [](const ParamSet& p) { return Object(newton_s2(p)); }},
      {"newton_s3", "Newton's equations of the polynomial realization", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) { return Object(newton_s3(p)); }},
      {"L_s2", "Lagrangian of the exponential realization", Req::NonZero, Req::Zero,
       [](const ParamSet& p) {
         return Object(fn(lagrangian_chart(),
                          a / 4 * pow(q1t, 2) + (c / b * q2t - a / (4 * pow(b, 2)) * pow(q2t, 2)) * exp(-(a * q1)),
                          p));
       }},
      {"L_s3", "Lagrangian of the polynomial realization", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         return Object(fn(lagrangian_chart(),
                          a / 4 * pow(q1t, 2) / q2t + 4 * b * c * d / pow(a, 2) * pow(q2t, 2) +
                              4 * pow(b, 2) * pow(c, 2) / a * q2t * pow(q1, 2) + b * c * d * pow(q1, 2),
                          p));
       }},
      {"sym_s2", "point symmetries (alpha a t + beta, 2 alpha, alpha a q2 + gamma)", Req::NonZero, Req::Zero,
       [](const ParamSet& p) {
         const Expr al = Expr::par("alpha"), be = Expr::par("beta"), ga = Expr::par("gamma");
         return Object(make_field(newton_base(), {al * a * t + be, 2 * al, al * a * q2 + ga}, p));
       }},
      {"sym_s3", "point symmetries (k1, 0, k2)", Req::NonZero, Req::NonZero,
       [](const ParamSet& p) {
         return Object(make_field(newton_base(), {Expr::par("k1"), Expr(0), Expr::par("k2")}, p));
       }},
      {"E", "basis E1, E2, E3 of g1", Req::Any, Req::Any,
       [](const ParamSet&) { return Object(MatrixBasis{{"E1", "E2", "E3"}, e_basis()}); }},
      {"Xbasis", "basis X1, X2, X3 of g2 for b != 0", Req::NonZero, Req::Any,
       [](const ParamSet& p) { return Object(MatrixBasis{{"X1", "X2", "X3"}, x_basis(p)}); }},
      {"Ybasis", "basis Y1, Y2, Y3 of g2 for b = 0", Req::Zero, Req::Any,
       [](const ParamSet& p) { return Object(MatrixBasis{{"Y1", "Y2", "Y3"}, y_basis(p)}); }},
      {"u", "Newton symmetry algebra basis u1, u2, u3", Req::NonZero, Req::Zero,
       [](const ParamSet& p) {
         return Object(FieldBasis{{"u1", "u2", "u3"},
                                  {make_field(newton_base(), {-t, -(2 / a), -q2}, p),
                                   make_field(newton_base(), {Expr(1), Expr(0), Expr(0)}, p),
                                   make_field(newton_base(), {Expr(0), Expr(0), Expr(1)}, p)}});
       }},
  };
  return recipes;
}

const Recipe& find_recipe(std::string_view key) {
  for (const Recipe& s : registry())
    if (key == s.key) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown catalog key '" + std::string(key) + "'");
}

void require(const ParamSet& p, const char* name, Req r, std::string_view key) {
  const bool zero = p.get(name).is_zero();
  if (r == Req::Zero && !zero)
    throw Error(ErrorCode::ParamConstraint, std::string(key) + " requires " + name + " = 0");
  if (r == Req::NonZero && zero)
    throw Error(ErrorCode::ParamConstraint, std::string(key) + " requires " + name + " != 0");
}

template <typename T>
T typed(std::string_view key, const ParamSet& params, const char* what) {
  Entry e = build(key, params);
  if (auto* v = std::get_if<T>(&e.object)) return std::move(*v);
  throw Error(ErrorCode::InvalidArgument, "catalog key '" + std::string(key) + "' is not a " + what);
}

}  // namespace

const std::vector<std::string>& keys() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> k;
    for (const Recipe& s : registry()) k.emplace_back(s.key);
    return k;
  }();
  return out;
}

bool has_key(std::string_view key) {
  return std::any_of(registry().begin(), registry().end(), [&](const Recipe& s) { return key == s.key; });
}

std::string anchor(std::string_view key) { return find_recipe(key).anchor; }

ParamSet effective_params(std::string_view key, const ParamSet& params) {
  const Recipe& s = find_recipe(key);
  ParamSet p = default_params();
  if (s.d == Req::NonZero) p.set("d", 1);
  if (s.b == Req::Zero) p.set("b", 0);
  return p.merged(params);
}

Entry build(std::string_view key, const ParamSet& params) {
  const Recipe& s = find_recipe(key);
  ParamSet p = effective_params(key, params);
  require(p, "a", Req::NonZero, key);
  require(p, "c", Req::NonZero, key);
  require(p, "b", s.b, key);
  require(p, "d", s.d, key);
  if (s.k1_nonzero) require(p, "k1", Req::NonZero, key);
  Object obj = s.make(p);
  return {s.key, s.anchor, std::move(p), std::move(obj)};
}

Function function(std::string_view key, const ParamSet& params) { return typed<Function>(key, params, "function"); }
VectorField field(std::string_view key, const ParamSet& params) { return typed<VectorField>(key, params, "vector field"); }
Bivector bivector(std::string_view key, const ParamSet& params) { return typed<Bivector>(key, params, "bivector"); }
SmoothMap map(std::string_view key, const ParamSet& params) { return typed<SmoothMap>(key, params, "map"); }
JetSystem system(std::string_view key, const ParamSet& params) { return typed<JetSystem>(key, params, "system"); }
MatrixBasis matrix_basis(std::string_view key, const ParamSet& params) {
  return typed<MatrixBasis>(key, params, "matrix basis");
}
FieldBasis field_basis(std::string_view key, const ParamSet& params) {
  return typed<FieldBasis>(key, params, "field basis");
}

VectorField scaling_symmetry(const Rational& alpha) {
  return make_field(state_time_chart(), {Expr(alpha) * t, x, y, z}, {});
}

Bivector omega_tilde(const ExpPoly& f, const ExpPoly& g, const ParamSet& params) {
  return omega_tilde_b(f, g, params);
}

std::pair<ExpPoly, ExpPoly> fg_pair(int which, const ParamSet& params) {
  auto [f, g] = fg_exprs(which);
  return {canonicalize(f, phase_chart(), params), canonicalize(g, phase_chart(), params)};
}

std::vector<ExpPoly> fg_relation_residuals(const ExpPoly& F, const ExpPoly& G, const ParamSet& params) {
  const ParamSet p = default_params().merged(params).with("b", 0);
  const Chart& ch = phase_chart();
  const auto ex = [&](const Expr& e) { return canonicalize(e, ch, p); };
  const std::size_t iq1 = 0, iq2 = 1, ip1 = 2, ip2 = 3;
  const Expr E = exp(a * q1), Em = exp(-(a * q1)), E2 = exp(2 * a * q1);
  // shorthands appearing in the three relations
  const ExpPoly s = ex(b * p2 * E - c);                             // b p2 e^{aq1} - c
  const ExpPoly m = ex(pow(c, 2) * Em - pow(b, 2) * pow(p2, 2) * E);  // c^2 e^{-aq1} - b^2 p2^2 e^{aq1}
  const ExpPoly P1 = ex(p1), twoa = ex(2 / a), twoba = ex(2 * b / a);

  std::vector<ExpPoly> out;
  out.push_back(-(twoa * P1 * F.diff(iq1)) + twoba * s * F.diff(iq2) + m * F.diff(ip1) + twoa * G -
                ex(4 * pow(b, 2) / pow(a, 2) * p1 * E));
  out.push_back(twoa * P1 * G.diff(iq1) - twoba * s * G.diff(iq2) - m * G.diff(ip1) -
                ex(a * (pow(b, 2) * pow(p2, 2) * E + pow(c, 2) * Em)) * F -
                ex(6 * pow(b, 4) / a * pow(p2, 2) * E2 - 8 * pow(b, 3) * c / a * p2 * E + 2 * pow(b, 2) * pow(c, 2) / a));
  out.push_back(-(twoba * s) * (F.diff(iq1) + G.diff(ip1)) + G * F.diff(iq2) - m * F.diff(ip2) - F * G.diff(iq2) -
                twoa * P1 * G.diff(ip2) + ex(2 * pow(b, 2) * p2 * E) * F -
                ex(4 * pow(b, 3) / pow(a, 2) * (c * E - b * p2 * E2)));
  return out;
}

std::vector<ExpPoly> fg_relation_residuals(int which, const ParamSet& params) {
  const ParamSet p = default_params().merged(params).with("b", 0);
  auto [f, g] = fg_pair(which, p);
  return fg_relation_residuals(f, g, p);
}

TransportReport zsym_transport_check(const ParamSet& params, const Rational& k) {
  ParamSet p = effective_params("Zvec", params).with("k", k);
  require(p, "b", Req::Zero, "zsym_transport_check");
  require(p, "d", Req::Zero, "zsym_transport_check");
  require(p, "a", Req::NonZero, "zsym_transport_check");
  require(p, "c", Req::NonZero, "zsym_transport_check");
  const VectorField zf = zvec(p), yf = zf + euler_field(), v = lv_field(p);
  const Bivector P1 = pi1(p), P2 = pi2(p);
  const ExpPoly H1 = h1(p), H2 = h2(p);
  TransportReport r{k,
                    lie_derivative(zf, P1) - P2,
                    apply(zf, H1) - H2,
                    apply(zf, H1) + H2,
                    lie_derivative(yf, P1) - (P2 - P1),
                    apply(yf, H1) - (Rational(2) * H1 - H2),
                    lie_bracket(yf, v),
                    {}};
  r.y_v_v = lie_bracket(r.y_v, v);
  return r;
}

}  // namespace hamforge::models
