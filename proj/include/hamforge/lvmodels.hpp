#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hamforge/field.hpp"
#include "hamforge/liealg.hpp"
#include "hamforge/maps.hpp"
#include "hamforge/poisson.hpp"

namespace hamforge::models {

// Charts shared by every catalog object.
const Chart& state_chart();      // x, y, z
const Chart& state_time_chart(); // t, x, y, z
const Chart& phase_chart();      // q1, q2, p1, p2
const Chart& phase_time_chart(); // t, q1, q2, p1, p2
const Chart& newton_base();      // t, q1, q2
/// newton_base order-1 jet: t, q1, q2, q1_t, q2_t. Lagrangians live here.
const Chart& lagrangian_chart();

struct Function {
  Chart chart;
  ExpPoly value;
};

struct MatrixBasis {
  std::vector<std::string> names;
  std::vector<RatMatrix> elements;
};

struct FieldBasis {
  std::vector<std::string> names;
  std::vector<VectorField> elements;
};

using Object = std::variant<Function, VectorField, Bivector, SmoothMap, JetSystem, MatrixBasis, FieldBasis>;

struct Entry {
  std::string key;
  std::string anchor;  // which identity or construction the object stands for
  ParamSet params;     // effective parameters after defaults
  Object object;
};

/// a = b = c = 1, d = 0, k = 0, k1 = 1, k2 = 0, alpha = beta = gamma = 1.
ParamSet default_params();

/// Stable catalog keys, in registry order.
const std::vector<std::string>& keys();
bool has_key(std::string_view key);
std::string anchor(std::string_view key);

/// Builds a catalog object. Object-specific defaults (d = 1 for the d != 0
/// objects, b = 0 for the b = 0 objects) apply under params. Throws
/// ParamConstraint when the object's parameter constraints fail and
/// InvalidArgument for unknown keys.
Entry build(std::string_view key, const ParamSet& params = {});

// Typed accessors; same defaults and constraints as build().
Function function(std::string_view key, const ParamSet& params = {});
VectorField field(std::string_view key, const ParamSet& params = {});
Bivector bivector(std::string_view key, const ParamSet& params = {});
SmoothMap map(std::string_view key, const ParamSet& params = {});
JetSystem system(std::string_view key, const ParamSet& params = {});
MatrixBasis matrix_basis(std::string_view key, const ParamSet& params = {});
FieldBasis field_basis(std::string_view key, const ParamSet& params = {});

/// Effective parameters for key: defaults, object defaults, then params.
ParamSet effective_params(std::string_view key, const ParamSet& params);

/// alpha t d/dt + x d/dx + y d/dy + z d/dz over (t, x, y, z).
VectorField scaling_symmetry(const Rational& alpha);

/// Non-canonical bracket with {q1,q2} = F and {p1,q2} = G over the phase chart.
Bivector omega_tilde(const ExpPoly& f, const ExpPoly& g, const ParamSet& params);

/// Residuals (lhs - rhs) of the three relations constraining F and G,
/// with b = 0 substituted.
std::vector<ExpPoly> fg_relation_residuals(const ExpPoly& f, const ExpPoly& g, const ParamSet& params);
/// which = 1 or 2 selects the closed-form (F1, G1) or (F2, G2).
std::vector<ExpPoly> fg_relation_residuals(int which, const ParamSet& params);
std::pair<ExpPoly, ExpPoly> fg_pair(int which, const ParamSet& params);

struct TransportReport {
  Rational k;
  Bivector z_pi1_minus_pi2;   // L_Z pi1 - pi2
  ExpPoly z_h1_minus_h2;      // Z(H1) - H2
  ExpPoly z_h1_plus_h2;       // Z(H1) + H2
  Bivector y_pi1_minus;       // L_Y pi1 - (pi2 - pi1)
  ExpPoly y_h1_minus;         // Y(H1) - (2 H1 - H2)
  VectorField y_v;            // [Y, V]
  VectorField y_v_v;          // [[Y, V], V]
  bool master() const { return !is_zero(y_v) && is_zero(y_v_v); }
};

/// Requires b = 0 and d = 0 (ParamConstraint otherwise).
TransportReport zsym_transport_check(const ParamSet& params, const Rational& k);

}  // namespace hamforge::models
