#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hamforge/field.hpp"

namespace hamforge {

inline constexpr double kDivergenceNorm = 1e12;
inline constexpr double kMinStep = 1e-14;

enum class Method { RK4, Adaptive };
std::string to_string(Method m);
/// "rk4" or "adaptive"; throws InvalidArgument otherwise.
Method parse_method(std::string_view s);

struct Stepping {
  Method method = Method::RK4;
  double dt = 1e-3;  // fixed step, or initial step for the adaptive pair
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct Trajectory {
  std::string system;
  Chart chart;
  ParamSet params;
  Stepping stepping;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  /// f(states[i]), kept for the Hermite dense output
  std::vector<Eigen::VectorXd> slopes;

  std::size_t size() const { return times.size(); }
};

/// Double-precision right-hand side of an autonomous field.
class NumericField {
 public:
  explicit NumericField(const VectorField& f);
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  std::size_t dim() const { return components_.size(); }
  const Chart& chart() const { return chart_; }

 private:
  Chart chart_;
  std::vector<ExpPoly> components_;
};

/// Fixed-step classical RK4 or adaptive Dormand-Prince 5(4). Throws
/// Divergence when the state norm exceeds 1e12 (or turns non-finite),
/// StepUnderflow when the adaptive step drops below 1e-14, InvalidArgument
/// for a bad step or tolerance, DimensionMismatch for x0.
Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0, double t_end, const Stepping& stepping);

/// Systems integrable by key: lv, lv_d0, V, hamilton_s2, hamilton_s3.
std::vector<std::string> integrable_systems();
Trajectory integrate(const std::string& key, const ParamSet& params, const Eigen::VectorXd& x0, double t_end,
                     const Stepping& stepping);

/// Cubic Hermite interpolation between accepted steps.
Eigen::VectorXd dense_output(const Trajectory& traj, double t);

struct InvariantDrift {
  std::string name;
  double initial = 0;
  double max_abs = 0;
  double relative = 0;  // max_abs / |initial|, or max_abs when initial is 0
};

struct DriftReport {
  std::vector<InvariantDrift> invariants;
  double worst_relative() const;
};

/// Monitored quantity over the trajectory chart.
struct Invariant {
  std::string name;
  Chart chart;
  ExpPoly value;
};

/// Throws ChartMismatch when an invariant lives on another chart.
DriftReport drift(const Trajectory& traj, std::span<const Invariant> invariants);
/// Names are catalog function keys or coordinate names of the chart.
DriftReport drift(const Trajectory& traj, const std::vector<std::string>& names);

/// Invariants monitored by default for a system key.
std::vector<std::string> default_invariants(const std::string& system);

struct RealizationComparison {
  std::string which;
  double max_deviation = 0;
  Eigen::VectorXd per_coordinate;
  Trajectory canonical;
  Trajectory target;
};

/// Integrates the canonical system from x0 (q1, q2, p1, p2), maps it by the
/// realization and compares with the target system started at phi(x0),
/// read on the canonical time grid. which: "s2" or "s3".
RealizationComparison realization_compare(const std::string& which, const ParamSet& params,
                                          const Eigen::VectorXd& x0, double t_end, const Stepping& stepping);

struct ConvergenceResult {
  std::vector<double> dts;
  /// |x_h - x_{h/2}| for successive pairs
  std::vector<double> differences;
  /// log2 of successive difference ratios; the last is the reported order
  std::vector<double> orders;
  double order() const { return orders.back(); }
};

/// Richardson order estimate from the end states. Requires at least three
/// steps, each half the previous (InvalidArgument).
ConvergenceResult convergence_order(const VectorField& field, const Eigen::VectorXd& x0, double t_end,
                                    const std::vector<double>& dts);
ConvergenceResult convergence_order(const std::string& key, const ParamSet& params, const Eigen::VectorXd& x0,
                                    double t_end, const std::vector<double>& dts);

/// Header t,<vars>; one row per accepted step, 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace hamforge
