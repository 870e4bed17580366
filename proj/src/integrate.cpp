#include "hamforge/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hamforge/error.hpp"
#include "hamforge/lvmodels.hpp"
#include "hamforge/maps.hpp"

namespace hamforge {

namespace m = models;

std::string to_string(Method method) { return method == Method::RK4 ? "rk4" : "adaptive"; }

Method parse_method(std::string_view s) {
  if (s == "rk4") return Method::RK4;
  if (s == "adaptive") return Method::Adaptive;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "' (rk4|adaptive)");
}

NumericField::NumericField(const VectorField& f) : chart_(f.chart) {
  for (std::size_t i = 0; i < f.dim(); ++i) components_.push_back(f[i]);
}

Eigen::VectorXd NumericField::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(components_.size()));
  const std::span<const double> pt(x.data(), static_cast<std::size_t>(x.size()));
  for (std::size_t i = 0; i < components_.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = components_[i].is_zero() ? 0.0 : components_[i].eval(pt);
  return out;
}

namespace {

void guard(const Eigen::VectorXd& x, double t) {
  if (!x.allFinite() || x.norm() > kDivergenceNorm)
    throw Error(ErrorCode::Divergence, "state norm exceeded 1e12 near t = " + std::to_string(t));
}

void push(Trajectory& tr, double t, const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
  tr.times.push_back(t);
  tr.states.push_back(x);
  tr.slopes.push_back(f);
}

void run_rk4(Trajectory& tr, const NumericField& f, double t_end, double dt) {
  Eigen::VectorXd x = tr.states.front();
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long n = 0; n < steps; ++n) {
    const double t = n * dt;
    const double h = std::min(dt, t_end - t);
    const Eigen::VectorXd k1 = tr.slopes.back();
    const Eigen::VectorXd k2 = f(x + (h / 2) * k1);
    const Eigen::VectorXd k3 = f(x + (h / 2) * k2);
    const Eigen::VectorXd k4 = f(x + h * k3);
    x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    const double tn = n + 1 == steps ? t_end : (n + 1) * dt;
    guard(x, tn);
    push(tr, tn, x, f(x));
  }
}

// Dormand-Prince 5(4) tableau; the nodes are not needed for autonomous fields
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, the embedded fourth-order weights subtracted
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

void run_dopri(Trajectory& tr, const NumericField& f, double t_end, const Stepping& s) {
  Eigen::VectorXd x = tr.states.front(), k1 = tr.slopes.front();
  double t = 0, h = std::min(s.dt, t_end);
  while (t < t_end) {
    const bool last = h >= t_end - t;
    if (last) h = t_end - t;
    if (h < kMinStep) throw Error(ErrorCode::StepUnderflow, "adaptive step fell below 1e-14 at t = " + std::to_string(t));
    const Eigen::VectorXd k2 = f(x + h * a21 * k1);
    const Eigen::VectorXd k3 = f(x + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = f(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = f(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 = f(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const bool finite = xn.allFinite();
    const Eigen::VectorXd k7 = finite ? f(xn) : Eigen::VectorXd(k1);
    const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      en = std::max(en, std::abs(err(i)) / (s.atol + s.rtol * std::max(std::abs(x(i)), std::abs(xn(i)))));
    if (!finite || !std::isfinite(en)) en = 1e10;
    if (en <= 1) {
      t = last ? t_end : t + h;
      x = xn;
      k1 = k7;
      guard(x, t);
      push(tr, t, x, k1);
    }
    const double fac = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= fac;
  }
}

}  // namespace

Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0, double t_end, const Stepping& stepping) {
  if (static_cast<std::size_t>(x0.size()) != field.dim())
    throw Error(ErrorCode::DimensionMismatch, "initial state has the wrong dimension");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidArgument, "t_end must be >= 0");
  if (!(stepping.dt > 0)) throw Error(ErrorCode::InvalidArgument, "step size must be > 0");
  if (stepping.method == Method::Adaptive && !(stepping.rtol > 0 && stepping.atol > 0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
  const NumericField f(field);
  Trajectory tr;
  tr.chart = field.chart;
  tr.stepping = stepping;
  guard(x0, 0);
  push(tr, 0, x0, f(x0));
  if (t_end > 0) {
    if (stepping.method == Method::RK4)
      run_rk4(tr, f, t_end, stepping.dt);
    else
      run_dopri(tr, f, t_end, stepping);
  }
  return tr;
}

std::vector<std::string> integrable_systems() { return {"lv", "lv_d0", "V", "hamilton_s2", "hamilton_s3"}; }

Trajectory integrate(const std::string& key, const ParamSet& params, const Eigen::VectorXd& x0, double t_end,
                     const Stepping& stepping) {
  const auto systems = integrable_systems();
  if (std::find(systems.begin(), systems.end(), key) == systems.end())
    throw Error(ErrorCode::InvalidArgument, "'" + key + "' is not an integrable system");
  Trajectory tr = integrate(m::field(key, params), x0, t_end, stepping);
  tr.system = key;
  tr.params = m::effective_params(key, params);
  return tr;
}

Eigen::VectorXd dense_output(const Trajectory& tr, double t) {
  if (tr.times.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  if (t < tr.times.front() || t > tr.times.back())
    throw Error(ErrorCode::InvalidArgument, "time outside the trajectory");
  const auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t);
  const auto i1 = static_cast<std::size_t>(it - tr.times.begin());
  if (tr.times[i1] == t) return tr.states[i1];
  const std::size_t i0 = i1 - 1;
  const double h = tr.times[i1] - tr.times[i0], s = (t - tr.times[i0]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s), h01 = s * s * (3 - 2 * s),
               h11 = s * s * (s - 1);
  return h00 * tr.states[i0] + h10 * h * tr.slopes[i0] + h01 * tr.states[i1] + h11 * h * tr.slopes[i1];
}

double DriftReport::worst_relative() const {
  double w = 0;
  for (const auto& d : invariants) w = std::max(w, d.relative);
  return w;
}

DriftReport drift(const Trajectory& traj, std::span<const Invariant> invariants) {
  DriftReport r;
  for (const Invariant& inv : invariants) {
    if (!(inv.chart == traj.chart))
      throw Error(ErrorCode::ChartMismatch, "invariant '" + inv.name + "' is not over the trajectory chart");
    InvariantDrift d;
    d.name = inv.name;
    const auto at = [&](const Eigen::VectorXd& x) {
      return inv.value.eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    };
    d.initial = traj.states.empty() ? 0.0 : at(traj.states.front());
    for (const auto& x : traj.states) d.max_abs = std::max(d.max_abs, std::abs(at(x) - d.initial));
    d.relative = d.initial != 0 ? d.max_abs / std::abs(d.initial) : d.max_abs;
    r.invariants.push_back(d);
  }
  return r;
}

DriftReport drift(const Trajectory& traj, const std::vector<std::string>& names) {
  std::vector<Invariant> invs;
  for (const std::string& n : names) {
    if (auto i = traj.chart.find(n)) {
      invs.push_back({n, traj.chart, ExpPoly::variable(*i)});
      continue;
    }
    const m::Function fn = m::function(n, traj.params);
    invs.push_back({n, fn.chart, fn.value});
  }
  return drift(traj, std::span<const Invariant>(invs));
}

std::vector<std::string> default_invariants(const std::string& system) {
  if (system == "lv") return {"H", "C"};
  if (system == "lv_d0" || system == "V") return {"H1", "H2"};
  if (system == "hamilton_s2") return {"Htilde_s2", "p2"};
  if (system == "hamilton_s3") return {"Htilde_s3", "p2"};
  throw Error(ErrorCode::InvalidArgument, "'" + system + "' is not an integrable system");
}

RealizationComparison realization_compare(const std::string& which, const ParamSet& user_params,
                                          const Eigen::VectorXd& x0, double t_end, const Stepping& stepping) {
  if (which != "s2" && which != "s3") throw Error(ErrorCode::InvalidArgument, "realization must be s2 or s3");
  const std::string canon = "hamilton_" + which, target = which == "s2" ? "V" : "lv", phi_key = "phi_" + which;
  // one parameter set for both sides; object defaults differ (d for s3)
  const ParamSet params = m::effective_params(phi_key, user_params);
  RealizationComparison out;
  out.which = which;
  out.canonical = integrate(canon, params, x0, t_end, stepping);
  const SmoothMap phi = m::map(phi_key, params);
  out.target = integrate(target, params, evaluate(phi, x0), t_end, stepping);
  out.per_coordinate = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(phi.target.size()));
  for (std::size_t i = 0; i < out.canonical.size(); ++i) {
    const Eigen::VectorXd mapped = evaluate(phi, out.canonical.states[i]);
    const Eigen::VectorXd other = dense_output(out.target, out.canonical.times[i]);
    out.per_coordinate = out.per_coordinate.cwiseMax((mapped - other).cwiseAbs());
  }
  out.max_deviation = out.per_coordinate.size() ? out.per_coordinate.maxCoeff() : 0.0;
  return out;
}

ConvergenceResult convergence_order(const VectorField& field, const Eigen::VectorXd& x0, double t_end,
                                    const std::vector<double>& dts) {
  if (dts.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three step sizes");
  for (std::size_t i = 1; i < dts.size(); ++i)
    if (std::abs(dts[i] - dts[i - 1] / 2) > 1e-12 * dts[i - 1])
      throw Error(ErrorCode::InvalidArgument, "each step size must be half the previous");
  ConvergenceResult r;
  r.dts = dts;
  std::vector<Eigen::VectorXd> ends;
  for (double dt : dts) ends.push_back(integrate(field, x0, t_end, {Method::RK4, dt}).states.back());
  for (std::size_t i = 1; i < ends.size(); ++i) r.differences.push_back((ends[i - 1] - ends[i]).norm());
  for (std::size_t i = 1; i < r.differences.size(); ++i)
    r.orders.push_back(std::log2(r.differences[i - 1] / r.differences[i]));
  return r;
}

ConvergenceResult convergence_order(const std::string& key, const ParamSet& params, const Eigen::VectorXd& x0,
                                    double t_end, const std::vector<double>& dts) {
  return convergence_order(m::field(key, params), x0, t_end, dts);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (const auto& n : traj.chart.names()) os << "," << n;
  os << "\n";
  char buf[40];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
    os << buf;
    for (Eigen::Index j = 0; j < traj.states[i].size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.states[i](j));
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace hamforge
