#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamforge/detsys.hpp"
#include "hamforge/error.hpp"
#include "hamforge/integrate.hpp"
#include "hamforge/lvmodels.hpp"
#include "hamforge/suites.hpp"

namespace hamforge::cli {

using json = nlohmann::ordered_json;

namespace {

// Raised for bad flags or files; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> params;
  std::uint64_t seed = 42;
  std::string out;
  double tol = 0;
  double dt = 1e-3;
  double t_end = std::numeric_limits<double>::quiet_NaN();  // unset: per-command default
  std::string method = "rk4";
  std::string format;
  std::string config;
  std::string suite = "all";
  std::string system;
  std::string x0;
  std::string which;
  int degree = 2;
  int samples = 0;
  std::vector<std::string> invariants;
};

// Flags registered on a subcommand, so "given on the command line" can be asked later.
struct Flags {
  std::map<std::string, CLI::Option*> by_name;
  bool given(const std::string& name) const {
    auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const ParamSet& p) {
  json j = json::object();
  for (const auto& [k, v] : p.values()) j[k] = v.str();
  return j;
}

ParamSet parse_params(const std::vector<std::string>& items, ParamSet base) {
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + item + "'");
    base.set(item.substr(0, eq), Rational::parse(item.substr(eq + 1)));
  }
  validate_params(base);
  return base;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse x0 '" + text + "'");
    }
  }
  if (v.empty()) throw UsageError("x0 is empty");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string join(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Fills options from a JSON config wherever the flag was not given.
void apply_config(Options& o, const Flags& flags, ParamSet& params) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw UsageError("cannot read config '" + o.config + "'");
  json c;
  try {
    c = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!c.is_object()) throw UsageError("config must be a JSON object");
  try {
    auto take = [&](const char* key, auto& field) {
      if (c.contains(key) && !flags.given(key)) c.at(key).get_to(field);
    };
    take("seed", o.seed);
    take("out", o.out);
    take("tol", o.tol);
    take("dt", o.dt);
    take("t-end", o.t_end);
    take("t_end", o.t_end);
    take("method", o.method);
    take("format", o.format);
    take("suite", o.suite);
    take("system", o.system);
    take("degree", o.degree);
    take("samples", o.samples);
    take("invariant", o.invariants);
    if (c.contains("x0") && !flags.given("x0")) {
      if (c["x0"].is_array()) {
        std::string s;
        for (const auto& v : c["x0"]) s += (s.empty() ? "" : ",") + std::to_string(v.get<double>());
        o.x0 = s;
      } else {
        o.x0 = c["x0"].get<std::string>();
      }
    }
    if (c.contains("params")) {
      for (const auto& [k, v] : c["params"].items())
        params.set(k, v.is_string() ? Rational::parse(v.get<std::string>()) : Rational::parse(v.dump()));
    }
  } catch (const json::exception& e) {
    throw UsageError("bad config entry: " + std::string(e.what()));
  }
}

std::uint64_t seed_fallback() {
  if (const char* env = std::getenv("HAMFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("HAMFORGE_SEED is not an unsigned integer");
    }
  }
  return 42;
}

Stepping stepping_of(const Options& o) {
  Stepping s;
  s.method = parse_method(o.method);
  s.dt = o.dt;
  return s;
}

json base_report(const std::string& command, const json& config) {
  json r;
  r["schema"] = 1;
  r["command"] = command;
  r["config"] = config;
  return r;
}

json common_config(const Options& o, const ParamSet& params) {
  json c;
  c["params"] = to_json(params);
  c["seed"] = o.seed;
  return c;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

// --- check

int cmd_check(const Options& o, const ParamSet& params, std::ostream& out) {
  SuiteConfig cfg;
  cfg.params = params;
  cfg.seed = o.seed;
  if (o.tol > 0) cfg.tol = o.tol;
  cfg.stepping = stepping_of(o);
  if (!std::isnan(o.t_end)) cfg.t_end = o.t_end;
  const auto records = run_suite(o.suite, cfg);
  const SuiteSummary s = summarize(records);

  json config = common_config(o, params);
  config["suite"] = o.suite;
  config["tol"] = cfg.tol;
  config["dt"] = cfg.stepping.dt;
  config["t_end"] = cfg.t_end;
  config["method"] = to_string(cfg.stepping.method);
  json report = base_report("check", config);
  json list = json::array();
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["anchor"] = r.anchor;
    j["mode"] = to_string(r.mode);
    j["residual"] = number(r.residual);
    j["pass"] = r.pass;
    j["skipped"] = r.skipped;
    j["detail"] = r.detail;
    j["params"] = to_json(r.params);
    j["seed"] = r.seed;
    list.push_back(std::move(j));
  }
  report["records"] = std::move(list);
  report["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};

  const std::string format = o.format.empty() ? "json" : o.format;
  if (format == "csv") throw UsageError("check reports are json or text");
  if (format == "json" || !o.out.empty()) {
    Output dst(o.out, out);
    dst.stream() << report.dump(2) << '\n';
  }
  if (format == "text") {
    for (const auto& r : records)
      out << (r.skipped ? "skip" : r.pass ? "pass" : "FAIL") << "  " << r.id
          << (r.detail.empty() ? "" : "  (" + r.detail + ")") << '\n';
  }
  if (format == "text" || (!o.out.empty() && format == "json"))
    out << s.passed << "/" << s.total << " passed, " << s.failed << " failed, " << s.skipped << " skipped\n";
  return s.failed == 0 ? 0 : 1;
}

// --- simulate and drift

json drift_json(const DriftReport& d) {
  json list = json::array();
  for (const auto& i : d.invariants)
    list.push_back({{"name", i.name}, {"initial", number(i.initial)}, {"max_abs", number(i.max_abs)},
                    {"relative", number(i.relative)}});
  return {{"invariants", list}, {"worst_relative", number(d.worst_relative())}};
}

void drift_text(std::ostream& os, const DriftReport& d) {
  for (const auto& i : d.invariants)
    os << "drift " << i.name << ": initial " << fmt(i.initial) << ", max |change| " << fmt(i.max_abs)
       << ", relative " << fmt(i.relative) << '\n';
}

struct Run {
  Trajectory traj;
  DriftReport drift;
  json config;
};

Run simulate(const Options& o, const ParamSet& params) {
  const std::string system = o.system.empty() ? "lv_d0" : o.system;
  const Eigen::VectorXd x0 = parse_vector(o.x0.empty() ? "1,1,1" : o.x0);
  const double t_end = std::isnan(o.t_end) ? 10.0 : o.t_end;
  Run r;
  r.traj = integrate(system, params, x0, t_end, stepping_of(o));
  const auto names = o.invariants.empty() ? default_invariants(system) : o.invariants;
  r.drift = drift(r.traj, names);
  r.config = common_config(o, params);
  r.config["system"] = system;
  r.config["effective_params"] = to_json(models::effective_params(system == "V" ? "lv_d0" : system, params));
  r.config["x0"] = join(x0);
  r.config["t_end"] = t_end;
  r.config["dt"] = o.dt;
  r.config["method"] = o.method;
  r.config["invariants"] = names;
  return r;
}

int cmd_simulate(const Options& o, const ParamSet& params, std::ostream& out, std::ostream& err) {
  const Run r = simulate(o, params);
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format == "json") {
    if (!o.out.empty()) {
      Output dst(o.out, out);
      write_csv(dst.stream(), r.traj);
    }
    json report = base_report("simulate", r.config);
    report["steps"] = r.traj.size() - 1;
    report["final_time"] = r.traj.times.back();
    report["final_state"] = join(r.traj.states.back());
    report["drift"] = drift_json(r.drift);
    out << report.dump(2) << '\n';
    return 0;
  }
  if (format == "text" && o.out.empty()) {
    drift_text(out, r.drift);
    return 0;
  }
  Output dst(o.out, out);
  write_csv(dst.stream(), r.traj);
  drift_text(o.out.empty() ? err : out, r.drift);
  return 0;
}

int cmd_drift(const Options& o, const ParamSet& params, std::ostream& out) {
  const Run r = simulate(o, params);
  const double tol = o.tol > 0 ? o.tol : 1e-6;
  const bool pass = r.drift.worst_relative() <= tol;
  if (o.format == "json") {
    json config = r.config;
    config["tol"] = tol;
    json report = base_report("drift", config);
    report["drift"] = drift_json(r.drift);
    report["pass"] = pass;
    Output dst(o.out, out);
    dst.stream() << report.dump(2) << '\n';
  } else {
    drift_text(out, r.drift);
    out << "worst relative drift " << fmt(r.drift.worst_relative()) << (pass ? " <= " : " > ") << "tol "
        << fmt(tol) << '\n';
  }
  return pass ? 0 : 1;
}

// --- realize

int cmd_realize(const Options& o, ParamSet params, std::ostream& out) {
  const std::string which = o.which;
  if (which != "s2" && which != "s3") throw UsageError("realize expects s2 or s3");
  if (which == "s2" && !params.has("b")) params.set("b", 0);
  const Eigen::VectorXd x0 = parse_vector(!o.x0.empty() ? o.x0 : which == "s2" ? "0,0,1,1" : "0,0,0.5,1");
  const double t_end = std::isnan(o.t_end) ? 5.0 : o.t_end;
  const double tol = o.tol > 0 ? o.tol : 1e-5;
  const RealizationComparison c = realization_compare(which, params, x0, t_end, stepping_of(o));
  const bool pass = c.max_deviation <= tol;
  const auto& names = c.target.chart.names();
  if (o.format == "json") {
    json config = common_config(o, params);
    config["which"] = which;
    config["effective_params"] = to_json(models::effective_params("phi_" + which, params));
    config["x0"] = join(x0);
    config["t_end"] = t_end;
    config["dt"] = o.dt;
    config["method"] = o.method;
    config["tol"] = tol;
    json report = base_report("realize", config);
    report["max_deviation"] = number(c.max_deviation);
    json per = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) per[names[i]] = number(c.per_coordinate(static_cast<Eigen::Index>(i)));
    report["per_coordinate"] = per;
    report["pass"] = pass;
    Output dst(o.out, out);
    dst.stream() << report.dump(2) << '\n';
  } else {
    out << which << ": max deviation " << fmt(c.max_deviation) << " (tol " << fmt(tol) << ")\n";
    for (std::size_t i = 0; i < names.size(); ++i)
      out << "  " << names[i] << ": " << fmt(c.per_coordinate(static_cast<Eigen::Index>(i))) << '\n';
  }
  return pass ? 0 : 1;
}

// --- find-symmetries

std::string render(const VectorField& v, const Chart& base) {
  static const std::vector<std::string> partial{"∂t", "∂q1", "∂q2"};
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const ExpPoly& c = v[i];
    if (c.is_zero()) continue;
    const std::string d = i < partial.size() ? partial[i] : "∂" + base.name(i);
    const auto k = c.as_constant();
    std::string term;
    if (k && *k == 1)
      term = d;
    else if (k && *k == -1)
      term = "-" + d;
    else if (c.term_count() == 1)
      term = c.str(base) + " " + d;
    else
      term = "(" + c.str(base) + ") " + d;
    if (!s.empty()) s += term.front() == '-' ? " - " + term.substr(1) : " + " + term;
    else s = term;
  }
  return s.empty() ? "0" : s;
}

int cmd_find_symmetries(const Options& o, const ParamSet& params, std::ostream& out) {
  const std::string system = o.system.empty() ? "newton_s2" : o.system;
  if (system != "newton_s2" && system != "newton_s3") throw UsageError("find-symmetries expects newton_s2 or newton_s3");
  if (o.degree < 0) throw UsageError("degree must be >= 0");
  const JetSystem sys = models::system(system, params);
  const std::optional<int> samples = o.samples > 0 ? std::optional<int>(o.samples) : std::nullopt;
  const SymmetrySearch s = find_symmetries(sys, o.degree, samples, o.seed);
  const Chart& base = sys.base;
  if (o.format == "json" || !o.out.empty()) {
    json config = common_config(o, params);
    config["system"] = system;
    config["degree"] = o.degree;
    config["samples"] = s.samples;
    json report = base_report("find-symmetries", config);
    report["unknowns"] = s.unknowns;
    report["dimension"] = s.basis.dimension();
    report["second_dimension"] = s.second_dimension;
    report["labels"] = s.basis.labels;
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.basis.coefficients.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < s.basis.coefficients.cols(); ++j) row.push_back(s.basis.coefficients(i, j).str());
      rows.push_back(std::move(row));
    }
    report["coefficients"] = std::move(rows);
    report["pivots"] = s.basis.pivots;
    report["smallest_kept"] = number(s.basis.smallest_kept);
    report["largest_dropped"] = number(s.basis.largest_dropped);
    json gens = json::array();
    for (const auto& f : s.basis.fields) {
      json g;
      g["field"] = render(f, base);
      g["xi"] = f[0].str(base);
      for (std::size_t i = 1; i < f.dim(); ++i) g["eta" + std::to_string(i)] = f[i].str(base);
      gens.push_back(std::move(g));
    }
    report["generators"] = std::move(gens);
    Output dst(o.out, out);
    dst.stream() << report.dump(2) << '\n';
  }
  if (o.format != "json") {
    out << system << ": " << s.basis.dimension() << " generators (degree " << o.degree << ", " << s.unknowns
        << " unknowns, " << s.samples << " samples, seed " << o.seed << ")\n";
    for (std::size_t i = 0; i < s.basis.dimension(); ++i)
      out << "  v" << i + 1 << " = " << render(s.basis.fields[i], base) << '\n';
  }
  return 0;
}

void add_common(CLI::App* sub, Options& o, Flags& flags) {
  flags.by_name["param"] = sub->add_option("--param", o.params, "parameter override name=value (p/q or decimal)");
  flags.by_name["seed"] = sub->add_option("--seed", o.seed, "random seed (default $HAMFORGE_SEED or 42)");
  flags.by_name["out"] = sub->add_option("--out", o.out, "output path");
  flags.by_name["tol"] = sub->add_option("--tol", o.tol, "tolerance");
  flags.by_name["dt"] = sub->add_option("--dt", o.dt, "step size");
  flags.by_name["t-end"] = sub->add_option("--t-end", o.t_end, "final time");
  flags.by_name["method"] = sub->add_option("--method", o.method, "rk4 | adaptive");
  flags.by_name["format"] =
      sub->add_option("--format", o.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  flags.by_name["config"] = sub->add_option("--config", o.config, "JSON config mirroring the flags");
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::RankDeficientSampling:
    case ErrorCode::UnverifiedBasis:
      return 1;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParamConstraint:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnboundParameter:
    case ErrorCode::ChartMismatch:
    case ErrorCode::UnknownVariable:
    case ErrorCode::ConstraintViolation:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification and simulation of a Lotka-Volterra type bi-Hamiltonian system"};
  app.name("hamforge");
  app.require_subcommand(1);
  Options o;
  std::map<std::string, Flags> flags;

  auto* check = app.add_subcommand("check", "run a verification suite, writes a JSON report");
  add_common(check, o, flags["check"]);
  flags["check"].by_name["suite"] =
      check->add_option("--suite", o.suite, "structure | symmetries | realization | liegroups | newton | all");

  auto* sim = app.add_subcommand("simulate", "integrate a system, write CSV and a drift summary");
  auto* drift_cmd = app.add_subcommand("drift", "integrate a system and check invariant drift against --tol");
  for (auto* sub : {sim, drift_cmd}) {
    Flags& f = flags[sub->get_name()];
    add_common(sub, o, f);
    f.by_name["system"] = sub->add_option("--system", o.system, "lv | lv_d0 | V | hamilton_s2 | hamilton_s3");
    f.by_name["x0"] = sub->add_option("--x0", o.x0, "initial state, comma separated");
    f.by_name["invariant"] = sub->add_option("--invariant", o.invariants, "monitored function (repeatable)");
  }

  auto* realize = app.add_subcommand("realize", "compare the canonical flow mapped by a realization with the system flow");
  add_common(realize, o, flags["realize"]);
  realize->add_option("which", o.which, "s2 | s3")->required();
  flags["realize"].by_name["x0"] = realize->add_option("--x0", o.x0, "initial (q1,q2,p1,p2)");

  auto* find = app.add_subcommand("find-symmetries", "solve the determining equations over a polynomial ansatz");
  add_common(find, o, flags["find-symmetries"]);
  flags["find-symmetries"].by_name["system"] = find->add_option("system", o.system, "newton_s2 | newton_s3");
  flags["find-symmetries"].by_name["degree"] = find->add_option("--degree", o.degree, "ansatz degree (default 2)");
  flags["find-symmetries"].by_name["samples"] = find->add_option("--samples", o.samples, "sample points");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hamforge: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Flags& f = flags[sub->get_name()];
  try {
    if (!f.given("seed")) o.seed = seed_fallback();
    ParamSet params;
    apply_config(o, f, params);
    params = parse_params(o.params, params);
    parse_method(o.method);
    if (o.dt <= 0 || !std::isfinite(o.dt)) throw UsageError("--dt must be positive");
    if (o.t_end < 0 || std::isinf(o.t_end)) throw UsageError("--t-end must be non-negative");

    const std::string name = sub->get_name();
    if (name == "check") return cmd_check(o, params, out);
    if (name == "simulate") return cmd_simulate(o, params, out, err);
    if (name == "drift") return cmd_drift(o, params, out);
    if (name == "realize") return cmd_realize(o, params, out);
    return cmd_find_symmetries(o, params, out);
  } catch (const UsageError& e) {
    err << "hamforge: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "hamforge: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "hamforge: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace hamforge::cli
