#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamforge/chart.hpp"
#include "hamforge/integrate.hpp"

namespace hamforge {

enum class CheckMode { Exact, Sampled };
std::string to_string(CheckMode m);

struct CheckRecord {
  std::string id;
  std::string anchor;
  CheckMode mode = CheckMode::Exact;
  /// 0 for an exact pass; otherwise the largest sampled magnitude
  double residual = 0;
  bool pass = false;
  /// parameter choice excludes this check (e.g. b = 0 asked for a b != 0 object)
  bool skipped = false;
  /// canonical form of a failing residual, or a measured value
  std::string detail;
  ParamSet params;
  std::uint64_t seed = 0;
};

struct SuiteConfig {
  /// explicit user overrides; object defaults fill the rest per check
  ParamSet params;
  std::uint64_t seed = 42;
  /// sampled-mode tolerance
  double tol = 1e-9;
  /// numeric trajectory checks
  Stepping stepping;
  double t_end = 5;
  double trajectory_tol = 1e-5;
};

struct SuiteSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

/// structure, symmetries, realization, liegroups, newton, all
const std::vector<std::string>& suite_names();

/// Records sorted by id. Throws InvalidArgument for an unknown suite and
/// ParamConstraint when a or c is zero or a parameter name is unknown.
std::vector<CheckRecord> run_suite(const std::string& suite, const SuiteConfig& config);

SuiteSummary summarize(const std::vector<CheckRecord>& records);

/// Parameter names the catalog understands.
const std::vector<std::string>& parameter_names();
/// Rejects unknown names and a = 0 or c = 0 (ParamConstraint).
void validate_params(const ParamSet& params);

}  // namespace hamforge
