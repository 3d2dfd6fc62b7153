#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "courant/scenario.hpp"

namespace courant {

enum class CheckStatus { pass, fail, inconclusive };
const char* status_name(CheckStatus s);

struct CheckInfo {
  std::string id;
  double default_tolerance;
  /// nullopt: pass on tolerance alone.
  std::optional<double> default_order;
  /// Evaluated on every ladder N (false: once, reported with N = 0).
  bool laddered;
  /// The residual is a lower bound to keep above the tolerance, and must
  /// not decrease along the ladder.
  bool lower_bound;
  /// Scenario fields the check needs ("B", "pi").
  std::vector<std::string> needs;
  std::vector<std::string> option_keys;
  std::string summary;
};

const std::vector<CheckInfo>& available_checks();
const CheckInfo* find_check(const std::string& id);
/// Option values and option-dependent field requirements; throws Error(parse).
void validate_check(const Scenario& sc, const CheckSpec& spec);

struct CheckRecord {
  std::string check;
  int N = 0;
  double residual = 0.0;
  std::optional<double> fitted_order;
  CheckStatus status = CheckStatus::pass;
  /// Secondary quantities (e.g. isotropy and coisotropy separately).
  std::map<std::string, double> detail;
};

struct CheckResult {
  std::string check;
  std::string id;
  bool exploratory = false;
  double tolerance = 0.0;
  std::optional<double> expected_order;
  CheckStatus status = CheckStatus::pass;
  std::string note;
  std::vector<CheckRecord> rows;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckResult> results;  // ordered by check name
  int exit_code() const;
  std::string json() const;
  std::string csv() const;
};

/// Residuals at or below this count as exact; order fitting skips them.
inline constexpr double kExactFloor = 1e-11;

/// Fitted order from successive residuals; the check passes when the last
/// residual meets the tolerance and every fitted order is at least
/// expected - 0.5.
Report run_scenario(const Scenario& sc, int jobs = 1);

std::string library_version();

}  // namespace courant
