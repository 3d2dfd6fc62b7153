#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "courant/field.hpp"

namespace courant {

struct CheckSpec {
  std::string id;
  /// Name used in reports; defaults to id and must be unique in a scenario.
  std::string label;
  std::optional<double> tolerance;
  /// Present in the file: value or explicit null (tolerance only).
  std::optional<std::optional<double>> expected_order;
  bool exploratory = false;
  /// Check-specific options as a JSON object text.
  std::string options = "{}";
};

struct Scenario {
  std::string name;
  int dimension = 0;
  std::uint64_t seed = 1;
  std::vector<int> ladder;
  std::optional<SmoothField> B, pi, H;
  std::map<std::string, double> tolerances;
  std::vector<CheckSpec> checks;
};

/// Parses the JSON scenario format; throws Error(parse) with a message that
/// names the offending key.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace courant
