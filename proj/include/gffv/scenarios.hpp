#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gffv/config.hpp"

namespace gffv {

using ScenarioParams = std::map<std::string, double>;

struct ScenarioParam {
  std::string name;
  double value;
  std::string help;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::vector<ScenarioParam> params;
  /// Resolution parameter doubled at each convergence level.
  std::string refine_key;

  bool has_param(const std::string& key) const;
  double default_value(const std::string& key) const;
};

const std::vector<ScenarioInfo>& scenario_catalog();

/// Throws ConfigError for unknown names.
const ScenarioInfo& find_scenario(const std::string& name);

/// Defaults merged with overrides; unknown parameter names are rejected.
ScenarioParams resolve_params(const std::string& name, const ScenarioParams& overrides);

SimConfig build_scenario(const std::string& name, const ScenarioParams& overrides = {});

/// Exact steady density (x, y) for presets that have one.
std::optional<std::function<double(double, double)>> closed_form_reference(const std::string& name,
                                                                           const ScenarioParams& overrides = {});

}  // namespace gffv
