#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gffv/diagnostics.hpp"
#include "gffv/model.hpp"
#include "gffv/nonlocal.hpp"
#include "gffv/reconstruct.hpp"
#include "gffv/timestep.hpp"

namespace gffv {

struct GridConfig {
  int dim = 1;
  std::array<double, 2> x{-1.0, 1.0};
  std::array<double, 2> y{-1.0, 1.0};
  int nx = 100;
  int ny = 100;
};

/// weight * N(center, variance I); integrates to `weight` over the plane.
struct GaussianBump {
  double weight = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  double variance = 1.0;
};

struct BoxData {
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};
  double value = 1.0;
};

struct InitialDataConfig {
  std::vector<GaussianBump> gaussians;
  std::vector<BoxData> boxes;
  /// When set, the projected cell averages are rescaled to this mass.
  std::optional<double> mass;
};

enum class SnapshotFormat { Csv, CsvAndBinary };

struct SimConfig {
  std::string name;  // informational label
  GridConfig grid;
  ModelSpec model;
  /// Adds epsilon_scale * sum_a h_a^2 to model.internal.epsilon.
  double epsilon_scale = 0.0;
  std::optional<QuadratureRule> quadrature;  // empty: default for the kernel
  ConvolutionPath convolution = ConvolutionPath::Auto;
  LimiterParams limiter;
  Integrator integrator = Integrator::SspRk3;
  StepControl step;
  DissipationMin dissipation_min = DissipationMin::PerInterface;
  double t_end = 1.0;
  double snapshot_interval = 0.0;  // 0: initial and final snapshots only
  SnapshotFormat snapshot_format = SnapshotFormat::Csv;
  long max_steps = 50'000'000;
  std::string output_dir;  // empty: nothing is written
  InitialDataConfig initial;
};

/// Throws ConfigError naming the offending field.
void validate(const SimConfig& config);

/// Effective epsilon once epsilon_scale is applied.
double effective_epsilon(const SimConfig& config);

/// Rule used for the weight table (explicit choice or kernel default).
QuadratureRule effective_quadrature(const SimConfig& config);

nlohmann::json to_json(const SimConfig& config);
/// Rejects unknown keys; error messages carry the JSON path.
SimConfig config_from_json(const nlohmann::json& doc);

/// Full config from a document that is either a plain config or
/// {"scenario": name, <preset parameters>, <top-level overrides>}.
SimConfig resolve_config(const nlohmann::json& doc);

nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
SimConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" (dotted keys address nested objects; the value is
/// parsed as JSON when possible, otherwise taken as a string).
void apply_assignment(nlohmann::json& doc, const std::string& assignment);

nlohmann::json kernel_to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const nlohmann::json& doc, const std::string& path = "kernel");

}  // namespace gffv
