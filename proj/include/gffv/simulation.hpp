#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gffv/config.hpp"
#include "gffv/scenarios.hpp"

namespace gffv {

template <int D>
Grid<D> make_grid(const SimConfig& config);

/// Model with epsilon_scale folded into epsilon, bound to the grid.
template <int D>
DiscreteModel<D> make_model(const SimConfig& config, const Grid<D>& grid);

/// Projected initial data, rescaled when initial.mass is set.
template <int D>
ProjectedField<D> make_initial_field(const SimConfig& config, const Grid<D>& grid);

using AnyField = std::variant<Field<1>, Field<2>>;

struct RunReport {
  RunStatus status;
  long n_steps = 0;
  long rejected_steps = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double entropy_initial = 0.0;
  double entropy_final = 0.0;
  std::size_t clamped_initial_cells = 0;
  AnyField final_field;
  std::vector<DiagnosticsRecord> records;  // initial state, then every accepted step
  std::filesystem::path output_dir;         // empty when nothing was written
};

struct RunOptions {
  /// Called with (t, cell averages) after the initial state and then at
  /// every accepted step whose time crosses the next multiple of
  /// `observe_interval` (every step when the interval is 0).
  std::function<void(double, std::span<const double>)> observer;
  double observe_interval = 0.0;
  bool keep_records = true;
};

RunReport run_simulation(const SimConfig& config, const RunOptions& options = {});

enum class ReferenceMode { ClosedForm, FinestGrid };

std::string to_string(ReferenceMode mode);
ReferenceMode parse_reference_mode(const std::string& name);

struct ConvergenceLevel {
  double refine_value = 0.0;
  double dx = 0.0;
  RunState state = RunState::Running;
  double t_final = 0.0;
  long n_steps = 0;
  ErrorNorms error;      // unset (zero) for the finest level in finest_grid mode
  bool has_error = false;
  bool steady = false;   // false flags a run that stopped before Steady
};

struct ConvergenceTable {
  std::string scenario;
  ReferenceMode mode = ReferenceMode::ClosedForm;
  std::vector<ConvergenceLevel> levels;
  std::vector<double> order_l1;
  std::vector<double> order_linf;
};

/// Runs the refinement ladder (the scenario's refine key doubled per level).
ConvergenceTable run_convergence_study(const std::string& scenario, const ScenarioParams& overrides, int levels,
                                       ReferenceMode mode, const std::string& output_dir = "");

nlohmann::json to_json(const ConvergenceTable& table);

struct MassProbe {
  double mass = 0.0;
  RunState state = RunState::Running;
  double t_final = 0.0;
};

struct MassSweepResult {
  double lo = 0.0;  // largest probed mass that did not blow up
  double hi = 0.0;  // smallest probed mass that blew up
  std::vector<MassProbe> probes;
};

/// Bisection on the scenario's "mass" parameter. The endpoints must
/// classify differently (one blows up, the other does not).
MassSweepResult run_mass_sweep(const std::string& scenario, const ScenarioParams& overrides, double lo, double hi,
                               int iterations, const std::string& output_dir = "");

nlohmann::json to_json(const MassSweepResult& result);

/// Caps OpenMP threads at GFFV_THREADS when that variable is set.
void apply_thread_limit();

}  // namespace gffv
