#pragma once

#include <limits>
#include <optional>
#include <string>

#include "gffv/flux.hpp"

namespace gffv {

struct StepControl {
  double cfl_safety = 0.9;
  double dt_max = 0.1;
  double dt_floor = 1e-12;
  /// Absolute density that counts as blow-up; 0 selects 1e8 / cell volume.
  double rho_blowup = 0.0;
  /// Blow-up also when one cell holds at least this fraction of the mass
  /// (a conservative scheme cannot exceed mass / cell volume).
  double blowup_mass_fraction = 0.5;
  /// Steady when ||rhs||_1 * cell volume / mass falls below this.
  double steady_tol = 1e-7;
  /// Fixed step request; still capped by the CFL bound.
  std::optional<double> dt_fixed;
  /// Also cap proposals by the explicit-diffusion bound (diffusive_max_dt).
  bool diffusive_limit = true;
};

void validate(const StepControl& control);
double blowup_density(const StepControl& control, double cell_volume);

enum class Integrator { ForwardEuler, SspRk3 };

std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& name);

enum class RunState { Running, Steady, Finished, BlowUp };

struct RunStatus {
  RunState state = RunState::Running;
  double t = 0.0;

  bool terminal() const { return state != RunState::Running; }
};

std::string to_string(RunState state);

/// Largest positivity-preserving forward Euler step for these velocities;
/// `dt_max` when every velocity vanishes.
template <int D>
double cfl_max_dt(const InterfaceVelocities<D>& velocities, const Grid<D>& grid, ReconstructionOrder order,
                  double dt_max);

/// dt <= 1 / (2 sum_a D_max / h_a^2) with D_max = max_j rho_j H''(rho_j):
/// the linear stability limit of the explicit local diffusion, which the
/// positivity bound alone does not enforce. +inf without internal energy.
template <int D>
double diffusive_max_dt(const Field<D>& field, const InternalEnergySpec& internal);

/// Forward Euler written as the nonnegative combination of face values, so
/// the result is >= 0 whenever dt respects the CFL bound.
template <int D>
Field<D> euler_update(const Field<D>& field, const SchemeEvaluation<D>& eval, double dt);

/// Throws NumericError if dt exceeds cfl_safety times the CFL bound.
template <int D>
Field<D> forward_euler_step(const Field<D>& field, double dt, const DiscreteModel<D>& model,
                            const LimiterParams& params, const StepControl& control);

template <int D>
struct StepResult {
  Field<D> field;
  double dt = 0.0;       // step actually taken
  int halvings = 0;      // stage-CFL rejections before acceptance
  bool underflow = false;  // dt fell below dt_floor; `field` is the input
};

/// Three-stage SSP Runge-Kutta. Each stage's Euler sub-step must satisfy its
/// own CFL bound; violating attempts are rejected and dt halved.
template <int D>
StepResult<D> ssp_rk3_step(const Field<D>& field, double dt, const DiscreteModel<D>& model,
                           const LimiterParams& params, const StepControl& control,
                           const SchemeEvaluation<D>* stage0 = nullptr);

/// Classifies the current state. `rhs_l1` is sum_j |rhs_j| (no cell volume).
template <int D>
RunStatus classify_state(const Field<D>& field, double rhs_l1, double dt, const StepControl& control, double t,
                         double t_end);

}  // namespace gffv
