#include "gffv/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gffv {

namespace {
constexpr double kUnbounded = std::numeric_limits<double>::infinity();
}  // namespace

void validate(const StepControl& c) {
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) throw ConfigError("step: cfl_safety must lie in (0, 1]");
  if (!(c.dt_max > 0.0)) throw ConfigError("step: dt_max must be positive");
  if (!(c.dt_floor > 0.0)) throw ConfigError("step: dt_floor must be positive");
  if (c.rho_blowup < 0.0) throw ConfigError("step: rho_blowup must be >= 0");
  if (!(c.blowup_mass_fraction > 0.0 && c.blowup_mass_fraction <= 1.0))
    throw ConfigError("step: blowup_mass_fraction must lie in (0, 1]");
  if (!(c.steady_tol > 0.0)) throw ConfigError("step: steady_tol must be positive");
  if (c.dt_fixed && !(*c.dt_fixed > 0.0)) throw ConfigError("step: dt_fixed must be positive");
}

double blowup_density(const StepControl& control, double cell_volume) {
  return control.rho_blowup > 0.0 ? control.rho_blowup : 1e8 / cell_volume;
}

std::string to_string(Integrator integrator) { return integrator == Integrator::ForwardEuler ? "euler" : "ssprk3"; }

Integrator parse_integrator(const std::string& name) {
  if (name == "euler") return Integrator::ForwardEuler;
  if (name == "ssprk3") return Integrator::SspRk3;
  throw ConfigError("unknown integrator '" + name + "' (expected euler|ssprk3)");
}

std::string to_string(RunState state) {
  switch (state) {
    case RunState::Running: return "running";
    case RunState::Steady: return "steady";
    case RunState::Finished: return "finished";
    case RunState::BlowUp: return "blowup";
  }
  return "?";
}

template <int D>
double cfl_max_dt(const InterfaceVelocities<D>& velocities, const Grid<D>& grid, ReconstructionOrder order,
                  double dt_max) {
  double dt = dt_max;
  if constexpr (D == 1) {
    const auto& u = velocities.u[0];
    const double h = grid.spacing(0);
    if (order == ReconstructionOrder::Second) {
      double a = 0.0;
      for (double v : u) a = std::max(a, std::abs(v));
      if (a > 0.0) dt = std::min(dt, h / (2.0 * a));
    } else {
      // Outflow from cell j: u+_{j+1/2} - u-_{j-1/2}.
      double a = 0.0;
      for (std::size_t j = 0; j + 1 < u.size(); ++j) a = std::max(a, std::max(u[j + 1], 0.0) - std::min(u[j], 0.0));
      if (a > 0.0) dt = std::min(dt, h / (2.0 * a));
    }
  } else {
    for (int axis = 0; axis < D; ++axis) {
      double a = 0.0;
      for (double v : velocities.u[axis]) a = std::max(a, std::abs(v));
      if (a > 0.0) dt = std::min(dt, grid.spacing(axis) / (4.0 * a));
    }
  }
  return dt;
}

template <int D>
double diffusive_max_dt(const Field<D>& field, const InternalEnergySpec& internal) {
  double d_max = 0.0;
  for (double rho : field.values) d_max = std::max(d_max, internal_energy_diffusivity(internal, rho));
  if (!(d_max > 0.0)) return kUnbounded;
  double inv = 0.0;
  for (int a = 0; a < D; ++a) inv += 1.0 / (field.grid.spacing(a) * field.grid.spacing(a));
  return 1.0 / (2.0 * d_max * inv);
}

template <int D>
Field<D> euler_update(const Field<D>& field, const SchemeEvaluation<D>& eval, double dt) {
  Field<D> out(field.grid);
  const double share = 1.0 / (2.0 * D);
  for (int a = 0; a < D; ++a) {
    const double lambda = dt / field.grid.spacing(a);
    const auto& u = eval.velocities.u[a];
    const auto& low = eval.states.low[a];
    const auto& high = eval.states.high[a];
    for (const GridLine& line : grid_lines(field.grid, a)) {
      for (int i = 0; i < line.n; ++i) {
        const std::size_t c = line.cell_base + i * line.cell_stride;
        const std::size_t lo_face = line.face_base + i * line.face_stride;
        const double u_lo = u[lo_face];
        const double u_hi = u[lo_face + line.face_stride];
        double v = std::max(share - lambda * std::max(u_hi, 0.0), 0.0) * high[c] +
                   std::max(share + lambda * std::min(u_lo, 0.0), 0.0) * low[c];
        if (i > 0) v += lambda * std::max(u_lo, 0.0) * high[c - line.cell_stride];
        if (i + 1 < line.n) v -= lambda * std::min(u_hi, 0.0) * low[c + line.cell_stride];
        out.values[c] += v;
      }
    }
  }
  return out;
}

template <int D>
Field<D> forward_euler_step(const Field<D>& field, double dt, const DiscreteModel<D>& model,
                            const LimiterParams& params, const StepControl& control) {
  const SchemeEvaluation<D> eval = evaluate_scheme(field, model, params);
  const double bound = control.cfl_safety * cfl_max_dt(eval.velocities, field.grid, params.order, kUnbounded);
  if (dt > bound * (1.0 + 1e-12)) {
    throw NumericError("forward_euler_step: dt=" + std::to_string(dt) + " violates the CFL bound " +
                       std::to_string(bound));
  }
  return euler_update(field, eval, dt);
}

namespace {

template <int D>
Field<D> combine(double a, const Field<D>& x, double b, const Field<D>& y) {
  Field<D> out(x.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = a * x.values[i] + b * y.values[i];
  return out;
}

}  // namespace

template <int D>
StepResult<D> ssp_rk3_step(const Field<D>& field, double dt, const DiscreteModel<D>& model,
                           const LimiterParams& params, const StepControl& control,
                           const SchemeEvaluation<D>* stage0) {
  std::optional<SchemeEvaluation<D>> own;
  if (stage0 == nullptr) {
    own.emplace(evaluate_scheme(field, model, params));
    stage0 = &*own;
  }
  auto allowed = [&](const SchemeEvaluation<D>& e, double step) {
    return step <= control.cfl_safety * cfl_max_dt(e.velocities, field.grid, params.order, kUnbounded) * (1.0 + 1e-12);
  };

  StepResult<D> result{field, dt, 0, false};
  while (true) {
    if (dt < control.dt_floor) {
      result.underflow = true;
      result.dt = dt;
      return result;
    }
    if (!allowed(*stage0, dt)) {
      dt *= 0.5;
      ++result.halvings;
      continue;
    }
    const Field<D> s1 = euler_update(field, *stage0, dt);
    const SchemeEvaluation<D> e1 = evaluate_scheme(s1, model, params);
    if (!allowed(e1, dt)) {
      dt *= 0.5;
      ++result.halvings;
      continue;
    }
    const Field<D> s2 = combine(0.75, field, 0.25, euler_update(s1, e1, dt));
    const SchemeEvaluation<D> e2 = evaluate_scheme(s2, model, params);
    if (!allowed(e2, dt)) {
      dt *= 0.5;
      ++result.halvings;
      continue;
    }
    result.field = combine(1.0 / 3.0, field, 2.0 / 3.0, euler_update(s2, e2, dt));
    result.dt = dt;
    return result;
  }
}

template <int D>
RunStatus classify_state(const Field<D>& field, double rhs_l1, double dt, const StepControl& control, double t,
                         double t_end) {
  const double vol = field.grid.cell_volume();
  const double mass = total_mass(field);
  const double rho_max = field.values.empty() ? 0.0 : *std::max_element(field.values.begin(), field.values.end());
  if (rho_max >= blowup_density(control, vol) || dt < control.dt_floor ||
      (mass > 0.0 && rho_max * vol >= control.blowup_mass_fraction * mass)) {
    return {RunState::BlowUp, t};
  }
  if (mass <= 0.0 || rhs_l1 * vol / mass <= control.steady_tol) return {RunState::Steady, t};
  if (t >= t_end) return {RunState::Finished, t};
  return {RunState::Running, t};
}

template double cfl_max_dt(const InterfaceVelocities<1>&, const Grid<1>&, ReconstructionOrder, double);
template double cfl_max_dt(const InterfaceVelocities<2>&, const Grid<2>&, ReconstructionOrder, double);
template double diffusive_max_dt(const Field<1>&, const InternalEnergySpec&);
template double diffusive_max_dt(const Field<2>&, const InternalEnergySpec&);
template Field<1> euler_update(const Field<1>&, const SchemeEvaluation<1>&, double);
template Field<2> euler_update(const Field<2>&, const SchemeEvaluation<2>&, double);
template Field<1> forward_euler_step(const Field<1>&, double, const DiscreteModel<1>&, const LimiterParams&,
                                     const StepControl&);
template Field<2> forward_euler_step(const Field<2>&, double, const DiscreteModel<2>&, const LimiterParams&,
                                     const StepControl&);
template StepResult<1> ssp_rk3_step(const Field<1>&, double, const DiscreteModel<1>&, const LimiterParams&,
                                    const StepControl&, const SchemeEvaluation<1>*);
template StepResult<2> ssp_rk3_step(const Field<2>&, double, const DiscreteModel<2>&, const LimiterParams&,
                                    const StepControl&, const SchemeEvaluation<2>*);
template RunStatus classify_state(const Field<1>&, double, double, const StepControl&, double, double);
template RunStatus classify_state(const Field<2>&, double, double, const StepControl&, double, double);

}  // namespace gffv
