#pragma once

#include <array>
#include <span>
#include <vector>

#include "gffv/mesh.hpp"
#include "gffv/nonlocal.hpp"
#include "gffv/reconstruct.hpp"

namespace gffv {

/// Velocities on every face normal to each axis, laid out like
/// `Grid::face_count(axis)`. Boundary faces hold 0 and never carry flux.
template <int D>
struct InterfaceVelocities {
  std::array<std::vector<double>, D> u;
};

/// Numerical fluxes on the same face layout; boundary entries are exactly 0.
template <int D>
struct FluxField {
  std::array<std::vector<double>, D> f;
};

/// u_{j+1/2} = -(xi_{j+1} - xi_j) / h on interior faces.
template <int D>
InterfaceVelocities<D> interface_velocities(const Grid<D>& grid, std::span<const double> xi);

/// F = u^+ (state on the low side) + u^- (state on the high side).
template <int D>
FluxField<D> upwind_fluxes(const Grid<D>& grid, const InterfaceVelocities<D>& velocities,
                           const ReconstructedStates<D>& states);

/// -(F_high - F_low)/h summed over axes.
template <int D>
std::vector<double> flux_divergence(const Grid<D>& grid, const FluxField<D>& fluxes);

/// Every intermediate of one semi-discrete evaluation.
template <int D>
struct SchemeEvaluation {
  std::vector<double> xi;
  InterfaceVelocities<D> velocities;
  ReconstructedStates<D> states;
  FluxField<D> fluxes;
  std::vector<double> rhs;
};

template <int D>
SchemeEvaluation<D> evaluate_scheme(const Field<D>& field, const DiscreteModel<D>& model, const LimiterParams& params);

/// dρ̄/dt per cell.
template <int D>
std::vector<double> rhs(const Field<D>& field, const DiscreteModel<D>& model, const LimiterParams& params) {
  return evaluate_scheme(field, model, params).rhs;
}

}  // namespace gffv
