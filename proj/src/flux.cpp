#include "gffv/flux.hpp"

#include <algorithm>

namespace gffv {

template <int D>
InterfaceVelocities<D> interface_velocities(const Grid<D>& grid, std::span<const double> xi) {
  if (xi.size() != grid.size()) throw NumericError("interface_velocities: size mismatch");
  InterfaceVelocities<D> v;
  for (int a = 0; a < D; ++a) {
    v.u[a].assign(grid.face_count(a), 0.0);
    const double h = grid.spacing(a);
    for (const GridLine& line : grid_lines(grid, a)) {
      for (int i = 1; i < line.n; ++i) {
        const std::size_t hi = line.cell_base + i * line.cell_stride;
        const std::size_t lo = hi - line.cell_stride;
        v.u[a][line.face_base + i * line.face_stride] = -(xi[hi] - xi[lo]) / h;
      }
    }
  }
  return v;
}

template <int D>
FluxField<D> upwind_fluxes(const Grid<D>& grid, const InterfaceVelocities<D>& velocities,
                           const ReconstructedStates<D>& states) {
  FluxField<D> out;
  for (int a = 0; a < D; ++a) {
    out.f[a].assign(grid.face_count(a), 0.0);
    for (const GridLine& line : grid_lines(grid, a)) {
      for (int i = 1; i < line.n; ++i) {
        const std::size_t face = line.face_base + i * line.face_stride;
        const std::size_t hi = line.cell_base + i * line.cell_stride;
        const std::size_t lo = hi - line.cell_stride;
        const double u = velocities.u[a][face];
        out.f[a][face] = std::max(u, 0.0) * states.high[a][lo] + std::min(u, 0.0) * states.low[a][hi];
      }
    }
  }
  return out;
}

template <int D>
std::vector<double> flux_divergence(const Grid<D>& grid, const FluxField<D>& fluxes) {
  std::vector<double> out(grid.size(), 0.0);
  for (int a = 0; a < D; ++a) {
    const double h = grid.spacing(a);
    for (const GridLine& line : grid_lines(grid, a)) {
      for (int i = 0; i < line.n; ++i) {
        const std::size_t c = line.cell_base + i * line.cell_stride;
        const std::size_t lo_face = line.face_base + i * line.face_stride;
        out[c] -= (fluxes.f[a][lo_face + line.face_stride] - fluxes.f[a][lo_face]) / h;
      }
    }
  }
  return out;
}

template <int D>
SchemeEvaluation<D> evaluate_scheme(const Field<D>& field, const DiscreteModel<D>& model,
                                    const LimiterParams& params) {
  SchemeEvaluation<D> e;
  e.xi = assemble_xi(model, field);
  e.velocities = interface_velocities(field.grid, e.xi);
  e.states = reconstruct_states(field, params);
  e.fluxes = upwind_fluxes(field.grid, e.velocities, e.states);
  e.rhs = flux_divergence(field.grid, e.fluxes);
  return e;
}

template InterfaceVelocities<1> interface_velocities(const Grid<1>&, std::span<const double>);
template InterfaceVelocities<2> interface_velocities(const Grid<2>&, std::span<const double>);
template FluxField<1> upwind_fluxes(const Grid<1>&, const InterfaceVelocities<1>&, const ReconstructedStates<1>&);
template FluxField<2> upwind_fluxes(const Grid<2>&, const InterfaceVelocities<2>&, const ReconstructedStates<2>&);
template std::vector<double> flux_divergence(const Grid<1>&, const FluxField<1>&);
template std::vector<double> flux_divergence(const Grid<2>&, const FluxField<2>&);
template SchemeEvaluation<1> evaluate_scheme(const Field<1>&, const DiscreteModel<1>&, const LimiterParams&);
template SchemeEvaluation<2> evaluate_scheme(const Field<2>&, const DiscreteModel<2>&, const LimiterParams&);

}  // namespace gffv
