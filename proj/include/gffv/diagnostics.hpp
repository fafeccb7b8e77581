#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gffv/flux.hpp"
#include "gffv/timestep.hpp"

namespace gffv {

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  RunStatus status;
};

/// Internal, external and interaction parts of the discrete free energy.
struct EntropyParts {
  double internal = 0.0;
  double external = 0.0;
  double interaction = 0.0;

  double total() const { return internal + external + interaction; }
};

template <int D>
EntropyParts entropy_parts(const Field<D>& field, const DiscreteModel<D>& model);

template <int D>
double discrete_entropy(const Field<D>& field, const DiscreteModel<D>& model) {
  return entropy_parts(field, model).total();
}

/// How the face minimum in the dissipation is taken.
enum class DissipationMin {
  PerInterface,  // min of the two states adjacent to each interface
  Global,        // one minimum over all interface states
};

template <int D>
double discrete_dissipation(const Grid<D>& grid, const ReconstructedStates<D>& states,
                            const InterfaceVelocities<D>& velocities,
                            DissipationMin mode = DissipationMin::PerInterface);

/// dE/dt along the semi-discrete flow: cell volume * sum xi_j rhs_j.
template <int D>
double entropy_rate(const Grid<D>& grid, const SchemeEvaluation<D>& eval);

template <int D>
DiagnosticsRecord make_record(const Field<D>& field, const DiscreteModel<D>& model, const SchemeEvaluation<D>& eval,
                              double t, double dt, RunStatus status);

struct ErrorNorms {
  double l1 = 0.0;            // cell volume * sum |rho_j - cell average of reference|
  double linf = 0.0;          // max |rho_j - reference(center_j)|
  double l1_pointwise = 0.0;  // integral of |rho_j - reference(x)| with rho piecewise constant
};

/// Cell averages of the reference and the pointwise L1 integral both use
/// 5-point Gauss per cell (tensor in 2D); Linf samples cell centers.
template <int D>
ErrorNorms error_norms(const Field<D>& field, const std::function<double(const Point<D>&)>& reference);

/// Against a finer field averaged onto `field.grid`. The refinement ratio
/// must be an integer on every axis.
template <int D>
ErrorNorms error_norms(const Field<D>& field, const Field<D>& finer);

template <int D>
Field<D> restrict_to(const Field<D>& fine, const Grid<D>& coarse);

/// log2(e_k / e_{k+1}) for each adjacent pair.
std::vector<double> observed_order(std::span<const double> errors);

struct XiComponent {
  std::vector<std::size_t> cells;
  double xi_min = 0.0;
  double xi_max = 0.0;
  double mass = 0.0;
  Point<2> lo{};  // bounding box of cell centers (second entry unused in 1D)
  Point<2> hi{};

  double oscillation() const { return xi_max - xi_min; }
};

/// Connected components of {rho > threshold}; threshold <= 0 selects
/// 1e-6 * max rho.
template <int D>
std::vector<XiComponent> xi_flatness(const Field<D>& field, std::span<const double> xi, double threshold = 0.0);

/// Least-squares decay rate: minus the slope of log(distance) against t.
double fit_exponential_rate(std::span<const double> t, std::span<const double> distance);

}  // namespace gffv
