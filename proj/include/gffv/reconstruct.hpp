#pragma once

#include <array>
#include <string>
#include <vector>

#include "gffv/mesh.hpp"

namespace gffv {

enum class ReconstructionOrder { First, Second };

std::string to_string(ReconstructionOrder order);
ReconstructionOrder parse_reconstruction_order(const std::string& name);

struct LimiterParams {
  double theta = 2.0;  // generalized minmod parameter, in [1, 2]
  ReconstructionOrder order = ReconstructionOrder::Second;
};

void validate(const LimiterParams& params);

/// min of the arguments if all are positive, max if all are negative, 0 otherwise.
double minmod(double z1, double z2, double z3);

/// One-sided face values of the piecewise-linear reconstruction. For each
/// axis, `low[a][c]` is the value at the low face of cell c (W in x, S in y)
/// and `high[a][c]` the value at its high face (E in x, N in y).
template <int D>
struct ReconstructedStates {
  std::array<std::vector<double>, D> low;
  std::array<std::vector<double>, D> high;
};

/// Centered slopes, re-limited with the theta-minmod slope in any cell and
/// direction where a face value would go negative. Out-of-domain neighbours
/// are taken equal to the boundary cell.
template <int D>
ReconstructedStates<D> reconstruct_states(const Field<D>& field, const LimiterParams& params);

}  // namespace gffv
