#include "gffv/reconstruct.hpp"

#include <algorithm>
#include <cmath>

namespace gffv {

std::string to_string(ReconstructionOrder order) {
  return order == ReconstructionOrder::First ? "first" : "second";
}

ReconstructionOrder parse_reconstruction_order(const std::string& name) {
  if (name == "first") return ReconstructionOrder::First;
  if (name == "second") return ReconstructionOrder::Second;
  throw ConfigError("unknown reconstruction order '" + name + "' (expected first|second)");
}

void validate(const LimiterParams& params) {
  if (!(params.theta >= 1.0 && params.theta <= 2.0)) throw ConfigError("limiter: theta must lie in [1, 2]");
}

double minmod(double z1, double z2, double z3) {
  if (z1 > 0.0 && z2 > 0.0 && z3 > 0.0) return std::min({z1, z2, z3});
  if (z1 < 0.0 && z2 < 0.0 && z3 < 0.0) return std::max({z1, z2, z3});
  return 0.0;
}

template <int D>
ReconstructedStates<D> reconstruct_states(const Field<D>& field, const LimiterParams& params) {
  validate(params);
  const auto& rho = field.values;
  for (double v : rho) {
    if (!(v >= 0.0)) throw NumericError("reconstruct: cell averages must be nonnegative and finite");
  }

  ReconstructedStates<D> out;
  for (int a = 0; a < D; ++a) {
    out.low[a] = rho;
    out.high[a] = rho;
    if (params.order == ReconstructionOrder::First) continue;

    const double theta = params.theta;
    for (const GridLine& line : grid_lines(field.grid, a)) {
      const int n = line.n;
      for (int i = 0; i < n; ++i) {
        const std::size_t c = line.cell_base + i * line.cell_stride;
        const double mid = rho[c];
        const double left = i > 0 ? rho[c - line.cell_stride] : mid;
        const double right = i + 1 < n ? rho[c + line.cell_stride] : mid;

        // Work with slope * h/2 so that faces are mid -/+ half_jump. Scaling
        // the minmod arguments by h/2 keeps the limited faces >= 0 under
        // rounding: |half_jump| never exceeds the one-sided difference.
        double half_jump = 0.25 * (right - left);
        if (mid - half_jump < 0.0 || mid + half_jump < 0.0) {
          half_jump = minmod(0.5 * theta * (right - mid), 0.25 * (right - left), 0.5 * theta * (mid - left));
        }
        out.low[a][c] = mid - half_jump;
        out.high[a][c] = mid + half_jump;
      }
    }
  }
  return out;
}

template ReconstructedStates<1> reconstruct_states(const Field<1>&, const LimiterParams&);
template ReconstructedStates<2> reconstruct_states(const Field<2>&, const LimiterParams&);

}  // namespace gffv
