#include "gffv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace gffv {

template <int D>
EntropyParts entropy_parts(const Field<D>& field, const DiscreteModel<D>& model) {
  const double vol = field.grid.cell_volume();
  const auto& rho = field.values;
  EntropyParts parts;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    parts.internal += internal_energy_value(model.spec.internal, rho[j]);
    if (!model.potential.empty()) parts.external += model.potential[j] * rho[j];
  }
  if (model.interaction) {
    const std::vector<double> conv = model.interaction->apply(rho);
    for (std::size_t j = 0; j < rho.size(); ++j) parts.interaction += 0.5 * conv[j] * rho[j];
  }
  parts.internal *= vol;
  parts.external *= vol;
  parts.interaction *= vol;
  return parts;
}

template <int D>
double discrete_dissipation(const Grid<D>& grid, const ReconstructedStates<D>& states,
                            const InterfaceVelocities<D>& velocities, DissipationMin mode) {
  double global_min = std::numeric_limits<double>::infinity();
  if (mode == DissipationMin::Global) {
    for (int a = 0; a < D; ++a) {
      for (const GridLine& line : grid_lines(grid, a)) {
        for (int i = 0; i + 1 < line.n; ++i) {
          const std::size_t c = line.cell_base + i * line.cell_stride;
          global_min = std::min({global_min, states.high[a][c], states.low[a][c + line.cell_stride]});
        }
      }
    }
    if (!std::isfinite(global_min)) return 0.0;
  }

  if constexpr (D == 1) {
    double sum = 0.0;
    const auto& u = velocities.u[0];
    for (int j = 0; j + 1 < grid.axes[0].n; ++j) {
      const double m = mode == DissipationMin::Global ? global_min
                                                      : std::min(states.high[0][j], states.low[0][j + 1]);
      const double uf = u[j + 1];
      sum += uf * uf * m;
    }
    return grid.cell_volume() * sum;
  } else {
    // Pairs the x-interface east of (j,k) with the y-interface north of it
    // and weights u^2 + v^2 by the smallest of the four adjacent states.
    const int nx = grid.axes[0].n;
    const int ny = grid.axes[1].n;
    double sum = 0.0;
    for (int k = 0; k < ny; ++k) {
      for (int j = 0; j < nx; ++j) {
        const std::size_t c = static_cast<std::size_t>(k) * nx + j;
        double m = std::numeric_limits<double>::infinity();
        double speed2 = 0.0;
        if (j + 1 < nx) {
          const double u = velocities.u[0][static_cast<std::size_t>(k) * (nx + 1) + j + 1];
          speed2 += u * u;
          m = std::min({m, states.high[0][c], states.low[0][c + 1]});
        }
        if (k + 1 < ny) {
          const double v = velocities.u[1][static_cast<std::size_t>(k + 1) * nx + j];
          speed2 += v * v;
          m = std::min({m, states.high[1][c], states.low[1][c + nx]});
        }
        if (speed2 == 0.0) continue;
        sum += speed2 * (mode == DissipationMin::Global ? global_min : m);
      }
    }
    return grid.cell_volume() * sum;
  }
}

template <int D>
double entropy_rate(const Grid<D>& grid, const SchemeEvaluation<D>& eval) {
  double s = 0.0;
  for (std::size_t j = 0; j < eval.xi.size(); ++j) s += eval.xi[j] * eval.rhs[j];
  return grid.cell_volume() * s;
}

template <int D>
DiagnosticsRecord make_record(const Field<D>& field, const DiscreteModel<D>& model, const SchemeEvaluation<D>& eval,
                              double t, double dt, RunStatus status) {
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  r.mass = total_mass(field);
  r.entropy = discrete_entropy(field, model);
  r.dissipation = discrete_dissipation(field.grid, eval.states, eval.velocities);
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  r.rho_min = *lo;
  r.rho_max = *hi;
  r.status = status;
  return r;
}

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

}  // namespace

template <int D>
ErrorNorms error_norms(const Field<D>& field, const std::function<double(const Point<D>&)>& reference) {
  const Grid<D>& g = field.grid;
  ErrorNorms e;
  double l1 = 0.0;
  double l1_pointwise = 0.0;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const Point<D> x = g.center(c);
    const double rho = field.values[c];
    e.linf = std::max(e.linf, std::abs(rho - reference(x)));
    double average = 0.0;
    double spread = 0.0;
    if constexpr (D == 1) {
      const double h = g.spacing(0);
      for (int q = 0; q < 5; ++q) {
        const double r = reference(Point<1>{x[0] + 0.5 * h * kGaussNodes[q]});
        average += 0.5 * kGaussWeights[q] * r;
        spread += 0.5 * kGaussWeights[q] * std::abs(rho - r);
      }
    } else {
      const double hx = g.spacing(0);
      const double hy = g.spacing(1);
      for (int qy = 0; qy < 5; ++qy) {
        for (int qx = 0; qx < 5; ++qx) {
          const double r = reference(Point<2>{x[0] + 0.5 * hx * kGaussNodes[qx], x[1] + 0.5 * hy * kGaussNodes[qy]});
          const double w = 0.25 * kGaussWeights[qx] * kGaussWeights[qy];
          average += w * r;
          spread += w * std::abs(rho - r);
        }
      }
    }
    l1 += std::abs(rho - average);
    l1_pointwise += spread;
  }
  e.l1 = l1 * g.cell_volume();
  e.l1_pointwise = l1_pointwise * g.cell_volume();
  return e;
}

template <int D>
Field<D> restrict_to(const Field<D>& fine, const Grid<D>& coarse) {
  std::array<int, D> ratio{};
  for (int a = 0; a < D; ++a) {
    const Axis& f = fine.grid.axes[a];
    const Axis& c = coarse.axes[a];
    const double span_tol = 1e-12 * std::max(1.0, std::abs(c.max - c.min));
    if (std::abs(f.min - c.min) > span_tol || std::abs(f.max - c.max) > span_tol || f.n % c.n != 0) {
      throw NumericError("restrict_to: grids are not nested with an integer refinement ratio");
    }
    ratio[a] = f.n / c.n;
  }
  Field<D> out(coarse);
  const int rx = ratio[0];
  const int fnx = fine.grid.axes[0].n;
  const int cnx = coarse.axes[0].n;
  if constexpr (D == 1) {
    for (int j = 0; j < cnx; ++j) {
      double s = 0.0;
      for (int i = 0; i < rx; ++i) s += fine.values[j * rx + i];
      out.values[j] = s / rx;
    }
  } else {
    const int ry = ratio[1];
    for (int k = 0; k < coarse.axes[1].n; ++k) {
      for (int j = 0; j < cnx; ++j) {
        double s = 0.0;
        for (int b = 0; b < ry; ++b) {
          for (int i = 0; i < rx; ++i) s += fine.values[static_cast<std::size_t>(k * ry + b) * fnx + j * rx + i];
        }
        out.values[static_cast<std::size_t>(k) * cnx + j] = s / (rx * ry);
      }
    }
  }
  return out;
}

template <int D>
ErrorNorms error_norms(const Field<D>& field, const Field<D>& finer) {
  const Field<D> ref = restrict_to(finer, field.grid);
  ErrorNorms e;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const double d = std::abs(field.values[c] - ref.values[c]);
    e.l1 += d;
    e.linf = std::max(e.linf, d);
  }
  e.l1 *= field.grid.cell_volume();
  e.l1_pointwise = e.l1;
  return e;
}

std::vector<double> observed_order(std::span<const double> errors) {
  if (errors.size() < 2) throw NumericError("observed_order: need at least two errors");
  std::vector<double> out;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) throw NumericError("observed_order: errors must be positive");
    if (k > 0) out.push_back(std::log2(errors[k - 1] / errors[k]));
  }
  return out;
}

template <int D>
std::vector<XiComponent> xi_flatness(const Field<D>& field, std::span<const double> xi, double threshold) {
  if (xi.size() != field.size()) throw NumericError("xi_flatness: size mismatch");
  const auto& rho = field.values;
  if (rho.empty()) return {};
  if (threshold <= 0.0) threshold = 1e-6 * *std::max_element(rho.begin(), rho.end());

  const Grid<D>& g = field.grid;
  std::vector<char> seen(rho.size(), 0);
  std::vector<XiComponent> out;
  for (std::size_t start = 0; start < rho.size(); ++start) {
    if (seen[start] || !(rho[start] > threshold)) continue;
    XiComponent comp;
    comp.xi_min = comp.xi_max = xi[start];
    comp.lo.fill(std::numeric_limits<double>::infinity());
    comp.hi.fill(-std::numeric_limits<double>::infinity());
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      comp.cells.push_back(c);
      comp.xi_min = std::min(comp.xi_min, xi[c]);
      comp.xi_max = std::max(comp.xi_max, xi[c]);
      comp.mass += rho[c];
      const Point<D> x = g.center(c);
      for (int a = 0; a < D; ++a) {
        comp.lo[a] = std::min(comp.lo[a], x[a]);
        comp.hi[a] = std::max(comp.hi[a], x[a]);
      }
      const std::array<int, D> idx = g.unflatten(c);
      for (int a = 0; a < D; ++a) {
        for (int step : {-1, 1}) {
          std::array<int, D> nb = idx;
          nb[a] += step;
          if (nb[a] < 0 || nb[a] >= g.axes[a].n) continue;
          const std::size_t f = g.flatten(nb);
          if (!seen[f] && rho[f] > threshold) {
            seen[f] = 1;
            queue.push_back(f);
          }
        }
      }
    }
    if constexpr (D == 1) comp.lo[1] = comp.hi[1] = 0.0;
    comp.mass *= g.cell_volume();
    std::sort(comp.cells.begin(), comp.cells.end());
    out.push_back(std::move(comp));
  }
  return out;
}

double fit_exponential_rate(std::span<const double> t, std::span<const double> distance) {
  if (t.size() != distance.size() || t.size() < 2) throw NumericError("fit_exponential_rate: need matching samples");
  double st = 0.0, sy = 0.0;
  const double n = static_cast<double>(t.size());
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(distance[i] > 0.0)) throw NumericError("fit_exponential_rate: distances must be positive");
    y[i] = std::log(distance[i]);
    st += t[i];
    sy += y[i];
  }
  const double tm = st / n;
  const double ym = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - tm) * (y[i] - ym);
    den += (t[i] - tm) * (t[i] - tm);
  }
  if (!(den > 0.0)) throw NumericError("fit_exponential_rate: times must not all coincide");
  return -num / den;
}

template EntropyParts entropy_parts(const Field<1>&, const DiscreteModel<1>&);
template EntropyParts entropy_parts(const Field<2>&, const DiscreteModel<2>&);
template double discrete_dissipation(const Grid<1>&, const ReconstructedStates<1>&, const InterfaceVelocities<1>&,
                                     DissipationMin);
template double discrete_dissipation(const Grid<2>&, const ReconstructedStates<2>&, const InterfaceVelocities<2>&,
                                     DissipationMin);
template double entropy_rate(const Grid<1>&, const SchemeEvaluation<1>&);
template double entropy_rate(const Grid<2>&, const SchemeEvaluation<2>&);
template DiagnosticsRecord make_record(const Field<1>&, const DiscreteModel<1>&, const SchemeEvaluation<1>&, double,
                                       double, RunStatus);
template DiagnosticsRecord make_record(const Field<2>&, const DiscreteModel<2>&, const SchemeEvaluation<2>&, double,
                                       double, RunStatus);
template ErrorNorms error_norms<1>(const Field<1>&, const std::function<double(const Point<1>&)>&);
template ErrorNorms error_norms<2>(const Field<2>&, const std::function<double(const Point<2>&)>&);
template ErrorNorms error_norms(const Field<1>&, const Field<1>&);
template ErrorNorms error_norms(const Field<2>&, const Field<2>&);
template Field<1> restrict_to(const Field<1>&, const Grid<1>&);
template Field<2> restrict_to(const Field<2>&, const Grid<2>&);
template std::vector<XiComponent> xi_flatness(const Field<1>&, std::span<const double>, double);
template std::vector<XiComponent> xi_flatness(const Field<2>&, std::span<const double>, double);

}  // namespace gffv
