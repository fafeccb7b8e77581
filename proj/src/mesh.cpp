#include "gffv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gffv {

namespace {

void check_axis(const Axis& a, const char* name) {
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min)) {
    throw ConfigError(std::string("grid: axis ") + name + " needs finite bounds with max > min");
  }
  if (a.n < 2) {
    throw ConfigError(std::string("grid: axis ") + name + " needs at least 2 cells");
  }
}

// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kGaussNodes = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

double overlap_fraction(const Axis& a, int i, double lo, double hi) {
  const double left = a.face(i);
  const double right = a.face(i + 1);
  const double len = std::min(right, hi) - std::max(left, lo);
  return len > 0.0 ? len / a.dx() : 0.0;
}

}  // namespace

template <int D>
std::vector<GridLine> grid_lines(const Grid<D>& grid, int axis) {
  std::vector<GridLine> lines;
  if constexpr (D == 1) {
    lines.push_back({0, 1, 0, 1, grid.axes[0].n});
  } else {
    const std::size_t nx = grid.axes[0].n;
    const std::size_t ny = grid.axes[1].n;
    if (axis == 0) {
      lines.reserve(ny);
      for (std::size_t k = 0; k < ny; ++k) lines.push_back({k * nx, 1, k * (nx + 1), 1, static_cast<int>(nx)});
    } else {
      lines.reserve(nx);
      for (std::size_t j = 0; j < nx; ++j) lines.push_back({j, nx, j, nx, static_cast<int>(ny)});
    }
  }
  return lines;
}

template <int D>
Field<D>::Field(const Grid<D>& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw NumericError("field: value count does not match grid");
}

Grid1D build_grid(double x_min, double x_max, int n) {
  Grid1D g;
  g.axes[0] = Axis{x_min, x_max, n};
  check_axis(g.axes[0], "x");
  return g;
}

Grid2D build_grid(double x_min, double x_max, int nx, double y_min, double y_max, int ny) {
  Grid2D g;
  g.axes[0] = Axis{x_min, x_max, nx};
  g.axes[1] = Axis{y_min, y_max, ny};
  check_axis(g.axes[0], "x");
  check_axis(g.axes[1], "y");
  return g;
}

template <int D>
ProjectedField<D> project_initial_data(const Grid<D>& grid, const InitialDensity<D>& data) {
  ProjectedField<D> out{Field<D>(grid), 0};
  auto& values = out.field.values;

  for (const auto& term : data.terms) {
    if (const auto* box = std::get_if<BoxIndicator<D>>(&term)) {
      for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto idx = grid.unflatten(c);
        double frac = 1.0;
        for (int a = 0; a < D; ++a) frac *= overlap_fraction(grid.axes[a], idx[a], box->lo[a], box->hi[a]);
        values[c] += box->value * frac;
      }
      continue;
    }
    const auto& rho = std::get<SmoothDensity<D>>(term).density;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const Point<D> center = grid.center(c);
      double sum = 0.0;
      if constexpr (D == 1) {
        const double h = 0.5 * grid.spacing(0);
        for (int q = 0; q < 3; ++q) {
          double v = rho({center[0] + h * kGaussNodes[q]});
          if (v < 0.0) {
            v = 0.0;
            ++out.clamped;
          }
          sum += 0.5 * kGaussWeights[q] * v;
        }
      } else {
        const double hx = 0.5 * grid.spacing(0);
        const double hy = 0.5 * grid.spacing(1);
        for (int q = 0; q < 3; ++q) {
          for (int r = 0; r < 3; ++r) {
            double v = rho({center[0] + hx * kGaussNodes[q], center[1] + hy * kGaussNodes[r]});
            if (v < 0.0) {
              v = 0.0;
              ++out.clamped;
            }
            sum += 0.25 * kGaussWeights[q] * kGaussWeights[r] * v;
          }
        }
      }
      values[c] += sum;
    }
  }
  return out;
}

template <int D>
double total_mass(const Field<D>& field) {
  return field.grid.cell_volume() * std::accumulate(field.values.begin(), field.values.end(), 0.0);
}

template struct Field<1>;
template struct Field<2>;
template std::vector<GridLine> grid_lines(const Grid<1>&, int);
template std::vector<GridLine> grid_lines(const Grid<2>&, int);
template ProjectedField<1> project_initial_data(const Grid<1>&, const InitialDensity<1>&);
template ProjectedField<2> project_initial_data(const Grid<2>&, const InitialDensity<2>&);
template double total_mass(const Field<1>&);
template double total_mass(const Field<2>&);

}  // namespace gffv
