#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gffv {

/// Raised for invalid user-supplied configuration (bounds, rules, keys, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical precondition fails at run time.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for file-system and stream failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <int D>
using Point = std::array<double, D>;

/// One axis of a uniform cell-centered partition.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  int n = 2;

  double dx() const { return (max - min) / n; }
  double center(int i) const { return min + (i + 0.5) * dx(); }
  double face(int i) const { return min + i * dx(); }
};

/// Uniform Cartesian grid. Cells are stored row-major with x fastest, so a
/// 2D cell (j, k) lives at flat index k * nx + j.
template <int D>
struct Grid {
  static_assert(D == 1 || D == 2, "only 1D and 2D grids are supported");

  std::array<Axis, D> axes{};

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= static_cast<std::size_t>(a.n);
    return s;
  }
  double spacing(int axis) const { return axes[axis].dx(); }
  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.dx();
    return v;
  }
  std::size_t stride(int axis) const {
    return axis == 0 ? 1 : static_cast<std::size_t>(axes[0].n);
  }
  std::array<int, D> unflatten(std::size_t flat) const {
    std::array<int, D> idx{};
    idx[0] = static_cast<int>(flat % axes[0].n);
    if constexpr (D == 2) idx[1] = static_cast<int>(flat / axes[0].n);
    return idx;
  }
  std::size_t flatten(const std::array<int, D>& idx) const {
    if constexpr (D == 1) {
      return static_cast<std::size_t>(idx[0]);
    } else {
      return static_cast<std::size_t>(idx[1]) * axes[0].n + idx[0];
    }
  }
  Point<D> center(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Point<D> p{};
    for (int a = 0; a < D; ++a) p[a] = axes[a].center(idx[a]);
    return p;
  }

  /// Number of faces normal to `axis`, boundary faces included.
  std::size_t face_count(int axis) const {
    std::size_t s = 1;
    for (int a = 0; a < D; ++a) s *= static_cast<std::size_t>(axes[a].n + (a == axis ? 1 : 0));
    return s;
  }

  bool operator==(const Grid&) const = default;
};

using Grid1D = Grid<1>;
using Grid2D = Grid<2>;

/// A 1D run of cells along one axis together with the faces between them.
/// Cell i of the line is at `cell_base + i * cell_stride`; its low face is at
/// `face_base + i * face_stride` and its high face one stride further.
struct GridLine {
  std::size_t cell_base;
  std::size_t cell_stride;
  std::size_t face_base;
  std::size_t face_stride;
  int n;
};

template <int D>
std::vector<GridLine> grid_lines(const Grid<D>& grid, int axis);

/// Cell averages over a grid.
template <int D>
struct Field {
  Grid<D> grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid<D>& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  Field(const Grid<D>& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

using Field1D = Field<1>;
using Field2D = Field<2>;

Grid1D build_grid(double x_min, double x_max, int n);
Grid2D build_grid(double x_min, double x_max, int nx, double y_min, double y_max, int ny);

/// Indicator of an axis-aligned box times a constant level.
template <int D>
struct BoxIndicator {
  Point<D> lo{};
  Point<D> hi{};
  double value = 1.0;
};

/// Smooth closed-form density, averaged with a 3-point Gauss rule per axis.
template <int D>
struct SmoothDensity {
  std::function<double(const Point<D>&)> density;
};

template <int D>
using DensityTerm = std::variant<BoxIndicator<D>, SmoothDensity<D>>;

/// Initial data as a sum of terms.
template <int D>
struct InitialDensity {
  std::vector<DensityTerm<D>> terms;
};

template <int D>
struct ProjectedField {
  Field<D> field;
  std::size_t clamped = 0;  // cells where the smooth density sampled negative
};

template <int D>
ProjectedField<D> project_initial_data(const Grid<D>& grid, const InitialDensity<D>& data);

template <int D>
double total_mass(const Field<D>& field);

}  // namespace gffv
