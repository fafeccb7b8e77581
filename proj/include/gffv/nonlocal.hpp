#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gffv/mesh.hpp"
#include "gffv/model.hpp"

namespace gffv {

enum class QuadratureRule { Midpoint, Trapezoid, ExactIntegral, GaussTensor4 };

std::string to_string(QuadratureRule rule);
QuadratureRule parse_quadrature_rule(const std::string& name);

/// Kernel coefficients W_{j-i} for every cell offset that fits in the grid.
/// Offsets run over -(n-1)..(n-1) per axis; storage is row-major with the
/// x offset fastest.
template <int D>
struct WeightTable {
  std::array<int, D> cells{};  // n per axis
  std::array<double, D> spacing{};
  QuadratureRule rule = QuadratureRule::Midpoint;
  std::vector<double> w;

  std::size_t extent(int axis) const { return 2 * static_cast<std::size_t>(cells[axis]) - 1; }
  std::size_t index(const std::array<int, D>& offset) const {
    std::size_t idx = static_cast<std::size_t>(offset[0] + cells[0] - 1);
    if constexpr (D == 2) idx += static_cast<std::size_t>(offset[1] + cells[1] - 1) * extent(0);
    return idx;
  }
  double at(const std::array<int, D>& offset) const { return w[index(offset)]; }
  double cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
  }
};

template <int D>
WeightTable<D> build_weight_table(const KernelSpec& kernel, const Grid<D>& grid, QuadratureRule rule);

/// s_j = vol * sum_i w[j - i] f_i, evaluated by the O(N^2) double sum.
template <int D>
std::vector<double> convolve_direct(const WeightTable<D>& table, std::span<const double> values);

template <int D>
std::vector<double> convolve_direct(const WeightTable<D>& table, const Field<D>& field) {
  return convolve_direct(table, std::span<const double>(field.values));
}

/// Zero-padded FFT evaluation of the same discrete convolution. The table's
/// spectrum is computed once at construction.
template <int D>
class FftConvolver {
 public:
  explicit FftConvolver(const WeightTable<D>& table);
  ~FftConvolver();
  FftConvolver(FftConvolver&&) noexcept;
  FftConvolver& operator=(FftConvolver&&) noexcept;
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;

  std::vector<double> apply(std::span<const double> values) const;
  std::array<std::size_t, D> padded_shape() const { return padded_; }

 private:
  struct Plans;
  std::array<int, D> cells_{};
  std::array<std::size_t, D> padded_{};
  double volume_ = 1.0;
  std::vector<std::complex<double>> kernel_spectrum_;
  std::unique_ptr<Plans> plans_;
};

template <int D>
std::vector<double> convolve_fft(const WeightTable<D>& table, std::span<const double> values) {
  return FftConvolver<D>(table).apply(values);
}

template <int D>
std::vector<double> convolve_fft(const WeightTable<D>& table, const Field<D>& field) {
  return convolve_fft(table, std::span<const double>(field.values));
}

/// Smallest transform length >= n whose only prime factors are 2, 3, 5, 7.
std::size_t fft_friendly_size(std::size_t n);

enum class ConvolutionPath { Auto, Direct, Fft };

std::string to_string(ConvolutionPath path);
ConvolutionPath parse_convolution_path(const std::string& name);

/// Total cell count from which Auto switches to the FFT path.
inline constexpr std::size_t kFftCrossover = 128;

/// Weight table plus the chosen evaluation path; built once per run.
template <int D>
class ConvolutionEngine {
 public:
  ConvolutionEngine(WeightTable<D> table, ConvolutionPath path);

  std::vector<double> apply(std::span<const double> values) const;
  const WeightTable<D>& table() const { return table_; }
  bool uses_fft() const { return fft_.has_value(); }

 private:
  WeightTable<D> table_;
  std::optional<FftConvolver<D>> fft_;
};

/// A model bound to a grid: point values of V and the interaction engine.
template <int D>
struct DiscreteModel {
  Grid<D> grid;
  ModelSpec spec;
  std::vector<double> potential;  // V at cell centers, empty when V is absent
  std::shared_ptr<const ConvolutionEngine<D>> interaction;

  DiscreteModel(const Grid<D>& g, ModelSpec m, QuadratureRule rule, ConvolutionPath path);

  /// Nonlocal term Δx Σ W_{j-i} ρ_i (zero when the model has no kernel).
  std::vector<double> interaction_potential(std::span<const double> values) const;
};

/// ξ_j = convolution + H'(ρ_j) + V_j.
template <int D>
std::vector<double> assemble_xi(const DiscreteModel<D>& model, const Field<D>& field);

/// Default rule for a kernel: Midpoint when smooth, ExactIntegral for 1D
/// singular kernels with antiderivatives, GaussTensor4 otherwise.
QuadratureRule default_quadrature(const KernelSpec& kernel, int dimension);

/// Writes "offset,weight" (1D) or "offset_x,offset_y,weight" (2D) rows.
template <int D>
void dump_weight_table_csv(const WeightTable<D>& table, const std::string& path);

}  // namespace gffv
