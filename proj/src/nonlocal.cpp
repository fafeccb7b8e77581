#include "gffv/nonlocal.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>

namespace gffv {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::array<double, 4> kGauss4Nodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                                0.8611363115940526};
constexpr std::array<double, 4> kGauss4Weights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                  0.3478548451374538};

double gauss4_average_1d(const KernelSpec& k, double center, double h) {
  double sum = 0.0;
  for (int q = 0; q < 4; ++q) sum += 0.5 * kGauss4Weights[q] * kernel_value_1d(k, center + 0.5 * h * kGauss4Nodes[q]);
  return sum;
}

double gauss4_average_2d(const KernelSpec& k, double cx, double cy, double hx, double hy) {
  double sum = 0.0;
  for (int q = 0; q < 4; ++q) {
    for (int r = 0; r < 4; ++r) {
      sum += 0.25 * kGauss4Weights[q] * kGauss4Weights[r] *
             kernel_value_2d(k, cx + 0.5 * hx * kGauss4Nodes[q], cy + 0.5 * hy * kGauss4Nodes[r]);
    }
  }
  return sum;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

}  // namespace

std::string to_string(QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::Midpoint: return "midpoint";
    case QuadratureRule::Trapezoid: return "trapezoid";
    case QuadratureRule::ExactIntegral: return "exact";
    case QuadratureRule::GaussTensor4: return "gauss4";
  }
  return "?";
}

QuadratureRule parse_quadrature_rule(const std::string& name) {
  if (name == "midpoint") return QuadratureRule::Midpoint;
  if (name == "trapezoid") return QuadratureRule::Trapezoid;
  if (name == "exact") return QuadratureRule::ExactIntegral;
  if (name == "gauss4") return QuadratureRule::GaussTensor4;
  throw ConfigError("unknown quadrature rule '" + name + "' (expected midpoint|trapezoid|exact|gauss4)");
}

std::string to_string(ConvolutionPath path) {
  switch (path) {
    case ConvolutionPath::Auto: return "auto";
    case ConvolutionPath::Direct: return "direct";
    case ConvolutionPath::Fft: return "fft";
  }
  return "?";
}

ConvolutionPath parse_convolution_path(const std::string& name) {
  if (name == "auto") return ConvolutionPath::Auto;
  if (name == "direct") return ConvolutionPath::Direct;
  if (name == "fft") return ConvolutionPath::Fft;
  throw ConfigError("unknown convolution path '" + name + "' (expected auto|direct|fft)");
}

QuadratureRule default_quadrature(const KernelSpec& kernel, int dimension) {
  if (!singular_at_origin(kernel)) return QuadratureRule::Midpoint;
  if (dimension == 1 && has_exact_cell_average(kernel)) return QuadratureRule::ExactIntegral;
  return QuadratureRule::GaussTensor4;
}

template <int D>
WeightTable<D> build_weight_table(const KernelSpec& kernel, const Grid<D>& grid, QuadratureRule rule) {
  validate_kernel(kernel, D);
  const bool singular = singular_at_origin(kernel);
  if (singular && (rule == QuadratureRule::Midpoint || rule == QuadratureRule::Trapezoid)) {
    throw ConfigError("quadrature: " + to_string(rule) + " rule cannot be used with a kernel singular at the origin");
  }
  if (rule == QuadratureRule::ExactIntegral && (D != 1 || !has_exact_cell_average(kernel))) {
    throw ConfigError("quadrature: exact cell averages are only available for 1D closed-form kernels");
  }

  WeightTable<D> t;
  for (int a = 0; a < D; ++a) {
    t.cells[a] = grid.axes[a].n;
    t.spacing[a] = grid.spacing(a);
  }
  t.rule = rule;
  std::size_t total = 1;
  for (int a = 0; a < D; ++a) total *= t.extent(a);
  t.w.assign(total, 0.0);

  if constexpr (D == 1) {
    const double h = t.spacing[0];
    for (int n = 0; n < t.cells[0]; ++n) {
      double v = 0.0;
      switch (rule) {
        case QuadratureRule::Midpoint: v = kernel_value_1d(kernel, n * h); break;
        case QuadratureRule::Trapezoid:
          v = 0.5 * (kernel_value_1d(kernel, (n - 0.5) * h) + kernel_value_1d(kernel, (n + 0.5) * h));
          break;
        case QuadratureRule::ExactIntegral: v = kernel_cell_average_1d(kernel, n, h); break;
        case QuadratureRule::GaussTensor4: v = gauss4_average_1d(kernel, n * h, h); break;
      }
      if (!std::isfinite(v)) throw NumericError("weight table: non-finite weight at offset " + std::to_string(n));
      t.w[t.index({n})] = v;
      t.w[t.index({-n})] = v;
    }
  } else {
    const double hx = t.spacing[0];
    const double hy = t.spacing[1];
    const int nx = t.cells[0];
    const int ny = t.cells[1];
    std::vector<double> quadrant(static_cast<std::size_t>(nx) * ny);
#pragma omp parallel for schedule(static)
    for (int p = 0; p < ny; ++p) {
      for (int n = 0; n < nx; ++n) {
        double v = 0.0;
        const double x = n * hx;
        const double y = p * hy;
        switch (rule) {
          case QuadratureRule::Midpoint: v = kernel_value_2d(kernel, x, y); break;
          case QuadratureRule::Trapezoid:
            v = 0.25 * (kernel_value_2d(kernel, x - 0.5 * hx, y - 0.5 * hy) +
                        kernel_value_2d(kernel, x + 0.5 * hx, y - 0.5 * hy) +
                        kernel_value_2d(kernel, x - 0.5 * hx, y + 0.5 * hy) +
                        kernel_value_2d(kernel, x + 0.5 * hx, y + 0.5 * hy));
            break;
          case QuadratureRule::ExactIntegral: break;  // rejected above
          case QuadratureRule::GaussTensor4: v = gauss4_average_2d(kernel, x, y, hx, hy); break;
        }
        quadrant[static_cast<std::size_t>(p) * nx + n] = v;
      }
    }
    for (int p = 0; p < ny; ++p) {
      for (int n = 0; n < nx; ++n) {
        const double v = quadrant[static_cast<std::size_t>(p) * nx + n];
        if (!std::isfinite(v)) throw NumericError("weight table: non-finite weight");
        t.w[t.index({n, p})] = v;
        t.w[t.index({-n, p})] = v;
        t.w[t.index({n, -p})] = v;
        t.w[t.index({-n, -p})] = v;
      }
    }
  }
  return t;
}

template <int D>
std::vector<double> convolve_direct(const WeightTable<D>& table, std::span<const double> values) {
  const double vol = table.cell_volume();
  if constexpr (D == 1) {
    const int n = table.cells[0];
    if (values.size() != static_cast<std::size_t>(n)) throw NumericError("convolve: size mismatch");
    std::vector<double> out(n, 0.0);
    const double* w0 = table.w.data() + (n - 1);  // w0[d] = w[d], d in -(n-1)..(n-1)
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w0[j - i] * values[i];
      out[j] = vol * s;
    }
    return out;
  } else {
    const int nx = table.cells[0];
    const int ny = table.cells[1];
    if (values.size() != static_cast<std::size_t>(nx) * ny) throw NumericError("convolve: size mismatch");
    std::vector<double> out(values.size(), 0.0);
    const std::size_t ex = table.extent(0);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < ny; ++k) {
      for (int j = 0; j < nx; ++j) {
        double s = 0.0;
        for (int l = 0; l < ny; ++l) {
          const double* row = table.w.data() + static_cast<std::size_t>(k - l + ny - 1) * ex + (nx - 1) + j;
          const double* f = values.data() + static_cast<std::size_t>(l) * nx;
          for (int i = 0; i < nx; ++i) s += row[-i] * f[i];
        }
        out[static_cast<std::size_t>(k) * nx + j] = vol * s;
      }
    }
    return out;
  }
}

std::size_t fft_friendly_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

// ---------------------------------------------------------------------------

template <int D>
struct FftConvolver<D>::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

template <int D>
FftConvolver<D>::FftConvolver(const WeightTable<D>& table) : cells_(table.cells), volume_(table.cell_volume()) {
  for (int a = 0; a < D; ++a) padded_[a] = fft_friendly_size(table.extent(a));
  const std::size_t real_size = D == 1 ? padded_[0] : padded_[0] * padded_[1];
  const std::size_t half_x = padded_[0] / 2 + 1;
  const std::size_t complex_size = D == 1 ? half_x : half_x * padded_[1];

  FftwBuffer real(sizeof(double) * real_size);
  FftwBuffer spec(sizeof(fftw_complex) * complex_size);
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(spec.ptr);

  plans_ = std::make_unique<Plans>();
  {
    std::lock_guard lock(planner_mutex());
    if constexpr (D == 1) {
      const int n = static_cast<int>(padded_[0]);
      plans_->forward = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE);
      plans_->backward = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE);
    } else {
      const int n0 = static_cast<int>(padded_[1]);  // slow axis (y)
      const int n1 = static_cast<int>(padded_[0]);  // fast axis (x)
      plans_->forward = fftw_plan_dft_r2c_2d(n0, n1, r, c, FFTW_ESTIMATE);
      plans_->backward = fftw_plan_dft_c2r_2d(n0, n1, c, r, FFTW_ESTIMATE);
    }
  }
  if (!plans_->forward || !plans_->backward) throw NumericError("fft: plan creation failed");

  // Wrap the table so that offset d sits at index d mod L.
  std::fill(r, r + real_size, 0.0);
  if constexpr (D == 1) {
    const long L = static_cast<long>(padded_[0]);
    for (int d = -(cells_[0] - 1); d < cells_[0]; ++d) r[(d + L) % L] = table.at({d});
  } else {
    const long Lx = static_cast<long>(padded_[0]);
    const long Ly = static_cast<long>(padded_[1]);
    for (int p = -(cells_[1] - 1); p < cells_[1]; ++p)
      for (int d = -(cells_[0] - 1); d < cells_[0]; ++d) r[((p + Ly) % Ly) * Lx + (d + Lx) % Lx] = table.at({d, p});
  }
  fftw_execute_dft_r2c(plans_->forward, r, c);
  kernel_spectrum_.resize(complex_size);
  for (std::size_t i = 0; i < complex_size; ++i) kernel_spectrum_[i] = {c[i][0], c[i][1]};
}

template <int D>
FftConvolver<D>::~FftConvolver() = default;
template <int D>
FftConvolver<D>::FftConvolver(FftConvolver&&) noexcept = default;
template <int D>
FftConvolver<D>& FftConvolver<D>::operator=(FftConvolver&&) noexcept = default;

template <int D>
std::vector<double> FftConvolver<D>::apply(std::span<const double> values) const {
  std::size_t n_cells = 1;
  for (int a = 0; a < D; ++a) n_cells *= static_cast<std::size_t>(cells_[a]);
  if (values.size() != n_cells) throw NumericError("convolve: size mismatch");

  const std::size_t real_size = D == 1 ? padded_[0] : padded_[0] * padded_[1];
  FftwBuffer real(sizeof(double) * real_size);
  FftwBuffer spec(sizeof(fftw_complex) * kernel_spectrum_.size());
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(spec.ptr);

  std::fill(r, r + real_size, 0.0);
  if constexpr (D == 1) {
    std::copy(values.begin(), values.end(), r);
  } else {
    for (int k = 0; k < cells_[1]; ++k)
      std::copy_n(values.data() + static_cast<std::size_t>(k) * cells_[0], cells_[0], r + k * padded_[0]);
  }
  fftw_execute_dft_r2c(plans_->forward, r, c);
  for (std::size_t i = 0; i < kernel_spectrum_.size(); ++i) {
    const std::complex<double> z = std::complex<double>(c[i][0], c[i][1]) * kernel_spectrum_[i];
    c[i][0] = z.real();
    c[i][1] = z.imag();
  }
  fftw_execute_dft_c2r(plans_->backward, c, r);

  const double scale = volume_ / static_cast<double>(real_size);
  std::vector<double> out(n_cells);
  if constexpr (D == 1) {
    for (std::size_t j = 0; j < n_cells; ++j) out[j] = scale * r[j];
  } else {
    for (int k = 0; k < cells_[1]; ++k)
      for (int j = 0; j < cells_[0]; ++j)
        out[static_cast<std::size_t>(k) * cells_[0] + j] = scale * r[k * padded_[0] + j];
  }
  return out;
}

// ---------------------------------------------------------------------------

template <int D>
ConvolutionEngine<D>::ConvolutionEngine(WeightTable<D> table, ConvolutionPath path) : table_(std::move(table)) {
  std::size_t n = 1;
  for (int a = 0; a < D; ++a) n *= static_cast<std::size_t>(table_.cells[a]);
  const bool fft = path == ConvolutionPath::Fft || (path == ConvolutionPath::Auto && n >= kFftCrossover);
  if (fft) fft_.emplace(table_);
}

template <int D>
std::vector<double> ConvolutionEngine<D>::apply(std::span<const double> values) const {
  return fft_ ? fft_->apply(values) : convolve_direct(table_, values);
}

template <int D>
DiscreteModel<D>::DiscreteModel(const Grid<D>& g, ModelSpec m, QuadratureRule rule, ConvolutionPath path)
    : grid(g), spec(std::move(m)) {
  if (is_present(spec.external)) {
    potential.resize(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const Point<D> x = grid.center(c);
      potential[c] = external_potential_value(spec.external, x);
    }
  }
  if (spec.kernel) {
    interaction = std::make_shared<const ConvolutionEngine<D>>(build_weight_table(*spec.kernel, grid, rule), path);
  }
}

template <int D>
std::vector<double> DiscreteModel<D>::interaction_potential(std::span<const double> values) const {
  if (!interaction) return std::vector<double>(values.size(), 0.0);
  return interaction->apply(values);
}

template <int D>
std::vector<double> assemble_xi(const DiscreteModel<D>& model, const Field<D>& field) {
  std::vector<double> xi = model.interaction_potential(field.values);
  for (std::size_t c = 0; c < xi.size(); ++c) {
    xi[c] += internal_energy_derivative(model.spec.internal, field.values[c]);
    if (!model.potential.empty()) xi[c] += model.potential[c];
  }
  return xi;
}

template <int D>
void dump_weight_table_csv(const WeightTable<D>& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path);
  out << std::setprecision(17);
  if constexpr (D == 1) {
    out << "offset,weight\n";
    for (int d = -(table.cells[0] - 1); d < table.cells[0]; ++d) out << d << ',' << table.at({d}) << '\n';
  } else {
    out << "offset_x,offset_y,weight\n";
    for (int p = -(table.cells[1] - 1); p < table.cells[1]; ++p)
      for (int d = -(table.cells[0] - 1); d < table.cells[0]; ++d)
        out << d << ',' << p << ',' << table.at({d, p}) << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

template struct WeightTable<1>;
template struct WeightTable<2>;
template WeightTable<1> build_weight_table(const KernelSpec&, const Grid<1>&, QuadratureRule);
template WeightTable<2> build_weight_table(const KernelSpec&, const Grid<2>&, QuadratureRule);
template std::vector<double> convolve_direct(const WeightTable<1>&, std::span<const double>);
template std::vector<double> convolve_direct(const WeightTable<2>&, std::span<const double>);
template class FftConvolver<1>;
template class FftConvolver<2>;
template class ConvolutionEngine<1>;
template class ConvolutionEngine<2>;
template struct DiscreteModel<1>;
template struct DiscreteModel<2>;
template std::vector<double> assemble_xi(const DiscreteModel<1>&, const Field<1>&);
template std::vector<double> assemble_xi(const DiscreteModel<2>&, const Field<2>&);
template void dump_weight_table_csv(const WeightTable<1>&, const std::string&);
template void dump_weight_table_csv(const WeightTable<2>&, const std::string&);

}  // namespace gffv
