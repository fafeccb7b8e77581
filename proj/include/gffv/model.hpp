#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace gffv {

// ---------------------------------------------------------------------------
// Internal energy H

struct NoInternalEnergy {};

/// H(rho) = (nu / m) rho^m.
struct PowerLawEnergy {
  double nu = 1.0;
  double m = 2.0;
};

/// H(rho) = nu (rho log rho - rho).
struct LogEntropyEnergy {
  double nu = 1.0;
};

struct InternalEnergySpec {
  std::variant<NoInternalEnergy, PowerLawEnergy, LogEntropyEnergy> law;
  /// Quadratic regularization: adds (epsilon/2) rho^2 to H and epsilon rho to H'.
  double epsilon = 0.0;
};

/// Density below which LogEntropy's H' is evaluated at the floor instead.
inline constexpr double kLogEntropyFloor = 1e-30;

double internal_energy_derivative(const InternalEnergySpec& spec, double rho);
double internal_energy_value(const InternalEnergySpec& spec, double rho);
/// rho * H''(rho): the diffusion coefficient of the local part of the flux.
double internal_energy_diffusivity(const InternalEnergySpec& spec, double rho);

// ---------------------------------------------------------------------------
// Confinement V

struct NoPotential {};
/// V = c |x|^2.
struct QuadraticPotential {
  double c = 1.0;
};
/// V = x^4/4 - x^2/2, one-dimensional only.
struct DoubleWellPotential {};
/// V = -c log|x|.
struct LogConfinementPotential {
  double c = 1.0;
};
/// V = |x|^2 / 2.
struct QuadraticHalfPotential {};

using ExternalPotentialSpec =
    std::variant<NoPotential, QuadraticPotential, DoubleWellPotential, LogConfinementPotential,
                 QuadraticHalfPotential>;

double external_potential_value(const ExternalPotentialSpec& spec, std::span<const double> point);
bool is_present(const ExternalPotentialSpec& spec);

// ---------------------------------------------------------------------------
// Interaction kernel W. Every variant is radial, so W(x) = W(-x).

/// W = |x|^a / a, and log|x| when a == 0.
struct PowerLawKernel {
  double a = 2.0;
};
/// W = amplitude * exp(-|x|^2 / (2 sigma)).
struct GaussianKernel {
  double amplitude = 1.0;
  double sigma = 1.0;
};
/// W = amplitude * exp(-|x| / length).
struct ExponentialKernel {
  double amplitude = 1.0;
  double length = 1.0;
};
/// W = -(1 - |x|)_+.
struct TentKernel {};
/// W = C exp(-|x| / length) - exp(-|x|).
struct MorseKernel {
  double C = 1.0;
  double length = 1.0;
};
/// W = lambda (V_B(|x|) - C V_B(|x| / length)) with V_B(r) = -K0(k r) / (2 pi).
struct QuasiMorseKernel {
  double lambda = 1.0;
  double C = 1.0;
  double length = 1.0;
  double k = 1.0;
};

struct KernelTerm;
struct WeightedSumKernel {
  std::vector<KernelTerm> terms;
};

struct KernelSpec {
  std::variant<PowerLawKernel, GaussianKernel, ExponentialKernel, TentKernel, MorseKernel,
               QuasiMorseKernel, WeightedSumKernel>
      form;
};

struct KernelTerm {
  double coefficient = 1.0;
  KernelSpec kernel;
};

/// Radial evaluation W(r), r >= 0.
double kernel_value(const KernelSpec& spec, double r);
/// W at a 1D displacement.
double kernel_value_1d(const KernelSpec& spec, double x);
/// W at a 2D displacement.
double kernel_value_2d(const KernelSpec& spec, double x, double y);

bool singular_at_origin(const KernelSpec& spec);
bool has_exact_cell_average(const KernelSpec& spec);

/// (1/dx) * integral of W over the cell centered at n*dx, using closed-form
/// antiderivatives. The n == 0 cell is integrated as an improper integral.
double kernel_cell_average_1d(const KernelSpec& spec, long n, double dx);

/// Modified Bessel function of the second kind, order zero.
double bessel_k0(double r);

/// Checks parameter ranges that would make the kernel meaningless on a
/// `dimension`-dimensional domain (e.g. non-integrable power laws).
void validate_kernel(const KernelSpec& spec, int dimension);

// ---------------------------------------------------------------------------

struct ModelSpec {
  InternalEnergySpec internal;
  ExternalPotentialSpec external;
  std::optional<KernelSpec> kernel;
};

bool has_internal_energy(const InternalEnergySpec& spec);

// Convenience constructors used by presets and tests.
KernelSpec power_law_kernel(double a);
KernelSpec weighted_sum(std::vector<KernelTerm> terms);

}  // namespace gffv
