#include "gffv/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gffv/mesh.hpp"

namespace gffv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sign(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

// Antiderivative G with G(0) = 0 and G' = W on the real line.
double antiderivative(const KernelSpec& spec, double s) {
  return std::visit(
      overloaded{
          [&](const PowerLawKernel& k) -> double {
            if (s == 0.0) return 0.0;
            if (k.a == 0.0) return s * std::log(std::abs(s)) - s;
            return sign(s) * std::pow(std::abs(s), k.a + 1.0) / (k.a * (k.a + 1.0));
          },
          [&](const GaussianKernel& k) -> double {
            return k.amplitude * std::sqrt(std::numbers::pi * k.sigma / 2.0) *
                   std::erf(s / std::sqrt(2.0 * k.sigma));
          },
          [&](const ExponentialKernel& k) -> double {
            return k.amplitude * sign(s) * k.length * -std::expm1(-std::abs(s) / k.length);
          },
          [&](const TentKernel&) -> double {
            const double u = std::min(std::abs(s), 1.0);
            return -sign(s) * (u - 0.5 * u * u);
          },
          [&](const MorseKernel& k) -> double {
            const double r = std::abs(s);
            return sign(s) * (k.C * k.length * -std::expm1(-r / k.length) + std::expm1(-r));
          },
          [&](const QuasiMorseKernel&) -> double {
            throw ConfigError("kernel: quasi_morse has no closed-form cell average");
          },
          [&](const WeightedSumKernel& k) -> double {
            double total = 0.0;
            for (const auto& term : k.terms) total += term.coefficient * antiderivative(term.kernel, s);
            return total;
          },
      },
      spec.form);
}

double bessel_k0_series(double x) {
  // K0(x) = -(log(x/2) + gamma) I0(x) + sum_k (x^2/4)^k / (k!)^2 * H_k
  const double q = 0.25 * x * x;
  double term = 1.0;
  double i0 = 1.0;
  double tail = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += term * harmonic;
    if (term < 1e-18 * i0) break;
  }
  return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail;
}

double bessel_k0_integral(double x) {
  // K0(x) = int_0^inf exp(-x cosh t) dt; the trapezoid rule converges
  // geometrically in the step for this entire integrand.
  constexpr double h = 0.125;
  double sum = 0.5 * std::exp(-x);
  for (int k = 1; k < 400; ++k) {
    const double f = std::exp(-x * std::cosh(k * h));
    sum += f;
    if (f < 1e-18 * sum) break;
  }
  return h * sum;
}

}  // namespace

// ---------------------------------------------------------------------------

double internal_energy_derivative(const InternalEnergySpec& spec, double rho) {
  const double base = std::visit(overloaded{
                                     [](const NoInternalEnergy&) { return 0.0; },
                                     [&](const PowerLawEnergy& h) {
                                       return rho > 0.0 ? h.nu * std::pow(rho, h.m - 1.0) : 0.0;
                                     },
                                     [&](const LogEntropyEnergy& h) {
                                       return h.nu * std::log(std::max(rho, kLogEntropyFloor));
                                     },
                                 },
                                 spec.law);
  return base + spec.epsilon * rho;
}

double internal_energy_value(const InternalEnergySpec& spec, double rho) {
  const double base = std::visit(overloaded{
                                     [](const NoInternalEnergy&) { return 0.0; },
                                     [&](const PowerLawEnergy& h) {
                                       return rho > 0.0 ? h.nu / h.m * std::pow(rho, h.m) : 0.0;
                                     },
                                     [&](const LogEntropyEnergy& h) {
                                       return rho > 0.0 ? h.nu * (rho * std::log(rho) - rho) : 0.0;
                                     },
                                 },
                                 spec.law);
  return base + 0.5 * spec.epsilon * rho * rho;
}

double internal_energy_diffusivity(const InternalEnergySpec& spec, double rho) {
  const double base = std::visit(overloaded{
                                     [](const NoInternalEnergy&) { return 0.0; },
                                     [&](const PowerLawEnergy& h) {
                                       return rho > 0.0 ? h.nu * (h.m - 1.0) * std::pow(rho, h.m - 1.0) : 0.0;
                                     },
                                     [&](const LogEntropyEnergy& h) { return h.nu; },
                                 },
                                 spec.law);
  return base + spec.epsilon * rho;
}

bool has_internal_energy(const InternalEnergySpec& spec) {
  return !std::holds_alternative<NoInternalEnergy>(spec.law) || spec.epsilon != 0.0;
}

double external_potential_value(const ExternalPotentialSpec& spec, std::span<const double> point) {
  double r2 = 0.0;
  for (double c : point) r2 += c * c;
  return std::visit(overloaded{
                        [](const NoPotential&) { return 0.0; },
                        [&](const QuadraticPotential& v) { return v.c * r2; },
                        [&](const DoubleWellPotential&) {
                          if (point.size() != 1) throw ConfigError("potential: double_well is one-dimensional");
                          const double x2 = point[0] * point[0];
                          return 0.25 * x2 * x2 - 0.5 * x2;
                        },
                        [&](const LogConfinementPotential& v) {
                          if (r2 == 0.0) throw NumericError("potential: log_confinement evaluated at the origin");
                          return -v.c * 0.5 * std::log(r2);
                        },
                        [&](const QuadraticHalfPotential&) { return 0.5 * r2; },
                    },
                    spec);
}

bool is_present(const ExternalPotentialSpec& spec) { return !std::holds_alternative<NoPotential>(spec); }

// ---------------------------------------------------------------------------

double kernel_value(const KernelSpec& spec, double r) {
  r = std::abs(r);
  return std::visit(
      overloaded{
          [&](const PowerLawKernel& k) -> double {
            if (r == 0.0 && k.a <= 0.0) throw NumericError("kernel: power law evaluated at its singularity");
            if (k.a == 0.0) return std::log(r);
            return std::pow(r, k.a) / k.a;
          },
          [&](const GaussianKernel& k) { return k.amplitude * std::exp(-r * r / (2.0 * k.sigma)); },
          [&](const ExponentialKernel& k) { return k.amplitude * std::exp(-r / k.length); },
          [&](const TentKernel&) { return -std::max(1.0 - r, 0.0); },
          [&](const MorseKernel& k) { return k.C * std::exp(-r / k.length) - std::exp(-r); },
          [&](const QuasiMorseKernel& k) -> double {
            if (r == 0.0) throw NumericError("kernel: quasi_morse evaluated at its singularity");
            const double vb1 = -bessel_k0(k.k * r) / (2.0 * std::numbers::pi);
            const double vb2 = -bessel_k0(k.k * r / k.length) / (2.0 * std::numbers::pi);
            return k.lambda * (vb1 - k.C * vb2);
          },
          [&](const WeightedSumKernel& k) {
            double total = 0.0;
            for (const auto& term : k.terms) total += term.coefficient * kernel_value(term.kernel, r);
            return total;
          },
      },
      spec.form);
}

double kernel_value_1d(const KernelSpec& spec, double x) { return kernel_value(spec, std::abs(x)); }

double kernel_value_2d(const KernelSpec& spec, double x, double y) { return kernel_value(spec, std::hypot(x, y)); }

bool singular_at_origin(const KernelSpec& spec) {
  return std::visit(overloaded{
                        [](const PowerLawKernel& k) { return k.a <= 0.0; },
                        [](const QuasiMorseKernel&) { return true; },
                        [](const WeightedSumKernel& k) {
                          for (const auto& t : k.terms)
                            if (t.coefficient != 0.0 && singular_at_origin(t.kernel)) return true;
                          return false;
                        },
                        [](const auto&) { return false; },
                    },
                    spec.form);
}

bool has_exact_cell_average(const KernelSpec& spec) {
  return std::visit(overloaded{
                        [](const QuasiMorseKernel&) { return false; },
                        [](const WeightedSumKernel& k) {
                          for (const auto& t : k.terms)
                            if (!has_exact_cell_average(t.kernel)) return false;
                          return true;
                        },
                        [](const auto&) { return true; },
                    },
                    spec.form);
}

double kernel_cell_average_1d(const KernelSpec& spec, long n, double dx) {
  validate_kernel(spec, 1);
  if (!has_exact_cell_average(spec)) throw ConfigError("kernel: no closed-form cell average for this kernel");
  const double hi = (static_cast<double>(n) + 0.5) * dx;
  const double lo = (static_cast<double>(n) - 0.5) * dx;
  return (antiderivative(spec, hi) - antiderivative(spec, lo)) / dx;
}

double bessel_k0(double r) {
  if (!(r > 0.0)) throw NumericError("bessel_k0: argument must be positive");
  return r <= 2.0 ? bessel_k0_series(r) : bessel_k0_integral(r);
}

void validate_kernel(const KernelSpec& spec, int dimension) {
  std::visit(overloaded{
                 [&](const PowerLawKernel& k) {
                   if (!(k.a > -dimension))
                     throw ConfigError("kernel: power_law exponent a=" + std::to_string(k.a) +
                                       " is not locally integrable in dimension " + std::to_string(dimension));
                 },
                 [](const GaussianKernel& k) {
                   if (!(k.sigma > 0.0)) throw ConfigError("kernel: gaussian sigma must be positive");
                 },
                 [](const ExponentialKernel& k) {
                   if (!(k.length > 0.0)) throw ConfigError("kernel: exponential length must be positive");
                 },
                 [](const TentKernel&) {},
                 [](const MorseKernel& k) {
                   if (!(k.length > 0.0)) throw ConfigError("kernel: morse length must be positive");
                 },
                 [](const QuasiMorseKernel& k) {
                   if (!(k.length > 0.0) || !(k.k > 0.0))
                     throw ConfigError("kernel: quasi_morse length and k must be positive");
                 },
                 [&](const WeightedSumKernel& k) {
                   if (k.terms.empty()) throw ConfigError("kernel: weighted sum needs at least one term");
                   for (const auto& t : k.terms) validate_kernel(t.kernel, dimension);
                 },
             },
             spec.form);
}

KernelSpec power_law_kernel(double a) { return KernelSpec{PowerLawKernel{a}}; }

KernelSpec weighted_sum(std::vector<KernelTerm> terms) { return KernelSpec{WeightedSumKernel{std::move(terms)}}; }

}  // namespace gffv
