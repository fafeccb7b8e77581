#include "gffv/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace gffv {

namespace {

constexpr double kPi = std::numbers::pi;

KernelSpec quadratic_minus_log(double log_coefficient) {
  return weighted_sum({{1.0, power_law_kernel(2.0)}, {-log_coefficient, power_law_kernel(0.0)}});
}

KernelSpec quadratic_minus_abs() {
  return weighted_sum({{1.0, power_law_kernel(2.0)}, {-1.0, power_law_kernel(1.0)}});
}

int cells(double n) {
  const double r = std::round(n);
  if (std::abs(r - n) > 1e-9 || r < 2) throw ConfigError("scenario: cell count must be an integer >= 2");
  return static_cast<int>(r);
}

void set_line(SimConfig& c, double half_width, double n) {
  c.grid.dim = 1;
  c.grid.x = {-half_width, half_width};
  c.grid.nx = cells(n);
}

void set_square(SimConfig& c, double half_width, double n) {
  c.grid.dim = 2;
  c.grid.x = {-half_width, half_width};
  c.grid.y = {-half_width, half_width};
  c.grid.nx = c.grid.ny = cells(n);
}

PowerLawEnergy power(const ScenarioParams& p) { return PowerLawEnergy{p.at("nu"), p.at("m")}; }

/// Two Gaussians e^{-4(x +- 2)^2} or a single e^{-x^2}, total mass set by "mass".
void gks_initial(SimConfig& c, const ScenarioParams& p) {
  if (p.at("bumps") == 2.0) {
    c.initial.gaussians = {{0.5, {-2.0, 0.0}, 0.125}, {0.5, {2.0, 0.0}, 0.125}};
  } else if (p.at("bumps") == 1.0) {
    c.initial.gaussians = {{1.0, {0.0, 0.0}, 0.5}};
  } else {
    throw ConfigError("bumps: must be 1 or 2");
  }
  c.initial.mass = p.at("mass");
}

SimConfig gks_common(const ScenarioParams& p) {
  SimConfig c;
  set_line(c, p.at("half_width"), p.at("n"));
  c.model.internal.law = power(p);
  if (p.at("alpha") == 0.0) {
    c.model.kernel = power_law_kernel(0.0);
  } else {
    c.model.kernel = power_law_kernel(p.at("alpha"));
  }
  gks_initial(c, p);
  c.t_end = p.at("t_end");
  c.step.blowup_mass_fraction = p.at("blowup_fraction");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

using Builder = SimConfig (*)(const ScenarioParams&);

struct Entry {
  ScenarioInfo info;
  Builder build;
};

SimConfig build_quadlog_1d(const ScenarioParams& p) {
  SimConfig c;
  // Cell centers at j * dx with dx = sqrt(2)/k, so x = +-sqrt(2) are centers.
  const double dx = std::sqrt(2.0) / p.at("k");
  const long half = static_cast<long>(std::ceil(p.at("half_width") / dx - 0.5));
  c.grid.dim = 1;
  c.grid.x = {-(half + 0.5) * dx, (half + 0.5) * dx};
  c.grid.nx = static_cast<int>(2 * half + 1);
  c.model.kernel = quadratic_minus_log(1.0);
  c.initial.gaussians = {{1.0, {0.0, 0.0}, 1.0}};
  c.initial.mass = 1.0;
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

SimConfig build_aggdiff_gauss_1d(const ScenarioParams& p) {
  SimConfig c;
  set_line(c, p.at("half_width"), p.at("n"));
  c.model.internal.law = power(p);
  const double sigma = p.at("sigma");
  c.model.kernel = KernelSpec{GaussianKernel{-1.0 / std::sqrt(2.0 * kPi * sigma), sigma}};
  const double x0 = p.at("center");
  if (x0 == 0.0) {
    c.initial.gaussians = {{1.0, {0.0, 0.0}, 1.0}};
  } else {
    c.initial.gaussians = {{0.5, {-x0, 0.0}, 1.0}, {0.5, {x0, 0.0}, 1.0}};
  }
  c.initial.mass = 1.0;
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

SimConfig build_tent_merge_1d(const ScenarioParams& p) {
  SimConfig c;
  set_line(c, p.at("half_width"), p.at("n"));
  c.model.internal.law = power(p);
  c.model.kernel = KernelSpec{TentKernel{}};
  const double b = p.at("box");
  c.initial.boxes = {{{-b, 0.0}, {b, 0.0}, 1.0}};
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

SimConfig build_doublewell_1d(const ScenarioParams& p) {
  SimConfig c;
  set_line(c, p.at("half_width"), p.at("n"));
  c.model.internal.law = power(p);
  c.model.external = DoubleWellPotential{};
  c.initial.gaussians = {{1.0, {p.at("x_c"), 0.0}, p.at("variance")}};
  c.initial.mass = p.at("mass");
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

SimConfig build_gks(const ScenarioParams& p) { return gks_common(p); }

SimConfig build_gks_selfsim_1d(const ScenarioParams& p) {
  SimConfig c = gks_common(p);
  c.model.external = QuadraticHalfPotential{};
  c.step.steady_tol = p.at("steady_tol");
  return c;
}

SimConfig build_quadnewton_1d(const ScenarioParams& p) {
  // Half-width h with x = +-1 a fraction `edge_offset` of a cell inside the
  // boundary cell of the support: (h - 1) / dx = n / 4 + offset.
  const double n = p.at("n");
  const double offset = p.at("edge_offset");
  if (!(offset >= 0.0 && offset < 1.0)) throw ConfigError("quadnewton_1d: edge_offset must lie in [0, 1)");
  if (!(n >= 8.0)) throw ConfigError("quadnewton_1d: n must be at least 8");
  SimConfig c;
  set_line(c, 0.5 * n / (0.25 * n - offset), n);
  c.model.kernel = quadratic_minus_abs();
  c.quadrature = p.at("midpoint") != 0.0 ? QuadratureRule::Midpoint : QuadratureRule::ExactIntegral;
  c.epsilon_scale = p.at("epsilon_scale");
  c.initial.gaussians = {{1.0, {0.0, 0.0}, p.at("variance")}};
  c.initial.mass = 1.0;
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 20.0;
  return c;
}

SimConfig build_aggdiff_2d(const ScenarioParams& p) {
  SimConfig c;
  set_square(c, p.at("half_width"), p.at("n"));
  c.model.internal.law = power(p);
  c.model.kernel = KernelSpec{GaussianKernel{-1.0 / kPi, 0.5}};
  const double b = p.at("box");
  c.initial.boxes = {{{-b, -b}, {b, b}, p.at("level")}};
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 10.0;
  c.snapshot_format = SnapshotFormat::CsvAndBinary;
  return c;
}

SimConfig build_quadlog_2d(const ScenarioParams& p) {
  SimConfig c;
  set_square(c, p.at("half_width"), p.at("n"));
  c.model.kernel = quadratic_minus_log(1.0);
  c.epsilon_scale = p.at("epsilon_scale");
  c.initial.gaussians = {{1.0, {0.0, 0.0}, p.at("variance")}};
  c.initial.mass = 1.0;
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 10.0;
  c.snapshot_format = SnapshotFormat::CsvAndBinary;
  return c;
}

SimConfig build_mill_2d(const ScenarioParams& p) {
  SimConfig c;
  set_square(c, p.at("half_width"), p.at("n"));
  if (p.at("quasi_morse") != 0.0) {
    c.model.kernel = KernelSpec{QuasiMorseKernel{100.0, 10.0 / 9.0, 0.75, 0.5}};
  } else {
    c.model.kernel = quadratic_minus_log(1.0 / (2.0 * kPi));
  }
  c.model.external = LogConfinementPotential{p.at("alpha") / p.at("beta")};
  c.epsilon_scale = p.at("epsilon_scale");
  c.initial.gaussians = {{1.0, {0.0, 0.0}, p.at("variance")}};
  c.initial.mass = p.at("mass");
  c.t_end = p.at("t_end");
  c.step.steady_tol = p.at("steady_tol");
  c.snapshot_interval = c.t_end / 10.0;
  c.snapshot_format = SnapshotFormat::CsvAndBinary;
  return c;
}

std::vector<ScenarioParam> gks_params(double m, double mass, double t_end) {
  return {{"nu", 1.0, "diffusion coefficient"},
          {"m", m, "diffusion exponent"},
          {"alpha", -0.5, "kernel exponent, W = |x|^alpha / alpha"},
          {"mass", mass, "total mass"},
          {"bumps", 2.0, "2: e^{-4(x+-2)^2} pair, 1: e^{-x^2}"},
          {"n", 160.0, "cells"},
          {"half_width", 4.0, "domain [-h, h]"},
          {"t_end", t_end, "final time"},
          {"blowup_fraction", 0.45, "mass fraction in one cell that counts as blow-up"}};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> e;
    e.push_back({{"quadlog_1d",
                  "W = |x|^2/2 - log|x|, standard Gaussian data; steady state (1/pi) sqrt(2 - x^2)",
                  {{"k", 40.0, "dx = sqrt(2)/k"},
                   {"half_width", 2.0, "domain covers [-h, h]"},
                   {"t_end", 200.0, "final time"},
                   {"steady_tol", 1e-9, "relative residual for Steady"}},
                  "k"},
                 build_quadlog_1d});
    e.push_back({{"aggdiff_gauss_1d",
                  "H = nu rho^m / m with attractive Gaussian W; two Gaussian bumps at +-center",
                  {{"nu", 1.48, "diffusion coefficient"},
                   {"m", 3.0, "diffusion exponent"},
                   {"sigma", 1.0, "kernel variance"},
                   {"center", 3.0, "bump centers +-center (0: one centered bump)"},
                   {"n", 600.0, "cells"},
                   {"half_width", 6.0, "domain [-h, h]"},
                   {"t_end", 400.0, "final time"},
                   {"steady_tol", 1e-9, "relative residual for Steady"}},
                  "n"},
                 build_aggdiff_gauss_1d});
    e.push_back({{"tent_merge_1d",
                  "H = nu rho^m / m with W = -(1 - |x|)_+, box data chi_[-b, b]",
                  {{"nu", 0.05, "diffusion coefficient"},
                   {"m", 3.0, "diffusion exponent"},
                   {"box", 3.0, "initial box half width"},
                   {"n", 240.0, "cells"},
                   {"half_width", 6.0, "domain [-h, h]"},
                   {"t_end", 400.0, "final time"},
                   {"steady_tol", 1e-9, "relative residual for Steady"}},
                  "n"},
                 build_tent_merge_1d});
    e.push_back({{"doublewell_1d",
                  "H = nu rho^m / m with V = x^4/4 - x^2/2, Gaussian data centered at x_c",
                  {{"nu", 1.0, "diffusion coefficient"},
                   {"m", 2.0, "diffusion exponent"},
                   {"mass", 0.1, "total mass"},
                   {"variance", 0.2, "initial variance"},
                   {"x_c", 0.0, "initial center"},
                   {"n", 200.0, "cells"},
                   {"half_width", 2.0, "domain [-h, h]"},
                   {"t_end", 20.0, "final time"},
                   {"steady_tol", 1e-12, "relative residual for Steady"}},
                  "n"},
                 build_doublewell_1d});
    e.push_back({{"gks_balanced_1d", "Keller-Segel type, m + alpha = 1, two-bump data", gks_params(1.5, 0.057, 3000.0),
                  "n"},
                 build_gks});
    {
      std::vector<ScenarioParam> ps = gks_params(1.5, 0.025, 20.0);
      ps[4].value = 1.0;  // single bump
      ps[5].value = 320.0;
      ps.push_back({"steady_tol", 1e-12, "relative residual for Steady"});
      e.push_back({{"gks_selfsim_1d", "balanced Keller-Segel type in similarity variables, V = |x|^2/2", ps, "n"},
                   build_gks_selfsim_1d});
    }
    e.push_back({{"gks_diffusion_1d", "Keller-Segel type with m = 1.6, alpha = -0.5, M = 0.057",
                  gks_params(1.6, 0.057, 1000.0), "n"},
                 build_gks});
    e.push_back({{"gks_aggregation_1d", "Keller-Segel type with m = 1.6, alpha = -0.5, M = 0.048",
                  gks_params(1.6, 0.048, 1000.0), "n"},
                 build_gks});
    e.push_back({{"quadnewton_1d",
                  "W = |x|^2/2 - |x|; steady state 1/2 on [-1, 1]",
                  {{"n", 80.0, "cells"},
                   {"edge_offset", 1.0 / 3.0, "position of x = +-1 inside its cell (0: on a face)"},
                   {"midpoint", 0.0, "1: midpoint weights, 0: exact cell integrals"},
                   {"epsilon_scale", 0.0, "epsilon = epsilon_scale * dx^2"},
                   {"variance", 1.0, "initial variance"},
                   {"t_end", 100.0, "final time"},
                   {"steady_tol", 1e-9, "relative residual for Steady"}},
                  "n"},
                 build_quadnewton_1d});
    e.push_back({{"aggdiff_2d",
                  "H = nu rho^m / m with W = -exp(-|x|^2)/pi, data level * chi of a square",
                  {{"nu", 0.1, "diffusion coefficient"},
                   {"m", 3.0, "diffusion exponent"},
                   {"box", 3.0, "initial square half width"},
                   {"level", 0.25, "initial level"},
                   {"n", 80.0, "cells per axis"},
                   {"half_width", 4.0, "domain [-h, h]^2"},
                   {"t_end", 50.0, "final time"},
                   {"steady_tol", 1e-8, "relative residual for Steady"}},
                  "n"},
                 build_aggdiff_2d});
    e.push_back({{"quadlog_2d",
                  "W = |x|^2/2 - log|x| in 2D with epsilon regularization; steady state 1/pi on the unit disk",
                  {{"n", 64.0, "cells per axis"},
                   {"half_width", 1.5, "domain [-h, h]^2"},
                   {"epsilon_scale", 0.4, "epsilon = epsilon_scale (dx^2 + dy^2)"},
                   {"variance", 0.25, "initial variance"},
                   {"t_end", 200.0, "final time"},
                   {"steady_tol", 1e-7, "relative residual for Steady"}},
                  "n"},
                 build_quadlog_2d});
    e.push_back({{"mill_2d",
                  "rotating mill: W = |x|^2/2 - log|x|/(2 pi), V = -(alpha/beta) log|x|",
                  {{"n", 40.0, "cells per axis (even)"},
                   {"half_width", 1.0, "domain [-h, h]^2"},
                   {"alpha", 0.25, "self-propulsion"},
                   {"beta", 2.0 * kPi, "friction"},
                   {"mass", 1.0, "total mass"},
                   {"epsilon_scale", 0.2, "epsilon = epsilon_scale (dx^2 + dy^2)"},
                   {"quasi_morse", 0.0, "1: quasi-Morse kernel instead"},
                   {"variance", 0.1, "initial variance"},
                   {"t_end", 40.0, "final time"},
                   {"steady_tol", 1e-7, "relative residual for Steady"}},
                  "n"},
                 build_mill_2d});
    return e;
  }();
  return table;
}

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : entries()) {
    if (e.info.name == name) return e;
  }
  std::string known;
  for (const Entry& e : entries()) known += (known.empty() ? "" : ", ") + e.info.name;
  throw ConfigError("scenario: unknown name '" + name + "' (known: " + known + ")");
}

}  // namespace

bool ScenarioInfo::has_param(const std::string& key) const {
  for (const ScenarioParam& p : params) {
    if (p.name == key) return true;
  }
  return false;
}

double ScenarioInfo::default_value(const std::string& key) const {
  for (const ScenarioParam& p : params) {
    if (p.name == key) return p.value;
  }
  throw ConfigError("scenario '" + name + "' has no parameter '" + key + "'");
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ScenarioInfo& find_scenario(const std::string& name) { return find_entry(name).info; }

ScenarioParams resolve_params(const std::string& name, const ScenarioParams& overrides) {
  const ScenarioInfo& info = find_scenario(name);
  ScenarioParams out;
  for (const ScenarioParam& p : info.params) out[p.name] = p.value;
  for (const auto& [key, value] : overrides) {
    if (!info.has_param(key)) throw ConfigError(key + ": not a parameter of scenario '" + name + "'");
    if (!std::isfinite(value)) throw ConfigError(key + ": must be finite");
    out[key] = value;
  }
  return out;
}

SimConfig build_scenario(const std::string& name, const ScenarioParams& overrides) {
  const Entry& entry = find_entry(name);
  const ScenarioParams params = resolve_params(name, overrides);
  SimConfig c = entry.build(params);
  c.name = name;
  validate(c);
  return c;
}

std::optional<std::function<double(double, double)>> closed_form_reference(const std::string& name,
                                                                           const ScenarioParams& overrides) {
  const ScenarioParams p = resolve_params(name, overrides);
  if (name == "quadlog_1d") {
    return [](double x, double) { return x * x < 2.0 ? std::sqrt(2.0 - x * x) / kPi : 0.0; };
  }
  if (name == "quadnewton_1d") {
    return [](double x, double) { return std::abs(x) < 1.0 ? 0.5 : 0.0; };
  }
  if (name == "quadlog_2d") {
    return [](double x, double y) { return x * x + y * y < 1.0 ? 1.0 / kPi : 0.0; };
  }
  if (name == "mill_2d" && p.at("quasi_morse") == 0.0) {
    // Density 2M on the annulus R0^2 = alpha/(beta M) <= r^2 <= R0^2 + 1/(2 pi).
    const double mass = p.at("mass");
    const double r0 = p.at("alpha") / (p.at("beta") * mass);
    const double r1 = r0 + 1.0 / (2.0 * kPi);
    return [=](double x, double y) {
      const double r2 = x * x + y * y;
      return r2 >= r0 && r2 <= r1 ? 2.0 * mass : 0.0;
    };
  }
  return std::nullopt;
}

}  // namespace gffv
