#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "gffv/timestep.hpp"
#include "oracles.hpp"

using namespace gffv;

namespace {

ModelSpec random_smooth_model(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  ModelSpec m;
  m.internal = {PowerLawEnergy{u(gen), 1.5 + u(gen)}, 0.0};
  m.external = QuadraticPotential{u(gen)};
  m.kernel = KernelSpec{GaussianKernel{-u(gen), u(gen)}};
  return m;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// First-order upwind operator for a frozen potential, written out directly.
std::vector<double> upwind_oracle(const std::vector<double>& rho, const std::vector<double>& v, double dx) {
  const std::size_t n = rho.size();
  std::vector<double> flux(n + 1, 0.0), out(n);
  for (std::size_t f = 1; f < n; ++f) {
    const double u = -(v[f] - v[f - 1]) / dx;
    flux[f] = u > 0.0 ? u * rho[f - 1] : u * rho[f];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] = -(flux[j + 1] - flux[j]) / dx;
  return out;
}

}  // namespace

TEST_CASE("CFL bounds") {
  const Grid1D g = build_grid(0.0, 1.0, 10);
  InterfaceVelocities<1> v;
  v.u[0].assign(11, 0.0);
  CHECK(cfl_max_dt(v, g, ReconstructionOrder::Second, 0.3) == 0.3);
  v.u[0][4] = -2.0;
  v.u[0][6] = 1.0;
  CHECK(cfl_max_dt(v, g, ReconstructionOrder::Second, 1.0) == doctest::Approx(0.025));
  // first order: worst outflow u+_{j+1/2} - u-_{j-1/2}, here a single face of speed 2
  CHECK(cfl_max_dt(v, g, ReconstructionOrder::First, 1.0) == doctest::Approx(0.025));
  v.u[0][5] = 1.5;  // cell 4 now loses through both faces: 1.5 + 2
  CHECK(cfl_max_dt(v, g, ReconstructionOrder::First, 1.0) == doctest::Approx(0.1 / 7.0));

  const Grid2D g2 = build_grid(0.0, 1.0, 5, 0.0, 1.0, 5);
  InterfaceVelocities<2> v2;
  v2.u[0].assign(g2.face_count(0), 0.0);
  v2.u[1].assign(g2.face_count(1), 0.0);
  v2.u[0][3] = 1.0;
  v2.u[1][7] = -2.0;
  CHECK(cfl_max_dt(v2, g2, ReconstructionOrder::Second, 1.0) == doctest::Approx(0.025));
}

TEST_CASE("diffusive step bound") {
  const Grid1D g = build_grid(0.0, 1.0, 10);
  Field1D f(g, 0.5);
  f[3] = 2.0;
  // rho H'' = 2 nu rho^2 for m = 3: max at rho = 2 gives 8; dt = dx^2 / 16
  CHECK(diffusive_max_dt(f, {PowerLawEnergy{1.0, 3.0}, 0.0}) == doctest::Approx(0.01 / 16.0));
  CHECK(std::isinf(diffusive_max_dt(f, {NoInternalEnergy{}, 0.0})));
  const Field2D f2(build_grid(0.0, 1.0, 10, 0.0, 2.0, 10), 1.0);
  CHECK(diffusive_max_dt(f2, {LogEntropyEnergy{1.0}, 0.0}) == doctest::Approx(1.0 / (2.0 * (100.0 + 25.0))));
}

TEST_CASE("two-cell transfer") {
  const Grid1D g = build_grid(0.0, 2.0, 2);
  ModelSpec spec;
  spec.external = QuadraticPotential{0.5};  // xi = (0.125, 1.125): u = -1 at the shared face
  const DiscreteModel<1> model(g, spec, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  const Field1D f(g, std::vector<double>{1.0, 2.0});
  const LimiterParams first{2.0, ReconstructionOrder::First};
  const Field1D out = forward_euler_step(f, 0.1, model, first, StepControl{});
  CHECK(out[0] == doctest::Approx(1.2));
  CHECK(out[1] == doctest::Approx(1.8));
  CHECK_THROWS_AS(forward_euler_step(f, 0.5, model, first, StepControl{}), NumericError);
}

TEST_CASE("zero rhs leaves the state unchanged") {
  const Grid1D g = build_grid(-1.0, 1.0, 16);
  ModelSpec spec;
  spec.internal = {PowerLawEnergy{1.0, 2.0}, 0.0};
  const DiscreteModel<1> model(g, spec, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  const Field1D f(g, 0.8);
  CHECK(forward_euler_step(f, 0.01, model, LimiterParams{}, StepControl{}).values == f.values);
  const auto r = ssp_rk3_step(f, 0.01, model, LimiterParams{}, StepControl{});
  CHECK(r.halvings == 0);
  for (double v : r.field.values) CHECK(v == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("SSP-RK3 reproduces the cubic Taylor polynomial of a linear operator") {
  const Grid1D g = build_grid(-1.0, 1.0, 12);
  const double dx = g.spacing(0);
  ModelSpec spec;
  spec.external = DoubleWellPotential{};
  const DiscreteModel<1> model(g, spec, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  auto gen = oracle::rng(4);
  const auto rho = oracle::random_positive(gen, 12);
  const double dt = 0.02;
  const auto r = ssp_rk3_step(Field1D(g, rho), dt, model, LimiterParams{2.0, ReconstructionOrder::First}, StepControl{});
  REQUIRE(r.halvings == 0);
  const auto L1 = upwind_oracle(rho, model.potential, dx);
  const auto L2 = upwind_oracle(L1, model.potential, dx);
  const auto L3 = upwind_oracle(L2, model.potential, dx);
  for (int j = 0; j < 12; ++j) {
    const double taylor = rho[j] + dt * L1[j] + dt * dt / 2.0 * L2[j] + dt * dt * dt / 6.0 * L3[j];
    CHECK(r.field[j] == doctest::Approx(taylor).epsilon(1e-13));
  }
}

TEST_CASE("stage CFL violations halve the step") {
  const Grid1D g = build_grid(-1.0, 1.0, 20);
  ModelSpec spec;
  spec.external = QuadraticPotential{1.0};
  const DiscreteModel<1> model(g, spec, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  const Field1D f(g, 1.0);
  // max |u| = 1.8 so the bound is 0.9 * 0.1 / 3.6 = 0.025; 0.1 needs two halvings
  const auto r = ssp_rk3_step(f, 0.1, model, LimiterParams{}, StepControl{});
  CHECK(r.halvings == 2);
  CHECK(r.dt == doctest::Approx(0.1 / std::pow(2.0, r.halvings)));
  CHECK_FALSE(r.underflow);
  StepControl tight;
  tight.dt_floor = 0.05;
  CHECK(ssp_rk3_step(f, 0.1, model, LimiterParams{}, tight).underflow);
}

TEST_CASE("random positivity and mass conservation (1D)") {
  auto gen = oracle::rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Grid1D g = build_grid(-2.0, 2.0, 128);
    const DiscreteModel<1> model(g, random_smooth_model(gen), QuadratureRule::Midpoint, ConvolutionPath::Auto);
    const Field1D f(g, oracle::random_nonnegative(gen, 128));
    const LimiterParams lp{trial % 3 == 0 ? 1.0 + trial / 200.0 : 2.0};
    const auto ev = evaluate_scheme(f, model, lp);
    const double dt = 0.9 * cfl_max_dt(ev.velocities, g, lp.order, 1.0);
    const Field1D e = forward_euler_step(f, dt, model, lp, StepControl{});
    const auto r = ssp_rk3_step(f, dt, model, lp, StepControl{});
    REQUIRE(min_of(e.values) >= 0.0);
    REQUIRE(min_of(r.field.values) >= 0.0);
    const double m = total_mass(f);
    CHECK(std::abs(total_mass(e) - m) <= 1e-13 * m);
    CHECK(std::abs(total_mass(r.field) - m) <= 1e-13 * m);
  }
}

TEST_CASE("random positivity and mass conservation (2D)") {
  auto gen = oracle::rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Grid2D g = build_grid(-2.0, 2.0, 32, -2.0, 2.0, 32);
    const DiscreteModel<2> model(g, random_smooth_model(gen), QuadratureRule::Midpoint, ConvolutionPath::Auto);
    const Field2D f(g, oracle::random_nonnegative(gen, g.size()));
    const auto ev = evaluate_scheme(f, model, LimiterParams{});
    const double dt = 0.9 * cfl_max_dt(ev.velocities, g, ReconstructionOrder::Second, 1.0);
    const Field2D e = forward_euler_step(f, dt, model, LimiterParams{}, StepControl{});
    const auto r = ssp_rk3_step(f, dt, model, LimiterParams{}, StepControl{}, &ev);
    REQUIRE(min_of(e.values) >= 0.0);
    REQUIRE(min_of(r.field.values) >= 0.0);
    const double m = total_mass(f);
    CHECK(std::abs(total_mass(e) - m) <= 1e-13 * m);
    CHECK(std::abs(total_mass(r.field) - m) <= 1e-13 * m);
  }
}

TEST_CASE("SSP-RK3 is third order in time") {
  // data bounded away from zero, so no face is relimited; velocities keep their
  // sign except at the central face, where they vanish by symmetry
  const Grid1D g = build_grid(-1.0, 1.0, 32);
  ModelSpec spec;
  spec.internal = {PowerLawEnergy{0.05, 2.0}, 0.0};
  spec.external = QuadraticPotential{0.25};
  const DiscreteModel<1> model(g, spec, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  Field1D f0(g);
  for (int j = 0; j < 32; ++j) f0[j] = 1.0 + 0.5 * std::cos(oracle::kPi * g.center(j)[0]);
  const double T = 0.25;
  auto integrate = [&](int steps) {
    Field1D f = f0;
    for (int s = 0; s < steps; ++s) {
      const auto r = ssp_rk3_step(f, T / steps, model, LimiterParams{}, StepControl{});
      REQUIRE(r.halvings == 0);
      f = r.field;
    }
    return f;
  };
  const Field1D ref = integrate(1280);
  std::vector<double> err;
  for (int steps : {40, 80, 160}) {
    const Field1D f = integrate(steps);
    double e = 0.0;
    for (int j = 0; j < 32; ++j) e = std::max(e, std::abs(f[j] - ref[j]));
    err.push_back(e);
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(3.0).epsilon(0.1));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("state classification") {
  const Grid1D g = build_grid(0.0, 1.0, 10);
  const double dx = g.spacing(0);
  const StepControl c;
  Field1D f(g, 1.0);
  CHECK(classify_state(f, 0.0, 0.01, c, 0.5, 1.0).state == RunState::Steady);
  CHECK(classify_state(f, 1.0, 0.01, c, 0.5, 1.0).state == RunState::Running);
  CHECK(classify_state(f, 1.0, 0.01, c, 1.0, 1.0).state == RunState::Finished);
  CHECK(classify_state(f, 1.0, 1e-13, c, 0.5, 1.0).state == RunState::BlowUp);
  Field1D spike(g, 1e-3);
  spike[2] = 1e9 / dx;
  CHECK(classify_state(spike, 1.0, 0.01, c, 0.5, 1.0).state == RunState::BlowUp);
  StepControl loose = c;
  loose.blowup_mass_fraction = 1.0;
  Field1D lump(g, 0.0);
  lump[4] = 1e7;
  lump[5] = 1e7;
  CHECK(classify_state(lump, 1e6, 0.01, loose, 0.5, 1.0).state == RunState::Running);
  CHECK(classify_state(lump, 1e6, 0.01, c, 0.5, 1.0).state == RunState::BlowUp);
  CHECK(blowup_density(c, dx) == doctest::Approx(1e9));
}

TEST_CASE("step control validation") {
  StepControl c;
  CHECK_NOTHROW(validate(c));
  c.cfl_safety = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.dt_fixed = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.blowup_mass_fraction = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(parse_integrator("euler") == Integrator::ForwardEuler);
  CHECK(parse_integrator("ssprk3") == Integrator::SspRk3);
  CHECK_THROWS_AS(parse_integrator("rk4"), ConfigError);
}
