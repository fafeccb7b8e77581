#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "gffv/nonlocal.hpp"
#include "oracles.hpp"

using namespace gffv;

namespace {

KernelSpec gaussian_1d() { return KernelSpec{GaussianKernel{-1.0 / std::sqrt(2.0 * oracle::kPi), 1.0}}; }
KernelSpec quadlog() { return weighted_sum({{1.0, power_law_kernel(2.0)}, {-1.0, power_law_kernel(0.0)}}); }

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Odd cell count with centers at j*dx, covering [-2, 2].
Grid1D centered_grid(double dx) {
  const int m = static_cast<int>(std::ceil(2.0 / dx - 1e-12));
  return build_grid(-(m + 0.5) * dx, (m + 0.5) * dx, 2 * m + 1);
}

}  // namespace

TEST_CASE("weight table worked values") {
  const auto mid = build_weight_table(power_law_kernel(2.0), build_grid(0.0, 5.0, 5), QuadratureRule::Midpoint);
  CHECK(mid.w.size() == 9);
  CHECK(mid.at({2}) == doctest::Approx(2.0));
  CHECK(mid.at({-2}) == doctest::Approx(2.0));
  CHECK(mid.at({0}) == 0.0);

  const auto exact = build_weight_table(power_law_kernel(0.0), build_grid(0.0, 8.0, 4), QuadratureRule::ExactIntegral);
  CHECK(exact.at({0}) == doctest::Approx(-1.0).epsilon(1e-15));

  const auto trap = build_weight_table(power_law_kernel(2.0), build_grid(0.0, 4.0, 4), QuadratureRule::Trapezoid);
  CHECK(trap.at({2}) == doctest::Approx(0.5 * (1.5 * 1.5 / 2.0 + 2.5 * 2.5 / 2.0)));
}

TEST_CASE("weight tables are symmetric and finite") {
  const Grid1D g1 = build_grid(-2.0, 2.0, 17);
  for (auto rule : {QuadratureRule::Midpoint, QuadratureRule::Trapezoid, QuadratureRule::ExactIntegral}) {
    const auto t = build_weight_table(gaussian_1d(), g1, rule);
    for (int n = 0; n < 17; ++n) {
      CHECK(std::isfinite(t.at({n})));
      CHECK(t.at({n}) == t.at({-n}));
    }
  }
  const Grid2D g2 = build_grid(-1.0, 1.0, 8, -1.0, 1.0, 6);
  const auto t2 = build_weight_table(power_law_kernel(0.0), g2, QuadratureRule::GaussTensor4);
  for (int p = -5; p <= 5; ++p)
    for (int n = -7; n <= 7; ++n) {
      CHECK(std::isfinite(t2.at({n, p})));
      CHECK(t2.at({n, p}) == doctest::Approx(t2.at({-n, -p})).epsilon(1e-14));
    }
}

TEST_CASE("singular kernels reject point rules") {
  const Grid1D g = build_grid(-1.0, 1.0, 8);
  CHECK_THROWS_AS(build_weight_table(power_law_kernel(0.0), g, QuadratureRule::Midpoint), ConfigError);
  CHECK_THROWS_AS(build_weight_table(quadlog(), g, QuadratureRule::Trapezoid), ConfigError);
  CHECK_THROWS_AS(build_weight_table(power_law_kernel(0.0), build_grid(-1, 1, 4, -1, 1, 4), QuadratureRule::ExactIntegral),
                  ConfigError);
  CHECK_THROWS_AS(parse_quadrature_rule("simpson"), ConfigError);
}

TEST_CASE("default quadrature rules") {
  CHECK(default_quadrature(gaussian_1d(), 1) == QuadratureRule::Midpoint);
  CHECK(default_quadrature(quadlog(), 1) == QuadratureRule::ExactIntegral);
  CHECK(default_quadrature(quadlog(), 2) == QuadratureRule::GaussTensor4);
  CHECK(default_quadrature(KernelSpec{QuasiMorseKernel{}}, 1) == QuadratureRule::GaussTensor4);
}

TEST_CASE("2D Gauss tensor weights match an adaptive cell integral") {
  const Grid2D g = build_grid(-1.0, 1.0, 8, -1.0, 1.0, 8);
  const double h = g.spacing(0);
  const KernelSpec k = KernelSpec{GaussianKernel{-1.0 / oracle::kPi, 0.5}};
  const auto t = build_weight_table(k, g, QuadratureRule::GaussTensor4);
  for (auto [n, p] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{3, -2}}) {
    const double v = oracle::integrate(
        [&](double x) {
          return oracle::integrate([&](double y) { return kernel_value_2d(k, x, y); }, (p - 0.5) * h, (p + 0.5) * h);
        },
        (n - 0.5) * h, (n + 0.5) * h);
    CHECK(t.at({n, p}) == doctest::Approx(v / (h * h)).epsilon(1e-8));
  }
}

TEST_CASE("midpoint and exact tables differ by O(dx^2)") {
  std::vector<double> diff;
  for (double dx : {0.1, 0.05, 0.025}) {
    const int n = static_cast<int>(std::lround(4.0 / dx));
    const Grid1D g = build_grid(-2.0, 2.0, n);
    const auto mid = build_weight_table(gaussian_1d(), g, QuadratureRule::Midpoint);
    const auto ex = build_weight_table(gaussian_1d(), g, QuadratureRule::ExactIntegral);
    double d = 0.0;
    for (std::size_t i = 0; i < mid.w.size(); ++i) d = std::max(d, std::abs(mid.w[i] - ex.w[i]));
    diff.push_back(d);
  }
  CHECK(std::log2(diff[0] / diff[1]) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::log2(diff[1] / diff[2]) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("direct convolution: delta and zero fields") {
  const Grid1D g = build_grid(0.0, 2.0, 20);
  const double dx = g.spacing(0);
  const auto t = build_weight_table(gaussian_1d(), g, QuadratureRule::Midpoint);
  std::vector<double> delta(20, 0.0);
  delta[7] = 1.0 / dx;
  const auto s = convolve_direct(t, std::span<const double>(delta));
  for (int j = 0; j < 20; ++j) CHECK(s[j] == doctest::Approx(t.at({j - 7})).epsilon(1e-14));
  const auto f = convolve_fft(t, std::span<const double>(delta));
  for (int j = 0; j < 20; ++j) CHECK(f[j] == doctest::Approx(t.at({j - 7})).epsilon(1e-12));

  const std::vector<double> zero(20, 0.0);
  for (double v : convolve_direct(t, std::span<const double>(zero))) CHECK(v == 0.0);
  for (double v : convolve_fft(t, std::span<const double>(zero))) CHECK(v == 0.0);

  const Grid2D g2 = build_grid(0.0, 1.0, 6, 0.0, 1.0, 5);
  const auto t2 = build_weight_table(power_law_kernel(2.0), g2, QuadratureRule::Midpoint);
  std::vector<double> d2(30, 0.0);
  d2[g2.flatten({2, 3})] = 1.0 / g2.cell_volume();
  const auto s2 = convolve_direct(t2, std::span<const double>(d2));
  const auto f2 = convolve_fft(t2, std::span<const double>(d2));
  for (std::size_t c = 0; c < 30; ++c) {
    const auto idx = g2.unflatten(c);
    CHECK(s2[c] == doctest::Approx(t2.at({idx[0] - 2, idx[1] - 3})).epsilon(1e-14));
    CHECK(f2[c] == doctest::Approx(t2.at({idx[0] - 2, idx[1] - 3})).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("FFT and direct convolution agree on random fields") {
  auto gen = oracle::rng(2024);
  for (int n : {16, 64, 256}) {
    const Grid1D g = build_grid(-3.0, 3.0, n);
    for (const KernelSpec& k : {gaussian_1d(), quadlog(), KernelSpec{TentKernel{}}}) {
      const auto t = build_weight_table(k, g, default_quadrature(k, 1));
      const auto v = oracle::random_nonnegative(gen, g.size());
      CHECK(rel_diff(convolve_fft(t, std::span<const double>(v)), convolve_direct(t, std::span<const double>(v))) <= 1e-12);
    }
  }
  const Grid2D g = build_grid(-1.5, 1.5, 32, -1.5, 1.5, 32);
  for (const KernelSpec& k : {quadlog(), KernelSpec{GaussianKernel{-1.0 / oracle::kPi, 0.5}}}) {
    const auto t = build_weight_table(k, g, default_quadrature(k, 2));
    const auto v = oracle::random_nonnegative(gen, g.size());
    CHECK(rel_diff(convolve_fft(t, std::span<const double>(v)), convolve_direct(t, std::span<const double>(v))) <= 1e-12);
  }
}

TEST_CASE("convolution is linear and self-adjoint") {
  auto gen = oracle::rng(5);
  const Grid1D g = build_grid(-2.0, 2.0, 50);
  const auto t = build_weight_table(quadlog(), g, QuadratureRule::ExactIntegral);
  const auto f = oracle::random_nonnegative(gen, 50);
  const auto h = oracle::random_nonnegative(gen, 50);
  const auto kf = convolve_direct(t, std::span<const double>(f));
  const auto kh = convolve_direct(t, std::span<const double>(h));
  CHECK(dot(kf, h) == doctest::Approx(dot(f, kh)).epsilon(1e-12));

  std::vector<double> comb(50);
  for (int i = 0; i < 50; ++i) comb[i] = 2.0 * f[i] - 0.5 * h[i];
  const auto kc = convolve_fft(t, std::span<const double>(comb));
  for (int i = 0; i < 50; ++i) CHECK(kc[i] == doctest::Approx(2.0 * kf[i] - 0.5 * kh[i]).epsilon(1e-11).scale(1.0));

  const Grid2D g2 = build_grid(-1.0, 1.0, 12, -1.0, 1.0, 10);
  const auto t2 = build_weight_table(quadlog(), g2, QuadratureRule::GaussTensor4);
  const auto f2 = oracle::random_nonnegative(gen, g2.size());
  const auto h2 = oracle::random_nonnegative(gen, g2.size());
  CHECK(dot(convolve_direct(t2, std::span<const double>(f2)), h2) ==
        doctest::Approx(dot(f2, convolve_direct(t2, std::span<const double>(h2)))).epsilon(1e-12));
}

TEST_CASE("transform sizes") {
  CHECK(fft_friendly_size(1) == 1);
  CHECK(fft_friendly_size(11) == 12);
  CHECK(fft_friendly_size(127) == 128);
  CHECK(fft_friendly_size(211) == 216);
  const auto t = build_weight_table(gaussian_1d(), build_grid(0.0, 1.0, 100), QuadratureRule::Midpoint);
  CHECK(FftConvolver<1>(t).padded_shape()[0] >= 199);
}

TEST_CASE("engine path selection") {
  const auto small = build_weight_table(gaussian_1d(), build_grid(0.0, 1.0, 100), QuadratureRule::Midpoint);
  const auto large = build_weight_table(gaussian_1d(), build_grid(0.0, 1.0, 200), QuadratureRule::Midpoint);
  CHECK_FALSE(ConvolutionEngine<1>(small, ConvolutionPath::Auto).uses_fft());
  CHECK(ConvolutionEngine<1>(large, ConvolutionPath::Auto).uses_fft());
  CHECK(ConvolutionEngine<1>(small, ConvolutionPath::Fft).uses_fft());
  CHECK_FALSE(ConvolutionEngine<1>(large, ConvolutionPath::Direct).uses_fft());
}

TEST_CASE("assemble_xi worked values") {
  const Grid1D g = build_grid(0.0, 1.0, 10);
  ModelSpec local;
  local.internal = {PowerLawEnergy{1.0, 2.0}, 0.0};
  const DiscreteModel<1> m1(g, local, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  for (double v : assemble_xi(m1, Field1D(g, 0.7))) CHECK(v == doctest::Approx(0.7));

  ModelSpec kern;
  kern.kernel = gaussian_1d();
  const DiscreteModel<1> m2(g, kern, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  Field1D delta(g, 0.0);
  delta[4] = 1.0 / g.spacing(0);
  const auto xi = assemble_xi(m2, delta);
  const auto& table = m2.interaction->table();
  for (int j = 0; j < 10; ++j) CHECK(xi[j] == doctest::Approx(table.at({j - 4})).epsilon(1e-14));

  ModelSpec full;
  full.internal = {PowerLawEnergy{2.0, 3.0}, 0.1};
  full.external = DoubleWellPotential{};
  full.kernel = gaussian_1d();
  const DiscreteModel<1> m3(g, full, QuadratureRule::Midpoint, ConvolutionPath::Direct);
  auto gen = oracle::rng(3);
  const Field1D f(g, oracle::random_nonnegative(gen, 10));
  const auto conv = convolve_direct(table, f);
  const auto xi3 = assemble_xi(m3, f);
  for (int j = 0; j < 10; ++j) {
    const double x = g.center(j)[0];
    const double want = conv[j] + 2.0 * f[j] * f[j] + 0.1 * f[j] + x * x * x * x / 4.0 - x * x / 2.0;
    CHECK(xi3[j] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("projected quadlog steady state has nearly flat xi") {
  // rho_inf = sqrt(2 - x^2) / pi is the minimizer for W = x^2/2 - log|x|
  const double dx = std::sqrt(2.0) / 200.0;
  const Grid1D g = centered_grid(dx);
  Field1D f(g, 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double a = g.axes[0].face(static_cast<int>(j));
    const double b = a + dx;
    const double lo = std::max(a, -std::sqrt(2.0)), hi = std::min(b, std::sqrt(2.0));
    if (hi > lo) f[j] = oracle::integrate([](double x) { return std::sqrt(std::max(0.0, 2.0 - x * x)) / oracle::kPi; }, lo, hi) / dx;
  }
  ModelSpec spec;
  spec.kernel = quadlog();
  const DiscreteModel<1> model(g, spec, QuadratureRule::ExactIntegral, ConvolutionPath::Auto);
  const auto xi = assemble_xi(model, f);
  double jump = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j)
    if (f[j] > 1e-3 && f[j + 1] > 1e-3) jump = std::max(jump, std::abs(xi[j + 1] - xi[j]));
  // measured 0.00825 dx; frozen with margin
  CHECK(jump <= 0.01 * dx);
}

TEST_CASE("table CSV dump") {
  const auto t = build_weight_table(power_law_kernel(2.0), build_grid(0.0, 3.0, 3), QuadratureRule::Midpoint);
  CHECK_THROWS_AS(dump_weight_table_csv(t, "/nonexistent-dir/x.csv"), IoError);
}
