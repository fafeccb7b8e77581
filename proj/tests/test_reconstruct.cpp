#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "gffv/reconstruct.hpp"
#include "oracles.hpp"

using namespace gffv;

namespace {

ReconstructedStates<1> rec(std::vector<double> v, double theta = 2.0,
                           ReconstructionOrder order = ReconstructionOrder::Second) {
  const Grid1D g = build_grid(0.0, static_cast<double>(v.size()), static_cast<int>(v.size()));
  return reconstruct_states(Field1D(g, std::move(v)), LimiterParams{theta, order});
}

}  // namespace

TEST_CASE("minmod") {
  CHECK(minmod(1, 2, 3) == 1);
  CHECK(minmod(-1, -2, -3) == -1);
  CHECK(minmod(1, -2, 3) == 0);
  CHECK(minmod(0, 2, 3) == 0);
  CHECK(minmod(5, 0.5, 3) == 0.5);
}

TEST_CASE("constant field reconstructs to constant faces") {
  const auto s = rec({2.5, 2.5, 2.5, 2.5});
  for (int j = 0; j < 4; ++j) {
    CHECK(s.low[0][j] == 2.5);
    CHECK(s.high[0][j] == 2.5);
  }
}

TEST_CASE("isolated peak keeps a zero centered slope") {
  const auto s = rec({0.0, 1.0, 0.0});
  CHECK(s.low[0][1] == 1.0);
  CHECK(s.high[0][1] == 1.0);
}

TEST_CASE("negative face triggers theta-minmod relimiting") {
  const auto s = rec({0.0, 0.1, 4.0});
  CHECK(s.low[0][1] == doctest::Approx(0.0).scale(1.0));
  CHECK(s.high[0][1] == doctest::Approx(0.2));
  CHECK(s.low[0][1] >= 0.0);
}

TEST_CASE("first order returns the cell averages") {
  const std::vector<double> v{0.0, 0.3, 4.0, 1.0, 0.0};
  const auto s = rec(v, 2.0, ReconstructionOrder::First);
  for (std::size_t j = 0; j < v.size(); ++j) {
    CHECK(s.low[0][j] == v[j]);
    CHECK(s.high[0][j] == v[j]);
  }
  const Grid2D g = build_grid(0.0, 1.0, 4, 0.0, 1.0, 3);
  auto gen = oracle::rng(1);
  const Field2D f(g, oracle::random_nonnegative(gen, g.size()));
  const auto s2 = reconstruct_states(f, LimiterParams{2.0, ReconstructionOrder::First});
  for (int a = 0; a < 2; ++a)
    for (std::size_t c = 0; c < g.size(); ++c) {
      CHECK(s2.low[a][c] == f[c]);
      CHECK(s2.high[a][c] == f[c]);
    }
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(rec({1.0, -0.1, 1.0}), NumericError);
  CHECK_THROWS_AS(rec({1.0, NAN, 1.0}), NumericError);
  CHECK_THROWS_AS(validate(LimiterParams{0.5}), ConfigError);
  CHECK_THROWS_AS(validate(LimiterParams{2.5}), ConfigError);
  CHECK_NOTHROW(validate(LimiterParams{1.0}));
}

TEST_CASE("random fields: faces nonnegative and mean consistent (1D)") {
  auto gen = oracle::rng(77);
  std::uniform_int_distribution<int> size(3, 1000);
  std::uniform_real_distribution<double> th(1.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    const double theta = trial % 4 == 0 ? 2.0 : th(gen);
    const Grid1D g = build_grid(-1.0, 1.0, n);
    const Field1D f(g, oracle::random_nonnegative(gen, n, 0.5));
    const auto s = reconstruct_states(f, LimiterParams{theta});
    for (int j = 0; j < n; ++j) {
      REQUIRE(s.low[0][j] >= 0.0);
      REQUIRE(s.high[0][j] >= 0.0);
      REQUIRE(s.low[0][j] + s.high[0][j] == doctest::Approx(2.0 * f[j]).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("random fields: faces nonnegative and mean consistent (2D)") {
  auto gen = oracle::rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid2D g = build_grid(0.0, 1.0, 3 + trial % 29, 0.0, 2.0, 2 + trial % 17);
    const Field2D f(g, oracle::random_nonnegative(gen, g.size(), 0.5));
    const auto s = reconstruct_states(f, LimiterParams{1.0 + (trial % 5) * 0.25});
    for (int a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < g.size(); ++c) {
        REQUIRE(s.low[a][c] >= 0.0);
        REQUIRE(s.high[a][c] >= 0.0);
        REQUIRE(s.low[a][c] + s.high[a][c] == doctest::Approx(2.0 * f[c]).epsilon(1e-14).scale(1.0));
      }
  }
}

TEST_CASE("smooth data: face values are second order") {
  std::vector<double> err;
  for (int n : {40, 80, 160, 320}) {
    const Grid1D g = build_grid(0.0, 2.0 * oracle::kPi, n);
    const double h = g.spacing(0);
    Field1D f(g);
    for (int j = 0; j < n; ++j) {
      const double a = g.axes[0].face(j);
      f[j] = 2.0 + (std::cos(a) - std::cos(a + h)) / h;  // exact average of sin(x) + 2
    }
    const auto s = reconstruct_states(f, LimiterParams{});
    double e = 0.0;
    for (int j = 1; j + 1 < n; ++j) e = std::max(e, std::abs(s.high[0][j] - (std::sin(g.axes[0].face(j + 1)) + 2.0)));
    err.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) CHECK(std::log2(err[k] / err[k + 1]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("2D limiting is per direction") {
  // x-direction is smooth, y-direction has a sharp drop to zero
  const Grid2D g = build_grid(0.0, 3.0, 3, 0.0, 3.0, 3);
  Field2D f(g);
  const double rows[3][3] = {{0.0, 0.0, 0.0}, {1.0, 1.1, 1.2}, {5.0, 5.0, 5.0}};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) f[g.flatten({j, k})] = rows[k][j];
  const auto s = reconstruct_states(f, LimiterParams{});
  const std::size_t mid = g.flatten({1, 1});
  CHECK(s.low[0][mid] == doctest::Approx(1.05));
  CHECK(s.high[0][mid] == doctest::Approx(1.15));
  // centered y slope 2.5 gives a negative S face; minmod(2.2, 2.5, 7.8) = 2.2
  CHECK(s.low[1][mid] == doctest::Approx(0.0).scale(1.0));
  CHECK(s.high[1][mid] == doctest::Approx(2.2));
}
