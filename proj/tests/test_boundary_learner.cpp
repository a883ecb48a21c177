#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <vector>

#include "ablearn/boundary_learner.hpp"
#include "doctest.h"

using namespace ablearn;

namespace {

// random polynomial of degree <= deg mapping [0,1] into [0.05, 0.95]; exactness
// oracle for the interpolation operator
struct UnitPoly {
  std::vector<double> coeffs;

  static UnitPoly random(int deg, SplitMix64& rng) {
    UnitPoly p;
    p.coeffs.resize(static_cast<std::size_t>(deg) + 1);
    for (auto& c : p.coeffs) c = 2.0 * rng.next_double() - 1.0;
    // rescale range into [0.05, 0.95] (affine maps keep the degree)
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 1000; ++i) {
      const double v = p.raw(i / 1000.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const double scale = 0.9 / span;
    const double shift = 0.05 - scale * lo;
    for (auto& c : p.coeffs) c *= scale;
    p.coeffs[0] += shift;
    return p;
  }

  double raw(double x) const {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
  }
  double operator()(double x) const { return raw(x); }
};

std::vector<double> poly_node_values(const GridSpec& grid, const UnitPoly& p) {
  std::vector<double> values(grid.node_count());
  for (std::uint64_t i = 0; i < grid.node_count(); ++i)
    values[i] = p(grid.node_point(i)[0]);
  return values;
}

BoundaryLabeler noiseless_boundary_labeler(const SmoothBoundary& g) {
  return {g.dim, g.eval, {ConstantProfile{0.0}}, 1.0, 0.0};
}

}  // namespace

TEST_CASE("build_grid pins M and guards the node count") {
  CHECK(build_grid(0.01, 1, 2).m == 100);
  CHECK(build_grid(0.01, 2, 2).m == 10);
  CHECK(build_grid(0.3, 3, 2).m == 3);
  CHECK(build_grid(0.05, 2, 2).m == 6);
  CHECK(build_grid(0.01, 2, 2).node_count() == 10);
  CHECK(build_grid(0.01, 1, 3).node_count() == 10000);
  CHECK_THROWS_AS(build_grid(0.0001, 1, 4), std::invalid_argument);  // 10^12 nodes
  CHECK_THROWS_AS(build_grid(1.5, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.1, 0, 2), std::invalid_argument);
}

TEST_CASE("lagrange basis: cardinal property and the pinned value") {
  // d = 2, gamma = 1, M = 2: cell 0 has nodes {0, 1/2}
  GridSpec grid{2, 1, 2};
  const std::array<int, 1> cell{0};
  const std::array<int, 1> node0{0};
  const std::array<int, 1> node1{1};
  const std::array<double, 1> x{0.25};
  CHECK(lagrange_basis(grid, cell, node0, x) == doctest::Approx(0.5));
  const std::array<double, 1> at0{0.0};
  const std::array<double, 1> at_half{0.5};
  CHECK(lagrange_basis(grid, cell, node0, at0) == doctest::Approx(1.0));
  CHECK(lagrange_basis(grid, cell, node0, at_half) == doctest::Approx(0.0));
  CHECK(lagrange_basis(grid, cell, node1, at_half) == doctest::Approx(1.0));

  // node outside the cell stencil is rejected
  GridSpec g4{4, 1, 2};
  const std::array<int, 1> far{3};
  CHECK_THROWS_AS(lagrange_basis(g4, cell, far, x), std::invalid_argument);
}

TEST_CASE("interpolation: constants, the pinned linear value, missing nodes") {
  GridSpec grid{2, 1, 2};
  const std::array<int, 1> cell{0};
  const std::array<double, 1> x{0.25};
  std::vector<double> values{0.2, 0.6};
  CHECK(interpolate_cell(values, grid, cell, x) == doctest::Approx(0.4));

  std::vector<double> constant{0.7, 0.7};
  SplitMix64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const std::array<double, 1> p{rng.next_double()};
    CHECK(interpolate_cell(constant, grid, cell, p) == doctest::Approx(0.7));
  }

  std::vector<double> missing{0.2, std::nan("")};
  CHECK_THROWS_AS(interpolate_cell(missing, grid, cell, x), std::invalid_argument);
}

TEST_CASE("partition of unity per cell") {
  SplitMix64 rng(31);
  for (int gamma : {1, 2, 3}) {
    const GridSpec grid = build_grid(0.01, gamma, 2);
    std::vector<double> ones(grid.node_count(), 1.0);
    for (int q = 0; q < grid.cells_per_axis(); ++q) {
      const std::array<int, 1> cell{q};
      for (int rep = 0; rep < 20; ++rep) {
        const double lo = static_cast<double>(q) * gamma / grid.m;
        const std::array<double, 1> x{lo + rng.next_double() * gamma / grid.m};
        CHECK(interpolate_cell(ones, grid, cell, x) == doctest::Approx(1.0).epsilon(1e-9));
        // sum the basis explicitly as well
        double sum = 0.0;
        const int s = grid.stencil_start(q);
        for (int j = 0; j < grid.stencil_size(); ++j) {
          const std::array<int, 1> node{s + j};
          sum += lagrange_basis(grid, cell, node, x);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("interpolation reproduces degree <= gamma polynomials") {
  SplitMix64 rng(47);
  for (int gamma : {1, 2, 3}) {
    const GridSpec grid = build_grid(gamma == 1 ? 0.1 : (gamma == 2 ? 0.01 : 0.004), gamma, 2);
    for (int rep = 0; rep < 5; ++rep) {
      const UnitPoly poly = UnitPoly::random(gamma, rng);
      PiecewiseBoundary recon{grid, poly_node_values(grid, poly)};
      for (int i = 0; i < 200; ++i) {
        const std::array<double, 1> x{rng.next_double()};
        const double want = poly(x[0]);
        CHECK(std::abs(recon.eval(x) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("evaluation at lattice nodes returns the stored value") {
  SplitMix64 rng(59);
  const GridSpec grid = build_grid(0.02, 2, 2);
  std::vector<double> values(grid.node_count());
  for (auto& v : values) v = rng.next_double();
  PiecewiseBoundary recon{grid, values};
  for (std::uint64_t i = 0; i < grid.node_count(); ++i) {
    const auto p = grid.node_point(i);
    CHECK(recon.eval(p) == doctest::Approx(values[i]).epsilon(1e-9));
  }
}

TEST_CASE("cell ownership sends faces to the smaller cell") {
  GridSpec grid{8, 2, 2};  // faces at 0, 1/4, 1/2, 3/4, 1
  CHECK(grid.owning_cell(0.0) == 0);
  CHECK(grid.owning_cell(0.1) == 0);
  CHECK(grid.owning_cell(0.25) == 0);
  CHECK(grid.owning_cell(0.26) == 1);
  CHECK(grid.owning_cell(0.5) == 1);
  CHECK(grid.owning_cell(1.0) == 3);
}

TEST_CASE("clamping never increases the error against values in [0, 1]") {
  SplitMix64 rng(61);
  for (int i = 0; i < 1000; ++i) {
    const double g = rng.next_double();
    const double v = 3.0 * rng.next_double() - 1.0;  // may overshoot [0, 1]
    const double clamped = std::clamp(v, 0.0, 1.0);
    CHECK(std::abs(clamped - g) <= std::abs(v - g) + 1e-15);
  }
}

TEST_CASE("l1 distance") {
  const auto zero = [](std::span<const double>) { return 0.0; };
  const auto one = [](std::span<const double>) { return 1.0; };
  const auto ramp = [](std::span<const double> x) { return x[0]; };
  CHECK(l1_distance(ramp, ramp, 2, 64) == doctest::Approx(0.0));
  CHECK(l1_distance(zero, one, 2, 64) == doctest::Approx(1.0));
  CHECK(l1_distance(zero, ramp, 2, 256) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(l1_distance(zero, one, 2, 8), std::invalid_argument);
}

TEST_CASE("holder check") {
  SplitMix64 rng(71);
  SmoothBoundary constant = make_constant_boundary(0.4, 2);
  constant.holder_k = 0.5;
  constant.holder_gamma = 1.5;
  CHECK(holder_check(constant, 200, rng));

  const SmoothBoundary quad = make_quadratic_boundary(1.0, 0.4, 0.1);  // K = 2, gamma = 2
  CHECK(holder_check(quad, 200, rng));

  SmoothBoundary jump = make_constant_boundary(0.2, 2);
  jump.eval = [](std::span<const double> xt) { return xt[0] > 0.5 ? 0.8 : 0.2; };
  jump.holder_k = 1.0;
  jump.holder_gamma = 1.0;
  CHECK_FALSE(holder_check(jump, 200, rng));
}

TEST_CASE("interpolation error decays like M^-gamma on a transcendental boundary") {
  // degree-2 stencils on a smooth non-polynomial boundary: the observed
  // log-log slope must be at least as steep as -gamma + 0.3
  const SmoothBoundary bumps =
      make_sum_of_bumps_boundary(0.35, {0.25, -0.2}, {0.3, 0.7}, {0.25, 0.3});
  std::vector<double> ms, errs;
  for (int m : {4, 8, 16}) {
    GridSpec grid{m, 2, 2};
    std::vector<double> values(grid.node_count());
    for (std::uint64_t i = 0; i < grid.node_count(); ++i)
      values[i] = bumps.eval(grid.node_point(i));
    PiecewiseBoundary recon{grid, values};
    ms.push_back(m);
    errs.push_back(l1_distance([&](std::span<const double> x) { return recon.eval(x); },
                               bumps.eval, 2, 512));
  }
  double slope = 0.0;
  {
    const double x0 = std::log(ms.front()), x1 = std::log(ms.back());
    const double y0 = std::log(errs.front()), y1 = std::log(errs.back());
    slope = (y1 - y0) / (x1 - x0);
  }
  CHECK(slope <= -2.0 + 0.3);
}

TEST_CASE("degenerate single-node grid reduces to one constant") {
  GridSpec grid{1, 1, 2};  // one node at 0, one cell [0, 1]
  CHECK(grid.node_count() == 1);
  std::vector<double> values{0.42};
  PiecewiseBoundary recon{grid, values};
  SplitMix64 rng(83);
  for (int i = 0; i < 20; ++i) {
    const std::array<double, 1> x{rng.next_double()};
    CHECK(recon.eval(x) == doctest::Approx(0.42));
  }
}

TEST_CASE("end-to-end noiseless boundary learning on the quadratic") {
  const SmoothBoundary g = make_quadratic_boundary(1.0, 0.4, 0.1);
  const BoundaryLabeler labeler = noiseless_boundary_labeler(g);
  LearnerConfig cfg;
  cfg.epsilon = 0.05;
  cfg.delta = 0.2;

  int node_hits = 0, node_total = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto res = run_boundary_learner(labeler, cfg, 2, derive_seed(97, trial), 0);
    REQUIRE(res.stop_reason == StopReason::Completed);
    std::uint64_t sum = 0;
    for (const auto& n : res.per_node) sum += n.total_queries;
    CHECK(sum == res.total_queries);
    const GridSpec& grid = res.boundary.grid;
    for (std::uint64_t i = 0; i < grid.node_count(); ++i) {
      ++node_total;
      node_hits +=
          std::abs(res.boundary.node_values[i] - g.eval(grid.node_point(i))) <= cfg.epsilon;
    }
  }
  // per-node guarantee is 1 - delta/(2 #nodes); demand 95% overall
  CHECK(node_hits >= static_cast<int>(0.95 * node_total));

  SUBCASE("serial and parallel node execution agree") {
    const auto serial = run_boundary_learner(labeler, cfg, 2, 12345, 1);
    const auto parallel = run_boundary_learner(labeler, cfg, 2, 12345, 0);
    CHECK(serial.total_queries == parallel.total_queries);
    CHECK(serial.boundary.node_values == parallel.boundary.node_values);
  }
}
