#pragma once
// d-dimensional smooth-boundary learning by reduction to per-grid-line
// threshold search plus piecewise tensor-product Lagrange interpolation.
//
// The first d-1 axes are discretized into the lattice {0, 1/M, ..., (M-1)/M},
// M a multiple of gamma. Each lattice node gets a 1-d threshold run along its
// vertical line (confidence split delta / #nodes); the learned values are
// then interpolated per cell I_q = prod [q_i gamma/M, (q_i+1) gamma/M] with
// per-axis degree-gamma cardinal polynomials over gamma+1 consecutive lattice
// nodes. For every cell but the last along an axis those are exactly the
// lattice nodes inside the cell; the last cell's stencil is shifted down one
// node (the lattice has no node at 1.0), which leaves polynomial exactness
// and the partition of unity intact. Evaluation clamps to [0, 1]; a point on
// a shared cell face belongs to the lexicographically smallest cell.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ablearn/labelers.hpp"
#include "ablearn/threshold_learner.hpp"

namespace ablearn {

struct SmoothBoundary {
  int dim = 2;  // instance dimension d; eval takes d-1 coordinates
  std::function<double(std::span<const double>)> eval;
  double holder_k = 1.0;
  double holder_gamma = 2.0;
};

SmoothBoundary make_quadratic_boundary(double a, double b, double c);  // a (x1-b)^2 + c, d = 2
SmoothBoundary make_constant_boundary(double c, int dim);
SmoothBoundary make_affine_boundary(std::vector<double> slopes, double intercept);
SmoothBoundary make_sum_of_bumps_boundary(double base, std::vector<double> amplitudes,
                                          std::vector<double> centers,
                                          std::vector<double> widths);  // d = 2

inline constexpr std::uint64_t kMaxGridNodes = 1'000'000;

struct GridSpec {
  int m = 1;      // nodes per axis; multiple of gamma
  int gamma = 1;  // interpolation degree per axis
  int dim = 2;    // instance dimension d; lattice lives in d-1 axes

  int cells_per_axis() const { return m / gamma; }
  std::uint64_t node_count() const;                    // m^(dim-1)
  std::uint64_t cell_count() const;                    // (m/gamma)^(dim-1)
  std::vector<int> node_index(std::uint64_t flat) const;  // lexicographic, axis 0 slowest
  std::uint64_t node_flat(std::span<const int> idx) const;
  std::vector<double> node_point(std::uint64_t flat) const;

  // First lattice index of cell q's per-axis stencil: min(gamma q, m-1-gamma),
  // floored at 0. The stencil is that index plus 0..gamma (clipped to m-1).
  int stencil_start(int cell_q) const;
  int stencil_size() const { return std::min(gamma + 1, m); }

  // Owning cell of coordinate x along one axis (faces go to the lower cell).
  int owning_cell(double x) const;
};

// M = smallest multiple of gamma >= ceil(eps^(-1/gamma)). Throws when the
// lattice would exceed max_nodes.
GridSpec build_grid(double epsilon, int gamma, int dim,
                    std::uint64_t max_nodes = kMaxGridNodes);

// Cardinal polynomial of lattice node l within cell q, evaluated at xt.
// 1 at l, 0 at every other stencil node of the cell; throws when l is not a
// stencil node of q.
double lagrange_basis(const GridSpec& grid, std::span<const int> cell_q,
                      std::span<const int> node_l, std::span<const double> xt);

// Interpolant of cell q at xt from per-node values (flat-indexed, NaN =
// missing), clamped to [0, 1]. Throws on a missing stencil value.
double interpolate_cell(std::span<const double> node_values, const GridSpec& grid,
                        std::span<const int> cell_q, std::span<const double> xt);

struct PiecewiseBoundary {
  GridSpec grid;
  std::vector<double> node_values;  // flat lattice order

  double eval(std::span<const double> xt) const;
  double operator()(std::span<const double> xt) const { return eval(xt); }
};

struct BoundaryResult {
  PiecewiseBoundary boundary;
  std::uint64_t total_queries = 0;
  std::vector<ThresholdResult> per_node;  // flat lattice order
  StopReason stop_reason = StopReason::Completed;
};

// Threshold-learn every lattice node along its line at confidence
// cfg.delta / node_count, then assemble the interpolant. Node i uses seed
// derive_seed(root_seed, i), so the result is independent of execution order;
// threads = 1 is the serial reference path. Budget exhaustion on any node is
// recorded per node and in stop_reason.
BoundaryResult run_boundary_learner(const BoundaryLabeler& labeler, const LearnerConfig& cfg,
                                    int gamma, std::uint64_t root_seed, int threads = 0);

// Midpoint-rule integral of |g1 - g2| over [0,1]^(dim-1), resolution points
// per axis.
double l1_distance(const std::function<double(std::span<const double>)>& g1,
                   const std::function<double(std::span<const double>)>& g2, int dim,
                   int resolution);

// Numerical Holder-smoothness check: on random pairs (x, y), the Taylor
// polynomial of order floor(gamma) built from finite differences at x must
// track g(y) within K ||y - x||^gamma + 1e-6.
bool holder_check(const SmoothBoundary& g, int samples, SplitMix64& rng);

}  // namespace ablearn
