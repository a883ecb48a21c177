#include "ablearn/boundary_learner.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ablearn {

SmoothBoundary make_quadratic_boundary(double a, double b, double c) {
  return {2, [a, b, c](std::span<const double> xt) { return a * (xt[0] - b) * (xt[0] - b) + c; },
          std::max(1.0, 2.0 * std::abs(a)), 2.0};
}

SmoothBoundary make_constant_boundary(double c, int dim) {
  return {dim, [c](std::span<const double>) { return c; }, 1.0, 2.0};
}

SmoothBoundary make_affine_boundary(std::vector<double> slopes, double intercept) {
  const int dim = static_cast<int>(slopes.size()) + 1;
  double k = 1.0;
  for (double s : slopes) k = std::max(k, std::abs(s));
  return {dim,
          [slopes = std::move(slopes), intercept](std::span<const double> xt) {
            double y = intercept;
            for (std::size_t i = 0; i < slopes.size(); ++i) y += slopes[i] * xt[i];
            return y;
          },
          k, 1.0};
}

SmoothBoundary make_sum_of_bumps_boundary(double base, std::vector<double> amplitudes,
                                          std::vector<double> centers,
                                          std::vector<double> widths) {
  if (amplitudes.size() != centers.size() || centers.size() != widths.size())
    throw std::invalid_argument("bump parameter lists must have equal length");
  double k = 1.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    k = std::max(k, 2.0 * std::abs(amplitudes[i]) / (widths[i] * widths[i]));
  return {2,
          [base, a = std::move(amplitudes), c = std::move(centers),
           w = std::move(widths)](std::span<const double> xt) {
            double y = base;
            for (std::size_t i = 0; i < a.size(); ++i) {
              const double z = (xt[0] - c[i]) / w[i];
              y += a[i] * std::exp(-z * z);
            }
            return y;
          },
          k, 2.0};
}

std::uint64_t GridSpec::node_count() const {
  std::uint64_t n = 1;
  for (int i = 0; i < dim - 1; ++i) n *= static_cast<std::uint64_t>(m);
  return n;
}

std::uint64_t GridSpec::cell_count() const {
  std::uint64_t n = 1;
  for (int i = 0; i < dim - 1; ++i) n *= static_cast<std::uint64_t>(cells_per_axis());
  return n;
}

std::vector<int> GridSpec::node_index(std::uint64_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim - 1));
  for (int axis = dim - 2; axis >= 0; --axis) {
    idx[static_cast<std::size_t>(axis)] = static_cast<int>(flat % m);
    flat /= static_cast<std::uint64_t>(m);
  }
  return idx;
}

std::uint64_t GridSpec::node_flat(std::span<const int> idx) const {
  std::uint64_t flat = 0;
  for (int i : idx) flat = flat * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(i);
  return flat;
}

std::vector<double> GridSpec::node_point(std::uint64_t flat) const {
  const auto idx = node_index(flat);
  std::vector<double> p(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) p[i] = static_cast<double>(idx[i]) / m;
  return p;
}

int GridSpec::stencil_start(int cell_q) const {
  return std::max(0, std::min(gamma * cell_q, m - 1 - gamma));
}

int GridSpec::owning_cell(double x) const {
  const int cells = cells_per_axis();
  const int q = static_cast<int>(std::ceil(x * m / gamma)) - 1;
  return std::max(0, std::min(cells - 1, q));
}

GridSpec build_grid(double epsilon, int gamma, int dim, std::uint64_t max_nodes) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon in (0, 1)");
  if (gamma < 1) throw std::invalid_argument("gamma >= 1");
  if (dim < 2) throw std::invalid_argument("dim >= 2");
  int m = static_cast<int>(std::ceil(std::pow(epsilon, -1.0 / gamma) - 1e-12));
  if (m % gamma != 0) m += gamma - (m % gamma);
  GridSpec g{m, gamma, dim};
  if (g.node_count() > max_nodes)
    throw std::invalid_argument("grid would need " + std::to_string(g.node_count()) +
                                " nodes (limit " + std::to_string(max_nodes) + ")");
  return g;
}

namespace {

double axis_basis(const GridSpec& grid, int cell_q, int node_i, double x) {
  const int s = grid.stencil_start(cell_q);
  const int count = grid.stencil_size();
  if (node_i < s || node_i >= s + count)
    throw std::invalid_argument("node is not an interpolation node of this cell");
  double value = 1.0;
  const double xl = static_cast<double>(node_i) / grid.m;
  for (int j = s; j < s + count; ++j) {
    if (j == node_i) continue;
    const double xj = static_cast<double>(j) / grid.m;
    value *= (x - xj) / (xl - xj);
  }
  return value;
}

void check_cell(const GridSpec& grid, std::span<const int> cell_q) {
  if (static_cast<int>(cell_q.size()) != grid.dim - 1)
    throw std::invalid_argument("cell index dimension mismatch");
  for (int q : cell_q)
    if (q < 0 || q >= grid.cells_per_axis()) throw std::invalid_argument("cell index out of range");
}

}  // namespace

double lagrange_basis(const GridSpec& grid, std::span<const int> cell_q,
                      std::span<const int> node_l, std::span<const double> xt) {
  check_cell(grid, cell_q);
  if (node_l.size() != cell_q.size() || xt.size() != cell_q.size())
    throw std::invalid_argument("dimension mismatch");
  double value = 1.0;
  for (std::size_t i = 0; i < cell_q.size(); ++i)
    value *= axis_basis(grid, cell_q[i], node_l[i], xt[i]);
  return value;
}

double interpolate_cell(std::span<const double> node_values, const GridSpec& grid,
                        std::span<const int> cell_q, std::span<const double> xt) {
  check_cell(grid, cell_q);
  if (xt.size() != cell_q.size()) throw std::invalid_argument("dimension mismatch");
  if (node_values.size() < grid.node_count())
    throw std::invalid_argument("node_values smaller than the lattice");
  const int count = grid.stencil_size();
  const int axes = grid.dim - 1;

  // per-axis cardinal values over the stencil
  std::vector<double> basis(static_cast<std::size_t>(axes) * count);
  std::vector<int> start(static_cast<std::size_t>(axes));
  for (int a = 0; a < axes; ++a) {
    start[a] = grid.stencil_start(cell_q[a]);
    for (int j = 0; j < count; ++j)
      basis[static_cast<std::size_t>(a) * count + j] = axis_basis(grid, cell_q[a], start[a] + j, xt[a]);
  }

  double sum = 0.0;
  std::vector<int> offs(static_cast<std::size_t>(axes), 0);
  std::vector<int> node(static_cast<std::size_t>(axes));
  for (;;) {
    double w = 1.0;
    for (int a = 0; a < axes; ++a) {
      w *= basis[static_cast<std::size_t>(a) * count + offs[a]];
      node[a] = start[a] + offs[a];
    }
    const double g = node_values[grid.node_flat(node)];
    if (std::isnan(g)) throw std::invalid_argument("missing node value in cell");
    sum += g * w;
    int a = 0;
    while (a < axes && ++offs[a] >= count) offs[a++] = 0;
    if (a == axes) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double PiecewiseBoundary::eval(std::span<const double> xt) const {
  std::vector<int> cell(xt.size());
  for (std::size_t i = 0; i < xt.size(); ++i) cell[i] = grid.owning_cell(xt[i]);
  return interpolate_cell(node_values, grid, cell, xt);
}

BoundaryResult run_boundary_learner(const BoundaryLabeler& labeler, const LearnerConfig& cfg,
                                    int gamma, std::uint64_t root_seed, int threads) {
  if (labeler.dim < 2) throw std::invalid_argument("boundary labeler needs dim >= 2");
  const GridSpec grid = build_grid(cfg.epsilon, gamma, labeler.dim);
  const std::uint64_t n_nodes = grid.node_count();

  LearnerConfig node_cfg = cfg;
  node_cfg.delta = cfg.delta / static_cast<double>(n_nodes);

  BoundaryResult result;
  result.per_node.resize(n_nodes);

  const std::int64_t count = static_cast<std::int64_t>(n_nodes);
#ifndef _OPENMP
  (void)threads;
#else
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    const auto flat = static_cast<std::uint64_t>(i);
    const auto line = labeler.line(grid.node_point(flat));
    SplitMix64 rng(derive_seed(root_seed, flat));
    result.per_node[flat] = run_threshold_learner(line, node_cfg, rng);
  }

  result.boundary.grid = grid;
  result.boundary.node_values.resize(n_nodes);
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    result.boundary.node_values[i] = result.per_node[i].theta_hat;
    result.total_queries += result.per_node[i].total_queries;
    if (result.per_node[i].stop_reason == StopReason::BudgetExhausted)
      result.stop_reason = StopReason::BudgetExhausted;
  }
  return result;
}

double l1_distance(const std::function<double(std::span<const double>)>& g1,
                   const std::function<double(std::span<const double>)>& g2, int dim,
                   int resolution) {
  if (resolution < 16) throw std::invalid_argument("resolution >= 16 required");
  const int axes = dim - 1;
  std::vector<int> idx(static_cast<std::size_t>(axes), 0);
  std::vector<double> x(static_cast<std::size_t>(axes));
  double sum = 0.0;
  std::uint64_t points = 0;
  for (;;) {
    for (int a = 0; a < axes; ++a) x[a] = (idx[a] + 0.5) / resolution;
    sum += std::abs(g1(x) - g2(x));
    ++points;
    int a = 0;
    while (a < axes && ++idx[a] >= resolution) idx[a++] = 0;
    if (a == axes) break;
  }
  return sum / static_cast<double>(points);
}

namespace {

// Central-difference mixed partial for the multi-index `order` (one entry per
// axis). Recursion peels one derivative per call; h is chosen for orders <= 3.
double mixed_partial(const std::function<double(std::span<const double>)>& f,
                     std::vector<double>& x, std::span<const int> order, double h) {
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (order[a] > 0) {
      std::vector<int> rest(order.begin(), order.end());
      rest[a] -= 1;
      x[a] += h;
      const double up = mixed_partial(f, x, rest, h);
      x[a] -= 2 * h;
      const double dn = mixed_partial(f, x, rest, h);
      x[a] += h;
      return (up - dn) / (2 * h);
    }
  }
  return f(x);
}

void enumerate_orders(int axes, int total, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == axes) {
    int s = 0;
    for (int v : cur) s += v;
    if (s == total) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    enumerate_orders(axes, total, cur, out);
    cur.pop_back();
  }
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

bool holder_check(const SmoothBoundary& g, int samples, SplitMix64& rng) {
  if (samples < 100) throw std::invalid_argument("samples >= 100 required");
  const int axes = g.dim - 1;
  const int order = static_cast<int>(std::floor(g.holder_gamma));
  const double h = 1e-2;
  const double margin = order * h;  // keep difference stencils inside [0, 1]

  std::vector<std::vector<int>> orders;
  for (int m = 0; m <= order; ++m) {
    std::vector<int> cur;
    enumerate_orders(axes, m, cur, orders);
  }

  std::vector<double> x(static_cast<std::size_t>(axes)), y(static_cast<std::size_t>(axes));
  for (int s = 0; s < samples; ++s) {
    for (int a = 0; a < axes; ++a) {
      x[a] = margin + rng.next_double() * (1.0 - 2.0 * margin);
      y[a] = rng.next_double();
    }
    double taylor = 0.0;
    for (const auto& mi : orders) {
      double coeff = mixed_partial(g.eval, x, mi, h);
      double mono = 1.0;
      for (int a = 0; a < axes; ++a) {
        mono *= std::pow(y[a] - x[a], mi[a]);
        coeff /= factorial(mi[a]);
      }
      taylor += coeff * mono;
    }
    double dist2 = 0.0;
    for (int a = 0; a < axes; ++a) dist2 += (y[a] - x[a]) * (y[a] - x[a]);
    const double bound = g.holder_k * std::pow(std::sqrt(dist2), g.holder_gamma) + 1e-6;
    if (std::abs(g.eval(y) - taylor) > bound) return false;
  }
  return true;
}

}  // namespace ablearn
