#pragma once
// Synthetic labeler oracles.
//
// A labeler answers a query point with 0, 1, or an abstention. Every family
// here is built from a distance-based non-abstention profile f and a noise
// law: at distance t from the true boundary,
//
//   P(abstain) = 1 - f(t),
//   P(correct | answered) = 1 - flip(t),   flip(t) = max(0, 1 - C min(t,1)^beta) / 2.
//
// f nondecreasing in t makes abstentions more frequent near the boundary.
// The simulated families realize the model's bounds with equality, which is
// the informative extreme for experiments. C = 0 (or beta = 0 with C < 1)
// gives labels that carry no signal at all; beta = 0 uses the convention
// t^0 = 1 everywhere, so flip = (1 - C)/2 uniformly.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "ablearn/rng.hpp"

namespace ablearn {

enum class Response : std::uint8_t { Label0, Label1, Abstain };

struct ResponseDistribution {
  double p_abstain = 0.0;
  double p_label0 = 0.0;
  double p_label1 = 0.0;
};

// --- non-abstention profiles f(t), t = distance to the boundary ------------

// f(t) = c' t^alpha
struct PowerProfile {
  double c_prime = 1.0;  // (0, 1]
  double alpha = 1.0;    // >= 0
  double f(double t) const;
};

// Abstention pinned at `level` in a band around the boundary, power decay
// outside: f(t) = max(1 - level, outside.f(t)). The band [lo, hi] is given in
// query coordinates; its half-width (hi - lo)/2 is where the flat region ends
// when the boundary sits at the band center.
struct FlatBandProfile {
  double level = 0.68;
  double lo = 0.2;
  double hi = 0.4;
  PowerProfile outside{1.0, 1.0};
  double half_width() const { return 0.5 * (hi - lo); }
  double f(double t) const;
};

// P(abstain) = level everywhere.
struct ConstantProfile {
  double level = 0.0;
  double f(double t) const;
};

// Piecewise-linear f from sorted (t, f(t)) breakpoints, clamped at the ends.
struct TableProfile {
  std::vector<std::pair<double, double>> points;
  double f(double t) const;
};

struct AbstentionProfile {
  std::variant<PowerProfile, FlatBandProfile, ConstantProfile, TableProfile> kind =
      PowerProfile{};
  double f(double t) const {
    return std::visit([t](const auto& p) { return p.f(t); }, kind);
  }
  // true if f is nondecreasing on a uniform grid over [0, 1]
  bool nondecreasing(int grid_resolution = 512) const;
};

// --- labeler families -------------------------------------------------------

double flip_probability(double distance, double noise_c, double beta);

// 1-d threshold labeler: true label is 1[x > theta_star].
struct ThresholdLabeler {
  double theta_star = 0.5;
  AbstentionProfile profile;
  double noise_c = 1.0;  // [0, 1]; 0 means labels are fair coin flips
  double beta = 1.0;     // >= 0

  ResponseDistribution operator()(double x) const;
  double boundary() const { return theta_star; }
};

// Hard instance with boundary theta_k = 1/2 + k * epsilon:
//   P(abstain | x) = 1 - |x - theta_k|^alpha
//   P(wrong label | x, answered) = (1 - |x - theta_k|^beta) / 2
struct LowerBoundLabeler {
  int k = 0;  // {0, 1, 2, 3}
  double epsilon = 0.01;
  double alpha = 1.0;  // (0, 2]
  double beta = 1.0;   // >= 0

  double theta() const { return 0.5 + k * epsilon; }
  ResponseDistribution operator()(double x) const;
  double boundary() const { return theta(); }
  AbstentionProfile profile() const { return {PowerProfile{1.0, alpha}}; }
};

// d-dimensional labeler (d >= 2): true label is 1[x_d > g*(x~)] where
// x~ = (x_1, ..., x_{d-1}); distance is |x_d - g*(x~)|.
struct BoundaryLabeler {
  int dim = 2;
  std::function<double(std::span<const double>)> g_star;
  AbstentionProfile profile;
  double noise_c = 1.0;
  double beta = 1.0;

  ResponseDistribution at(std::span<const double> x) const;

  // 1-d restriction along the vertical line through x~: x_d -> response law.
  struct Line {
    const BoundaryLabeler* owner;
    std::vector<double> xt;
    double g;  // g*(xt), cached
    ResponseDistribution operator()(double xd) const;
    double boundary() const { return g; }
  };
  Line line(std::vector<double> xt) const;
};

using OneDimLabeler = std::variant<ThresholdLabeler, LowerBoundLabeler>;

inline ResponseDistribution distribution_at(const OneDimLabeler& m, double x) {
  return std::visit([x](const auto& lab) { return lab(x); }, m);
}
inline double boundary_of(const OneDimLabeler& m) {
  return std::visit([](const auto& lab) { return lab.boundary(); }, m);
}

// Sample a response; consumes exactly one uniform draw.
// u < p_abstain -> Abstain; u < p_abstain + p_label0 -> Label0; else Label1.
inline Response sample_response(const ResponseDistribution& d, SplitMix64& rng) {
  const double u = rng.next_double();
  if (u < d.p_abstain) return Response::Abstain;
  if (u < d.p_abstain + d.p_label0) return Response::Label0;
  return Response::Label1;
}

template <class Law>
Response respond(const Law& law, double x, SplitMix64& rng) {
  return sample_response(law(x), rng);
}

// Grid check of the basic sanity condition: along every axis-d line,
// abstention is nonincreasing in the distance to the boundary, and the
// conditional flip probability never exceeds 1/2 (+1e-12 slack).
bool verify_condition1(const OneDimLabeler& model, int grid_resolution);
bool verify_condition1(const BoundaryLabeler& model, int grid_resolution);

// Grid check of the strict non-flatness condition:
// f(b)/f(a) <= 1 - c for all 0 < a <= 1, 0 <= b <= (2/3) a.
// Pairs with f(a) = 0 pass only when f(b) = 0.
bool verify_condition3(const AbstentionProfile& profile, double c, int grid_resolution);

}  // namespace ablearn
