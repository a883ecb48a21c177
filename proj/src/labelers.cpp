#include "ablearn/labelers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ablearn {

namespace {

constexpr double kFlipTol = 1e-12;
constexpr double kMonoTol = 1e-12;

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(what) + " outside [0, 1]");
}

ResponseDistribution from_distance(double t, const AbstentionProfile& profile, double noise_c,
                                   double beta, bool correct_is_one) {
  const double f = profile.f(t);
  const double flip = flip_probability(t, noise_c, beta);
  ResponseDistribution d;
  d.p_abstain = 1.0 - f;
  const double p_correct = f * (1.0 - flip);
  const double p_wrong = f * flip;
  d.p_label1 = correct_is_one ? p_correct : p_wrong;
  d.p_label0 = correct_is_one ? p_wrong : p_correct;
  return d;
}

}  // namespace

double flip_probability(double distance, double noise_c, double beta) {
  // t^0 = 1 everywhere by convention, so beta = 0 means flip = (1 - C)/2.
  const double t = std::min(distance, 1.0);
  const double signal = beta == 0.0 ? noise_c : noise_c * std::pow(t, beta);
  return std::max(0.0, 1.0 - signal) / 2.0;
}

double PowerProfile::f(double t) const {
  if (alpha == 0.0) return c_prime;
  return c_prime * std::pow(std::min(std::abs(t), 1.0), alpha);
}

double FlatBandProfile::f(double t) const {
  return std::max(1.0 - level, outside.f(t));
}

double ConstantProfile::f(double) const { return 1.0 - level; }

double TableProfile::f(double t) const {
  if (points.empty()) throw std::invalid_argument("table profile needs breakpoints");
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      const auto& [t0, f0] = points[i - 1];
      const auto& [t1, f1] = points[i];
      const double w = t1 == t0 ? 0.0 : (t - t0) / (t1 - t0);
      return f0 + w * (f1 - f0);
    }
  }
  return points.back().second;
}

bool AbstentionProfile::nondecreasing(int grid_resolution) const {
  double prev = f(0.0);
  for (int i = 1; i <= grid_resolution; ++i) {
    const double cur = f(static_cast<double>(i) / grid_resolution);
    if (cur < prev - kMonoTol) return false;
    prev = std::max(prev, cur);
  }
  return true;
}

ResponseDistribution ThresholdLabeler::operator()(double x) const {
  require_unit(x, "query point");
  const double t = std::abs(x - theta_star);
  return from_distance(t, profile, noise_c, beta, x > theta_star);
}

ResponseDistribution LowerBoundLabeler::operator()(double x) const {
  require_unit(x, "query point");
  if (k < 0 || k > 3) throw std::domain_error("lower-bound instance needs k in {0,1,2,3}");
  if (!(epsilon > 0.0) || 0.5 + 3.0 * epsilon > 1.0)
    throw std::domain_error("lower-bound instance needs 0 < epsilon <= 1/6");
  const double th = theta();
  const double t = std::abs(x - th);
  const double ta = std::pow(t, alpha);  // 0^alpha = 0 for alpha > 0
  const double tb = std::pow(t, beta);
  ResponseDistribution d;
  d.p_abstain = 1.0 - ta;
  if (x > th) {
    d.p_label0 = ta * (1.0 - tb) / 2.0;
    d.p_label1 = ta * (1.0 + tb) / 2.0;
  } else {
    d.p_label0 = ta * (1.0 + tb) / 2.0;
    d.p_label1 = ta * (1.0 - tb) / 2.0;
  }
  return d;
}

ResponseDistribution BoundaryLabeler::at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw std::domain_error("query dimension mismatch");
  for (double c : x) require_unit(c, "query coordinate");
  const std::span<const double> xt = x.first(x.size() - 1);
  const double g = g_star(xt);
  const double xd = x.back();
  return from_distance(std::abs(xd - g), profile, noise_c, beta, xd > g);
}

ResponseDistribution BoundaryLabeler::Line::operator()(double xd) const {
  require_unit(xd, "query point");
  return from_distance(std::abs(xd - g), owner->profile, owner->noise_c, owner->beta, xd > g);
}

BoundaryLabeler::Line BoundaryLabeler::line(std::vector<double> xt) const {
  if (static_cast<int>(xt.size()) != dim - 1) throw std::domain_error("line dimension mismatch");
  for (double c : xt) require_unit(c, "line coordinate");
  const double g = g_star(xt);
  return Line{this, std::move(xt), g};
}

namespace {

// One vertical line: abstention must be nonincreasing in distance to the
// boundary, flip probability <= 1/2 wherever a label can be returned.
template <class Law>
bool line_satisfies_condition1(const Law& law, double boundary, int res) {
  std::vector<std::pair<double, double>> by_distance;  // (t, p_abstain)
  by_distance.reserve(res + 1);
  for (int i = 0; i <= res; ++i) {
    const double x = static_cast<double>(i) / res;
    const ResponseDistribution d = law(x);
    const double answered = d.p_label0 + d.p_label1;
    if (answered > 0.0) {
      const bool correct_is_one = x > boundary;
      const double wrong = correct_is_one ? d.p_label0 : d.p_label1;
      if (wrong / answered > 0.5 + kFlipTol) return false;
    }
    by_distance.emplace_back(std::abs(x - boundary), d.p_abstain);
  }
  std::sort(by_distance.begin(), by_distance.end());
  double prev = by_distance.front().second;
  for (const auto& [t, p] : by_distance) {
    if (p > prev + kFlipTol) return false;
    prev = std::min(prev, p);
  }
  return true;
}

}  // namespace

bool verify_condition1(const OneDimLabeler& model, int grid_resolution) {
  if (grid_resolution < 10) throw std::invalid_argument("grid_resolution >= 10 required");
  return std::visit(
      [&](const auto& lab) {
        return line_satisfies_condition1(lab, lab.boundary(), grid_resolution);
      },
      model);
}

bool verify_condition1(const BoundaryLabeler& model, int grid_resolution) {
  if (grid_resolution < 10) throw std::invalid_argument("grid_resolution >= 10 required");
  // lines through a coarse lattice over the first d-1 axes
  const int d = model.dim;
  const int line_res = d == 2 ? grid_resolution : std::min(grid_resolution, 16);
  std::vector<int> idx(static_cast<std::size_t>(d - 1), 0);
  for (;;) {
    std::vector<double> xt(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      xt[i] = static_cast<double>(idx[i]) / line_res;
    const auto line = model.line(xt);
    if (!line_satisfies_condition1(line, line.boundary(), grid_resolution)) return false;
    std::size_t axis = 0;
    while (axis < idx.size() && ++idx[axis] > line_res) idx[axis++] = 0;
    if (axis == idx.size()) break;
  }
  return true;
}

bool verify_condition3(const AbstentionProfile& profile, double c, int grid_resolution) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c in (0, 1) required");
  if (grid_resolution < 10) throw std::invalid_argument("grid_resolution >= 10 required");
  const int res = grid_resolution;
  for (int i = 1; i <= res; ++i) {
    const double a = static_cast<double>(i) / res;
    const double fa = profile.f(a);
    for (int j = 0; j <= res; ++j) {
      const double b = (2.0 / 3.0) * a * static_cast<double>(j) / res;
      const double fb = profile.f(b);
      if (fa == 0.0) {
        if (fb != 0.0) return false;
        continue;
      }
      if (fb / fa > 1.0 - c + kMonoTol) return false;
    }
  }
  return true;
}

}  // namespace ablearn
