#pragma once
// Experiment engine: seeded Monte Carlo campaigns over the learners, plus
// config parsing and JSON/CSV report emission.
//
// Reproducibility contract: trial (eps_index, trial_index, slot) always runs
// with seed derive_seed(root_seed, eps_index, trial_index, slot), so reports
// are byte-identical across re-runs, thread counts, and execution orders.
// Reports carry no timestamps.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ablearn/boundary_learner.hpp"
#include "ablearn/labelers.hpp"
#include "ablearn/sequential_tests.hpp"
#include "ablearn/threshold_learner.hpp"

namespace ablearn {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr const char* kSeedScheme =
    "splitmix64 chain: derive_seed(root_seed, eps_index, trial_index, slot)";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` config; '#' starts a comment, blank lines are ignored.
using Config = std::map<std::string, std::string>;
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

enum class ExperimentKind { Consistency, Scaling, Adaptivity, Calibration };
enum class Mode { Threshold, Boundary };

const char* to_string(ExperimentKind k);
const char* to_string(Mode m);

// One labeler family + parameters; `family` is the canonical config name.
struct LabelerSpec {
  std::string family = "power";  // power | flat_band | constant | table | lower_bound
  double theta_star = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
  double noise_c = 1.0;
  double c_prime = 1.0;
  double level = 0.68;
  double band_lo = 0.2;
  double band_hi = 0.4;
  std::vector<std::pair<double, double>> table;
  int lb_k = 0;
  double lb_epsilon = 0.01;

  AbstentionProfile profile() const;
  OneDimLabeler build() const;
  BoundaryLabeler build_boundary(const SmoothBoundary& g) const;
};

struct BoundarySpec {
  std::string family = "quadratic";  // quadratic | constant | affine | sum_of_bumps
  double a = 1.0, b = 0.4, c = 0.1;  // quadratic a (x1-b)^2 + c; constant uses c
  std::vector<double> slopes;        // affine
  double intercept = 0.0;
  double bump_base = 0.3;
  std::vector<double> bump_amplitudes, bump_centers, bump_widths;
  int dim = 2;

  SmoothBoundary build() const;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Consistency;
  Mode mode = Mode::Threshold;
  LabelerSpec labeler;
  std::optional<LabelerSpec> labeler2;  // adaptivity flat slot
  BoundarySpec boundary;
  int gamma = 2;
  int quadrature_resolution = 256;
  LearnerConfig learner;
  std::vector<double> epsilon_list;
  std::uint64_t trials = 1;
  std::uint64_t root_seed = 1;
  std::string output_path;  // empty = stdout
  std::string format = "json";
  int threads = 0;  // 0 = all cores, 1 = serial reference
  // calibration only
  std::uint64_t calib_n_max = 10'000;
  std::uint64_t calib_trials = 10'000;
};

ExperimentSpec spec_from_config(const Config& cfg, ExperimentKind kind);

struct EpsilonStats {
  double epsilon = 0.0;
  double success_rate = 0.0;
  double mean_queries = 0.0;
  double median_queries = 0.0;
  double stddev_queries = 0.0;
  std::uint64_t budget_exhausted_count = 0;

  bool operator==(const EpsilonStats&) const = default;
};

struct TrialOutcome {
  int slot = 0;  // adaptivity: 0 = monotone, 1 = flat
  std::size_t eps_index = 0;
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::uint64_t queries = 0;
  StopReason stop_reason = StopReason::Completed;
  double error = 0.0;  // |theta_hat - theta*| or L1 boundary distance
  std::uint64_t var_triggers = 0;
  std::uint64_t label_triggers = 0;
  std::optional<Trigger> final_trigger;  // last completed round's trigger
};

struct ExperimentReport {
  int schema_version = kSchemaVersion;
  std::string library_version = kLibraryVersion;
  std::string kind;
  std::string mode;
  std::uint64_t root_seed = 0;
  std::string seed_scheme = kSeedScheme;
  std::map<std::string, std::string> spec_echo;
  std::vector<EpsilonStats> per_epsilon;
  std::optional<double> fitted_slope;
  std::optional<double> fitted_slope_stderr;
  std::string fit_refusal;  // nonempty when the slope fit was refused

  bool operator==(const ExperimentReport&) const = default;
};

struct AdaptivityReport {
  ExperimentReport monotone;
  ExperimentReport flat;
  std::optional<double> slope_difference;  // monotone - flat

  bool operator==(const AdaptivityReport&) const = default;
};

struct ExperimentResult {
  ExperimentReport report;
  std::vector<TrialOutcome> trials;
};

struct AdaptivityResult {
  AdaptivityReport report;
  std::vector<TrialOutcome> trials;  // both slots, slot field set
};

// Least squares for log(y) = intercept + slope * log(x).
struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

// success = run completed and error <= epsilon; budget exhaustion counts as
// failure and is tallied separately.
ExperimentResult run_consistency(const ExperimentSpec& spec);

// Requires >= 3 strictly decreasing epsilons. Fits log(mean queries) against
// log(1/eps); the fit is refused (reported, not fatal) when some epsilon had
// every trial exhaust its budget.
ExperimentResult run_scaling(const ExperimentSpec& spec);

// Runs the scaling campaign for both labeler slots (which must share beta)
// and reports both slopes and their difference.
AdaptivityResult run_adaptivity(const ExperimentSpec& spec);

std::string report_json(const ExperimentReport& report);
std::string report_json(const AdaptivityReport& report);
std::string report_json(const CalibrationReport& report, std::uint64_t root_seed);
ExperimentReport report_from_json(const std::string& text);

// One row per trial: run_id,epsilon,seed,success,queries,stop_reason.
std::string trials_csv(const std::vector<TrialOutcome>& trials,
                       const std::vector<double>& epsilon_list);

void write_file(const std::string& path, const std::string& content);

}  // namespace ablearn
