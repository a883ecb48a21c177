// Timing comparison of the serial reference paths against the OpenMP ones.
// Both paths must produce identical numbers; the table prints a check.

#include <chrono>
#include <cstdio>
#include <string>

#include "ablearn/harness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace ablearn;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void row(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp disabled; both columns run serially\n");
#endif
  std::printf("%-28s %11s %11s %9s   %s\n", "kernel", "serial", "parallel", "speedup", "outputs");

  {
    auto t0 = clock_type::now();
    const auto serial = calibrate_constants(0.1, 10'000, 2'000, 7, 1);
    const double ts = seconds_since(t0);
    t0 = clock_type::now();
    const auto parallel = calibrate_constants(0.1, 10'000, 2'000, 7, 0);
    const double tp = seconds_since(t0);
    row("calibrate_constants", ts, tp,
        serial.calibrated_d0 == parallel.calibrated_d0 &&
            serial.calibrated_d1 == parallel.calibrated_d1 &&
            serial.observed_fp_rate_d0 == parallel.observed_fp_rate_d0 &&
            serial.observed_fp_rate_d1 == parallel.observed_fp_rate_d1);
  }

  {
    Config cfg = parse_config_text(
        "labeler = power\ntheta_star = 0.3\nalpha = 1\nbeta = 1\n"
        "epsilon = 0.01\ndelta = 0.2\ntrials = 64\nseed = 11\n");
    ExperimentSpec spec = spec_from_config(cfg, ExperimentKind::Consistency);
    spec.threads = 1;
    auto t0 = clock_type::now();
    const auto serial = run_consistency(spec);
    const double ts = seconds_since(t0);
    spec.threads = 0;
    t0 = clock_type::now();
    const auto parallel = run_consistency(spec);
    const double tp = seconds_since(t0);
    row("threshold trials x64", ts, tp, serial.report == parallel.report);
  }

  {
    Config cfg = parse_config_text(
        "labeler = constant\nlevel = 0.5\ntheta_star = 0.3\nbeta = 1\nnoise_c = 1\n"
        "boundary = quadratic\nboundary_a = 1\nboundary_b = 0.4\nboundary_c = 0.1\n"
        "gamma = 2\nepsilon = 0.05\ndelta = 0.2\nseed = 13\n");
    ExperimentSpec spec = spec_from_config(cfg, ExperimentKind::Consistency);
    const SmoothBoundary g = spec.boundary.build();
    const BoundaryLabeler labeler = spec.labeler.build_boundary(g);
    LearnerConfig lc = spec.learner;
    lc.epsilon = 0.05;
    auto t0 = clock_type::now();
    BoundaryResult serial;
    for (int rep = 0; rep < 16; ++rep) serial = run_boundary_learner(labeler, lc, 2, 17, 1);
    const double ts = seconds_since(t0);
    t0 = clock_type::now();
    BoundaryResult parallel;
    for (int rep = 0; rep < 16; ++rep) parallel = run_boundary_learner(labeler, lc, 2, 17, 0);
    const double tp = seconds_since(t0);
    row("boundary nodes x16", ts, tp,
        serial.total_queries == parallel.total_queries &&
            serial.boundary.node_values == parallel.boundary.node_values);
  }
  return 0;
}
