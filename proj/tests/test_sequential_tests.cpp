#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "ablearn/sequential_tests.hpp"
#include "doctest.h"

using namespace ablearn;

namespace {

const TestConfig kUnit{1.0, 1.0};

// independent two-pass variance oracle: n/(n-1) times the population variance
// of the empirical distribution
double two_pass_variance(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double pop = 0.0;
  for (double x : xs) pop += (x - mean) * (x - mean);
  pop /= n;
  return n / (n - 1.0) * (n * pop);
}

}  // namespace

TEST_CASE("lnln_plus clamps at e^e and is exact beyond it") {
  CHECK(lnln_plus(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lnln_plus(std::exp(std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lnln_plus(std::exp(std::exp(2.0))) == doctest::Approx(2.0).epsilon(1e-12));
  for (double x : {-5.0, 0.0, 1.0, 4.0, 20.0, 1e6}) CHECK(lnln_plus(x) >= 1.0);
  CHECK(lnln_plus(20.0) == doctest::Approx(std::log(std::log(20.0))));
}

TEST_CASE("empirical_variance matches the pinned formula") {
  CHECK(empirical_variance(std::vector<double>{3.0, 3.0}) == doctest::Approx(0.0));
  CHECK(empirical_variance(std::vector<double>{1.0, -1.0}) == doctest::Approx(4.0));
  CHECK(empirical_variance(std::vector<double>{1.0, 0.0, -1.0}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(empirical_variance(std::vector<double>{1.0}), std::invalid_argument);

  // cross-check against a naive two-pass oracle on random sequences
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(derive_seed(99, seed));
    std::vector<double> xs(50);
    for (auto& x : xs) x = 2.0 * rng.next_double() - 1.0;
    CHECK(empirical_variance(xs) == doctest::Approx(two_pass_variance(xs)).epsilon(1e-10));
    CHECK(empirical_variance(xs) >= 0.0);
  }
}

TEST_CASE("p_threshold frozen values") {
  // n = 1: [lnln]_+(4) clamps to 1, so p = 1 + 0 + sqrt(4) = 3
  CHECK(p_threshold(1, 1.0, kUnit) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(p_threshold(100, 0.1, kUnit) == doctest::Approx(43.76452263394203).epsilon(1e-12));
  CHECK(p_threshold(5, 0.5, TestConfig{0.0, 1.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(p_threshold(1, 0.0, kUnit), std::invalid_argument);
  CHECK_THROWS_AS(p_threshold(1, 1.5, kUnit), std::invalid_argument);
}

TEST_CASE("p_threshold monotone in n and in ln(1/delta)") {
  for (double delta : {1.0, 0.5, 0.1, 0.01}) {
    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 2000; n += 7) {
      const double p = p_threshold(n, delta, kUnit);
      CHECK(p >= prev);
      prev = p;
    }
  }
  for (std::uint64_t n : {1ull, 10ull, 100ull, 10000ull}) {
    double prev = -1.0;
    for (double delta : {1.0, 0.7, 0.3, 0.1, 0.01, 0.001}) {
      const double p = p_threshold(n, delta, kUnit);
      CHECK(p >= prev);
      prev = p;
    }
  }
}

TEST_CASE("q_threshold frozen values and monotonicity in var") {
  CHECK(q_threshold(5, 0.0, 1.0, kUnit) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(q_threshold(50, 10.0, 0.1, kUnit) == doctest::Approx(9.930776341472544).epsilon(1e-12));
  CHECK(q_threshold(9, 3.0, 0.3, TestConfig{1.0, 0.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(q_threshold(5, -0.1, 0.5, kUnit), std::invalid_argument);
  for (double delta : {1.0, 0.1, 0.01}) {
    double prev = 0.0;
    for (double var = 0.0; var <= 50.0; var += 0.5) {
      const double q = q_threshold(10, var, delta, kUnit);
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("check_significant basics and crossover") {
  CHECK_FALSE(check_significant(std::vector<double>{}, 0.1, kUnit));
  CHECK_FALSE(check_significant(std::vector<double>(100, 0.0), 0.1, kUnit));
  CHECK_THROWS_AS(check_significant(std::vector<double>{0.5, 1.5}, 0.1, kUnit),
                  std::invalid_argument);

  // all-ones stream at delta = 0.1, d0 = 1 first fires at n = 22
  for (std::size_t n = 1; n <= 30; ++n) {
    const bool fired = check_significant(std::vector<double>(n, 1.0), 0.1, kUnit);
    CHECK(fired == (n >= 22));
  }
}

TEST_CASE("check_significant_var gate and crossover") {
  // ln(1/0.01) = 4.6: one sample can never pass the gate
  CHECK_FALSE(check_significant_var(std::vector<double>{1.0}, 0.01, kUnit));
  CHECK_FALSE(check_significant_var(std::vector<double>(500, 0.0), 0.1, kUnit));
  CHECK_THROWS_AS(check_significant_var(std::vector<double>{-2.0}, 0.1, kUnit),
                  std::invalid_argument);

  // all-ones: V_n = 0, q = 6.605..., gate ln(10) = 2.3 -> fires at n = 7
  for (std::size_t n = 1; n <= 10; ++n) {
    const bool fired = check_significant_var(std::vector<double>(n, 1.0), 0.1, kUnit);
    CHECK(fired == (n >= 7));
  }
}

TEST_CASE("running stats agree with the span-based tests on every prefix") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitMix64 rng(derive_seed(7, seed));
    std::vector<double> xs;
    RunningStats rs;
    for (int i = 0; i < 400; ++i) {
      const double x = 2.0 * rng.next_double() - 1.0;
      xs.push_back(x);
      rs.add(x);
      CHECK(check_significant(rs, 0.2, kUnit) == check_significant(xs, 0.2, kUnit));
      CHECK(check_significant_var(rs, 0.2, kUnit) == check_significant_var(xs, 0.2, kUnit));
    }
  }
}

TEST_CASE("calibration is deterministic and seed-derived") {
  const auto a = calibrate_constants(0.2, 500, 200, 42, 0);
  const auto b = calibrate_constants(0.2, 500, 200, 42, 1);
  CHECK(a.calibrated_d0 == b.calibrated_d0);
  CHECK(a.calibrated_d1 == b.calibrated_d1);
  CHECK(a.observed_fp_rate_d0 == b.observed_fp_rate_d0);
  CHECK(a.observed_fp_rate_d1 == b.observed_fp_rate_d1);
  CHECK(a.calibrated_d0 > 0.0);
  CHECK(a.calibrated_d1 > 0.0);
  CHECK(a.observed_fp_rate_d0 <= 0.2);
  CHECK(a.observed_fp_rate_d1 <= 0.2);
  CHECK_THROWS_AS(calibrate_constants(0.1, 100, 50, 1), std::invalid_argument);
}

TEST_CASE("huge constants never fire; longer horizons never lower the rate") {
  const auto big = ever_fire_rates(1000.0, 1000.0, 0.1, 2000, 300, 5);
  CHECK(big.fp_d0 == 0.0);
  CHECK(big.fp_d1 == 0.0);

  const auto short_run = ever_fire_rates(0.4, 0.8, 0.1, 500, 400, 6);
  const auto long_run = ever_fire_rates(0.4, 0.8, 0.1, 2000, 400, 6);
  CHECK(long_run.fp_d0 >= short_run.fp_d0);
  CHECK(long_run.fp_d1 >= short_run.fp_d1);
}

TEST_CASE("calibrated constants land in a sane range at moderate scale") {
  const auto r = calibrate_constants(0.1, 2000, 1000, 11);
  CHECK(r.calibrated_d0 > 0.0);
  CHECK(r.calibrated_d0 < 10.0);
  CHECK(r.calibrated_d1 > 0.0);
  CHECK(r.calibrated_d1 < 10.0);
  CHECK(r.observed_fp_rate_d0 <= 0.1);
  CHECK(r.observed_fp_rate_d1 <= 0.1);
}

TEST_CASE("smoke: false-positive rate of shipped constants, power of the tests") {
  // scaled-down companions of the full-strength acceptance runs
  const TestConfig shipped{};
  const auto fp = ever_fire_rates(shipped.d0, shipped.d1, 0.1, 3000, 1500, 77);
  CHECK(fp.fp_d0 <= 0.1 + 3.0 * std::sqrt(0.09 / 1500.0));
  CHECK(fp.fp_d1 <= 0.1 + 3.0 * std::sqrt(0.09 / 1500.0));

  // mean-0.2 streams should fire the sum test quickly
  int fired = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    SplitMix64 rng(derive_seed(123, s));
    RunningStats rs;
    for (int n = 0; n < 3000; ++n) {
      rs.add(rng.next_double() < 0.6 ? 1.0 : -1.0);
      if (check_significant(rs, 0.1, shipped)) {
        ++fired;
        break;
      }
    }
  }
  CHECK(fired >= 195);
}
