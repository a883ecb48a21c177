#pragma once
// Adaptive binary search for a 1-d threshold against an abstaining labeler.
//
// The learner keeps an interval [L, R] believed to contain theta*, and each
// round queries the three quartiles U = (3L+R)/4, M = (L+R)/2, V = (L+3R)/4
// until one of four sequential tests fires, then keeps [U, R] or [L, V]
// (3/4 of the previous length). Per inner iteration it records, per point,
// the non-abstention indicator (A arrays) and the signed label 2*1[y=1]-1
// when answered (B arrays, at U and V only; labels at M feed no test but the
// queries count). Tests, evaluated in this fixed order after every iteration:
//
//   1. variance test on {A_u - A_m}  -> keep [U, R]
//   2. variance test on {A_v - A_m}  -> keep [L, V]
//   3. sum test on {-B_u}            -> keep [U, R]
//   4. sum test on {B_v}             -> keep [L, V]
//
// Rounds run k = 0 .. ceil(log_{4/3} 1/(2 eps)) - 1, each test at confidence
// delta / (4 * rounds); the output is the midpoint of the final interval.
// The learner needs no knowledge of the labeler's abstention or noise rates.
//
// The inner loop has no a-priori bound (a labeler that always abstains and
// flips fairly stalls it), so a mandatory query budget turns a stuck run
// into an explicit BudgetExhausted result carrying the deepest midpoint.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ablearn/labelers.hpp"
#include "ablearn/sequential_tests.hpp"

namespace ablearn {

struct LearnerConfig {
  double epsilon = 0.01;  // (0, 1/2]
  double delta = 0.1;     // (0, 1)
  TestConfig test_cfg;
  std::uint64_t max_queries = 10'000'000;
};

struct IntervalState {
  double lo = 0.0;
  double hi = 1.0;
  int round = 0;
};

enum class Trigger : std::uint8_t { VarU, VarV, LabelU, LabelV, Budget };
enum class StopReason : std::uint8_t { Completed, BudgetExhausted };

const char* to_string(Trigger t);
const char* to_string(StopReason r);

struct RoundRecord {
  int round = 0;
  std::uint64_t inner_iterations = 0;
  Trigger trigger = Trigger::Budget;
  std::uint64_t queries_used = 0;  // always 3 * inner_iterations
};

struct ThresholdResult {
  double theta_hat = 0.5;
  std::uint64_t total_queries = 0;
  std::vector<RoundRecord> rounds;
  StopReason stop_reason = StopReason::Completed;
};

// ceil(log_{4/3} 1/(2 eps)), snapped to the exact integer when 1/(2 eps) is a
// power of 4/3 up to floating-point noise.
int num_rounds(double epsilon);

struct Quartiles {
  double u, m, v;
};
inline Quartiles quartiles(const IntervalState& s) {
  return {(3.0 * s.lo + s.hi) / 4.0, (s.lo + s.hi) / 2.0, (s.lo + 3.0 * s.hi) / 4.0};
}

// One shrink round. `queries_used_so_far` is the run's cumulative count; the
// round aborts with Trigger::Budget before any iteration that would push it
// past cfg.max_queries. Queries go out in the fixed order U, M, V, one
// uniform draw each.
template <class Law>
std::pair<IntervalState, RoundRecord> run_round(const IntervalState& state, const Law& law,
                                                double per_check_delta, const LearnerConfig& cfg,
                                                std::uint64_t queries_used_so_far,
                                                SplitMix64& rng) {
  const auto [u, m, v] = quartiles(state);
  const ResponseDistribution du = law(u), dm = law(m), dv = law(v);

  RunningStats au_minus_am, av_minus_am;  // A^(u)-A^(m), A^(v)-A^(m)
  RunningStats neg_bu, bv;                // -B^(u), B^(v)

  RoundRecord rec;
  rec.round = state.round;

  const auto shrink = [&](bool keep_right, Trigger trig) {
    rec.trigger = trig;
    IntervalState next{keep_right ? u : state.lo, keep_right ? state.hi : v, state.round + 1};
    return std::make_pair(next, rec);
  };

  for (;;) {
    if (queries_used_so_far + rec.queries_used + 3 > cfg.max_queries) {
      rec.trigger = Trigger::Budget;
      return {state, rec};
    }
    const Response yu = sample_response(du, rng);
    const Response ym = sample_response(dm, rng);
    const Response yv = sample_response(dv, rng);
    rec.inner_iterations += 1;
    rec.queries_used += 3;

    const double a_u = yu == Response::Abstain ? 0.0 : 1.0;
    const double a_m = ym == Response::Abstain ? 0.0 : 1.0;
    const double a_v = yv == Response::Abstain ? 0.0 : 1.0;
    au_minus_am.add(a_u - a_m);
    av_minus_am.add(a_v - a_m);
    if (yu != Response::Abstain) neg_bu.add(yu == Response::Label1 ? -1.0 : 1.0);
    if (yv != Response::Abstain) bv.add(yv == Response::Label1 ? 1.0 : -1.0);

    if (check_significant_var(au_minus_am, per_check_delta, cfg.test_cfg))
      return shrink(true, Trigger::VarU);
    if (check_significant_var(av_minus_am, per_check_delta, cfg.test_cfg))
      return shrink(false, Trigger::VarV);
    if (check_significant(neg_bu, per_check_delta, cfg.test_cfg))
      return shrink(true, Trigger::LabelU);
    if (check_significant(bv, per_check_delta, cfg.test_cfg))
      return shrink(false, Trigger::LabelV);
  }
}

// Full run: num_rounds(eps) rounds at per-check confidence delta/(4 rounds).
// Deterministic given the rng state. On budget exhaustion the result carries
// the midpoint of the deepest completed interval.
template <class Law>
ThresholdResult run_threshold_learner(const Law& law, const LearnerConfig& cfg, SplitMix64& rng) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("delta in (0, 1)");
  const int rounds = num_rounds(cfg.epsilon);
  ThresholdResult result;
  IntervalState state;
  if (rounds == 0) {
    result.theta_hat = 0.5;
    return result;
  }
  const double per_check_delta = cfg.delta / (4.0 * rounds);
  for (int k = 0; k < rounds; ++k) {
    auto [next, rec] = run_round(state, law, per_check_delta, cfg, result.total_queries, rng);
    result.total_queries += rec.queries_used;
    result.rounds.push_back(rec);
    if (rec.trigger == Trigger::Budget) {
      result.stop_reason = StopReason::BudgetExhausted;
      result.theta_hat = (state.lo + state.hi) / 2.0;
      return result;
    }
    state = next;
  }
  result.theta_hat = (state.lo + state.hi) / 2.0;
  return result;
}

ThresholdResult run_threshold_learner(const OneDimLabeler& labeler, const LearnerConfig& cfg,
                                      SplitMix64& rng);

}  // namespace ablearn
