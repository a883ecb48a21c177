#include "ablearn/threshold_learner.hpp"

namespace ablearn {

const char* to_string(Trigger t) {
  switch (t) {
    case Trigger::VarU: return "var_u";
    case Trigger::VarV: return "var_v";
    case Trigger::LabelU: return "label_u";
    case Trigger::LabelV: return "label_v";
    case Trigger::Budget: return "budget";
  }
  return "?";
}

const char* to_string(StopReason r) {
  return r == StopReason::Completed ? "completed" : "budget_exhausted";
}

int num_rounds(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("epsilon must be in (0, 1/2]");
  const double r = std::log(1.0 / (2.0 * epsilon)) / std::log(4.0 / 3.0);
  const int n = static_cast<int>(std::ceil(r - 1e-9));
  return n < 0 ? 0 : n;
}

ThresholdResult run_threshold_learner(const OneDimLabeler& labeler, const LearnerConfig& cfg,
                                      SplitMix64& rng) {
  return std::visit([&](const auto& lab) { return run_threshold_learner(lab, cfg, rng); },
                    labeler);
}

}  // namespace ablearn
