// ablearn CLI: seeded experiment campaigns with JSON/CSV reports.
//
// Subcommands: calibrate, consistency, scaling, adaptivity, boundary.
// Exit codes: 0 ok, 1 config error, 2 I/O error, 3 assertion flag failed.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ablearn/harness.hpp"

namespace {

using namespace ablearn;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> max_queries;
  std::optional<int> threads;
  std::string assert_slope;         // "lo:hi"
  std::optional<double> assert_success_rate;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines)");
  cmd->add_option("--seed", args.seed, "root seed");
  cmd->add_option("--out", args.out, "output file (default: stdout)");
  cmd->add_option("--format", args.format, "json or csv");
  cmd->add_option("--trials", args.trials, "trials per epsilon");
  cmd->add_option("--max-queries", args.max_queries, "query budget per run");
  cmd->add_option("--threads", args.threads, "0 = all cores, 1 = serial");
  cmd->add_option("--assert-slope", args.assert_slope,
                  "lo:hi band the fitted slope must fall in (exit 3 otherwise)");
  cmd->add_option("--assert-success-rate", args.assert_success_rate,
                  "minimum success rate at every epsilon (exit 3 otherwise)");
}

ExperimentSpec load_spec(const CommonArgs& args, ExperimentKind kind) {
  Config cfg;
  if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
  ExperimentSpec spec = spec_from_config(cfg, kind);
  if (args.seed) spec.root_seed = *args.seed;
  if (args.out) spec.output_path = *args.out;
  if (args.format) spec.format = *args.format;
  if (args.trials) spec.trials = *args.trials;
  if (args.max_queries) spec.learner.max_queries = *args.max_queries;
  if (args.threads) spec.threads = *args.threads;
  if (spec.format != "json" && spec.format != "csv")
    throw ConfigError("format must be json or csv");
  return spec;
}

void emit(const ExperimentSpec& spec, const std::string& json_text,
          const std::vector<TrialOutcome>& trials) {
  const std::string content =
      spec.format == "json" ? json_text : trials_csv(trials, spec.epsilon_list);
  if (spec.output_path.empty())
    std::cout << content;
  else
    write_file(spec.output_path, content);
}

// exit-3 assertions, checked after emission so the report always lands
int check_assertions(const CommonArgs& args, const ExperimentReport& report) {
  if (!args.assert_slope.empty()) {
    const auto colon = args.assert_slope.find(':');
    if (colon == std::string::npos) throw ConfigError("--assert-slope expects lo:hi");
    const double lo = std::stod(args.assert_slope.substr(0, colon));
    const double hi = std::stod(args.assert_slope.substr(colon + 1));
    if (!report.fitted_slope) {
      std::cerr << "assert-slope: no fitted slope"
                << (report.fit_refusal.empty() ? "" : " (" + report.fit_refusal + ")") << "\n";
      return 3;
    }
    if (*report.fitted_slope < lo || *report.fitted_slope > hi) {
      std::cerr << "assert-slope: slope " << *report.fitted_slope << " outside [" << lo << ", "
                << hi << "]\n";
      return 3;
    }
  }
  if (args.assert_success_rate) {
    for (const auto& s : report.per_epsilon) {
      if (s.success_rate < *args.assert_success_rate) {
        std::cerr << "assert-success-rate: " << s.success_rate << " < "
                  << *args.assert_success_rate << " at epsilon " << s.epsilon << "\n";
        return 3;
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active learning from an abstaining noisy labeler: experiment harness"};
  app.require_subcommand(1);

  CommonArgs calibrate_args, consistency_args, scaling_args, adaptivity_args, boundary_args;
  std::optional<double> calib_delta;
  std::optional<std::uint64_t> calib_n_max;

  auto* cal = app.add_subcommand("calibrate", "calibrate the test constants D0, D1");
  add_common(cal, calibrate_args);
  cal->add_option("--delta", calib_delta, "target false-positive rate");
  cal->add_option("--n-max", calib_n_max, "stream length");

  auto* con = app.add_subcommand("consistency", "success-rate estimation for a threshold learner");
  add_common(con, consistency_args);
  auto* sca = app.add_subcommand("scaling", "query-complexity scaling over an epsilon grid");
  add_common(sca, scaling_args);
  auto* ada = app.add_subcommand("adaptivity", "scaling comparison of two labelers");
  add_common(ada, adaptivity_args);
  auto* bnd = app.add_subcommand("boundary", "d-dimensional boundary learning consistency");
  add_common(bnd, boundary_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cal->parsed()) {
      ExperimentSpec spec = load_spec(calibrate_args, ExperimentKind::Calibration);
      const double delta = calib_delta.value_or(0.1);
      const std::uint64_t n_max = calib_n_max.value_or(spec.calib_n_max);
      const std::uint64_t trials = calibrate_args.trials.value_or(spec.calib_trials);
      const CalibrationReport report =
          calibrate_constants(delta, n_max, trials, spec.root_seed, spec.threads);
      const std::string text = report_json(report, spec.root_seed);
      if (spec.output_path.empty())
        std::cout << text;
      else
        write_file(spec.output_path, text);
      return 0;
    }
    if (con->parsed() || bnd->parsed()) {
      const CommonArgs& args = con->parsed() ? consistency_args : boundary_args;
      ExperimentSpec spec = load_spec(args, ExperimentKind::Consistency);
      if (bnd->parsed() && spec.mode != Mode::Boundary)
        throw ConfigError("boundary subcommand needs a 'boundary = ...' config key");
      const ExperimentResult result = run_consistency(spec);
      emit(spec, report_json(result.report), result.trials);
      return check_assertions(args, result.report);
    }
    if (sca->parsed()) {
      ExperimentSpec spec = load_spec(scaling_args, ExperimentKind::Scaling);
      const ExperimentResult result = run_scaling(spec);
      emit(spec, report_json(result.report), result.trials);
      return check_assertions(scaling_args, result.report);
    }
    if (ada->parsed()) {
      ExperimentSpec spec = load_spec(adaptivity_args, ExperimentKind::Adaptivity);
      const AdaptivityResult result = run_adaptivity(spec);
      emit(spec, report_json(result.report), result.trials);
      const int rc = check_assertions(adaptivity_args, result.report.monotone);
      return rc != 0 ? rc : check_assertions(adaptivity_args, result.report.flat);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
