#include "ablearn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ablearn {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Consistency: return "consistency";
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Adaptivity: return "adaptivity";
    case ExperimentKind::Calibration: return "calibration";
  }
  return "?";
}

const char* to_string(Mode m) { return m == Mode::Threshold ? "threshold" : "boundary"; }

// --- config parsing ---------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
  }
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': expected a comma-separated list");
  return out;
}

// table syntax: t0:f0,t1:f1,...
std::vector<std::pair<double, double>> to_table(const std::string& key, const std::string& v) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("key '" + key + "': expected t:f pairs, got '" + item + "'");
    out.emplace_back(to_double(key, trim(item.substr(0, colon))),
                     to_double(key, trim(item.substr(colon + 1))));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty table");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k = {
        "epsilon",      "epsilon_list", "delta",      "trials",  "seed",
        "max_queries",  "d0",           "d1",         "threads", "out",
        "format",       "gamma",        "dim",        "n_max",   "quadrature_resolution",
        "boundary",     "boundary_a",   "boundary_b", "boundary_c",
        "boundary_slopes", "boundary_intercept",
        "bump_base",    "bump_amplitudes", "bump_centers", "bump_widths",
    };
    const std::vector<std::string> labeler_keys = {
        "labeler", "theta_star", "alpha",  "beta",  "noise_c", "c_prime",
        "level",   "band_lo",    "band_hi", "table", "lb_k",    "lb_epsilon",
    };
    for (const auto& lk : labeler_keys) {
      k.insert(lk);
      k.insert("labeler2_" + lk);
    }
    return k;
  }();
  return keys;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!known_keys().count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    cfg[key] = value;
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

// --- spec construction ------------------------------------------------------

namespace {

LabelerSpec labeler_from_config(const Config& cfg, const std::string& prefix) {
  LabelerSpec s;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = cfg.find(prefix + key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("labeler")) s.family = *v;
  if (const auto* v = get("theta_star")) s.theta_star = to_double("theta_star", *v);
  if (const auto* v = get("alpha")) s.alpha = to_double("alpha", *v);
  if (const auto* v = get("beta")) s.beta = to_double("beta", *v);
  if (const auto* v = get("noise_c")) s.noise_c = to_double("noise_c", *v);
  if (const auto* v = get("c_prime")) s.c_prime = to_double("c_prime", *v);
  if (const auto* v = get("level")) s.level = to_double("level", *v);
  if (const auto* v = get("band_lo")) s.band_lo = to_double("band_lo", *v);
  if (const auto* v = get("band_hi")) s.band_hi = to_double("band_hi", *v);
  if (const auto* v = get("table")) s.table = to_table("table", *v);
  if (const auto* v = get("lb_k")) s.lb_k = static_cast<int>(to_u64("lb_k", *v));
  if (const auto* v = get("lb_epsilon")) s.lb_epsilon = to_double("lb_epsilon", *v);
  static const std::set<std::string> families = {"power", "flat_band", "constant", "table",
                                                 "lower_bound"};
  if (!families.count(s.family)) throw ConfigError("unknown labeler family: " + s.family);
  return s;
}

}  // namespace

AbstentionProfile LabelerSpec::profile() const {
  if (family == "power") return {PowerProfile{c_prime, alpha}};
  if (family == "flat_band") return {FlatBandProfile{level, band_lo, band_hi, {c_prime, alpha}}};
  if (family == "constant") return {ConstantProfile{level}};
  if (family == "table") return {TableProfile{table}};
  if (family == "lower_bound") return {PowerProfile{1.0, alpha}};
  throw ConfigError("unknown labeler family: " + family);
}

OneDimLabeler LabelerSpec::build() const {
  if (family == "lower_bound") return LowerBoundLabeler{lb_k, lb_epsilon, alpha, beta};
  const AbstentionProfile p = profile();
  if (family == "table" && !p.nondecreasing())
    throw ConfigError("table profile must be nondecreasing in the distance");
  if (!(theta_star >= 0.0 && theta_star <= 1.0))
    throw ConfigError("theta_star must be in [0, 1]");
  if (!(noise_c >= 0.0 && noise_c <= 1.0)) throw ConfigError("noise_c must be in [0, 1]");
  if (beta < 0.0) throw ConfigError("beta must be nonnegative");
  return ThresholdLabeler{theta_star, p, noise_c, beta};
}

BoundaryLabeler LabelerSpec::build_boundary(const SmoothBoundary& g) const {
  if (family == "lower_bound")
    throw ConfigError("lower_bound labelers are one-dimensional only");
  return BoundaryLabeler{g.dim, g.eval, profile(), noise_c, beta};
}

SmoothBoundary BoundarySpec::build() const {
  SmoothBoundary g;
  if (family == "quadratic")
    g = make_quadratic_boundary(a, b, c);
  else if (family == "constant")
    g = make_constant_boundary(c, dim);
  else if (family == "affine")
    g = make_affine_boundary(slopes.empty() ? std::vector<double>{0.5} : slopes, intercept);
  else if (family == "sum_of_bumps")
    g = make_sum_of_bumps_boundary(bump_base, bump_amplitudes, bump_centers, bump_widths);
  else
    throw ConfigError("unknown boundary family: " + family);

  // boundary values must stay inside the instance space
  std::vector<double> xt(static_cast<std::size_t>(g.dim - 1));
  std::vector<int> idx(xt.size(), 0);
  const int res = 64;
  for (;;) {
    for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = static_cast<double>(idx[i]) / res;
    const double v = g.eval(xt);
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError("boundary leaves [0, 1] (value " + std::to_string(v) + ")");
    std::size_t axis = 0;
    while (axis < idx.size() && ++idx[axis] > res) idx[axis++] = 0;
    if (axis == idx.size()) break;
  }
  return g;
}

ExperimentSpec spec_from_config(const Config& cfg, ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  s.labeler = labeler_from_config(cfg, "");
  if (cfg.count("labeler2_labeler")) s.labeler2 = labeler_from_config(cfg, "labeler2_");

  const auto get = [&](const char* key) -> const std::string* {
    const auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("epsilon")) s.epsilon_list = {to_double("epsilon", *v)};
  if (const auto* v = get("epsilon_list")) s.epsilon_list = to_double_list("epsilon_list", *v);
  if (s.epsilon_list.empty()) s.epsilon_list = {0.01};
  if (const auto* v = get("delta")) s.learner.delta = to_double("delta", *v);
  if (const auto* v = get("d0")) s.learner.test_cfg.d0 = to_double("d0", *v);
  if (const auto* v = get("d1")) s.learner.test_cfg.d1 = to_double("d1", *v);
  if (const auto* v = get("trials")) s.trials = to_u64("trials", *v);
  if (const auto* v = get("seed")) s.root_seed = to_u64("seed", *v);
  if (const auto* v = get("max_queries")) s.learner.max_queries = to_u64("max_queries", *v);
  if (const auto* v = get("threads")) s.threads = static_cast<int>(to_u64("threads", *v));
  if (const auto* v = get("out")) s.output_path = *v;
  if (const auto* v = get("format")) s.format = *v;
  if (const auto* v = get("gamma")) s.gamma = static_cast<int>(to_u64("gamma", *v));
  if (const auto* v = get("n_max")) s.calib_n_max = to_u64("n_max", *v);
  if (const auto* v = get("quadrature_resolution"))
    s.quadrature_resolution = static_cast<int>(to_u64("quadrature_resolution", *v));

  if (cfg.count("boundary")) {
    s.mode = Mode::Boundary;
    s.boundary.family = cfg.at("boundary");
    if (const auto* v = get("boundary_a")) s.boundary.a = to_double("boundary_a", *v);
    if (const auto* v = get("boundary_b")) s.boundary.b = to_double("boundary_b", *v);
    if (const auto* v = get("boundary_c")) s.boundary.c = to_double("boundary_c", *v);
    if (const auto* v = get("boundary_slopes"))
      s.boundary.slopes = to_double_list("boundary_slopes", *v);
    if (const auto* v = get("boundary_intercept"))
      s.boundary.intercept = to_double("boundary_intercept", *v);
    if (const auto* v = get("bump_base")) s.boundary.bump_base = to_double("bump_base", *v);
    if (const auto* v = get("bump_amplitudes"))
      s.boundary.bump_amplitudes = to_double_list("bump_amplitudes", *v);
    if (const auto* v = get("bump_centers"))
      s.boundary.bump_centers = to_double_list("bump_centers", *v);
    if (const auto* v = get("bump_widths"))
      s.boundary.bump_widths = to_double_list("bump_widths", *v);
    if (const auto* v = get("dim")) s.boundary.dim = static_cast<int>(to_u64("dim", *v));
  }

  if (s.trials < 1) throw ConfigError("trials >= 1 required");
  if (s.format != "json" && s.format != "csv")
    throw ConfigError("format must be json or csv, got '" + s.format + "'");
  for (double e : s.epsilon_list)
    if (!(e > 0.0 && e <= 0.5)) throw ConfigError("epsilon values must be in (0, 1/2]");
  if (kind == ExperimentKind::Scaling || kind == ExperimentKind::Adaptivity) {
    if (s.epsilon_list.size() < 3)
      throw ConfigError("scaling needs at least 3 epsilon values");
    for (std::size_t i = 1; i < s.epsilon_list.size(); ++i)
      if (!(s.epsilon_list[i] < s.epsilon_list[i - 1]))
        throw ConfigError("epsilon_list must be strictly decreasing");
  }
  if (kind == ExperimentKind::Adaptivity) {
    if (!s.labeler2) throw ConfigError("adaptivity needs labeler2_* keys");
    if (s.labeler.beta != s.labeler2->beta)
      throw ConfigError("adaptivity labelers must share beta");
  }
  if (kind == ExperimentKind::Calibration) {
    if (const auto* v = get("trials")) s.calib_trials = to_u64("trials", *v);
  }
  return s;
}

// --- engines -----------------------------------------------------------------

namespace {

std::map<std::string, std::string> echo_spec(const ExperimentSpec& spec) {
  std::map<std::string, std::string> e;
  const auto put_d = [&](const std::string& k, double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    e[k] = os.str();
  };
  e["kind"] = to_string(spec.kind);
  e["mode"] = to_string(spec.mode);
  e["labeler"] = spec.labeler.family;
  put_d("theta_star", spec.labeler.theta_star);
  put_d("alpha", spec.labeler.alpha);
  put_d("beta", spec.labeler.beta);
  put_d("noise_c", spec.labeler.noise_c);
  put_d("c_prime", spec.labeler.c_prime);
  if (spec.labeler.family == "flat_band" || spec.labeler.family == "constant") {
    put_d("level", spec.labeler.level);
    put_d("band_lo", spec.labeler.band_lo);
    put_d("band_hi", spec.labeler.band_hi);
  }
  if (spec.labeler.family == "lower_bound") {
    e["lb_k"] = std::to_string(spec.labeler.lb_k);
    put_d("lb_epsilon", spec.labeler.lb_epsilon);
  }
  if (spec.labeler2) {
    e["labeler2"] = spec.labeler2->family;
    put_d("labeler2_theta_star", spec.labeler2->theta_star);
    put_d("labeler2_alpha", spec.labeler2->alpha);
    put_d("labeler2_beta", spec.labeler2->beta);
    put_d("labeler2_noise_c", spec.labeler2->noise_c);
    put_d("labeler2_level", spec.labeler2->level);
  }
  if (spec.mode == Mode::Boundary) {
    e["boundary"] = spec.boundary.family;
    put_d("boundary_a", spec.boundary.a);
    put_d("boundary_b", spec.boundary.b);
    put_d("boundary_c", spec.boundary.c);
    e["dim"] = std::to_string(spec.boundary.dim);
    e["gamma"] = std::to_string(spec.gamma);
    e["quadrature_resolution"] = std::to_string(spec.quadrature_resolution);
  }
  {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < spec.epsilon_list.size(); ++i)
      os << (i ? "," : "") << spec.epsilon_list[i];
    e["epsilon_list"] = os.str();
  }
  put_d("delta", spec.learner.delta);
  put_d("d0", spec.learner.test_cfg.d0);
  put_d("d1", spec.learner.test_cfg.d1);
  e["trials"] = std::to_string(spec.trials);
  e["max_queries"] = std::to_string(spec.learner.max_queries);
  e["seed"] = std::to_string(spec.root_seed);
  return e;
}

TrialOutcome run_one_threshold_trial(const ExperimentSpec& spec, const OneDimLabeler& labeler,
                                     double epsilon, std::size_t eps_index,
                                     std::size_t trial_index, int slot) {
  TrialOutcome out;
  out.slot = slot;
  out.eps_index = eps_index;
  out.trial_index = trial_index;
  out.seed = derive_seed(spec.root_seed, eps_index, trial_index, static_cast<std::uint64_t>(slot));
  LearnerConfig cfg = spec.learner;
  cfg.epsilon = epsilon;
  SplitMix64 rng(out.seed);
  const ThresholdResult res = run_threshold_learner(labeler, cfg, rng);
  out.queries = res.total_queries;
  out.stop_reason = res.stop_reason;
  out.error = std::abs(res.theta_hat - boundary_of(labeler));
  out.success = res.stop_reason == StopReason::Completed && out.error <= epsilon;
  for (const auto& r : res.rounds) {
    if (r.trigger == Trigger::VarU || r.trigger == Trigger::VarV) ++out.var_triggers;
    if (r.trigger == Trigger::LabelU || r.trigger == Trigger::LabelV) ++out.label_triggers;
  }
  if (!res.rounds.empty() && res.rounds.back().trigger != Trigger::Budget)
    out.final_trigger = res.rounds.back().trigger;
  return out;
}

TrialOutcome run_one_boundary_trial(const ExperimentSpec& spec, const BoundaryLabeler& labeler,
                                    const SmoothBoundary& g, double epsilon,
                                    std::size_t eps_index, std::size_t trial_index) {
  TrialOutcome out;
  out.eps_index = eps_index;
  out.trial_index = trial_index;
  out.seed = derive_seed(spec.root_seed, eps_index, trial_index, 0);
  LearnerConfig cfg = spec.learner;
  cfg.epsilon = epsilon;
  // node-level parallelism stays off here; trials are the parallel axis
  const BoundaryResult res = run_boundary_learner(labeler, cfg, spec.gamma, out.seed, 1);
  out.queries = res.total_queries;
  out.stop_reason = res.stop_reason;
  out.error = l1_distance([&](std::span<const double> xt) { return res.boundary.eval(xt); },
                          g.eval, g.dim, spec.quadrature_resolution);
  out.success = res.stop_reason == StopReason::Completed && out.error <= epsilon;
  return out;
}

std::vector<TrialOutcome> run_trials(const ExperimentSpec& spec, int slot,
                                     const LabelerSpec& labeler_spec) {
  const std::size_t n_eps = spec.epsilon_list.size();
  const std::size_t total = n_eps * spec.trials;
  std::vector<TrialOutcome> out(total);

  OneDimLabeler one_dim;
  BoundaryLabeler boundary_labeler;
  SmoothBoundary g;
  if (spec.mode == Mode::Threshold) {
    one_dim = labeler_spec.build();
  } else {
    g = spec.boundary.build();
    boundary_labeler = labeler_spec.build_boundary(g);
  }

  const std::int64_t count = static_cast<std::int64_t>(total);
#ifndef _OPENMP
  (void)0;
#else
#pragma omp parallel for schedule(dynamic) \
    num_threads(spec.threads > 0 ? spec.threads : omp_get_max_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    const std::size_t eps_index = static_cast<std::size_t>(i) / spec.trials;
    const std::size_t trial_index = static_cast<std::size_t>(i) % spec.trials;
    const double epsilon = spec.epsilon_list[eps_index];
    out[static_cast<std::size_t>(i)] =
        spec.mode == Mode::Threshold
            ? run_one_threshold_trial(spec, one_dim, epsilon, eps_index, trial_index, slot)
            : run_one_boundary_trial(spec, boundary_labeler, g, epsilon, eps_index, trial_index);
  }
  return out;
}

std::vector<EpsilonStats> summarize(const ExperimentSpec& spec,
                                    const std::vector<TrialOutcome>& trials) {
  std::vector<EpsilonStats> stats(spec.epsilon_list.size());
  for (std::size_t ei = 0; ei < spec.epsilon_list.size(); ++ei) {
    EpsilonStats& s = stats[ei];
    s.epsilon = spec.epsilon_list[ei];
    std::vector<double> queries;
    std::size_t successes = 0;
    for (const auto& t : trials) {
      if (t.eps_index != ei) continue;
      queries.push_back(static_cast<double>(t.queries));
      successes += t.success;
      s.budget_exhausted_count += (t.stop_reason == StopReason::BudgetExhausted);
    }
    const double n = static_cast<double>(queries.size());
    s.success_rate = n == 0 ? 0.0 : static_cast<double>(successes) / n;
    double mean = 0.0;
    for (double q : queries) mean += q;
    mean = n == 0 ? 0.0 : mean / n;
    s.mean_queries = mean;
    double ss = 0.0;
    for (double q : queries) ss += (q - mean) * (q - mean);
    s.stddev_queries = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(queries.begin(), queries.end());
    if (!queries.empty()) {
      const std::size_t mid = queries.size() / 2;
      s.median_queries = queries.size() % 2 ? queries[mid]
                                            : 0.5 * (queries[mid - 1] + queries[mid]);
    }
  }
  return stats;
}

ExperimentReport base_report(const ExperimentSpec& spec) {
  ExperimentReport r;
  r.kind = to_string(spec.kind);
  r.mode = to_string(spec.mode);
  r.root_seed = spec.root_seed;
  r.spec_echo = echo_spec(spec);
  return r;
}

void fit_scaling_slope(const ExperimentSpec& spec, ExperimentReport& report) {
  for (const auto& s : report.per_epsilon) {
    const std::size_t trials_at_eps = spec.trials;
    if (s.budget_exhausted_count == trials_at_eps) {
      std::ostringstream os;
      os.precision(17);
      os << "all trials exhausted their budget at epsilon = " << s.epsilon;
      report.fit_refusal = os.str();
      return;
    }
  }
  std::vector<double> inv_eps, mean_q;
  for (const auto& s : report.per_epsilon) {
    inv_eps.push_back(1.0 / s.epsilon);
    mean_q.push_back(s.mean_queries);
  }
  const SlopeFit fit = fit_loglog(inv_eps, mean_q);
  report.fitted_slope = fit.slope;
  report.fitted_slope_stderr = fit.stderr_;
}

}  // namespace

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog needs >= 2 aligned points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - my - fit.slope * (lx[i] - mx);
      rss += r * r;
    }
    fit.stderr_ = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return fit;
}

ExperimentResult run_consistency(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.trials = run_trials(spec, 0, spec.labeler);
  result.report = base_report(spec);
  result.report.per_epsilon = summarize(spec, result.trials);
  return result;
}

ExperimentResult run_scaling(const ExperimentSpec& spec) {
  ExperimentResult result = run_consistency(spec);
  result.report.kind = to_string(ExperimentKind::Scaling);
  fit_scaling_slope(spec, result.report);
  return result;
}

AdaptivityResult run_adaptivity(const ExperimentSpec& spec) {
  if (!spec.labeler2) throw ConfigError("adaptivity needs a second labeler spec");
  AdaptivityResult result;

  result.trials = run_trials(spec, 0, spec.labeler);
  result.report.monotone = base_report(spec);
  result.report.monotone.kind = "scaling";
  result.report.monotone.per_epsilon = summarize(spec, result.trials);
  fit_scaling_slope(spec, result.report.monotone);

  auto flat_trials = run_trials(spec, 1, *spec.labeler2);
  result.report.flat = base_report(spec);
  result.report.flat.kind = "scaling";
  result.report.flat.per_epsilon = summarize(spec, flat_trials);
  fit_scaling_slope(spec, result.report.flat);

  if (result.report.monotone.fitted_slope && result.report.flat.fitted_slope)
    result.report.slope_difference =
        *result.report.monotone.fitted_slope - *result.report.flat.fitted_slope;

  result.trials.insert(result.trials.end(), flat_trials.begin(), flat_trials.end());
  return result;
}

// --- emission ----------------------------------------------------------------

namespace {

json to_json(const EpsilonStats& s) {
  return json{{"epsilon", s.epsilon},
              {"success_rate", s.success_rate},
              {"mean_queries", s.mean_queries},
              {"median_queries", s.median_queries},
              {"stddev_queries", s.stddev_queries},
              {"budget_exhausted_count", s.budget_exhausted_count}};
}

json to_json(const ExperimentReport& r) {
  json j{{"schema_version", r.schema_version},
         {"library_version", r.library_version},
         {"kind", r.kind},
         {"mode", r.mode},
         {"root_seed", r.root_seed},
         {"seed_scheme", r.seed_scheme},
         {"spec_echo", r.spec_echo},
         {"per_epsilon", json::array()}};
  for (const auto& s : r.per_epsilon) j["per_epsilon"].push_back(to_json(s));
  if (r.fitted_slope) j["fitted_slope"] = *r.fitted_slope;
  if (r.fitted_slope_stderr) j["fitted_slope_stderr"] = *r.fitted_slope_stderr;
  if (!r.fit_refusal.empty()) j["fit_refusal"] = r.fit_refusal;
  return j;
}

}  // namespace

std::string report_json(const ExperimentReport& report) { return to_json(report).dump(2) + "\n"; }

std::string report_json(const AdaptivityReport& report) {
  json j{{"schema_version", kSchemaVersion},
         {"library_version", kLibraryVersion},
         {"kind", "adaptivity"},
         {"monotone", to_json(report.monotone)},
         {"flat", to_json(report.flat)}};
  if (report.slope_difference) j["slope_difference"] = *report.slope_difference;
  return j.dump(2) + "\n";
}

std::string report_json(const CalibrationReport& report, std::uint64_t root_seed) {
  json j{{"schema_version", kSchemaVersion},
         {"library_version", kLibraryVersion},
         {"kind", "calibration"},
         {"root_seed", root_seed},
         {"delta", report.delta},
         {"n_max", report.n_max},
         {"trials", report.trials},
         {"calibrated_d0", report.calibrated_d0},
         {"calibrated_d1", report.calibrated_d1},
         {"observed_fp_rate_d0", report.observed_fp_rate_d0},
         {"observed_fp_rate_d1", report.observed_fp_rate_d1}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.library_version = j.at("library_version").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.root_seed = j.at("root_seed").get<std::uint64_t>();
  r.seed_scheme = j.at("seed_scheme").get<std::string>();
  r.spec_echo = j.at("spec_echo").get<std::map<std::string, std::string>>();
  for (const auto& s : j.at("per_epsilon")) {
    EpsilonStats e;
    e.epsilon = s.at("epsilon").get<double>();
    e.success_rate = s.at("success_rate").get<double>();
    e.mean_queries = s.at("mean_queries").get<double>();
    e.median_queries = s.at("median_queries").get<double>();
    e.stddev_queries = s.at("stddev_queries").get<double>();
    e.budget_exhausted_count = s.at("budget_exhausted_count").get<std::uint64_t>();
    r.per_epsilon.push_back(e);
  }
  if (j.contains("fitted_slope")) r.fitted_slope = j.at("fitted_slope").get<double>();
  if (j.contains("fitted_slope_stderr"))
    r.fitted_slope_stderr = j.at("fitted_slope_stderr").get<double>();
  if (j.contains("fit_refusal")) r.fit_refusal = j.at("fit_refusal").get<std::string>();
  return r;
}

std::string trials_csv(const std::vector<TrialOutcome>& trials,
                       const std::vector<double>& epsilon_list) {
  std::ostringstream os;
  os.precision(17);
  os << "run_id,epsilon,seed,success,queries,stop_reason\n";
  for (const auto& t : trials) {
    os << "s" << t.slot << "e" << t.eps_index << "t" << t.trial_index << ","
       << epsilon_list[t.eps_index] << "," << t.seed << "," << (t.success ? 1 : 0) << ","
       << t.queries << "," << to_string(t.stop_reason) << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ablearn
