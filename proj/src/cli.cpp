#include "adra/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "adra/analytic.hpp"
#include "adra/config_json.hpp"
#include "adra/optimizer.hpp"
#include "adra/simulator.hpp"
#include "json.hpp"

namespace adra::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 12 significant digits; nlohmann then prints the shortest round-trip form.
json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

json policy_json(const AccessPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    return json{{"fixed", number(fixed->p)}};
  }
  return "adaptive";
}

std::int64_t parse_int(const std::string& text) {
  std::size_t used = 0;
  const long long v = std::stoll(text, &used);
  if (used != text.size()) throw std::invalid_argument("not an integer: " + text);
  return v;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("not a number: " + text);
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::string_view class_name(PolicyClass c) {
  return c == PolicyClass::kAdaptive ? "adaptive" : "fixed-optimal";
}

std::string_view variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::kThreshold: return "threshold";
    case SweepVariable::kPeriod: return "period";
    case SweepVariable::kDevices: return "devices";
  }
  return "";
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config_path;
  std::int64_t devices = 0;
  std::int64_t period = 0;
  std::int64_t threshold = 0;
  std::string policy;
  CLI::Option* devices_opt = nullptr;
  CLI::Option* period_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* policy_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON protocol config");
    devices_opt = app->add_option("-n,--devices", devices, "Number of devices N");
    period_opt = app->add_option("-d,--period", period, "Frame length D in slots");
    threshold_opt = app->add_option("--threshold", threshold, "Age threshold in slots");
    policy_opt = app->add_option("--policy", policy, "fixed:<p> | adaptive");
  }

  bool threshold_given() const { return threshold_opt->count() > 0; }

  // Config file first, then explicit flags on top. A sweep may leave its
  // swept dimension unspecified; it then defaults to 1 until overwritten.
  ProtocolConfig resolve(bool need_devices = true, bool need_period = true) const {
    ProtocolConfig config;
    config.policy = AdaptivePolicy{};
    bool have_n = false;
    bool have_d = false;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      config = parse_config(buf.str());
      have_n = have_d = true;
    }
    if (devices_opt->count() > 0) {
      config.n_devices = devices;
      have_n = true;
    }
    if (period_opt->count() > 0) {
      config.frame_len = period;
      have_d = true;
    }
    if (threshold_opt->count() > 0) config.age_threshold = threshold;
    if (policy_opt->count() > 0) config.policy = parse_policy(policy);
    if ((need_devices && !have_n) || (need_period && !have_d)) {
      throw UsageError("--devices and --period (or --config) are required");
    }
    return validate_config(config);
  }
};

struct SimFlags {
  std::optional<std::int64_t> slots;
  std::optional<std::int64_t> warmup;
  int runs = kDefaultSimRuns;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--slots", slots, "Slots per run, whole frames (default ~1e6)");
    app->add_option("--warmup", warmup, "Discarded slots per run (default 100 frames)");
    app->add_option("--runs", runs, "Independent replications")->capture_default_str();
    app->add_option("--seed", seed, "Base RNG seed")->capture_default_str();
  }

  SimConfig resolve(const ProtocolConfig& protocol) const {
    SimConfig sim = default_sim_config(protocol);
    if (slots) sim.horizon_slots = *slots;
    if (warmup) {
      sim.warmup_slots = *warmup;
    } else if (sim.warmup_slots >= sim.horizon_slots) {
      sim.warmup_slots = 0;
    }
    sim.runs = runs;
    sim.seed = seed;
    validate_sim_config(sim);
    return sim;
  }
};

struct SearchFlags {
  std::optional<std::int64_t> delta_max;
  std::string p_grid;

  void attach(CLI::App* app) {
    app->add_option("--delta-max", delta_max, "Largest threshold searched (default 3*N*D)");
    app->add_option("--p-grid", p_grid, "Comma-separated fixed probabilities");
  }

  std::int64_t delta_max_for(const ProtocolConfig& config) const {
    return delta_max ? *delta_max : default_delta_max(config);
  }

  std::vector<double> grid() const {
    return p_grid.empty() ? default_p_grid() : parse_p_grid(p_grid);
  }
};

json error_record(const ProtocolConfig& config, const Error& e) {
  return json{{"config", config_to_json(config)},
              {"error", std::string(error_name(e.code()))},
              {"message", e.what()}};
}

json report_json(const SimConfig& sim, const SimReport& report) {
  json per_run = json::array();
  for (double v : report.per_run_aoi) per_run.push_back(number(v));
  return json{{"config", config_to_json(sim.protocol)},
              {"horizon_slots", sim.horizon_slots},
              {"warmup_slots", sim.warmup_slots},
              {"runs", sim.runs},
              {"seed", sim.seed},
              {"per_run_aoi", per_run},
              {"mean_aoi", number(report.mean_aoi)},
              {"std_err", report.std_err ? number(*report.std_err) : json(nullptr)},
              {"success_rate", number(report.success_rate)}};
}

int cmd_analyze(const CommonFlags& common, std::ostream& out) {
  const ProtocolConfig config = common.resolve();
  try {
    const AnalyticSolution sol = analyze(config);
    json rec{{"config", config_to_json(config)},
             {"beta_lambda", number(sol.steady.beta_lambda)},
             {"beta_lambda_plus", number(sol.steady.beta_lambda_plus)},
             {"avg_aoi", number(sol.avg_aoi)},
             {"iterations", sol.iterations},
             {"residual", number(sol.residual)},
             {"fixed_points_found", sol.fixed_points_found}};
    out << rec.dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    out << error_record(config, e).dump(2) << '\n';
    return kExitModel;
  }
}

int cmd_simulate(const CommonFlags& common, const SimFlags& sim_flags, std::ostream& out) {
  const ProtocolConfig config = common.resolve();
  const SimConfig sim = sim_flags.resolve(config);
  out << report_json(sim, run_replicated(sim)).dump(2) << '\n';
  return kExitOk;
}

void write_curve_csv(const std::string& path, const SearchResult& result) {
  std::ofstream csv(path);
  if (!csv) throw UsageError("cannot write " + path);
  csv << "delta,policy,aoi,failure\n";
  for (const auto& point : result.curve) {
    csv << point.delta << ',' << policy_label(point.policy) << ',' << format_number(point.aoi)
        << ',' << (point.failure ? error_name(*point.failure) : "") << '\n';
  }
}

int cmd_optimize(const CommonFlags& common, const SearchFlags& search, const std::string& out_path,
                 std::ostream& out) {
  const ProtocolConfig config = common.resolve();
  const std::int64_t delta_max = search.delta_max_for(config);
  const std::vector<double> grid = search.grid();
  try {
    const AiraComparison cmp = compare_to_aira(config, delta_max, grid);
    json rec{{"config", config_to_json(config)},
             {"policy_class", is_adaptive(config.policy) ? "adaptive" : "fixed-optimal"},
             {"delta_max", delta_max},
             {"best",
              {{"delta", cmp.adra.best_delta},
               {"policy", policy_json(cmp.adra.best_policy)},
               {"aoi", number(cmp.adra.best_aoi)}}},
             {"aira",
              {{"delta", cmp.aira_delta},
               {"policy", policy_json(cmp.aira_policy)},
               {"aoi", number(cmp.aira_aoi)}}},
             {"improvement", number(cmp.improvement)},
             {"curve_points", cmp.adra.curve.size()},
             {"curve_path", out_path.empty() ? json(nullptr) : json(out_path)}};
    if (!is_adaptive(config.policy)) {
      json g = json::array();
      for (double p : grid) g.push_back(number(p));
      rec["p_grid"] = g;
    }
    if (!out_path.empty()) write_curve_csv(out_path, cmp.adra);
    out << rec.dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    out << error_record(config, e).dump(2) << '\n';
    return kExitModel;
  }
}

struct ResolvedPoint {
  double aoi = kNaN;
  std::optional<ProtocolConfig> config;  // what the simulator should run
};

ResolvedPoint resolve_sweep_point(ProtocolConfig config, PolicyClass cls, bool optimize_threshold,
                                  const SearchFlags& search) {
  ResolvedPoint point;
  try {
    if (cls == PolicyClass::kAdaptive) {
      config.policy = AdaptivePolicy{};
      if (optimize_threshold) {
        const SearchResult r = optimize_delta(config, search.delta_max_for(config));
        config.age_threshold = r.best_delta;
        point.aoi = r.best_aoi;
      } else {
        point.aoi = analyze(config).avg_aoi;
      }
    } else {
      const SearchResult r = optimize_threshold
                                 ? optimize_joint(config, search.delta_max_for(config), search.grid())
                                 : optimize_p(config, search.grid());
      config.age_threshold = r.best_delta;
      config.policy = r.best_policy;
      point.aoi = r.best_aoi;
    }
    point.config = config;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateChain && e.code() != ErrorCode::kNonConvergence &&
        e.code() != ErrorCode::kAllDegenerate) {
      throw;
    }
  }
  return point;
}

int cmd_sweep(const CommonFlags& common, const SearchFlags& search, const SimFlags& sim_flags,
              const SweepSpec& spec, const std::string& out_path, std::ostream& out) {
  const ProtocolConfig base = common.resolve(spec.variable != SweepVariable::kDevices,
                                             spec.variable != SweepVariable::kPeriod);
  // Threshold is optimized for period/devices sweeps unless pinned.
  const bool optimize_threshold =
      spec.variable != SweepVariable::kThreshold && !common.threshold_given();

  std::ostringstream csv;
  csv << "variable,value,policy,analytic_aoi,sim_aoi,sim_stderr\n";
  for (std::int64_t value : spec.values) {
    ProtocolConfig config = base;
    switch (spec.variable) {
      case SweepVariable::kThreshold: config.age_threshold = value; break;
      case SweepVariable::kPeriod: config.frame_len = value; break;
      case SweepVariable::kDevices: config.n_devices = value; break;
    }
    if (const auto violations = check_config(config);
        !violations.empty() && violations.front().code != ErrorCode::kProbabilityOutOfRange) {
      throw Error(violations.front().code, violations.front().message);
    }
    for (PolicyClass cls : spec.policy_classes) {
      const ResolvedPoint point = resolve_sweep_point(config, cls, optimize_threshold, search);
      csv << variable_name(spec.variable) << ',' << value << ',' << class_name(cls) << ','
          << format_number(point.aoi) << ',';
      if (spec.emit_simulation && point.config) {
        const SimReport report = run_replicated(sim_flags.resolve(*point.config));
        csv << format_number(report.mean_aoi) << ','
            << (report.std_err ? format_number(*report.std_err) : "");
      } else {
        csv << ',';
      }
      csv << '\n';
    }
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(out_path);
    if (!file) throw UsageError("cannot write " + out_path);
    file << csv.str();
  }
  return kExitOk;
}

}  // namespace

std::vector<std::int64_t> parse_values(const std::string& text) {
  std::vector<std::int64_t> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
    const std::int64_t start = parse_int(parts[0]);
    const std::int64_t stop = parse_int(parts[1]);
    const std::int64_t step = parse_int(parts[2]);
    if (step <= 0) throw std::invalid_argument("range step must be positive");
    for (std::int64_t v = start; v <= stop; v += step) values.push_back(v);
  } else {
    for (const auto& part : split(text, ',')) {
      if (!part.empty()) values.push_back(parse_int(part));
    }
  }
  if (values.empty()) throw std::invalid_argument("values list is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) throw std::invalid_argument("values must strictly increase");
  }
  return values;
}

std::vector<double> parse_p_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    const double p = parse_double(part);
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p-grid entries must lie in (0, 1]");
    grid.push_back(p);
  }
  if (grid.empty()) throw std::invalid_argument("p-grid is empty");
  return grid;
}

AccessPolicy parse_policy(const std::string& text) {
  if (text == "adaptive") return AdaptivePolicy{};
  constexpr std::string_view prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) return FixedPolicy{parse_double(text.substr(prefix.size()))};
  throw std::invalid_argument("policy must be fixed:<p> or adaptive, got " + text);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Age of information under age-dependent random access", "adra"};
  app.require_subcommand(1);

  CommonFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "Solve the analytic model for one config");
  analyze_flags.attach(analyze_cmd);

  CommonFlags simulate_common;
  SimFlags simulate_flags;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of the average AoI");
  simulate_common.attach(simulate_cmd);
  simulate_flags.attach(simulate_cmd);

  CommonFlags optimize_common;
  SearchFlags optimize_search;
  std::string optimize_out;
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "Search the threshold (and fixed p) and compare against delta = 0");
  optimize_common.attach(optimize_cmd);
  optimize_search.attach(optimize_cmd);
  optimize_cmd->add_option("--out", optimize_out, "CSV side file for the full search curve");

  CommonFlags sweep_common;
  SearchFlags sweep_search;
  SimFlags sweep_sim;
  std::string sweep_var = "threshold";
  std::string sweep_values;
  std::string sweep_classes = "fixed-optimal,adaptive";
  bool sweep_with_sim = false;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV of the average AoI over one parameter");
  sweep_common.attach(sweep_cmd);
  sweep_search.attach(sweep_cmd);
  sweep_sim.attach(sweep_cmd);
  sweep_cmd->add_option("--var", sweep_var, "threshold | period | devices")
      ->check(CLI::IsMember({"threshold", "period", "devices"}))
      ->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "start:stop:step or v1,v2,...")->required();
  sweep_cmd->add_option("--classes", sweep_classes, "Subset of fixed-optimal,adaptive")
      ->capture_default_str();
  sweep_cmd->add_flag("--with-sim", sweep_with_sim, "Add simulation columns");
  sweep_cmd->add_option("--out", sweep_out, "Write the CSV here instead of stdout");

  std::vector<const char*> argv{"adra"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_flags, out);
    if (*simulate_cmd) return cmd_simulate(simulate_common, simulate_flags, out);
    if (*optimize_cmd) return cmd_optimize(optimize_common, optimize_search, optimize_out, out);
    if (*sweep_cmd) {
      SweepSpec spec;
      spec.variable = sweep_var == "period"    ? SweepVariable::kPeriod
                      : sweep_var == "devices" ? SweepVariable::kDevices
                                               : SweepVariable::kThreshold;
      spec.values = parse_values(sweep_values);
      spec.policy_classes.clear();
      for (const auto& name : split(sweep_classes, ',')) {
        if (name == "fixed-optimal") {
          spec.policy_classes.push_back(PolicyClass::kFixedOptimal);
        } else if (name == "adaptive") {
          spec.policy_classes.push_back(PolicyClass::kAdaptive);
        } else if (!name.empty()) {
          throw UsageError("unknown policy class " + name);
        }
      }
      if (spec.policy_classes.empty()) throw UsageError("no policy classes selected");
      spec.emit_simulation = sweep_with_sim;
      return cmd_sweep(sweep_common, sweep_search, sweep_sim, spec, sweep_out, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << '\n';
    const bool model_error = e.code() == ErrorCode::kDegenerateChain ||
                             e.code() == ErrorCode::kNonConvergence ||
                             e.code() == ErrorCode::kAllDegenerate;
    return model_error ? kExitModel : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace adra::cli
