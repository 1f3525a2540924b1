// Command-line entry point: parses a JSON run config, pins seeds, dispatches
// experiments, and emits CSV reports whose header block echoes the full
// effective configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pegasus/bicycle.hpp"
#include "pegasus/bounds.hpp"
#include "pegasus/counterexample.hpp"
#include "pegasus/grid_experiment.hpp"
#include "pegasus/gridworld.hpp"
#include "pegasus/horizon.hpp"
#include "pegasus/scenario_io.hpp"
#include "pegasus/search.hpp"
#include "pegasus/tabular.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  json params;       // effective (defaults applied)
  std::string out;   // empty: stdout
  int threads = 1;
};

void reject_unknown_keys(const json& object, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

double require_number(const json& p, const std::string& key) {
  if (!p.contains(key)) throw ConfigError("missing required key \"" + key + "\"");
  if (!p[key].is_number()) throw ConfigError("key \"" + key + "\" must be a number");
  return p[key].get<double>();
}

// Fills defaults and validates per command; returns the effective params.
json effective_params(const std::string& command, json p, std::uint64_t run_seed) {
  auto def = [&p](const std::string& key, const json& value) {
    if (!p.contains(key)) p[key] = value;
  };
  if (command == "bounds") {
    reject_unknown_keys(p, {"epsilon", "delta", "d", "d_s", "d_p", "b", "b_r", "m_big", "gamma",
                            "h_eps"},
                        "bounds params");
    require_number(p, "epsilon");
    require_number(p, "delta");
    require_number(p, "d");
    def("d_s", 1);
    def("d_p", 1);
    def("b", 1.0);
    def("b_r", 1.0);
    def("m_big", 1.0);
    if (p.contains("gamma") == p.contains("h_eps"))
      throw ConfigError("bounds needs exactly one of \"gamma\" or \"h_eps\"");
  } else if (command == "counterexample") {
    reject_unknown_keys(p, {"m", "h"}, "counterexample params");
    def("m", 100);
    def("h", 2);
  } else if (command == "fidelity") {
    reject_unknown_keys(p, {"n"}, "fidelity params");
    def("n", 100000);
  } else if (command == "gridworld") {
    reject_unknown_keys(p, {"m_values", "trials", "h", "gamma"}, "gridworld params");
    def("m_values", json::array({1, 5, 10, 30, 100}));
    def("trials", 200);
    def("h", 100);
    def("gamma", 0.99);
    if (!p["m_values"].is_array() || p["m_values"].empty())
      throw ConfigError("\"m_values\" must be a nonempty array");
  } else if (command == "bicycle-train" || command == "bicycle-eval") {
    std::vector<std::string> keys = {"dt",          "noise_halfwidth", "tau_min",
                                     "tau_max",     "nu_min",          "nu_max",
                                     "shaping_scale", "fall_penalty",  "gamma",
                                     "horizon",     "m_scenarios",     "goal_radius",
                                     "goal_distance", "training_mode", "seed"};
    if (command == "bicycle-train") {
      const std::vector<std::string> extra = {"optimizer",  "iters",     "perturb_scale",
                                              "opt_seed",   "step_size", "clamp",
                                              "grad_step",  "scenario_dump"};
      keys.insert(keys.end(), extra.begin(), extra.end());
    } else {
      const std::vector<std::string> extra = {"weights", "weights_file", "rides", "max_steps"};
      keys.insert(keys.end(), extra.begin(), extra.end());
    }
    reject_unknown_keys(p, keys, command + " params");
    const pegasus::bike::BicycleConfig d{};
    def("dt", d.dt);
    def("noise_halfwidth", d.noise_halfwidth);
    def("tau_min", d.tau_min);
    def("tau_max", d.tau_max);
    def("nu_min", d.nu_min);
    def("nu_max", d.nu_max);
    def("shaping_scale", d.shaping_scale);
    def("fall_penalty", d.fall_penalty);
    def("gamma", d.gamma);
    def("horizon", d.horizon);
    def("m_scenarios", d.m_scenarios);
    def("goal_radius", d.goal_radius);
    def("goal_distance", d.goal_distance);
    def("training_mode", command == "bicycle-train");
    def("seed", run_seed);
    if (command == "bicycle-train") {
      def("optimizer", "hill");
      def("iters", 2000);
      def("perturb_scale", 1.0);
      def("opt_seed", 2);
      def("step_size", 0.05);
      def("clamp", 0.5);
      def("grad_step", 1e-3);
      def("scenario_dump", "");
      const std::string opt = p["optimizer"].get<std::string>();
      if (opt != "hill" && opt != "gradient")
        throw ConfigError("\"optimizer\" must be \"hill\" or \"gradient\"");
    } else {
      def("rides", 50);
      def("max_steps", 250000);
      if (p.contains("weights") == p.contains("weights_file"))
        throw ConfigError("bicycle-eval needs exactly one of \"weights\" or \"weights_file\"");
    }
  } else {
    throw ConfigError("unknown command \"" + command + "\"");
  }
  return p;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(doc, {"command", "seed", "params", "out"}, "config");
  RunConfig cfg;
  if (!doc.contains("command") || !doc["command"].is_string())
    throw ConfigError("config needs a string \"command\"");
  cfg.command = doc["command"].get<std::string>();
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("\"seed\" must be an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
  cfg.params = effective_params(cfg.command, doc.value("params", json::object()), cfg.seed);
  return cfg;
}

json effective_config_json(const RunConfig& cfg) {
  json doc;
  doc["command"] = cfg.command;
  doc["seed"] = cfg.seed;
  doc["params"] = cfg.params;
  return doc;
}

void write_header(std::ostream& os, const RunConfig& cfg) {
  os << "# pegasus " << kVersion << "\n";
  os << "# config " << effective_config_json(cfg).dump() << "\n";
}

pegasus::bike::BicycleConfig bicycle_config_from(const json& p) {
  pegasus::bike::BicycleConfig c;
  c.dt = p["dt"].get<double>();
  c.noise_halfwidth = p["noise_halfwidth"].get<double>();
  c.tau_min = p["tau_min"].get<double>();
  c.tau_max = p["tau_max"].get<double>();
  c.nu_min = p["nu_min"].get<double>();
  c.nu_max = p["nu_max"].get<double>();
  c.shaping_scale = p["shaping_scale"].get<double>();
  c.fall_penalty = p["fall_penalty"].get<double>();
  c.gamma = p["gamma"].get<double>();
  c.horizon = p["horizon"].get<int>();
  c.m_scenarios = p["m_scenarios"].get<int>();
  c.goal_radius = p["goal_radius"].get<double>();
  c.goal_distance = p["goal_distance"].get<double>();
  c.training_mode = p["training_mode"].get<bool>();
  c.seed = p["seed"].get<std::uint64_t>();
  return c;
}

using pegasus::format_double;

int run_bounds(const RunConfig& cfg, std::ostream& os) {
  const json& p = cfg.params;
  pegasus::theory::BoundInputs in;
  in.epsilon = p["epsilon"].get<double>();
  in.delta = p["delta"].get<double>();
  in.d = p["d"].get<int>();
  in.d_s = p["d_s"].get<int>();
  in.d_p = p["d_p"].get<int>();
  in.b = p["b"].get<double>();
  in.b_r = p["b_r"].get<double>();
  in.m_big = p["m_big"].get<double>();
  in.h_eps = p.contains("h_eps")
                 ? p["h_eps"].get<int>()
                 : pegasus::horizon_time(in.epsilon, p["gamma"].get<double>(), in.m_big);
  write_header(os, cfg);
  os << "h_eps=" << in.h_eps << "\n";
  os << "covering_bound="
     << format_double(pegasus::theory::covering_bound(std::min(in.epsilon, in.m_big), in.m_big,
                                                      in.d))
     << "\n";
  os << "capacity_log_bound=" << format_double(pegasus::theory::capacity_log_bound(in)) << "\n";
  os << "sample_size_bound=" << format_double(pegasus::theory::sample_size_bound(in)) << "\n";
  return 0;
}

int run_counterexample(const RunConfig& cfg, std::ostream& os) {
  const auto report = pegasus::theory::counterexample_demo(cfg.params["m"].get<int>(),
                                                           cfg.params["h"].get<int>(), cfg.seed);
  write_header(os, cfg);
  os << "# union_measure=" << report.union_measure.get_str() << "\n";
  os << "m,policy_index,v_hat,v_true,gap\n";
  os << report.m << ',' << report.policy_index.get_str() << ',' << format_double(report.v_hat)
     << ',' << format_double(report.v_true) << ',' << format_double(report.gap) << "\n";
  return 0;
}

int run_fidelity(const RunConfig& cfg, std::ostream& os) {
  using namespace pegasus::grid;
  const int n = cfg.params["n"].get<int>();
  const auto model = build_gridworld();
  write_header(os, cfg);
  os << "cell_x,cell_y,action,n,max_abs_z,pass\n";
  bool all_pass = true;
  int pair_index = 0;
  for (int id = 0; id < kSize * kSize; ++id) {
    const Cell cell = cell_from_id(id);
    if (cell == kGoal) continue;
    for (int a = 0; a < kNumActions; ++a) {
      auto sampler = [&](std::span<const double> pv) { return model.transition(cell, a, pv); };
      const auto rep = pegasus::fidelity_check<Cell>(
          sampler, 1, analytic_next_distribution(cell, a), n,
          cfg.seed + static_cast<std::uint64_t>(pair_index), cell_to_text);
      double max_z = 0.0;
      for (double z : rep.z_scores) max_z = std::max(max_z, std::fabs(z));
      all_pass = all_pass && rep.pass;
      os << cell.x << ',' << cell.y << ',' << a << ',' << n << ',' << format_double(max_z) << ','
         << (rep.pass ? 1 : 0) << "\n";
      ++pair_index;
    }
  }
  os << "# all_pass=" << (all_pass ? 1 : 0) << "\n";
  return 0;
}

int run_gridworld(const RunConfig& cfg, std::ostream& os) {
  using namespace pegasus::grid;
  std::vector<int> m_values;
  for (const auto& v : cfg.params["m_values"]) m_values.push_back(v.get<int>());
  const auto result =
      gridworld_experiment(m_values, cfg.params["trials"].get<int>(), cfg.params["h"].get<int>(),
                           cfg.params["gamma"].get<double>(), cfg.seed, cfg.threads);
  write_header(os, cfg);
  os << "# opt=" << format_double(result.opt_value) << "\n";
  os << "variant,m,mean_value,stderr,trials\n";
  for (const auto& cell : result.cells) {
    os << variant_name(cell.variant) << ',' << cell.m << ',' << format_double(cell.mean_value)
       << ',' << format_double(cell.stderr_mean) << ',' << cell.winner_value.size() << "\n";
  }
  return 0;
}

std::vector<double> weights_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != 2 * pegasus::bike::kNumFeatures)
    throw ConfigError("\"weights\" must be an array of 30 numbers");
  std::vector<double> w;
  for (const auto& v : arr) w.push_back(v.get<double>());
  return w;
}

pegasus::bike::BikeWeights unpack_weights(const std::vector<double>& theta) {
  pegasus::bike::BikeWeights w;
  for (int i = 0; i < pegasus::bike::kNumFeatures; ++i) {
    w.w_tau[i] = theta[i];
    w.w_nu[i] = theta[pegasus::bike::kNumFeatures + i];
  }
  return w;
}

int run_bicycle_train(const RunConfig& cfg, std::ostream& os) {
  using namespace pegasus::bike;
  const json& p = cfg.params;
  const BicycleConfig bc = bicycle_config_from(p);
  const auto model = build_bicycle_model(bc);
  const auto scenarios = pegasus::draw_scenarios(model, bc.m_scenarios, bc.horizon, bc.seed);

  if (const std::string dump = p["scenario_dump"].get<std::string>(); !dump.empty()) {
    auto dump_model = model;
    dump_model.state_to_text = [](const BikeSimState& s) {
      std::ostringstream t;
      t << format_double(s.bike.omega) << ' ' << format_double(s.bike.omega_dot) << ' '
        << format_double(s.bike.theta) << ' ' << format_double(s.bike.theta_dot) << ' '
        << format_double(s.bike.heading) << ' ' << format_double(s.bike.x) << ' '
        << format_double(s.bike.y);
      return t.str();
    };
    std::ofstream df(dump);
    if (!df) throw std::runtime_error("cannot open scenario_dump path: " + dump);
    pegasus::write_scenarios(df, dump_model, scenarios);
  }

  auto estimator = [&](const std::vector<double>& theta) {
    const BikeWeights w = unpack_weights(theta);
    BikePolicyFn fn{&w, &bc};
    return pegasus::estimate_value(model, fn, scenarios, bc.horizon).value;
  };
  std::vector<double> theta0(2 * kNumFeatures, 0.0);

  pegasus::SearchReport<pegasus::ParamPolicy> report;
  if (p["optimizer"].get<std::string>() == "hill") {
    report = pegasus::hill_climb(estimator, theta0, p["perturb_scale"].get<double>(),
                                 p["iters"].get<int>(), p["opt_seed"].get<std::uint64_t>());
  } else {
    report = pegasus::gradient_ascent(estimator, theta0, p["step_size"].get<double>(),
                                      p["clamp"].get<double>(), p["iters"].get<int>(),
                                      p["grad_step"].get<double>());
  }

  write_header(os, cfg);
  json warr = json::array();
  for (double v : report.best_policy.theta) warr.push_back(v);
  os << "# weights=" << warr.dump() << "\n";
  os << "# best_estimate=" << format_double(report.best_estimate) << "\n";
  os << "# evaluations=" << report.evaluations << "\n";
  os << "iteration,estimate\n";
  for (const auto& [it, est] : report.trace) os << it << ',' << format_double(est) << "\n";
  return 0;
}

int run_bicycle_eval(const RunConfig& cfg, std::ostream& os) {
  using namespace pegasus::bike;
  const json& p = cfg.params;
  const BicycleConfig bc = bicycle_config_from(p);

  std::vector<double> theta;
  if (p.contains("weights")) {
    theta = weights_from_json(p["weights"]);
  } else {
    // Parse the "# weights=[...]" line of a bicycle-train output.
    const std::string path = p["weights_file"].get<std::string>();
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open weights_file: " + path);
    std::string line;
    bool found = false;
    while (std::getline(f, line)) {
      const std::string prefix = "# weights=";
      if (line.rfind(prefix, 0) == 0) {
        theta = weights_from_json(json::parse(line.substr(prefix.size())));
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("no \"# weights=\" line in " + path);
  }
  const BikeWeights w = unpack_weights(theta);

  const int rides = p["rides"].get<int>();
  const int max_steps = p["max_steps"].get<int>();
  write_header(os, cfg);
  os << "ride,fell,steps_survived,steps_ridden,progress_m,goal_reached,path_length_m\n";
  int unfallen = 0, reached = 0;
  double progress_sum = 0.0;
  std::vector<double> reached_paths;
  for (int r = 0; r < rides; ++r) {
    const auto st = evaluate_ride(bc, w, cfg.seed, static_cast<std::uint64_t>(r), max_steps);
    if (!st.fell) ++unfallen;
    if (st.goal_reached) {
      ++reached;
      reached_paths.push_back(st.path_length);
    }
    progress_sum += st.progress;
    os << r << ',' << (st.fell ? 1 : 0) << ',' << st.steps_survived << ',' << st.steps_ridden
       << ',' << format_double(st.progress) << ',' << (st.goal_reached ? 1 : 0) << ','
       << format_double(st.path_length) << "\n";
  }
  std::sort(reached_paths.begin(), reached_paths.end());
  os << "# unfallen_fraction=" << format_double(static_cast<double>(unfallen) / rides) << "\n";
  os << "# mean_progress_m=" << format_double(progress_sum / rides) << "\n";
  os << "# goal_reached=" << reached << "\n";
  os << "# median_path_km="
     << format_double(reached_paths.empty() ? 0.0
                                            : reached_paths[reached_paths.size() / 2] / 1000.0)
     << "\n";
  return 0;
}

int dispatch(const RunConfig& cfg) {
  std::ostringstream body;
  int rc = 0;
  if (cfg.command == "bounds") rc = run_bounds(cfg, body);
  else if (cfg.command == "counterexample") rc = run_counterexample(cfg, body);
  else if (cfg.command == "fidelity") rc = run_fidelity(cfg, body);
  else if (cfg.command == "gridworld") rc = run_gridworld(cfg, body);
  else if (cfg.command == "bicycle-train") rc = run_bicycle_train(cfg, body);
  else if (cfg.command == "bicycle-eval") rc = run_bicycle_eval(cfg, body);
  else throw ConfigError("unknown command \"" + cfg.command + "\"");

  if (cfg.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output path: " + cfg.out);
    f << body.str();
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario-based policy search toolkit"};
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed_override, "Overrides the config seed");
  app.add_option("--out", out_override, "Output path (default: config \"out\" or stdout)");
  app.add_option("--threads", threads, "Worker thread cap (never changes results)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors are exit code 2
  }

  try {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file: " << config_path << "\n";
      return 2;
    }
    json doc;
    try {
      doc = json::parse(f);
    } catch (const json::exception& e) {
      std::cerr << "error: config parse failure: " << e.what() << "\n";
      return 2;
    }
    if (seed_override) {
      doc["seed"] = *seed_override;
      if (doc.contains("params") && doc["params"].is_object() &&
          doc["params"].contains("seed")) {
        doc["params"].erase("seed");  // --seed re-pins everything
      }
    }
    RunConfig cfg = parse_config(doc);
    if (!out_override.empty()) cfg.out = out_override;
    cfg.threads = threads;
    return dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
