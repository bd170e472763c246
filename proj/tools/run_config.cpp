#include "run_config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <set>

#include "hk/util.hpp"

namespace hk::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown key");
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void read(const json& obj, const std::string& path, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  out = v.get<double>();
}

template <class U>
void read_unsigned(const json& obj, const std::string& path, const char* key, U& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(join(path, key) + ": expected a non-negative integer");
  out = v.get<U>();
}

void read(const json& obj, const std::string& path, const char* key, int& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  out = v.get<int>();
}

void read(const json& obj, const std::string& path, const char* key, bool& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  out = v.get<bool>();
}

void read(const json& obj, const std::string& path, const char* key, std::string& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
  out = v.get<std::string>();
}

// Grid values: an array of numbers or a range string "start:stop:step".
void read_grid(const json& obj, const std::string& path, const char* key, std::vector<double>& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  const std::string where = join(path, key);
  if (v.is_string()) {
    try {
      out = util::parse_range(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
    return;
  }
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers or a range string");
  out.clear();
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
}

void validate_model(const ModelParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model.") + e.what());
  }
}

}  // namespace

std::string RunConfig::to_json() const {
  ordered_json j;
  j["version"] = version;
  j["model"] = {{"N", model.N},         {"R", model.R},       {"sigma", model.sigma},
                {"L", model.L},         {"seed", model.seed}, {"h", model.h}};
  j["solver"] = {{"m", solver.m}, {"h", solver.h}, {"dealias", solver.dealias}, {"grid", solver.grid}};
  j["T"] = T;
  j["init"] = init;
  j["record_stride"] = record_stride;
  j["diag_stride"] = diag_stride;
  if (!sweep.R_values.empty() || !sweep.sigma_values.empty())
    j["sweep"] = {{"R", sweep.R_values},
                {"sigma", sweep.sigma_values},
                {"engine", sweep::to_string(sweep.engine)},
                {"T", sweep.T},
                {"window_fraction", sweep.window_fraction},
                {"sample_interval", sweep.sample_interval},
                {"replicates", sweep.replicates},
                {"initializer", sweep.initializer},
                {"record_timing", sweep.record_timing}};
  j["out"] = out;
  return j.dump(2);
}

std::string RunConfig::hash() const {
  // The output directory does not change results, so it stays out of the hash.
  RunConfig c = *this;
  c.out.clear();
  return util::hex64(util::fnv1a(c.to_json()));
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, "", {"version", "model", "solver", "T", "init", "record_stride", "diag_stride", "sweep", "out"});
  if (!j.contains("version")) throw ConfigError("version: required");
  RunConfig cfg;
  read(j, "", "version", cfg.version);
  if (cfg.version != 1) throw ConfigError("version: unsupported (expected 1)");

  if (j.contains("model")) {
    const auto& m = j.at("model");
    check_keys(m, "model", {"N", "R", "sigma", "L", "seed", "h"});
    read_unsigned(m, "model", "N", cfg.model.N);
    read(m, "model", "R", cfg.model.R);
    read(m, "model", "sigma", cfg.model.sigma);
    read(m, "model", "L", cfg.model.L);
    read_unsigned(m, "model", "seed", cfg.model.seed);
    read(m, "model", "h", cfg.model.h);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver", {"m", "h", "dealias", "grid"});
    read(s, "solver", "m", cfg.solver.m);
    read(s, "solver", "h", cfg.solver.h);
    read(s, "solver", "dealias", cfg.solver.dealias);
    read(s, "solver", "grid", cfg.solver.grid);
  }
  read(j, "", "T", cfg.T);
  read(j, "", "init", cfg.init);
  read_unsigned(j, "", "record_stride", cfg.record_stride);
  read_unsigned(j, "", "diag_stride", cfg.diag_stride);
  read(j, "", "out", cfg.out);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"R", "sigma", "engine", "T", "window_fraction", "sample_interval", "replicates",
                            "initializer", "record_timing"});
    read_grid(s, "sweep", "R", cfg.sweep.R_values);
    read_grid(s, "sweep", "sigma", cfg.sweep.sigma_values);
    std::string engine = "sde";
    read(s, "sweep", "engine", engine);
    if (engine != "sde" && engine != "pde") throw ConfigError("sweep.engine: expected \"sde\" or \"pde\"");
    cfg.sweep.engine = sweep::engine_from_string(engine);
    read(s, "sweep", "T", cfg.sweep.T);
    read(s, "sweep", "window_fraction", cfg.sweep.window_fraction);
    read(s, "sweep", "sample_interval", cfg.sweep.sample_interval);
    read_unsigned(s, "sweep", "replicates", cfg.sweep.replicates);
    read(s, "sweep", "initializer", cfg.sweep.initializer);
    read(s, "sweep", "record_timing", cfg.sweep.record_timing);
  }

  // Physical constraints are checked here, not at first use.
  validate_model(cfg.model);
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver.") + e.what());
  }
  if (!(cfg.T > 0.0)) throw ConfigError("T: must be > 0");
  if (cfg.record_stride == 0) throw ConfigError("record_stride: must be >= 1");
  if (cfg.diag_stride == 0) throw ConfigError("diag_stride: must be >= 1");
  if (!cfg.init.empty()) {
    try {
      util::parse_call(cfg.init);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("init: ") + e.what());
    }
  }
  if (j.contains("sweep")) validate(cfg, "sweep");
  return cfg;
}

void validate(const RunConfig& cfg, std::string_view command) {
  validate_model(cfg.model);
  if (!(cfg.T > 0.0)) throw ConfigError("T: must be > 0");
  if (command == "pde") {
    try {
      cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("solver.") + e.what());
    }
  }
  if (command == "sweep") {
    sweep::SweepSpec s = cfg.sweep;
    s.base = cfg.model;
    s.solver = cfg.solver;
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sweep.") + e.what());
    }
  }
}

RunConfig defaults(std::string_view command) {
  RunConfig c;
  if (command == "sde") {
    c.T = 100.0;
    c.init = "uniform-random";
  } else if (command == "pde") {
    c.T = 10.0;
    c.init = "gaussian(0.5, 20)";
  } else if (command == "sweep") {
    c.sweep.R_values = util::linspace(0.05, 0.25, 5);
    c.sweep.sigma_values = util::linspace(0.01, 0.2, 5);
  }
  return c;
}

RunConfig preset(std::string_view command, std::string_view name) {
  RunConfig c = defaults(command);
  const std::string n(name);
  if (command == "sde") {
    c.model.N = 100;
    c.model.R = 0.1;
    if (n == "merge") {
      c.model.sigma = 0.05;
      c.init = "uniform-random";
      c.T = 2000.0;
    } else if (n == "disperse") {
      c.model.sigma = 0.5;
      c.init = "point(0.5)";
      c.T = 50.0;
    } else {
      throw ConfigError("preset: unknown sde preset '" + n + "' (merge, disperse)");
    }
    c.record_stride = 100;
    return c;
  }
  if (command == "pde") {
    if (n == "fig3-left") {
      c.model.R = 0.2;
      c.model.sigma = 0.02;
      c.init = "gaussian(0.5, 20)";
      c.T = 100.0;
    } else if (n == "fig3-middle") {
      c.model.R = 0.05;
      c.model.sigma = 0.005;
      c.init = "gaussian(0.5, 1)";
      c.T = 300.0;
    } else if (n == "fig3-right") {
      c.model.R = 0.2;
      c.model.sigma = 0.3;
      c.init = "gaussian(0.5, 40)";
      c.T = 50.0;
    } else {
      throw ConfigError("preset: unknown pde preset '" + n + "' (fig3-left, fig3-middle, fig3-right)");
    }
    return c;
  }
  if (command == "sweep") {
    if (n == "ci") {
      c.model.N = 100;
      c.sweep.R_values = util::linspace(0.05, 0.25, 5);
      c.sweep.sigma_values = util::linspace(0.01, 0.2, 5);
      c.sweep.T = 2000.0;
    } else if (n == "transition") {
      c.model.N = 100;
      c.sweep.R_values = {0.05};
      c.sweep.sigma_values = util::linspace(0.005, 0.1, 10);
      c.sweep.T = 2000.0;
    } else if (n == "pd") {
      c.model.N = 300;
      c.sweep.R_values = util::linspace(0.02, 0.5, 25);
      c.sweep.sigma_values = util::linspace(0.005, 0.25, 25);
      c.sweep.T = 1e5;
    } else {
      throw ConfigError("preset: unknown sweep preset '" + n + "' (ci, transition, pd)");
    }
    return c;
  }
  throw ConfigError("preset: command '" + std::string(command) + "' has no presets");
}

void apply_seed_env(RunConfig& cfg) {
  const char* env = std::getenv("HK_SEED");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') throw ConfigError("HK_SEED: expected a non-negative integer");
  cfg.model.seed = v;
}

}  // namespace hk::cli
