#include "windscen/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "windscen/rng.hpp"

namespace windscen {

using nlohmann::json;

RunConfig::RunConfig() {
  for (int i = 1; i <= 19; ++i) levels.push_back(i * 0.05);
}

namespace {

// "/training/s_max" -> "WINDSCEN_TRAINING_S_MAX"
std::string env_name(const std::string& pointer) {
  std::string name = "WINDSCEN";
  for (char c : pointer) {
    if (c == '/') {
      name += '_';
    } else {
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  return name;
}

void apply_env_overrides(json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      apply_env_overrides(value, prefix + "/" + key);
    }
    return;
  }
  const char* env = std::getenv(env_name(prefix).c_str());
  if (!env) return;
  if (j.is_string()) {
    j = std::string(env);
  } else {
    j = json::parse(env);  // numbers, bools, arrays
  }
}

template <typename T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  apply_env_overrides(j);

  RunConfig c;
  if (j.contains("paths")) {
    const json& p = j["paths"];
    get(p, "registry", c.registry_path);
    get(p, "power", c.power_path);
    get(p, "forecast", c.forecast_path);
    get(p, "bundle", c.bundle_path);
    get(p, "out_dir", c.out_dir);
    get(p, "ground_truth", c.ground_truth_path);
  }
  if (j.contains("horizons")) {
    const json& h = j["horizons"];
    get(h, "n_tau", c.horizon.n_tau);
    get(h, "step_sec", c.horizon.step_sec);
    get(h, "issue_step_sec", c.issue_step_sec);
  }
  if (j.contains("training")) {
    const json& t = j["training"];
    get(t, "regression_days", c.regression_days);
    get(t, "distribution_days", c.distribution_days);
    get(t, "min_rows_factor", c.min_rows_factor);
    get(t, "min_ecdf_samples", c.min_ecdf_samples);
    get(t, "ecdf_max_knots", c.ecdf_max_knots);
    get(t, "copula_stride_steps", c.copula_stride_steps);
    get(t, "copula_min_rows", c.copula_min_rows);
    get(t, "s_max", c.s_max);
    get(t, "h_floor_abs_mw", c.h_floor_abs_mw);
    get(t, "h_floor_capacity_frac", c.h_floor_capacity_frac);
    get(t, "beta_scale", c.beta_scale);
    get(t, "fallback_spread_frac", c.fallback_spread_frac);
  }
  if (j.contains("features")) {
    const json& f = j["features"];
    get(f, "nwp_trailing_lags", c.features.nwp_trailing_lags);
    get(f, "power_lags", c.features.power_lags);
    get(f, "error_lag_multiples", c.features.error_lag_multiples);
    get(f, "neighbor_count", c.features.neighbor_count);
    get(f, "nwp_lead_degree", c.features.nwp_lead_degree);
  }
  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    get(m, "levels", c.levels);
    get(m, "variogram_order", c.variogram_order);
    get(m, "eval_step_sec", c.eval_step_sec);
    get(m, "scenarios_per_issue", c.scenarios_per_issue);
  }
  if (j.contains("synth")) {
    c.oracle = load_oracle_spec_json(j["synth"].dump());
  }
  get(j, "seed", c.seed);

  c.features.validate();
  if (c.horizon.n_tau < 1) throw std::invalid_argument("config: n_tau < 1");
  if (c.s_max < 1) throw std::invalid_argument("config: s_max < 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["paths"] = {{"registry", c.registry_path}, {"power", c.power_path},
                {"forecast", c.forecast_path}, {"bundle", c.bundle_path},
                {"out_dir", c.out_dir},        {"ground_truth", c.ground_truth_path}};
  j["horizons"] = {{"n_tau", c.horizon.n_tau},
                   {"step_sec", c.horizon.step_sec},
                   {"issue_step_sec", c.issue_step_sec}};
  j["training"] = {{"regression_days", c.regression_days},
                   {"distribution_days", c.distribution_days},
                   {"min_rows_factor", c.min_rows_factor},
                   {"min_ecdf_samples", c.min_ecdf_samples},
                   {"ecdf_max_knots", c.ecdf_max_knots},
                   {"copula_stride_steps", c.copula_stride_steps},
                   {"copula_min_rows", c.copula_min_rows},
                   {"s_max", c.s_max},
                   {"h_floor_abs_mw", c.h_floor_abs_mw},
                   {"h_floor_capacity_frac", c.h_floor_capacity_frac},
                   {"beta_scale", c.beta_scale},
                   {"fallback_spread_frac", c.fallback_spread_frac}};
  j["features"] = {{"nwp_trailing_lags", c.features.nwp_trailing_lags},
                   {"power_lags", c.features.power_lags},
                   {"error_lag_multiples", c.features.error_lag_multiples},
                   {"neighbor_count", c.features.neighbor_count},
                   {"nwp_lead_degree", c.features.nwp_lead_degree}};
  j["metrics"] = {{"levels", c.levels},
                  {"variogram_order", c.variogram_order},
                  {"eval_step_sec", c.eval_step_sec},
                  {"scenarios_per_issue", c.scenarios_per_issue}};
  j["synth"] = json::parse(oracle_spec_to_json(c.oracle));
  j["seed"] = c.seed;
  return j.dump(2);
}

std::uint64_t config_hash(const RunConfig& cfg) {
  return derive_seed(0, config_to_json(cfg));
}

}  // namespace windscen
