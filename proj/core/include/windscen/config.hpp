#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windscen/features.hpp"
#include "windscen/panel.hpp"
#include "windscen/synth.hpp"

namespace windscen {

/// One structured configuration file drives every CLI command. Defaults
/// follow the reference deployment: 36 x 5-minute horizons, 15-minute
/// issue cadence, 28-day regression window, 90-day distribution/copula
/// window. Any key can be overridden with an environment variable
/// WINDSCEN_<SECTION>_<KEY> (e.g. WINDSCEN_TRAINING_S_MAX=2000).
struct RunConfig {
  // paths
  std::string registry_path;
  std::string power_path;
  std::string forecast_path;
  std::string bundle_path;
  std::string out_dir = ".";
  std::string ground_truth_path;

  // horizons
  HorizonGrid horizon;                 // n_tau = 36, step 5 min
  std::int64_t issue_step_sec = 900;

  // training
  int regression_days = 28;
  int distribution_days = 90;
  int min_rows_factor = 10;
  int min_ecdf_samples = 500;
  int ecdf_max_knots = 4096;
  int copula_stride_steps = 6;         // 30 min: ~4300 rows per 90 days
  long copula_min_rows = 100;
  int s_max = 10000;
  double h_floor_abs_mw = 1e-3;
  double h_floor_capacity_frac = 1e-4;
  double beta_scale = 1.0;             // diagnostic knob, see hetero fit
  double fallback_spread_frac = 0.15;  // online fallback spread, of capacity

  // features
  FeatureSpec features;

  // metrics
  std::vector<double> levels;          // default 0.05 .. 0.95
  double variogram_order = 0.5;
  std::int64_t eval_step_sec = 900;
  int scenarios_per_issue = 200;

  // synth
  OracleSpec oracle;

  std::uint64_t seed = 1;

  RunConfig();

  double h_floor_for(double capacity_mw) const {
    return std::max(h_floor_abs_mw, h_floor_capacity_frac * capacity_mw);
  }
};

/// Loads the JSON config file and applies WINDSCEN_* environment overrides.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

/// FNV-1a hash of the canonical JSON form; embedded in every output file.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace windscen
