#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "windscen/config.hpp"
#include "windscen/copula.hpp"
#include "windscen/hetero.hpp"
#include "windscen/panel.hpp"
#include "windscen/registry.hpp"

namespace windscen {

inline constexpr std::uint32_t kBundleFormatVersion = 1;

struct TrainingMeta {
  TimePoint reg_start = 0, reg_end = 0;    // regression window [start, end)
  TimePoint dist_start = 0, dist_end = 0;  // ECDF/copula window [start, end)
  long total_dropped_rows = 0;
  std::vector<std::string> model_flags;    // per flat model index, "" = clean
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

/// Everything the offline phase produces: the per-(farm, horizon) models,
/// the copula, and the pre-drawn standardized scenario block u_hat whose
/// column k follows the canonical flat index. Immutable during generation.
struct TrainedBundle {
  FarmRegistry registry;
  HorizonGrid horizon;
  FeatureSpec features;
  std::vector<HeteroModel> models;  // flat-indexed, size n_farms * n_tau
  CopulaModel copula;
  Eigen::MatrixXd u_hat;            // [s_max x dim]
  double fallback_spread_frac = 0.15;
  TrainingMeta meta;

  int dim() const { return registry.n_farms() * horizon.n_tau; }
  int s_max() const { return static_cast<int>(u_hat.rows()); }
  const HeteroModel& model(int w, int tau) const {
    return models[flat_index(w, tau, horizon.n_tau)];
  }
};

struct ScenarioSet {
  TimePoint issue_time = 0;
  int n_farms = 0, n_tau = 0;
  Eigen::MatrixXd scenarios;   // [S x dim], MW, flat-index columns
  Eigen::VectorXd point;       // [dim], MW
  double clamp_rate = 0.0;     // fraction of scenario cells clamped to [0, cap]
  long online_fallbacks = 0;   // models served by the degraded online path
  std::vector<std::string> fallback_details;

  double weight() const { return 1.0 / scenarios.rows(); }
  double scenario(int s, int w, int tau) const {
    return scenarios(s, w * n_tau + (tau - 1));
  }
};

/// Offline steps 1-7: per-model regression + scale fits over the
/// regression window, residual standardization and ECDFs over the
/// distribution window, Gaussian transform, correlation estimation,
/// Monte-Carlo block draw and back-transform into u_hat.
TrainedBundle train(const SeriesPanel& panel, const FarmRegistry& registry,
                    const RunConfig& cfg);

/// Online coefficients (step 8): one (y_hat, h_hat, nwp) triple per model,
/// shared by all scenarios. Models whose online features are unavailable
/// fall back to the clamped NWP with a widened climatological spread and
/// are flagged.
struct OnlineCoefficients {
  Eigen::VectorXd y_hat, h_hat, nwp;  // [dim]
  long fallbacks = 0;
  std::vector<std::string> fallback_details;
};
OnlineCoefficients compute_online(const TrainedBundle& bundle,
                                  const SeriesPanel& panel, TimePoint t_now);

/// Step 9: scenario s error = y_hat + u_hat[s][k] * h_hat, power clamped
/// to [0, capacity]. Pure; never mutates the bundle.
ScenarioSet assemble_scenarios(const TrainedBundle& bundle,
                               const OnlineCoefficients& coeffs, TimePoint t_now,
                               int S);

/// Steps 8 + 9 in one call. Requires 1 <= S <= s_max.
ScenarioSet generate(const TrainedBundle& bundle, const SeriesPanel& panel,
                     TimePoint t_now, int S);

/// Versioned binary container with a trailing whole-file checksum;
/// load(save(b)) is bit-exact on every numeric payload.
void save_bundle(const TrainedBundle& bundle, const std::string& path);
TrainedBundle load_bundle(const std::string& path);

struct BenchReport {
  int scenarios = 0;
  std::vector<double> step8_sec;  // per repetition
  std::vector<double> step9_sec;
  double median_step8() const;
  double median_step9() const;
  double median_total() const { return median_step8() + median_step9(); }
};

/// Times the online path (steps 8 and 9 separately) at a fixed issue time.
BenchReport bench(const TrainedBundle& bundle, const SeriesPanel& panel,
                  TimePoint t_now, int S, int repetitions);

}  // namespace windscen
