#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "windscen/panel.hpp"
#include "windscen/registry.hpp"

namespace windscen {

/// Fully specified generating process for synthetic multi-farm feeds. The
/// process is designed so every distributional quantity the pipeline
/// estimates (conditional error quantiles, heteroscedastic scale law,
/// copula correlation) is known in closed form.
///
/// Power: a latent AR(1) Gaussian field with spatial correlation drives
/// each farm through a logistic power curve (clamped to capacity by
/// construction). NWP: future power plus an error field that is biased and
/// scaled as affine functions of the farm's current power level, with a
/// Gaussian copula across farms (spatial) and horizons (AR), and normal or
/// scaled-t marginals.
struct OracleSpec {
  int n_farms = 5;
  std::vector<double> capacities_mw;  // default: 100 MW each
  double spatial_rho = 0.5;           // equicorrelation of the latent fields
  double ar_coeff = 0.97;             // latent power AR(1) per step
  double power_curve_slope = 0.7;     // P = cap * sigmoid(slope * z)

  enum class Marginal { kNormal, kScaledT };
  Marginal marginal = Marginal::kNormal;
  double t_dof = 4.0;

  // Error law, all relative to capacity: the error added to the NWP for
  // (farm, horizon tau) at issue time t is
  //   cap * (bias_base + bias_power_coef * (P_t/cap - 0.5))
  //   + h(P_t, tau) * u,
  //   h(P_t, tau) = cap * sigma_base * (1 + sigma_growth*(tau-1))
  //                     * (1 + hetero_slope * P_t/cap)
  double bias_base = 0.0;
  double bias_power_coef = 0.0;
  double sigma_base = 0.02;
  double sigma_growth = 0.03;
  double hetero_slope = 0.5;
  double horizon_ar = 0.8;  // error correlation between adjacent horizons

  int n_tau = 36;
  std::int64_t step_sec = 300;
  std::int64_t issue_step_sec = 300;
  std::uint64_t seed = 1;

  double capacity(int w) const {
    return capacities_mw.empty() ? 100.0 : capacities_mw.at(w);
  }
  void validate() const;
};

/// Everything the acceptance tests need to check the pipeline against the
/// generating process.
struct GroundTruth {
  OracleSpec spec;

  /// Conditional quantile (MW) of the model target y = P_{t+tau} - F_t^tau
  /// given the farm's current power level.
  double true_quantile(int w, int tau, double power_now_mw, double q) const;
  double true_bias(int w, int tau, double power_now_mw) const;
  double true_scale(int w, int tau, double power_now_mw) const;

  /// True copula correlation between grid cells (w,tau) and (w2,tau2):
  /// spatial_rho factor for distinct farms times horizon_ar^|tau-tau2|.
  double true_correlation(int w, int tau, int w2, int tau2) const;

  /// Quantile of the (unit-scale) marginal error distribution.
  double marginal_quantile(double q) const;
};

struct SyntheticFeed {
  SeriesPanel panel;
  FarmRegistry registry;
  GroundTruth truth;
};

/// Generates `duration_sec` of synthetic feed starting at t0. Bit-identical
/// for identical (spec, t0, duration). The registry's neighbor lists are
/// filled by spatial-correlation rank (here: registry order, since the
/// latent field is equicorrelated).
SyntheticFeed generate_feed(const OracleSpec& spec, TimePoint t0,
                            std::int64_t duration_sec);

/// JSON sidecar with the spec echo, next to the CSV outputs.
void write_ground_truth(const GroundTruth& truth, const std::string& path);
OracleSpec load_oracle_spec_json(const std::string& json_text);
std::string oracle_spec_to_json(const OracleSpec& spec);

}  // namespace windscen
