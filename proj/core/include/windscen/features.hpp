#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "windscen/panel.hpp"
#include "windscen/registry.hpp"

namespace windscen {

/// Regression feature layout for one (farm, horizon) model. Counts are
/// shared across the grid; the realized column set additionally depends on
/// tau (trailing forecast lags stop at horizon 1, error-lag offsets clamp
/// at n_tau) and on how many neighbors the farm actually has.
struct FeatureSpec {
  int nwp_trailing_lags = 2;              // F_t^{tau-1} .. F_t^{tau-i}
  int power_lags = 3;                     // P_t, P_{t-1}, ...
  std::vector<int> error_lag_multiples = {1, 2};  // past-error offsets m*tau
  int neighbor_count = 2;                 // neighbor farms contributing errors
  int nwp_lead_degree = 2;                // polynomial basis on F_t^tau

  void validate() const;
};

struct Dataset {
  Eigen::MatrixXd X;                    // [rows x features], intercept first
  Eigen::VectorXd y;                    // target: future NWP error, MW
  std::vector<TimePoint> row_times;
  std::vector<std::string> columns;
  long dropped_rows = 0;                // candidate rows lost to missing data
};

/// Deterministic column names for (spec, w, tau). The error-naming contract
/// for online rows uses these names (e.g. "power_lag_0").
std::vector<std::string> feature_names(const FeatureSpec& spec,
                                       const FarmRegistry& registry, int w,
                                       int tau, int n_tau);

/// Builds the training matrix for model (w, tau) over every usable panel
/// time: a row exists where all features and the target
/// y = P_{t+tau} - F_t^tau are present. Basis expansion is applied last.
Dataset build_dataset(const SeriesPanel& panel, const FarmRegistry& registry,
                      int w, int tau, const FeatureSpec& spec);

/// As build_dataset but over [start, end) only.
Dataset build_dataset(const SeriesPanel& panel, const FarmRegistry& registry,
                      int w, int tau, const FeatureSpec& spec, TimePoint start,
                      TimePoint end);

/// The X row for time t_now without requiring the future target. Throws
/// std::runtime_error naming the first unavailable feature.
Eigen::VectorXd build_online_row(const SeriesPanel& panel,
                                 const FarmRegistry& registry, TimePoint t_now,
                                 int w, int tau, const FeatureSpec& spec);

}  // namespace windscen
