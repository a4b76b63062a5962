#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "windscen/ecdf.hpp"
#include "windscen/features.hpp"

namespace windscen {

/// Conditional heteroscedastic model for one (farm, horizon): point
/// coefficients alpha, scale coefficients beta, and the empirical
/// distribution of standardized residuals.
struct HeteroModel {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  EcdfTable ecdf;
  double h_floor = 1e-3;  // MW; keeps the standardizing division finite
  bool ridge_flagged = false;
  bool climatology_fallback = false;

  double point(const Eigen::VectorXd& x) const;
  /// Floored scale: max(x . beta, h_floor).
  double scale(const Eigen::VectorXd& x) const;
  /// (y_hat, h_hat); throws on feature-dimension mismatch.
  std::pair<double, double> predict(const Eigen::VectorXd& x) const;
};

/// Least-squares fit of y on X (QR with column pivoting). On effective
/// rank deficiency the fit is redone with a ridge penalty
/// lambda = 1e-6 * trace(X'X) / n_features and `ridge_flag` is set.
Eigen::VectorXd fit_point(const Dataset& ds, bool* ridge_flag = nullptr);

/// Least-squares fit of |y - X alpha| on X (same solver and fallback).
Eigen::VectorXd fit_scale(const Dataset& ds, const Eigen::VectorXd& alpha,
                          bool* ridge_flag = nullptr);

/// Standardized residuals u_t = (y - X alpha) / max(X beta, h_floor).
Eigen::VectorXd standardize(const Dataset& ds, const Eigen::VectorXd& alpha,
                            const Eigen::VectorXd& beta, double h_floor);

struct HeteroFitOptions {
  double h_floor = 1e-3;          // already capacity-adjusted by the caller
  int min_rows_factor = 10;       // regression needs >= factor * n_features rows
  int min_ecdf_samples = 500;
  int ecdf_max_knots = 4096;
  double beta_scale = 1.0;        // diagnostic: scales beta before standardize
  double climatology_spread_frac = 0.15;  // of capacity, fallback scale
};

struct FittedModel {
  HeteroModel model;
  Eigen::VectorXd u;                 // standardized residuals on dist_ds rows
  std::vector<TimePoint> u_times;
  std::string flag;                  // empty, "ridge", or a fallback reason
};

/// Full per-model fit: regression on `reg_ds`, standardization + ECDF on
/// `dist_ds`. Models with too little data fall back to a capacity-scaled
/// climatological model (zero point correction, constant spread) and are
/// flagged; the caller always gets a usable model.
FittedModel fit_conditional_model(const Dataset& reg_ds, const Dataset& dist_ds,
                                  double capacity_mw, const HeteroFitOptions& opts);

}  // namespace windscen
