#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "windscen/pipeline.hpp"

namespace windscen {

/// Root-mean-squared error in MW; penalizes large errors quadratically.
double rmse(const std::vector<double>& actual, const std::vector<double>& forecast);

struct ReliabilityCurve {
  std::vector<double> levels;
  std::vector<double> observed;           // model quantile coverage
  std::vector<double> gaussian_observed;  // N(0, ecdf variance) comparison
  long n_eval = 0;
  bool low_sample = false;  // fewer than 200 evaluation points
};

/// Empirical coverage of the model's conditional quantiles for one
/// (farm, horizon) over [start, end) at `eval_step` cadence. The window
/// must be disjoint from training for the result to mean anything; this
/// function does not enforce it.
ReliabilityCurve reliability(const TrainedBundle& bundle, const SeriesPanel& panel,
                             int w, int tau, TimePoint start, TimePoint end,
                             const std::vector<double>& levels,
                             std::int64_t eval_step);

/// ES = mean_s ||x - xs|| - 1/(2 S^2) sum_{s,s'} ||xs - xs'||  (Euclidean).
double energy_score(const Eigen::VectorXd& realization, const Eigen::MatrixXd& scenarios);

/// Sum over scenarios and components of |x_d - xs_d| (no 1/S normalization;
/// magnitudes then add up over evaluation issues).
double integrated_distance(const Eigen::VectorXd& realization,
                           const Eigen::MatrixXd& scenarios);

/// Sum over unordered component pairs of
/// (|x_i - x_j|^p - mean_s |xs_i - xs_j|^p)^2, unit weights.
double variogram_score(const Eigen::VectorXd& realization,
                       const Eigen::MatrixXd& scenarios, double p = 0.5);

struct ScoreTriple {
  double energy = 0.0;
  double integrated_distance = 0.0;
  double variogram = 0.0;
};

struct RankScatter {
  std::vector<std::pair<double, double>> data;   // observed rank pairs
  std::vector<std::pair<double, double>> model;  // sampled at the same rho
  double rho = 0.0;  // Pearson correlation of the Gaussian-domain samples
};

/// Rank-domain dependence diagnostic for one pair of grid cells, plus a
/// model-sampled counterpart of the same size at the estimated rho.
RankScatter rank_scatter(const TrainedBundle& bundle, const SeriesPanel& panel,
                         std::pair<int, int> cell_a, std::pair<int, int> cell_b,
                         TimePoint start, TimePoint end, std::int64_t eval_step,
                         std::uint64_t seed);

struct RepresentationComparison {
  ScoreTriple per_farm;         // summed over issues
  ScoreTriple aggregate_only;
  ScoreTriple per_farm_mean;    // per-issue means
  ScoreTriple aggregate_only_mean;
  long issues = 0;
  std::vector<TimePoint> issue_times;
  std::vector<ScoreTriple> per_farm_issues;
  std::vector<ScoreTriple> aggregate_only_issues;
};

/// Trains on the data before `eval_start`, then scores aggregate scenarios
/// over [eval_start, eval_end) at the evaluation cadence in two modes:
/// every farm modeled individually (scenarios summed over farms) versus
/// one model fit to the pre-aggregated data.
RepresentationComparison compare_representations(const SeriesPanel& panel,
                                                 const FarmRegistry& registry,
                                                 const RunConfig& cfg,
                                                 TimePoint eval_start,
                                                 TimePoint eval_end);

}  // namespace windscen
