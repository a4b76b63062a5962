#pragma once

#include <vector>

namespace windscen {

/// Empirical distribution of standardized residuals u, stored as the
/// ascending order statistics. Evaluation interpolates linearly between
/// plotting positions (i + 0.5) / n (0-based i) and clamps probabilities
/// to [p_min, 1 - p_min] with p_min = 1 / (2n), so the inverse exists and
/// the Gaussian transform stays finite in the tails.
class EcdfTable {
 public:
  EcdfTable() = default;

  /// Sorts and stores the samples. If max_knots > 0 and the sample is
  /// larger, it is thinned to an even quantile grid of max_knots points
  /// (first and last order statistics always kept). Non-finite samples are
  /// rejected.
  static EcdfTable from_samples(std::vector<double> samples, int max_knots = 0);

  bool empty() const { return sorted_u_.empty(); }
  int n() const { return static_cast<int>(sorted_u_.size()); }
  const std::vector<double>& sorted_u() const { return sorted_u_; }
  double p_min() const { return 0.5 / n(); }

  double min() const { return sorted_u_.front(); }
  double max() const { return sorted_u_.back(); }

  /// F(z) = Pr(u <= z), clamped to [p_min, 1 - p_min].
  double eval(double z) const;

  /// Interpolation inverse of eval; p outside (0,1) throws, p beyond the
  /// clamp range saturates at the extreme order statistics.
  double inverse(double p) const;

  double mean() const;
  double stddev() const;

  /// Restores a table from already-sorted values (bundle loading).
  static EcdfTable from_sorted(std::vector<double> sorted);

 private:
  std::vector<double> sorted_u_;
};

}  // namespace windscen
