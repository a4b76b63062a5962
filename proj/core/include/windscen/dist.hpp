#pragma once

namespace windscen {

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile (Wichura's AS 241, double precision).
/// p must lie in (0, 1).
double normal_quantile(double p);

/// Student-t CDF and quantile with nu degrees of freedom (nu > 0).
/// Used by the synthetic oracle's heavy-tailed marginal.
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

}  // namespace windscen
