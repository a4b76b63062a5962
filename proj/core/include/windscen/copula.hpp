#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "windscen/ecdf.hpp"

namespace windscen {

/// Gaussian copula over the flattened (farm x horizon) grid. `sigma_n` is
/// the repaired correlation matrix (symmetric PD, unit diagonal) and
/// `chol` its lower-triangular factor.
struct CopulaModel {
  int dim = 0;
  Eigen::MatrixXd sigma_n;
  Eigen::MatrixXd chol;
  long sample_rows = 0;       // complete time-aligned rows used
  bool low_sample = false;    // rows < dim / 2
  std::vector<int> degenerate_columns;  // zero variance, identity substituted
};

struct GaussianSampleBlock {
  Eigen::MatrixXd samples;  // [S x dim], rows ~ N(0, sigma_n)
  std::uint64_t seed = 0;
};

/// g = Phi^-1(F(u)). Tail clamping inside the ECDF keeps g finite.
double to_gaussian(double u, const EcdfTable& ecdf);

/// u = F^-1(Phi(g)); inverse of to_gaussian under the same interpolation.
double from_gaussian(double g, const EcdfTable& ecdf);

/// r = F(u) for a whole series (rank-domain diagnostics).
std::vector<double> rank_transform(const std::vector<double>& u_series,
                                   const EcdfTable& ecdf);

/// Repairs a candidate correlation matrix to symmetric PD with unit
/// diagonal and smallest eigenvalue >= eps_eig, and factors it. The
/// common case (a PSD sample correlation that is merely rank-deficient)
/// is handled by a diagonal shift of 2*eps_eig folded back to unit
/// diagonal; genuinely indefinite inputs go through a dense eigenvalue
/// clip, with doubling jitter as the last resort.
void repair_and_factor(Eigen::MatrixXd& sigma, Eigen::MatrixXd& chol,
                       double eps_eig = 1e-8);

/// Sample correlation (1/(n-1) covariance normalized to unit diagonal) of
/// the Gaussian-transformed residual rows, then PSD repair + Cholesky.
/// Rows containing any NaN are dropped first. Throws if fewer than
/// `min_rows` complete rows remain. Zero-variance columns are flagged and
/// replaced by an identity row/column.
CopulaModel estimate_correlation(const Eigen::MatrixXd& G, long min_rows = 100);

/// S rows of chol * z, z ~ iid N(0,1); deterministic given seed.
GaussianSampleBlock draw_block(const CopulaModel& model, int S, std::uint64_t seed);

}  // namespace windscen
