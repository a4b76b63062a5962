#include "windscen/copula.hpp"

#include <cmath>
#include <stdexcept>

#include "windscen/dist.hpp"
#include "windscen/rng.hpp"

namespace windscen {

double to_gaussian(double u, const EcdfTable& ecdf) {
  return normal_quantile(ecdf.eval(u));
}

double from_gaussian(double g, const EcdfTable& ecdf) {
  return ecdf.inverse(normal_cdf(g));
}

std::vector<double> rank_transform(const std::vector<double>& u_series,
                                   const EcdfTable& ecdf) {
  std::vector<double> r(u_series.size());
  for (std::size_t i = 0; i < u_series.size(); ++i) r[i] = ecdf.eval(u_series[i]);
  return r;
}

void repair_and_factor(Eigen::MatrixXd& sigma, Eigen::MatrixXd& chol,
                       double eps_eig) {
  const Eigen::Index d = sigma.rows();
  if (d == 0 || sigma.cols() != d) throw std::invalid_argument("repair: not square");
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();

  // PSD input (the sample-correlation case): a diagonal shift of 2*eps,
  // renormalized to unit diagonal, lifts the null space above eps_eig.
  {
    Eigen::MatrixXd shifted = sigma * (1.0 / (1.0 + 2.0 * eps_eig));
    shifted.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      sigma = std::move(shifted);
      chol = llt.matrixL();
      return;
    }
  }

  // Indefinite input: eigenvalue clip, rescale to unit diagonal.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.info() != Eigen::Success) throw std::runtime_error("repair: eigensolver failed");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(eps_eig);
  sigma = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  Eigen::VectorXd dinv = sigma.diagonal().cwiseSqrt().cwiseInverse();
  sigma = dinv.asDiagonal() * sigma * dinv.asDiagonal();
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();

  for (double jitter = 0.0; jitter <= 1e-6; jitter = jitter == 0.0 ? 1e-10 : jitter * 2.0) {
    Eigen::MatrixXd attempt = sigma;
    if (jitter > 0.0) {
      attempt *= 1.0 / (1.0 + jitter);
      attempt.diagonal().setOnes();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success) {
      sigma = std::move(attempt);
      chol = llt.matrixL();
      return;
    }
  }
  throw std::runtime_error("repair: Cholesky failed after jitter escalation");
}

CopulaModel estimate_correlation(const Eigen::MatrixXd& G, long min_rows) {
  const Eigen::Index d = G.cols();
  if (d == 0) throw std::invalid_argument("estimate_correlation: zero columns");

  // Complete rows only; pairwise estimates break positive-definiteness far
  // more often than the rows they save are worth.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (G.row(i).array().isFinite().all()) keep.push_back(i);
  }
  const long n = static_cast<long>(keep.size());
  if (n < min_rows) {
    throw std::runtime_error("estimate_correlation: only " + std::to_string(n) +
                             " complete rows (minimum " + std::to_string(min_rows) + ")");
  }

  Eigen::MatrixXd Gc(n, d);
  for (long i = 0; i < n; ++i) Gc.row(i) = G.row(keep[i]);
  Eigen::RowVectorXd mean = Gc.colwise().mean();
  Gc.rowwise() -= mean;

  CopulaModel model;
  model.dim = static_cast<int>(d);
  model.sample_rows = n;
  model.low_sample = n < d / 2;

  model.sigma_n.setZero(d, d);
  model.sigma_n.selfadjointView<Eigen::Lower>().rankUpdate(Gc.transpose(), 1.0 / (n - 1));
  model.sigma_n = model.sigma_n.selfadjointView<Eigen::Lower>();

  Eigen::VectorXd sd = model.sigma_n.diagonal().cwiseSqrt();
  const double tiny = 1e-12;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (sd(j) <= tiny) model.degenerate_columns.push_back(static_cast<int>(j));
  }
  Eigen::VectorXd sdinv = sd.unaryExpr([&](double s) { return s <= tiny ? 0.0 : 1.0 / s; });
  model.sigma_n = sdinv.asDiagonal() * model.sigma_n * sdinv.asDiagonal();
  for (int j : model.degenerate_columns) {
    model.sigma_n.row(j).setZero();
    model.sigma_n.col(j).setZero();
    model.sigma_n(j, j) = 1.0;
  }

  repair_and_factor(model.sigma_n, model.chol);
  return model;
}

GaussianSampleBlock draw_block(const CopulaModel& model, int S, std::uint64_t seed) {
  if (model.chol.rows() != model.dim) throw std::logic_error("draw_block: model not factorized");
  GaussianSampleBlock block;
  block.seed = seed;
  block.samples.resize(S, model.dim);
  Rng rng(seed);

  // Chunked so the iid normals never exceed a few tens of MB at full size.
  const int chunk = 256;
  Eigen::MatrixXd z(model.dim, chunk);
  for (int s0 = 0; s0 < S; s0 += chunk) {
    int c = std::min(chunk, S - s0);
    for (int j = 0; j < c; ++j) {
      for (int i = 0; i < model.dim; ++i) z(i, j) = rng.normal();
    }
    block.samples.middleRows(s0, c) =
        (model.chol.triangularView<Eigen::Lower>() * z.leftCols(c)).transpose();
  }
  return block;
}

}  // namespace windscen
