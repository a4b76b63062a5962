#include "windscen/hetero.hpp"

#include <cmath>
#include <stdexcept>

#include "windscen/dist.hpp"

namespace windscen {

double HeteroModel::point(const Eigen::VectorXd& x) const {
  if (x.size() != alpha.size()) throw std::invalid_argument("predict: feature dimension mismatch");
  return alpha.dot(x);
}

double HeteroModel::scale(const Eigen::VectorXd& x) const {
  if (x.size() != beta.size()) throw std::invalid_argument("predict: feature dimension mismatch");
  return std::max(beta.dot(x), h_floor);
}

std::pair<double, double> HeteroModel::predict(const Eigen::VectorXd& x) const {
  return {point(x), scale(x)};
}

namespace {

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         bool* ridge_flag) {
  if (X.rows() < X.cols()) {
    throw std::invalid_argument("least squares: fewer rows than features");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() == X.cols()) {
    if (ridge_flag) *ridge_flag = false;
    return qr.solve(y);
  }
  // Near-collinear trailing lags land here; ridge keeps the fit defined.
  Eigen::MatrixXd xtx = X.transpose() * X;
  double lambda = 1e-6 * xtx.trace() / X.cols();
  xtx.diagonal().array() += lambda;
  if (ridge_flag) *ridge_flag = true;
  return xtx.ldlt().solve(X.transpose() * y);
}

}  // namespace

Eigen::VectorXd fit_point(const Dataset& ds, bool* ridge_flag) {
  return solve_ls(ds.X, ds.y, ridge_flag);
}

Eigen::VectorXd fit_scale(const Dataset& ds, const Eigen::VectorXd& alpha,
                          bool* ridge_flag) {
  Eigen::VectorXd abs_resid = (ds.y - ds.X * alpha).cwiseAbs();
  return solve_ls(ds.X, abs_resid, ridge_flag);
}

Eigen::VectorXd standardize(const Dataset& ds, const Eigen::VectorXd& alpha,
                            const Eigen::VectorXd& beta, double h_floor) {
  Eigen::VectorXd resid = ds.y - ds.X * alpha;
  Eigen::VectorXd h = (ds.X * beta).cwiseMax(h_floor);
  return resid.cwiseQuotient(h);
}

FittedModel fit_conditional_model(const Dataset& reg_ds, const Dataset& dist_ds,
                                  double capacity_mw, const HeteroFitOptions& opts) {
  FittedModel out;
  out.model.h_floor = opts.h_floor;

  const Eigen::Index width = reg_ds.X.cols();
  const bool enough_reg = reg_ds.X.rows() >= opts.min_rows_factor * width && width > 0;
  const bool enough_dist = dist_ds.X.rows() >= opts.min_ecdf_samples;

  if (enough_reg && enough_dist) {
    bool r1 = false, r2 = false;
    out.model.alpha = fit_point(reg_ds, &r1);
    out.model.beta = fit_scale(reg_ds, out.model.alpha, &r2) * opts.beta_scale;
    out.model.ridge_flagged = r1 || r2;
    if (out.model.ridge_flagged) out.flag = "ridge";
    out.u = standardize(dist_ds, out.model.alpha, out.model.beta, opts.h_floor);
    out.u_times = dist_ds.row_times;
    out.model.ecdf = EcdfTable::from_samples(
        std::vector<double>(out.u.data(), out.u.data() + out.u.size()),
        opts.ecdf_max_knots);
    return out;
  }

  // Climatological fallback: zero point correction, constant spread taken
  // from the raw error sample (capacity-scaled when even that is missing).
  out.model.climatology_fallback = true;
  out.flag = enough_reg ? "climatology:few_residuals" : "climatology:few_rows";
  out.model.alpha = Eigen::VectorXd::Zero(width);
  double h_const = opts.climatology_spread_frac * capacity_mw;
  if (dist_ds.y.size() >= 2) {
    double m = dist_ds.y.mean();
    double sd = std::sqrt((dist_ds.y.array() - m).square().sum() /
                          (dist_ds.y.size() - 1));
    if (sd > opts.h_floor) h_const = sd;
  }
  h_const = std::max(h_const, opts.h_floor);
  out.model.beta = Eigen::VectorXd::Zero(width);
  if (width > 0) out.model.beta(0) = h_const;  // intercept column

  if (dist_ds.y.size() >= 50) {
    out.u = dist_ds.y / h_const;
    out.u_times = dist_ds.row_times;
    out.model.ecdf = EcdfTable::from_samples(
        std::vector<double>(out.u.data(), out.u.data() + out.u.size()),
        opts.ecdf_max_knots);
  } else {
    // Standard normal quantile grid; keeps the model grid complete even
    // for farms with essentially no usable history.
    std::vector<double> grid(501);
    for (int i = 0; i < 501; ++i) grid[i] = normal_quantile((i + 0.5) / 501.0);
    out.model.ecdf = EcdfTable::from_sorted(std::move(grid));
    out.u.resize(0);
  }
  return out;
}

}  // namespace windscen
