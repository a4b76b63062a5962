#include "windscen/synth.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "windscen/dist.hpp"
#include "windscen/rng.hpp"

namespace windscen {

using nlohmann::json;

void OracleSpec::validate() const {
  if (n_farms < 1) throw std::invalid_argument("oracle: n_farms < 1");
  if (!capacities_mw.empty() && static_cast<int>(capacities_mw.size()) != n_farms) {
    throw std::invalid_argument("oracle: capacities size mismatch");
  }
  for (int w = 0; w < n_farms; ++w) {
    if (capacity(w) <= 0.0) throw std::invalid_argument("oracle: capacity <= 0");
  }
  if (!(ar_coeff > -1.0 && ar_coeff < 1.0)) throw std::invalid_argument("oracle: ar_coeff outside (-1,1)");
  if (!(horizon_ar > -1.0 && horizon_ar < 1.0)) throw std::invalid_argument("oracle: horizon_ar outside (-1,1)");
  if (spatial_rho < 0.0 || spatial_rho >= 1.0) throw std::invalid_argument("oracle: spatial_rho outside [0,1)");
  if (n_tau < 1 || step_sec <= 0 || issue_step_sec <= 0) throw std::invalid_argument("oracle: bad grid");
  if (issue_step_sec % step_sec != 0) throw std::invalid_argument("oracle: issue cadence not a multiple of the step");
  if (sigma_base <= 0.0) throw std::invalid_argument("oracle: sigma_base <= 0");
  if (marginal == Marginal::kScaledT && t_dof <= 2.0) {
    throw std::invalid_argument("oracle: t_dof must exceed 2");
  }
}

double GroundTruth::marginal_quantile(double q) const {
  if (spec.marginal == OracleSpec::Marginal::kNormal) return normal_quantile(q);
  return student_t_quantile(q, spec.t_dof);
}

double GroundTruth::true_bias(int w, int tau, double power_now_mw) const {
  (void)tau;
  double cap = spec.capacity(w);
  return cap * (spec.bias_base + spec.bias_power_coef * (power_now_mw / cap - 0.5));
}

double GroundTruth::true_scale(int w, int tau, double power_now_mw) const {
  double cap = spec.capacity(w);
  return cap * spec.sigma_base * (1.0 + spec.sigma_growth * (tau - 1)) *
         (1.0 + spec.hetero_slope * power_now_mw / cap);
}

double GroundTruth::true_quantile(int w, int tau, double power_now_mw, double q) const {
  return true_bias(w, tau, power_now_mw) +
         true_scale(w, tau, power_now_mw) * marginal_quantile(q);
}

double GroundTruth::true_correlation(int w, int tau, int w2, int tau2) const {
  double spatial = (w == w2) ? 1.0 : spec.spatial_rho;
  return spatial * std::pow(spec.horizon_ar, std::abs(tau - tau2));
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Lower Cholesky factor of the n x n equicorrelation matrix.
Eigen::MatrixXd equicorr_chol(int n, double rho) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
  c.diagonal().setOnes();
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) throw std::runtime_error("oracle: spatial correlation not PD");
  return llt.matrixL();
}

}  // namespace

SyntheticFeed generate_feed(const OracleSpec& spec, TimePoint t0,
                            std::int64_t duration_sec) {
  spec.validate();
  const int nw = spec.n_farms;
  const int nt = spec.n_tau;
  const long n_steps = static_cast<long>(duration_sec / spec.step_sec);
  if (n_steps < 2) throw std::invalid_argument("oracle: duration too short");

  SyntheticFeed feed;
  feed.truth.spec = spec;

  // Registry: neighbors in registry order (the latent field is
  // equicorrelated, so every other farm is equally close).
  std::vector<Farm> farms(nw);
  for (int w = 0; w < nw; ++w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "F%03d", w + 1);
    farms[w].id = buf;
    farms[w].capacity_mw = spec.capacity(w);
  }
  for (int w = 0; w < nw; ++w) {
    for (int v = 0; v < nw; ++v) {
      if (v != w) farms[w].neighbors.push_back(farms[v].id);
    }
  }
  feed.registry = FarmRegistry(std::move(farms));

  SeriesPanel& panel = feed.panel;
  panel.step_sec = spec.step_sec;
  panel.issue_step_sec = spec.issue_step_sec;
  panel.n_tau = nt;
  panel.times.resize(n_steps);
  for (long i = 0; i < n_steps; ++i) panel.times[i] = t0 + i * spec.step_sec;

  const Eigen::MatrixXd ls = equicorr_chol(nw, spec.spatial_rho);

  // Latent AR(1) field and the logistic power curve. The full path is
  // generated first; forecasts reference future power directly.
  Rng latent_rng(derive_seed(spec.seed, "latent"));
  Eigen::MatrixXd z(n_steps, nw);
  Eigen::VectorXd eps(nw);
  const double innov = std::sqrt(1.0 - spec.ar_coeff * spec.ar_coeff);
  for (long i = 0; i < n_steps; ++i) {
    for (int w = 0; w < nw; ++w) eps(w) = latent_rng.normal();
    Eigen::VectorXd corr = ls * eps;
    if (i == 0) {
      z.row(0) = corr.transpose();
    } else {
      z.row(i) = spec.ar_coeff * z.row(i - 1) + innov * corr.transpose();
    }
  }
  panel.power.resize(n_steps, nw);
  for (long i = 0; i < n_steps; ++i) {
    for (int w = 0; w < nw; ++w) {
      panel.power(i, w) = spec.capacity(w) * sigmoid(spec.power_curve_slope * z(i, w));
    }
  }

  // NWP: issue grid, future power + correlated error field.
  const long issue_every = spec.issue_step_sec / spec.step_sec;
  const long n_issues = (n_steps - 1) / issue_every + 1;
  panel.issue_times.resize(n_issues);
  for (long i = 0; i < n_issues; ++i) {
    panel.issue_times[i] = t0 + i * spec.issue_step_sec;
  }
  panel.nwp.assign(static_cast<std::size_t>(n_issues) * nw * nt, kMissing);

  Rng noise_rng(derive_seed(spec.seed, "nwp-noise"));
  const double har = spec.horizon_ar;
  const double hinnov = std::sqrt(1.0 - har * har);
  Eigen::VectorXd g_prev(nw), g_cur(nw);
  for (long i = 0; i < n_issues; ++i) {
    const long ti = i * issue_every;
    for (int tau = 1; tau <= nt; ++tau) {
      for (int w = 0; w < nw; ++w) eps(w) = noise_rng.normal();
      Eigen::VectorXd corr = ls * eps;
      if (tau == 1) {
        g_cur = corr;
      } else {
        g_cur = har * g_prev + hinnov * corr;
      }
      g_prev = g_cur;
      const long tfut = ti + tau;
      if (tfut >= n_steps) continue;  // no future power: horizon unavailable
      for (int w = 0; w < nw; ++w) {
        double u = g_cur(w);
        if (spec.marginal == OracleSpec::Marginal::kScaledT) {
          u = student_t_quantile(normal_cdf(u), spec.t_dof);
        }
        const double p_now = panel.power(ti, w);
        const double err = feed.truth.true_bias(w, tau, p_now) +
                           feed.truth.true_scale(w, tau, p_now) * u;
        double f = panel.power(tfut, w) - err;
        f = std::min(std::max(f, 0.0), spec.capacity(w));
        panel.nwp_cell(i, w, tau) = f;
      }
    }
  }
  return feed;
}

std::string oracle_spec_to_json(const OracleSpec& spec) {
  json j;
  j["n_farms"] = spec.n_farms;
  j["capacities_mw"] = spec.capacities_mw;
  j["spatial_rho"] = spec.spatial_rho;
  j["ar_coeff"] = spec.ar_coeff;
  j["power_curve_slope"] = spec.power_curve_slope;
  j["marginal"] = spec.marginal == OracleSpec::Marginal::kNormal ? "normal" : "scaled_t";
  j["t_dof"] = spec.t_dof;
  j["bias_base"] = spec.bias_base;
  j["bias_power_coef"] = spec.bias_power_coef;
  j["sigma_base"] = spec.sigma_base;
  j["sigma_growth"] = spec.sigma_growth;
  j["hetero_slope"] = spec.hetero_slope;
  j["horizon_ar"] = spec.horizon_ar;
  j["n_tau"] = spec.n_tau;
  j["step_sec"] = spec.step_sec;
  j["issue_step_sec"] = spec.issue_step_sec;
  j["seed"] = spec.seed;
  return j.dump(2);
}

OracleSpec load_oracle_spec_json(const std::string& text) {
  json j = json::parse(text);
  OracleSpec s;
  s.n_farms = j.value("n_farms", s.n_farms);
  s.capacities_mw = j.value("capacities_mw", s.capacities_mw);
  s.spatial_rho = j.value("spatial_rho", s.spatial_rho);
  s.ar_coeff = j.value("ar_coeff", s.ar_coeff);
  s.power_curve_slope = j.value("power_curve_slope", s.power_curve_slope);
  std::string m = j.value("marginal", std::string("normal"));
  if (m == "normal") {
    s.marginal = OracleSpec::Marginal::kNormal;
  } else if (m == "scaled_t") {
    s.marginal = OracleSpec::Marginal::kScaledT;
  } else {
    throw std::invalid_argument("oracle spec: unknown marginal '" + m + "'");
  }
  s.t_dof = j.value("t_dof", s.t_dof);
  s.bias_base = j.value("bias_base", s.bias_base);
  s.bias_power_coef = j.value("bias_power_coef", s.bias_power_coef);
  s.sigma_base = j.value("sigma_base", s.sigma_base);
  s.sigma_growth = j.value("sigma_growth", s.sigma_growth);
  s.hetero_slope = j.value("hetero_slope", s.hetero_slope);
  s.horizon_ar = j.value("horizon_ar", s.horizon_ar);
  s.n_tau = j.value("n_tau", s.n_tau);
  s.step_sec = j.value("step_sec", s.step_sec);
  s.issue_step_sec = j.value("issue_step_sec", s.issue_step_sec);
  s.seed = j.value("seed", s.seed);
  return s;
}

void write_ground_truth(const GroundTruth& truth, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << oracle_spec_to_json(truth.spec) << "\n";
}

}  // namespace windscen
