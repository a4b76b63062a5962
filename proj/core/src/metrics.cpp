#include "windscen/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "windscen/dist.hpp"
#include "windscen/rng.hpp"

namespace windscen {

double rmse(const std::vector<double>& actual, const std::vector<double>& forecast) {
  if (actual.empty()) throw std::invalid_argument("rmse: empty input");
  if (actual.size() != forecast.size()) throw std::invalid_argument("rmse: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    double d = actual[i] - forecast[i];
    s += d * d;
  }
  return std::sqrt(s / actual.size());
}

ReliabilityCurve reliability(const TrainedBundle& bundle, const SeriesPanel& panel,
                             int w, int tau, TimePoint start, TimePoint end,
                             const std::vector<double>& levels,
                             std::int64_t eval_step) {
  const HeteroModel& model = bundle.model(w, tau);
  const double sd = model.ecdf.stddev();
  ReliabilityCurve curve;
  curve.levels = levels;
  curve.observed.assign(levels.size(), 0.0);
  curve.gaussian_observed.assign(levels.size(), 0.0);

  for (TimePoint t = start; t < end; t += eval_step) {
    double f = panel.nwp_at(t, w, tau);
    double p_fut = panel.power_at(t + static_cast<std::int64_t>(tau) * panel.step_sec, w);
    if (is_missing(f) || is_missing(p_fut)) continue;
    Eigen::VectorXd x;
    try {
      x = build_online_row(panel, bundle.registry, t, w, tau, bundle.features);
    } catch (const std::runtime_error&) {
      continue;
    }
    auto [y_hat, h_hat] = model.predict(x);
    const double y = p_fut - f;  // realized NWP error
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (y <= y_hat + h_hat * model.ecdf.inverse(levels[i])) curve.observed[i] += 1.0;
      if (y <= y_hat + h_hat * sd * normal_quantile(levels[i])) {
        curve.gaussian_observed[i] += 1.0;
      }
    }
    ++curve.n_eval;
  }
  if (curve.n_eval > 0) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      curve.observed[i] /= curve.n_eval;
      curve.gaussian_observed[i] /= curve.n_eval;
    }
  }
  curve.low_sample = curve.n_eval < 200;
  return curve;
}

double energy_score(const Eigen::VectorXd& realization, const Eigen::MatrixXd& scenarios) {
  const Eigen::Index S = scenarios.rows();
  if (S < 2) throw std::invalid_argument("energy_score: need at least 2 scenarios");
  if (scenarios.cols() != realization.size()) {
    throw std::invalid_argument("energy_score: dimension mismatch");
  }
  double t1 = 0.0;
  for (Eigen::Index s = 0; s < S; ++s) {
    t1 += (scenarios.row(s).transpose() - realization).norm();
  }
  t1 /= S;
  double t2 = 0.0;
  for (Eigen::Index s = 0; s < S; ++s) {
    for (Eigen::Index s2 = 0; s2 < S; ++s2) {
      t2 += (scenarios.row(s) - scenarios.row(s2)).norm();
    }
  }
  t2 /= 2.0 * static_cast<double>(S) * S;
  return t1 - t2;
}

double integrated_distance(const Eigen::VectorXd& realization,
                           const Eigen::MatrixXd& scenarios) {
  if (scenarios.cols() != realization.size()) {
    throw std::invalid_argument("integrated_distance: dimension mismatch");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < scenarios.rows(); ++i) {
    s += (scenarios.row(i).transpose() - realization).cwiseAbs().sum();
  }
  return s;
}

double variogram_score(const Eigen::VectorXd& realization,
                       const Eigen::MatrixXd& scenarios, double p) {
  const Eigen::Index D = realization.size();
  const Eigen::Index S = scenarios.rows();
  if (scenarios.cols() != D) throw std::invalid_argument("variogram_score: dimension mismatch");
  double score = 0.0;
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = i + 1; j < D; ++j) {
      double obs = std::pow(std::fabs(realization(i) - realization(j)), p);
      // Accumulate deviations from obs so an ensemble identical to the
      // realization scores exactly zero, with no rounding residue.
      double mean_dev = 0.0;
      for (Eigen::Index s = 0; s < S; ++s) {
        mean_dev += std::pow(std::fabs(scenarios(s, i) - scenarios(s, j)), p) - obs;
      }
      mean_dev /= S;
      score += mean_dev * mean_dev;
    }
  }
  return score;
}

RankScatter rank_scatter(const TrainedBundle& bundle, const SeriesPanel& panel,
                         std::pair<int, int> cell_a, std::pair<int, int> cell_b,
                         TimePoint start, TimePoint end, std::int64_t eval_step,
                         std::uint64_t seed) {
  auto standardized = [&](int w, int tau, TimePoint t, double& u) {
    double f = panel.nwp_at(t, w, tau);
    double p_fut = panel.power_at(t + static_cast<std::int64_t>(tau) * panel.step_sec, w);
    if (is_missing(f) || is_missing(p_fut)) return false;
    Eigen::VectorXd x;
    try {
      x = build_online_row(panel, bundle.registry, t, w, tau, bundle.features);
    } catch (const std::runtime_error&) {
      return false;
    }
    const HeteroModel& m = bundle.model(w, tau);
    auto [y_hat, h_hat] = m.predict(x);
    u = (p_fut - f - y_hat) / h_hat;
    return true;
  };

  RankScatter out;
  const EcdfTable& ea = bundle.model(cell_a.first, cell_a.second).ecdf;
  const EcdfTable& eb = bundle.model(cell_b.first, cell_b.second).ecdf;
  std::vector<double> ga, gb;
  for (TimePoint t = start; t < end; t += eval_step) {
    double ua, ub;
    if (!standardized(cell_a.first, cell_a.second, t, ua)) continue;
    if (!standardized(cell_b.first, cell_b.second, t, ub)) continue;
    double ra = ea.eval(ua), rb = eb.eval(ub);
    out.data.emplace_back(ra, rb);
    ga.push_back(normal_quantile(ra));
    gb.push_back(normal_quantile(rb));
  }

  const std::size_t n = ga.size();
  if (n >= 3) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) { ma += ga[i]; mb += gb[i]; }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      saa += (ga[i] - ma) * (ga[i] - ma);
      sbb += (gb[i] - mb) * (gb[i] - mb);
      sab += (ga[i] - ma) * (gb[i] - mb);
    }
    if (saa > 0.0 && sbb > 0.0) out.rho = sab / std::sqrt(saa * sbb);
  }

  // Matched sample from a bivariate Gaussian copula at the estimated rho.
  Rng rng(derive_seed(seed, "rank-scatter"));
  const double rho = std::clamp(out.rho, -0.999999, 0.999999);
  const double comp = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    double z1 = rng.normal();
    double z2 = rho * z1 + comp * rng.normal();
    out.model.emplace_back(normal_cdf(z1), normal_cdf(z2));
  }
  return out;
}

namespace {

struct ModeState {
  TrainedBundle bundle;
  const SeriesPanel* panel;
};

// Aggregate trajectory (length n_tau) of one scenario set.
Eigen::MatrixXd aggregate_scenarios(const ScenarioSet& set) {
  const Eigen::Index S = set.scenarios.rows();
  Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(S, set.n_tau);
  for (int w = 0; w < set.n_farms; ++w) {
    agg += set.scenarios.middleCols(static_cast<Eigen::Index>(w) * set.n_tau, set.n_tau);
  }
  return agg;
}

}  // namespace

RepresentationComparison compare_representations(const SeriesPanel& panel,
                                                 const FarmRegistry& registry,
                                                 const RunConfig& cfg,
                                                 TimePoint eval_start,
                                                 TimePoint eval_end) {
  // Training data strictly precedes the evaluation window.
  SeriesPanel train_panel = slice_window(panel, panel.times.front(), eval_start);

  ModeState per_farm{train(train_panel, registry, cfg), &panel};

  SeriesPanel agg_full = aggregate_panel(panel);
  SeriesPanel agg_train = slice_window(agg_full, agg_full.times.front(), eval_start);
  FarmRegistry agg_reg = aggregate_registry(registry);
  ModeState agg_only{train(agg_train, agg_reg, cfg), &agg_full};

  RepresentationComparison out;
  const int nt = cfg.horizon.n_tau;
  const int S = cfg.scenarios_per_issue;
  for (TimePoint t = eval_start; t < eval_end; t += cfg.eval_step_sec) {
    // Aggregate realization over the horizon; skip issues it cannot cover.
    Eigen::VectorXd realization(nt);
    bool ok = true;
    for (int tau = 1; tau <= nt; ++tau) {
      double v = agg_full.power_at(t + static_cast<std::int64_t>(tau) * panel.step_sec, 0);
      if (is_missing(v)) { ok = false; break; }
      realization(tau - 1) = v;
    }
    if (!ok) continue;

    ScenarioSet pf = generate(per_farm.bundle, panel, t, S);
    ScenarioSet ao = generate(agg_only.bundle, agg_full, t, S);
    Eigen::MatrixXd pf_agg = aggregate_scenarios(pf);
    Eigen::MatrixXd ao_agg = ao.scenarios;  // already 1 farm x n_tau

    ScoreTriple pfs{energy_score(realization, pf_agg),
                    integrated_distance(realization, pf_agg),
                    variogram_score(realization, pf_agg, cfg.variogram_order)};
    ScoreTriple aos{energy_score(realization, ao_agg),
                    integrated_distance(realization, ao_agg),
                    variogram_score(realization, ao_agg, cfg.variogram_order)};

    out.issue_times.push_back(t);
    out.per_farm_issues.push_back(pfs);
    out.aggregate_only_issues.push_back(aos);
    out.per_farm.energy += pfs.energy;
    out.per_farm.integrated_distance += pfs.integrated_distance;
    out.per_farm.variogram += pfs.variogram;
    out.aggregate_only.energy += aos.energy;
    out.aggregate_only.integrated_distance += aos.integrated_distance;
    out.aggregate_only.variogram += aos.variogram;
    ++out.issues;
  }
  if (out.issues > 0) {
    auto mean = [&](const ScoreTriple& s) {
      return ScoreTriple{s.energy / out.issues, s.integrated_distance / out.issues,
                         s.variogram / out.issues};
    };
    out.per_farm_mean = mean(out.per_farm);
    out.aggregate_only_mean = mean(out.aggregate_only);
  }
  return out;
}

}  // namespace windscen
