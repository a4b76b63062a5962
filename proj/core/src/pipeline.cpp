#include "windscen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "windscen/dist.hpp"
#include "windscen/rng.hpp"

namespace windscen {

namespace {

double clamp_mw(double v, double cap) { return std::min(std::max(v, 0.0), cap); }

}  // namespace

TrainedBundle train(const SeriesPanel& panel, const FarmRegistry& registry,
                    const RunConfig& cfg) {
  const int nt = cfg.horizon.n_tau;
  const int nw = registry.n_farms();
  const int dim = nw * nt;
  if (panel.n_tau < nt) {
    throw std::invalid_argument("train: panel has " + std::to_string(panel.n_tau) +
                                " horizons, config needs " + std::to_string(nt));
  }
  if (panel.step_sec != cfg.horizon.step_sec) {
    throw std::invalid_argument("train: panel step does not match configured step");
  }
  const std::int64_t step = cfg.horizon.step_sec;

  // Last execution time with a full-horizon target, then the two training
  // windows (half-open) ending there.
  const TimePoint t_hi = panel.times.back() - static_cast<std::int64_t>(nt) * step;
  if (t_hi <= panel.times.front()) {
    throw std::invalid_argument("train: panel too short for the horizon span");
  }
  TrainedBundle bundle;
  bundle.registry = registry;
  bundle.horizon = cfg.horizon;
  bundle.features = cfg.features;
  bundle.fallback_spread_frac = cfg.fallback_spread_frac;
  TrainingMeta& meta = bundle.meta;
  meta.reg_end = t_hi + step;
  meta.reg_start = std::max(panel.times.front(),
                            meta.reg_end - cfg.regression_days * kSecondsPerDay);
  meta.dist_end = meta.reg_end;
  meta.dist_start = std::max(panel.times.front(),
                             meta.dist_end - cfg.distribution_days * kSecondsPerDay);
  meta.seed = cfg.seed;
  meta.config_hash = config_hash(cfg);
  meta.model_flags.assign(dim, "");

  // Copula rows: a strided sub-grid of the distribution window, aligned
  // across all models (complete rows only enter the estimate).
  const std::int64_t cop_step = static_cast<std::int64_t>(cfg.copula_stride_steps) * step;
  const long n_cop_rows = static_cast<long>((meta.dist_end - meta.dist_start - 1) / cop_step) + 1;
  Eigen::MatrixXd G = Eigen::MatrixXd::Constant(n_cop_rows, dim, kMissing);

  bundle.models.resize(dim);
  for (int w = 0; w < nw; ++w) {
    const double cap = registry.farm(w).capacity_mw;
    HeteroFitOptions opts;
    opts.h_floor = cfg.h_floor_for(cap);
    opts.min_rows_factor = cfg.min_rows_factor;
    opts.min_ecdf_samples = cfg.min_ecdf_samples;
    opts.ecdf_max_knots = cfg.ecdf_max_knots;
    opts.beta_scale = cfg.beta_scale;
    opts.climatology_spread_frac = cfg.fallback_spread_frac;
    for (int tau = 1; tau <= nt; ++tau) {
      const int k = flat_index(w, tau, nt);
      Dataset reg_ds = build_dataset(panel, registry, w, tau, cfg.features,
                                     meta.reg_start, meta.reg_end);
      Dataset dist_ds = build_dataset(panel, registry, w, tau, cfg.features,
                                      meta.dist_start, meta.dist_end);
      meta.total_dropped_rows += reg_ds.dropped_rows + dist_ds.dropped_rows;

      FittedModel fm = fit_conditional_model(reg_ds, dist_ds, cap, opts);
      meta.model_flags[k] = fm.flag;
      for (Eigen::Index i = 0; i < fm.u.size(); ++i) {
        const TimePoint t = fm.u_times[i];
        if ((t - meta.dist_start) % cop_step != 0) continue;
        const long row = (t - meta.dist_start) / cop_step;
        G(row, k) = to_gaussian(fm.u(i), fm.model.ecdf);
      }
      bundle.models[k] = std::move(fm.model);
    }
  }

  bundle.copula = estimate_correlation(G, cfg.copula_min_rows);
  G.resize(0, 0);

  // Steps 6-7: pre-drawn Gaussian block, converted per column into the
  // standardized scenario block. Condition-independent by construction.
  GaussianSampleBlock block =
      draw_block(bundle.copula, cfg.s_max, derive_seed(cfg.seed, "scenario-block"));
  bundle.u_hat = std::move(block.samples);
  for (int k = 0; k < dim; ++k) {
    const EcdfTable& ecdf = bundle.models[k].ecdf;
    for (Eigen::Index s = 0; s < bundle.u_hat.rows(); ++s) {
      bundle.u_hat(s, k) = ecdf.inverse(normal_cdf(bundle.u_hat(s, k)));
    }
  }
  return bundle;
}

OnlineCoefficients compute_online(const TrainedBundle& bundle,
                                  const SeriesPanel& panel, TimePoint t_now) {
  const int nt = bundle.horizon.n_tau;
  const int nw = bundle.registry.n_farms();
  const int dim = nw * nt;
  OnlineCoefficients c;
  c.y_hat.resize(dim);
  c.h_hat.resize(dim);
  c.nwp.resize(dim);
  for (int w = 0; w < nw; ++w) {
    const double cap = bundle.registry.farm(w).capacity_mw;
    for (int tau = 1; tau <= nt; ++tau) {
      const int k = flat_index(w, tau, nt);
      const HeteroModel& model = bundle.models[k];
      double f = panel.nwp_at(t_now, w, tau);
      if (is_missing(f)) {
        // No usable NWP even after carry-forward: persist the last
        // measurement so the model at least centers on something real.
        for (int back = 0; back <= 24; ++back) {
          double p = panel.power_at(t_now - back * panel.step_sec, w);
          if (!is_missing(p)) { f = p; break; }
        }
        if (is_missing(f)) f = 0.5 * cap;
        c.y_hat(k) = 0.0;
        c.h_hat(k) = bundle.fallback_spread_frac * cap;
        c.nwp(k) = f;
        ++c.fallbacks;
        c.fallback_details.push_back("no NWP for (" + bundle.registry.farm(w).id +
                                     ", tau " + std::to_string(tau) + ")");
        continue;
      }
      c.nwp(k) = f;
      try {
        Eigen::VectorXd x =
            build_online_row(panel, bundle.registry, t_now, w, tau, bundle.features);
        auto [y, h] = model.predict(x);
        c.y_hat(k) = y;
        c.h_hat(k) = h;
      } catch (const std::runtime_error& e) {
        c.y_hat(k) = 0.0;
        c.h_hat(k) = bundle.fallback_spread_frac * cap;
        ++c.fallbacks;
        c.fallback_details.push_back(e.what());
      }
    }
  }
  return c;
}

ScenarioSet assemble_scenarios(const TrainedBundle& bundle,
                               const OnlineCoefficients& coeffs, TimePoint t_now,
                               int S) {
  if (S < 1) throw std::invalid_argument("generate: S must be >= 1");
  if (S > bundle.s_max()) {
    throw std::invalid_argument("generate: S exceeds the pre-drawn block (" +
                                std::to_string(bundle.s_max()) + ")");
  }
  const int nt = bundle.horizon.n_tau;
  const int dim = bundle.dim();
  ScenarioSet out;
  out.issue_time = t_now;
  out.n_farms = bundle.registry.n_farms();
  out.n_tau = nt;
  out.scenarios.resize(S, dim);
  out.point.resize(dim);
  out.online_fallbacks = coeffs.fallbacks;
  out.fallback_details = coeffs.fallback_details;

  long clamped = 0;
  for (int k = 0; k < dim; ++k) {
    const double cap = bundle.registry.farm(k / nt).capacity_mw;
    const double base = coeffs.nwp(k) + coeffs.y_hat(k);
    const double h = coeffs.h_hat(k);
    out.point(k) = clamp_mw(base, cap);
    auto col = out.scenarios.col(k);
    col = (bundle.u_hat.col(k).head(S).array() * h + base).matrix();
    for (int s = 0; s < S; ++s) {
      if (col(s) < 0.0 || col(s) > cap) {
        ++clamped;
        col(s) = clamp_mw(col(s), cap);
      }
    }
  }
  out.clamp_rate = static_cast<double>(clamped) / (static_cast<double>(S) * dim);
  return out;
}

ScenarioSet generate(const TrainedBundle& bundle, const SeriesPanel& panel,
                     TimePoint t_now, int S) {
  return assemble_scenarios(bundle, compute_online(bundle, panel, t_now), t_now, S);
}

double BenchReport::median_step8() const {
  std::vector<double> v = step8_sec;
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

double BenchReport::median_step9() const {
  std::vector<double> v = step9_sec;
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

BenchReport bench(const TrainedBundle& bundle, const SeriesPanel& panel,
                  TimePoint t_now, int S, int repetitions) {
  using clock = std::chrono::steady_clock;
  BenchReport rep;
  rep.scenarios = S;
  for (int r = 0; r < repetitions; ++r) {
    auto t0 = clock::now();
    OnlineCoefficients c = compute_online(bundle, panel, t_now);
    auto t1 = clock::now();
    ScenarioSet set = assemble_scenarios(bundle, c, t_now, S);
    auto t2 = clock::now();
    // Touch the result so the assembly cannot be optimized away.
    volatile double sink = set.scenarios(0, 0);
    (void)sink;
    rep.step8_sec.push_back(std::chrono::duration<double>(t1 - t0).count());
    rep.step9_sec.push_back(std::chrono::duration<double>(t2 - t1).count());
  }
  return rep;
}

}  // namespace windscen
