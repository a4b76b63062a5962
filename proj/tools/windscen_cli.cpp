// Command-line front end: synth | train | generate | evaluate | bench.
// Every output file starts with a "# config_hash=..., seed=..." comment so
// runs can be traced back to their exact configuration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "windscen/config.hpp"
#include "windscen/metrics.hpp"
#include "windscen/panel.hpp"
#include "windscen/pipeline.hpp"
#include "windscen/synth.hpp"

namespace fs = std::filesystem;
using namespace windscen;

namespace {

std::string trace_header(const RunConfig& cfg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "config_hash=%016llx, seed=%llu",
                static_cast<unsigned long long>(config_hash(cfg)),
                static_cast<unsigned long long>(cfg.seed));
  return buf;
}

/// Collects files written during one command so a failure part-way can
/// remove them instead of leaving a plausible-looking partial result.
class OutputSet {
 public:
  std::ofstream open(const std::string& path, const std::string& trace) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << trace << "\n";
    paths_.push_back(path);
    return out;
  }
  void track(const std::string& path) { paths_.push_back(path); }
  void commit() { paths_.clear(); }
  ~OutputSet() {
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  std::vector<std::string> paths_;
};

RunConfig load_cfg(const std::string& path, std::uint64_t* seed_override) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  if (seed_override) cfg.seed = *seed_override;
  return cfg;
}

SeriesPanel load_inputs(const RunConfig& cfg, FarmRegistry& registry) {
  if (cfg.registry_path.empty() || cfg.power_path.empty() || cfg.forecast_path.empty()) {
    throw std::runtime_error("config must set paths.registry, paths.power and paths.forecast");
  }
  registry = load_registry(cfg.registry_path);
  PanelLoadReport report;
  SeriesPanel panel = load_panel(cfg.power_path, cfg.forecast_path, registry, &report);
  if (report.out_of_range_cells > 0) {
    std::cerr << "warning: " << report.out_of_range_cells
              << " out-of-range cells marked missing\n";
  }
  if (report.duplicate_cells > 0) {
    std::cerr << "warning: " << report.duplicate_cells << " duplicate cells (last wins)\n";
  }
  return panel;
}

int run_synth(const RunConfig& cfg, const std::string& out_dir,
              const std::string& start, int days) {
  OracleSpec spec = cfg.oracle;
  spec.seed = cfg.seed;
  TimePoint t0 = parse_iso8601(start);
  SyntheticFeed feed = generate_feed(spec, t0, days * kSecondsPerDay);

  fs::create_directories(out_dir);
  const std::string trace = trace_header(cfg);
  OutputSet outputs;
  const std::string reg_path = out_dir + "/registry.csv";
  const std::string power_path = out_dir + "/power.csv";
  const std::string fc_path = out_dir + "/forecast.csv";
  const std::string truth_path = out_dir + "/ground_truth.json";
  outputs.track(reg_path);
  outputs.track(power_path);
  outputs.track(fc_path);
  outputs.track(truth_path);
  write_registry(feed.registry, reg_path, trace);
  write_panel(feed.panel, feed.registry, power_path, fc_path, trace);
  write_ground_truth(feed.truth, truth_path);
  outputs.commit();

  std::cout << "synth: " << feed.registry.n_farms() << " farms, "
            << feed.panel.n_times() << " timestamps, "
            << feed.panel.issue_times.size() << " forecast issues -> " << out_dir
            << "\n";
  return 0;
}

int run_train(const RunConfig& cfg, const std::string& bundle_out) {
  FarmRegistry registry;
  SeriesPanel panel = load_inputs(cfg, registry);
  const std::string path = bundle_out.empty() ? cfg.bundle_path : bundle_out;
  if (path.empty()) throw std::runtime_error("no bundle path (paths.bundle or --out)");

  TrainedBundle bundle = train(panel, registry, cfg);
  OutputSet outputs;
  outputs.track(path);
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  save_bundle(bundle, path);
  outputs.commit();

  long flagged = 0;
  for (const auto& f : bundle.meta.model_flags) {
    if (!f.empty()) ++flagged;
  }
  std::cout << "train: " << bundle.dim() << " models ("
            << bundle.registry.n_farms() << " farms x " << bundle.horizon.n_tau
            << " horizons), regression window ["
            << format_iso8601(bundle.meta.reg_start) << ", "
            << format_iso8601(bundle.meta.reg_end) << "), copula rows "
            << bundle.copula.sample_rows << ", pre-drawn block "
            << bundle.s_max() << " x " << bundle.dim() << "\n";
  if (flagged > 0) std::cout << "train: " << flagged << " models flagged degraded\n";
  if (bundle.copula.low_sample) {
    std::cout << "train: copula sample smaller than dim/2; correlations noisy\n";
  }
  std::cout << "train: bundle -> " << path << "\n";
  return 0;
}

int run_generate(const RunConfig& cfg, const std::string& at, int scenarios,
                 const std::string& out_dir) {
  FarmRegistry registry;
  SeriesPanel panel = load_inputs(cfg, registry);
  if (cfg.bundle_path.empty()) throw std::runtime_error("config must set paths.bundle");
  TrainedBundle bundle = load_bundle(cfg.bundle_path);
  TimePoint t = parse_iso8601(at);

  ScenarioSet set = generate(bundle, panel, t, scenarios);
  for (const auto& d : set.fallback_details) std::cerr << "warning: " << d << "\n";

  const std::string trace = trace_header(cfg);
  OutputSet outputs;
  {
    std::ofstream out = outputs.open(out_dir + "/scenarios.csv", trace);
    out << "issue_time,scenario,farm_id,horizon_steps,power_mw\n";
    const std::string ts = format_iso8601(t);
    char num[32];
    for (int s = 0; s < scenarios; ++s) {
      for (int w = 0; w < set.n_farms; ++w) {
        const std::string& id = bundle.registry.farm(w).id;
        for (int tau = 1; tau <= set.n_tau; ++tau) {
          std::snprintf(num, sizeof(num), "%.3f", set.scenario(s, w, tau));
          out << ts << ',' << s << ',' << id << ',' << tau << ',' << num << "\n";
        }
      }
    }
    if (!out) throw std::runtime_error("scenario write failed");
  }
  {
    std::ofstream out = outputs.open(out_dir + "/aggregate.csv", trace);
    out << "issue_time,scenario,horizon_steps,power_mw\n";
    const std::string ts = format_iso8601(t);
    char num[32];
    for (int s = 0; s < scenarios; ++s) {
      for (int tau = 1; tau <= set.n_tau; ++tau) {
        double sum = 0.0;
        for (int w = 0; w < set.n_farms; ++w) sum += set.scenario(s, w, tau);
        std::snprintf(num, sizeof(num), "%.3f", sum);
        out << ts << ',' << s << ',' << tau << ',' << num << "\n";
      }
    }
    if (!out) throw std::runtime_error("aggregate write failed");
  }
  outputs.commit();

  std::cout << "generate: " << scenarios << " scenarios at " << format_iso8601(t)
            << ", clamp rate " << set.clamp_rate;
  if (set.online_fallbacks > 0) {
    std::cout << ", " << set.online_fallbacks << " online fallbacks";
  }
  std::cout << " -> " << out_dir << "\n";
  return 0;
}

int run_evaluate(const RunConfig& cfg, const std::string& from,
                 const std::string& to, const std::string& out_dir,
                 const std::string& cell_a_arg, const std::string& cell_b_arg,
                 bool skip_representations) {
  FarmRegistry registry;
  SeriesPanel panel = load_inputs(cfg, registry);
  if (cfg.bundle_path.empty()) throw std::runtime_error("config must set paths.bundle");
  TrainedBundle bundle = load_bundle(cfg.bundle_path);
  const TimePoint t0 = parse_iso8601(from);
  const TimePoint t1 = parse_iso8601(to);
  if (t1 <= t0) throw std::runtime_error("--to must be after --from");
  const int nt = bundle.horizon.n_tau;
  const int nw = bundle.registry.n_farms();

  auto parse_cell = [&](const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::runtime_error("cell must be FARM_ID:TAU");
    int w = bundle.registry.index_of(s.substr(0, colon));
    if (w < 0) throw std::runtime_error("unknown farm in cell: " + s);
    int tau = std::stoi(s.substr(colon + 1));
    if (tau < 1 || tau > nt) throw std::runtime_error("horizon out of range in cell: " + s);
    return std::make_pair(w, tau);
  };
  auto cell_a = cell_a_arg.empty() ? std::make_pair(0, 1) : parse_cell(cell_a_arg);
  auto cell_b = cell_b_arg.empty()
                    ? (nw > 1 ? std::make_pair(1, 1) : std::make_pair(0, std::min(2, nt)))
                    : parse_cell(cell_b_arg);

  const std::string trace = trace_header(cfg);
  OutputSet outputs;

  {
    std::ofstream out = outputs.open(out_dir + "/reliability.csv", trace);
    out << "farm_id,horizon_steps,level,observed,gaussian_observed,n_eval\n";
    const std::vector<int> taus = {1, (nt + 1) / 2, nt};
    for (int w = 0; w < nw; ++w) {
      for (int tau : taus) {
        ReliabilityCurve c = reliability(bundle, panel, w, tau, t0, t1,
                                         cfg.levels, cfg.eval_step_sec);
        if (c.low_sample) {
          std::cerr << "warning: reliability (" << bundle.registry.farm(w).id
                    << ", tau " << tau << ") has only " << c.n_eval << " points\n";
        }
        for (std::size_t i = 0; i < c.levels.size(); ++i) {
          out << bundle.registry.farm(w).id << ',' << tau << ',' << c.levels[i]
              << ',' << c.observed[i] << ',' << c.gaussian_observed[i] << ','
              << c.n_eval << "\n";
        }
      }
    }
    if (!out) throw std::runtime_error("reliability write failed");
  }

  // Multivariate scores and per-horizon RMSE share one sweep over issues.
  std::vector<double> se_model(nt, 0.0), se_nwp(nt, 0.0);
  std::vector<long> se_n(nt, 0);
  {
    std::ofstream out = outputs.open(out_dir + "/scores.csv", trace);
    out << "issue_time,scenarios,energy,integrated_distance,variogram\n";
    const int dim = bundle.dim();
    for (TimePoint t = t0; t < t1; t += cfg.eval_step_sec) {
      Eigen::VectorXd realization(dim);
      bool complete = true;
      for (int w = 0; w < nw && complete; ++w) {
        for (int tau = 1; tau <= nt; ++tau) {
          double v = panel.power_at(t + static_cast<std::int64_t>(tau) * panel.step_sec, w);
          if (is_missing(v)) { complete = false; break; }
          realization(flat_index(w, tau, nt)) = v;
        }
      }
      if (!complete) continue;

      ScenarioSet set = generate(bundle, panel, t, cfg.scenarios_per_issue);
      out << format_iso8601(t) << ',' << cfg.scenarios_per_issue << ','
          << energy_score(realization, set.scenarios) << ','
          << integrated_distance(realization, set.scenarios) << ','
          << variogram_score(realization, set.scenarios, cfg.variogram_order)
          << "\n";

      OnlineCoefficients c = compute_online(bundle, panel, t);
      for (int w = 0; w < nw; ++w) {
        for (int tau = 1; tau <= nt; ++tau) {
          const int k = flat_index(w, tau, nt);
          double dm = set.point(k) - realization(k);
          double dn = c.nwp(k) - realization(k);
          se_model[tau - 1] += dm * dm;
          se_nwp[tau - 1] += dn * dn;
          ++se_n[tau - 1];
        }
      }
    }
    if (!out) throw std::runtime_error("scores write failed");
  }

  {
    std::ofstream out = outputs.open(out_dir + "/rmse.csv", trace);
    out << "horizon_steps,rmse_model_mw,rmse_nwp_mw,n\n";
    for (int tau = 1; tau <= nt; ++tau) {
      if (se_n[tau - 1] == 0) continue;
      out << tau << ',' << std::sqrt(se_model[tau - 1] / se_n[tau - 1]) << ','
          << std::sqrt(se_nwp[tau - 1] / se_n[tau - 1]) << ',' << se_n[tau - 1]
          << "\n";
    }
    if (!out) throw std::runtime_error("rmse write failed");
  }

  {
    RankScatter rs = rank_scatter(bundle, panel, cell_a, cell_b, t0, t1,
                                  cfg.eval_step_sec, cfg.seed);
    std::ofstream out = outputs.open(out_dir + "/rank_scatter.csv", trace);
    out << "source,r1,r2\n";
    for (const auto& [a, b] : rs.data) out << "data," << a << ',' << b << "\n";
    for (const auto& [a, b] : rs.model) out << "model," << a << ',' << b << "\n";
    if (!out) throw std::runtime_error("rank scatter write failed");
    std::cout << "evaluate: rank correlation (" << bundle.registry.farm(cell_a.first).id
              << ":" << cell_a.second << " vs " << bundle.registry.farm(cell_b.first).id
              << ":" << cell_b.second << ") rho=" << rs.rho << "\n";
  }

  if (!skip_representations) {
    // Retrains on the data before the window in both representations, so
    // this is the slow part of evaluate; --skip-representations avoids it.
    RepresentationComparison rc = compare_representations(panel, registry, cfg, t0, t1);
    std::ofstream out = outputs.open(out_dir + "/representations.csv", trace);
    out << "mode,issues,energy,integrated_distance,variogram\n";
    auto row = [&](const char* mode, const ScoreTriple& s) {
      out << mode << ',' << rc.issues << ',' << s.energy << ','
          << s.integrated_distance << ',' << s.variogram << "\n";
    };
    row("per_farm_total", rc.per_farm);
    row("aggregate_only_total", rc.aggregate_only);
    row("per_farm_issue_mean", rc.per_farm_mean);
    row("aggregate_only_issue_mean", rc.aggregate_only_mean);
    if (!out) throw std::runtime_error("representations write failed");
    std::cout << "evaluate: aggregate energy score (mean per issue): per-farm "
              << rc.per_farm_mean.energy << " vs aggregate-only "
              << rc.aggregate_only_mean.energy << " over " << rc.issues
              << " issues\n";
  }

  outputs.commit();
  std::cout << "evaluate: [" << from << ", " << to << ") -> " << out_dir << "\n";
  return 0;
}

int run_bench(const RunConfig& cfg, const std::string& at, int scenarios, int reps) {
  FarmRegistry registry;
  SeriesPanel panel = load_inputs(cfg, registry);
  if (cfg.bundle_path.empty()) throw std::runtime_error("config must set paths.bundle");
  TrainedBundle bundle = load_bundle(cfg.bundle_path);
  TimePoint t = at.empty() ? bundle.meta.reg_end - cfg.horizon.step_sec
                           : parse_iso8601(at);

  BenchReport rep = bench(bundle, panel, t, scenarios, reps);
  std::printf("bench: %d scenarios, %d reps at %s\n", scenarios, reps,
              format_iso8601(t).c_str());
  std::printf("  online coefficients (step 8): median %.6f s\n", rep.median_step8());
  std::printf("  scenario assembly   (step 9): median %.6f s\n", rep.median_step9());
  std::printf("  total online path:            median %.6f s\n", rep.median_total());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wind power scenario generation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", at, from, to, bundle_out;
  std::string start = "2025-01-01T00:00:00Z", cell_a, cell_b;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int scenarios = 1000, days = 120, reps = 5;

  app.add_option("--config", config_path, "JSON configuration file")->envname("WINDSCEN_CONFIG");
  app.add_option("--seed", seed, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic feed");
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_option("--start", start, "first timestamp (ISO-8601 UTC)");
  synth->add_option("--days", days, "length of the feed in days");

  CLI::App* train_cmd = app.add_subcommand("train", "fit models and write a bundle");
  train_cmd->add_option("--out", bundle_out, "bundle output path (default: paths.bundle)");

  CLI::App* gen = app.add_subcommand("generate", "draw scenarios at one issue time");
  gen->add_option("--at", at, "issue time (ISO-8601 UTC)")->required();
  gen->add_option("--scenarios", scenarios, "number of scenarios");
  gen->add_option("--out", out_dir, "output directory");

  CLI::App* eval = app.add_subcommand("evaluate", "score a held-out window");
  eval->add_option("--from", from, "window start (ISO-8601 UTC)")->required();
  eval->add_option("--to", to, "window end, exclusive")->required();
  eval->add_option("--out", out_dir, "output directory");
  eval->add_option("--cell-a", cell_a, "rank scatter cell, FARM_ID:TAU");
  eval->add_option("--cell-b", cell_b, "rank scatter cell, FARM_ID:TAU");
  bool skip_representations = false;
  eval->add_flag("--skip-representations", skip_representations,
                 "skip the per-farm vs aggregate model comparison");

  CLI::App* bench_cmd = app.add_subcommand("bench", "time the online path");
  bench_cmd->add_option("--at", at, "issue time (default: end of training window)");
  bench_cmd->add_option("--scenarios", scenarios, "number of scenarios");
  bench_cmd->add_option("--reps", reps, "repetitions");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_cfg(config_path, seed_set ? &seed : nullptr);
    if (synth->parsed()) return run_synth(cfg, out_dir, start, days);
    if (train_cmd->parsed()) return run_train(cfg, bundle_out);
    if (gen->parsed()) return run_generate(cfg, at, scenarios, out_dir);
    if (eval->parsed()) {
      return run_evaluate(cfg, from, to, out_dir, cell_a, cell_b, skip_representations);
    }
    if (bench_cmd->parsed()) return run_bench(cfg, at, scenarios, reps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
