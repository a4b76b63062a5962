#include "windscen/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windscen {

void FeatureSpec::validate() const {
  if (nwp_trailing_lags < 0 || power_lags < 0 || neighbor_count < 0) {
    throw std::invalid_argument("FeatureSpec: negative count");
  }
  if (nwp_lead_degree < 1) {
    throw std::invalid_argument("FeatureSpec: nwp_lead_degree must be >= 1");
  }
  for (int m : error_lag_multiples) {
    if (m < 1) throw std::invalid_argument("FeatureSpec: error lag multiple < 1");
  }
}

namespace {

struct Layout {
  int trailing;                    // realized trailing-lag count
  std::vector<int> error_offsets;  // deduped, clamped to [1, n_tau]
  std::vector<int> neighbors;      // farm indices actually used
};

Layout make_layout(const FeatureSpec& spec, const FarmRegistry& registry, int w,
                   int tau, int n_tau) {
  spec.validate();
  Layout l;
  l.trailing = std::min(spec.nwp_trailing_lags, tau - 1);
  for (int m : spec.error_lag_multiples) {
    int off = std::min(m * tau, n_tau);
    if (std::find(l.error_offsets.begin(), l.error_offsets.end(), off) ==
        l.error_offsets.end()) {
      l.error_offsets.push_back(off);
    }
  }
  auto nbrs = registry.neighbor_indices(w);
  for (int i = 0; i < spec.neighbor_count && i < static_cast<int>(nbrs.size()); ++i) {
    l.neighbors.push_back(nbrs[i]);
  }
  return l;
}

// Fills one feature row; returns false and sets `missing` on the first
// unavailable input. Shared by the offline and online paths so the two are
// identical by construction.
bool fill_row(const SeriesPanel& panel, int w, int tau, TimePoint t,
              const FeatureSpec& spec, const Layout& l, double* out,
              std::string* missing) {
  int c = 0;
  auto put = [&](double v, const char* name, auto... args) {
    if (is_missing(v)) {
      if (missing) {
        char buf[64];
        if constexpr (sizeof...(args) == 0) {
          std::snprintf(buf, sizeof(buf), "%s", name);
        } else {
          std::snprintf(buf, sizeof(buf), name, args...);
        }
        *missing = buf;
      }
      return false;
    }
    out[c++] = v;
    return true;
  };

  out[c++] = 1.0;  // intercept

  double lead = panel.nwp_at(t, w, tau);
  if (!put(lead, "nwp_lead")) return false;
  for (int d = 2; d <= spec.nwp_lead_degree; ++d) {
    out[c++] = std::pow(lead, d);
  }
  for (int i = 1; i <= l.trailing; ++i) {
    if (!put(panel.nwp_at(t, w, tau - i), "nwp_trail_%d", i)) return false;
  }
  for (int j = 0; j < spec.power_lags; ++j) {
    if (!put(panel.power_at(t - j * panel.step_sec, w), "power_lag_%d", j)) return false;
  }
  auto err_feature = [&](int farm, int off) {
    double p = panel.power_at(t, farm);
    double f = panel.nwp_at(t - off * panel.step_sec, farm, off);
    return (is_missing(p) || is_missing(f)) ? kMissing : p - f;
  };
  for (int off : l.error_offsets) {
    if (!put(err_feature(w, off), "err_lag_%d", off)) return false;
  }
  for (std::size_t ni = 0; ni < l.neighbors.size(); ++ni) {
    for (int off : l.error_offsets) {
      if (!put(err_feature(l.neighbors[ni], off), "nbr%d_err_lag_%d",
               static_cast<int>(ni) + 1, off)) {
        return false;
      }
    }
  }
  return true;
}

int layout_width(const FeatureSpec& spec, const Layout& l) {
  return 1 + spec.nwp_lead_degree + l.trailing + spec.power_lags +
         static_cast<int>(l.error_offsets.size()) * (1 + static_cast<int>(l.neighbors.size()));
}

}  // namespace

std::vector<std::string> feature_names(const FeatureSpec& spec,
                                       const FarmRegistry& registry, int w,
                                       int tau, int n_tau) {
  Layout l = make_layout(spec, registry, w, tau, n_tau);
  std::vector<std::string> names;
  names.emplace_back("intercept");
  names.emplace_back("nwp_lead");
  for (int d = 2; d <= spec.nwp_lead_degree; ++d) {
    names.push_back("nwp_lead_pow" + std::to_string(d));
  }
  for (int i = 1; i <= l.trailing; ++i) {
    names.push_back("nwp_trail_" + std::to_string(i));
  }
  for (int j = 0; j < spec.power_lags; ++j) {
    names.push_back("power_lag_" + std::to_string(j));
  }
  for (int off : l.error_offsets) {
    names.push_back("err_lag_" + std::to_string(off));
  }
  for (std::size_t ni = 0; ni < l.neighbors.size(); ++ni) {
    for (int off : l.error_offsets) {
      names.push_back("nbr" + std::to_string(ni + 1) + "_err_lag_" + std::to_string(off));
    }
  }
  return names;
}

Dataset build_dataset(const SeriesPanel& panel, const FarmRegistry& registry,
                      int w, int tau, const FeatureSpec& spec, TimePoint start,
                      TimePoint end) {
  if (panel.n_tau < 1) throw std::invalid_argument("panel has no forecasts");
  if (tau < 1 || tau > panel.n_tau) throw std::invalid_argument("tau out of range");
  Layout l = make_layout(spec, registry, w, tau, panel.n_tau);
  const int width = layout_width(spec, l);

  Dataset ds;
  ds.columns = feature_names(spec, registry, w, tau, panel.n_tau);

  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> row(width);
  long dropped = 0;
  for (TimePoint t : panel.times) {
    if (t < start || t >= end) continue;
    double target_p = panel.power_at(t + static_cast<std::int64_t>(tau) * panel.step_sec, w);
    double target_f = panel.nwp_at(t, w, tau);
    bool ok = !is_missing(target_p) && !is_missing(target_f) &&
              fill_row(panel, w, tau, t, spec, l, row.data(), nullptr);
    if (!ok) {
      ++dropped;
      continue;
    }
    xs.insert(xs.end(), row.begin(), row.end());
    ys.push_back(target_p - target_f);
    ds.row_times.push_back(t);
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(ys.size());
  ds.X.resize(rows, width);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int j = 0; j < width; ++j) ds.X(i, j) = xs[i * width + j];
  }
  ds.y = Eigen::Map<Eigen::VectorXd>(ys.data(), rows);
  ds.dropped_rows = dropped;
  return ds;
}

Dataset build_dataset(const SeriesPanel& panel, const FarmRegistry& registry,
                      int w, int tau, const FeatureSpec& spec) {
  if (panel.times.empty()) throw std::invalid_argument("empty panel");
  return build_dataset(panel, registry, w, tau, spec, panel.times.front(),
                       panel.times.back() + 1);
}

Eigen::VectorXd build_online_row(const SeriesPanel& panel,
                                 const FarmRegistry& registry, TimePoint t_now,
                                 int w, int tau, const FeatureSpec& spec) {
  Layout l = make_layout(spec, registry, w, tau, panel.n_tau);
  Eigen::VectorXd row(layout_width(spec, l));
  std::string missing;
  if (!fill_row(panel, w, tau, t_now, spec, l, row.data(), &missing)) {
    throw std::runtime_error("unavailable feature: " + missing + " (farm " +
                             registry.farm(w).id + ", tau " + std::to_string(tau) +
                             ", t " + format_iso8601(t_now) + ")");
  }
  return row;
}

}  // namespace windscen
