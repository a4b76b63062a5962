#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "windscen/registry.hpp"
#include "windscen/time.hpp"

namespace windscen {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return !(v == v); }

/// Look-ahead grid: n_tau steps of `step_sec` each (default 36 x 5 min).
struct HorizonGrid {
  int n_tau = 36;
  std::int64_t step_sec = 300;
};

/// Aligned panel of measured power and NWP forecasts on a uniform 5-minute
/// grid. Missing cells are NaN; gaps in the input files become explicit
/// missing slots, never silently skipped. Immutable after load by
/// convention: nothing in the library mutates a panel it did not build.
struct SeriesPanel {
  // Power grid: times[i] = t0 + i * step_sec, strictly increasing.
  std::vector<TimePoint> times;
  std::int64_t step_sec = 300;
  Eigen::MatrixXd power;  // [time x farm], MW, NaN missing

  // NWP grid: one row per issue time; issues are uniform at issue_step_sec.
  std::vector<TimePoint> issue_times;
  std::int64_t issue_step_sec = 300;
  int n_tau = 0;
  std::vector<double> nwp;  // [issue x farm x tau], MW, NaN missing

  int n_farms() const { return static_cast<int>(power.cols()); }
  int n_times() const { return static_cast<int>(times.size()); }

  /// Index of timestamp t in the power grid, or -1 if off-grid / outside.
  std::ptrdiff_t time_index(TimePoint t) const;
  std::ptrdiff_t issue_index(TimePoint t) const;

  double power_at(TimePoint t, int w) const;

  double& nwp_cell(std::ptrdiff_t issue, int w, int tau) {
    return nwp[(issue * n_farms() + w) * n_tau + (tau - 1)];
  }
  double nwp_cell(std::ptrdiff_t issue, int w, int tau) const {
    return nwp[(issue * n_farms() + w) * n_tau + (tau - 1)];
  }

  /// F_t^tau with carry-forward: the most recent issue at or before t is
  /// used; walks back across missing issues up to `max_back` slots.
  double nwp_at(TimePoint t, int w, int tau, int max_back = 24) const;
};

struct PanelLoadReport {
  long power_rows = 0;
  long forecast_rows = 0;
  long out_of_range_cells = 0;  // clamped to missing, counted as warnings
  long duplicate_cells = 0;     // later row wins
};

/// Loads the `timestamp,farm_id,power_mw` and
/// `issue_time,farm_id,horizon_steps,forecast_mw` CSVs onto one aligned
/// grid. Values outside [0, capacity] are marked missing and counted.
/// Throws on malformed rows (with line number), unknown farm ids and
/// non-monotone constructed grids.
SeriesPanel load_panel(const std::string& power_file,
                       const std::string& forecast_file,
                       const FarmRegistry& registry,
                       PanelLoadReport* report = nullptr);

/// Writes the two CSV schemas above with 3 fractional digits (the
/// documented file precision; load(write(p)) is exact at that precision).
/// Missing cells are not written.
void write_panel(const SeriesPanel& panel, const FarmRegistry& registry,
                 const std::string& power_file, const std::string& forecast_file,
                 const std::string& header_comment = "");

/// Sub-panel with exactly the timestamps in [start, end). Issue rows from
/// just before `start` are retained so carry-forward still resolves.
/// Throws std::invalid_argument if the result has no timestamps.
SeriesPanel slice_window(const SeriesPanel& panel, TimePoint start, TimePoint end);

/// Sums power and NWP over all farms into a single synthetic "AGGREGATE"
/// farm. A cell is missing if any constituent farm cell is missing.
SeriesPanel aggregate_panel(const SeriesPanel& panel);
FarmRegistry aggregate_registry(const FarmRegistry& registry);

/// Canonical flattened index of the (farm, horizon) model grid:
/// k = w * n_tau + (tau - 1), with w 0-based and tau 1-based.
inline int flat_index(int w, int tau, int n_tau) { return w * n_tau + (tau - 1); }

}  // namespace windscen
