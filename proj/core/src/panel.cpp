#include "windscen/panel.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "windscen/csv.hpp"

namespace windscen {

std::ptrdiff_t SeriesPanel::time_index(TimePoint t) const {
  if (times.empty() || t < times.front() || t > times.back()) return -1;
  std::int64_t off = t - times.front();
  if (off % step_sec != 0) return -1;
  return off / step_sec;
}

std::ptrdiff_t SeriesPanel::issue_index(TimePoint t) const {
  if (issue_times.empty() || t < issue_times.front()) return -1;
  std::int64_t off = t - issue_times.front();
  std::ptrdiff_t i = off / issue_step_sec;  // floor: most recent issue <= t
  return std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(issue_times.size()) - 1);
}

double SeriesPanel::power_at(TimePoint t, int w) const {
  std::ptrdiff_t i = time_index(t);
  return i < 0 ? kMissing : power(i, w);
}

double SeriesPanel::nwp_at(TimePoint t, int w, int tau, int max_back) const {
  std::ptrdiff_t i = issue_index(t);
  for (int back = 0; back <= max_back && i - back >= 0; ++back) {
    double v = nwp_cell(i - back, w, tau);
    if (!is_missing(v)) return v;
  }
  return kMissing;
}

namespace {

// Builds a uniform grid over sorted distinct instants; the step is the
// smallest observed spacing.
void uniform_grid(std::vector<TimePoint>& instants, std::int64_t fallback_step,
                  std::vector<TimePoint>& grid, std::int64_t& step) {
  std::sort(instants.begin(), instants.end());
  instants.erase(std::unique(instants.begin(), instants.end()), instants.end());
  step = fallback_step;
  for (std::size_t i = 1; i < instants.size(); ++i) {
    std::int64_t d = instants[i] - instants[i - 1];
    if (i == 1 || d < step) step = d;
  }
  if (step <= 0) step = fallback_step;
  grid.clear();
  if (instants.empty()) return;
  for (TimePoint t = instants.front(); t <= instants.back(); t += step) {
    grid.push_back(t);
  }
  // Every observed instant must land on the grid.
  for (TimePoint t : instants) {
    if ((t - instants.front()) % step != 0) {
      throw std::runtime_error("timestamps are not on a uniform grid (offset " +
                               format_iso8601(t) + ", step " + std::to_string(step) + "s)");
    }
  }
}

struct RawCell {
  TimePoint t;
  int w;
  int tau;  // 0 for power rows
  double v;
};

}  // namespace

SeriesPanel load_panel(const std::string& power_file,
                       const std::string& forecast_file,
                       const FarmRegistry& registry, PanelLoadReport* report) {
  PanelLoadReport rep;
  const int n_farms = registry.n_farms();

  std::vector<RawCell> pcells;
  std::vector<TimePoint> pinstants;
  {
    CsvReader r(power_file);
    if (r.header() != std::vector<std::string>{"timestamp", "farm_id", "power_mw"}) {
      throw std::runtime_error("bad power header in " + power_file);
    }
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 3) {
        throw std::runtime_error("malformed power row at " + power_file + ":" +
                                 std::to_string(r.line_number()));
      }
      int w = registry.index_of(f[1]);
      if (w < 0) {
        throw std::runtime_error("unknown farm_id '" + f[1] + "' at " + power_file +
                                 ":" + std::to_string(r.line_number()));
      }
      RawCell c{parse_iso8601(f[0]), w, 0, parse_double_field(f[2], r)};
      pcells.push_back(c);
      pinstants.push_back(c.t);
      ++rep.power_rows;
    }
  }

  std::vector<RawCell> fcells;
  std::vector<TimePoint> finstants;
  int max_tau = 0;
  {
    CsvReader r(forecast_file);
    if (r.header() != std::vector<std::string>{"issue_time", "farm_id",
                                               "horizon_steps", "forecast_mw"}) {
      throw std::runtime_error("bad forecast header in " + forecast_file);
    }
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 4) {
        throw std::runtime_error("malformed forecast row at " + forecast_file + ":" +
                                 std::to_string(r.line_number()));
      }
      int w = registry.index_of(f[1]);
      if (w < 0) {
        throw std::runtime_error("unknown farm_id '" + f[1] + "' at " +
                                 forecast_file + ":" + std::to_string(r.line_number()));
      }
      long tau = parse_long_field(f[2], r);
      if (tau < 1) {
        throw std::runtime_error("horizon_steps < 1 at " + forecast_file + ":" +
                                 std::to_string(r.line_number()));
      }
      RawCell c{parse_iso8601(f[0]), w, static_cast<int>(tau),
                parse_double_field(f[3], r)};
      fcells.push_back(c);
      finstants.push_back(c.t);
      max_tau = std::max(max_tau, c.tau);
      ++rep.forecast_rows;
    }
  }
  if (pcells.empty()) throw std::runtime_error("no power rows in " + power_file);
  if (fcells.empty()) throw std::runtime_error("no forecast rows in " + forecast_file);

  SeriesPanel panel;
  uniform_grid(pinstants, 300, panel.times, panel.step_sec);
  uniform_grid(finstants, panel.step_sec, panel.issue_times, panel.issue_step_sec);
  panel.n_tau = max_tau;

  panel.power.setConstant(static_cast<Eigen::Index>(panel.times.size()), n_farms, kMissing);
  panel.nwp.assign(panel.issue_times.size() * n_farms * max_tau, kMissing);

  for (const RawCell& c : pcells) {
    std::ptrdiff_t i = panel.time_index(c.t);
    double cap = registry.farm(c.w).capacity_mw;
    if (!is_missing(panel.power(i, c.w))) ++rep.duplicate_cells;
    if (c.v < 0.0 || c.v > cap) {
      ++rep.out_of_range_cells;
      panel.power(i, c.w) = kMissing;
    } else {
      panel.power(i, c.w) = c.v;
    }
  }
  for (const RawCell& c : fcells) {
    std::ptrdiff_t i = (c.t - panel.issue_times.front()) / panel.issue_step_sec;
    double cap = registry.farm(c.w).capacity_mw;
    double& cell = panel.nwp_cell(i, c.w, c.tau);
    if (!is_missing(cell)) ++rep.duplicate_cells;
    if (c.v < 0.0 || c.v > cap) {
      ++rep.out_of_range_cells;
      cell = kMissing;
    } else {
      cell = c.v;
    }
  }
  if (report) *report = rep;
  return panel;
}

void write_panel(const SeriesPanel& panel, const FarmRegistry& registry,
                 const std::string& power_file, const std::string& forecast_file,
                 const std::string& header_comment) {
  std::FILE* fp = std::fopen(power_file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + power_file);
  if (!header_comment.empty()) std::fprintf(fp, "# %s\n", header_comment.c_str());
  std::fprintf(fp, "timestamp,farm_id,power_mw\n");
  for (int i = 0; i < panel.n_times(); ++i) {
    std::string ts = format_iso8601(panel.times[i]);
    for (int w = 0; w < panel.n_farms(); ++w) {
      double v = panel.power(i, w);
      if (is_missing(v)) continue;
      std::fprintf(fp, "%s,%s,%.3f\n", ts.c_str(), registry.farm(w).id.c_str(), v);
    }
  }
  std::fclose(fp);

  fp = std::fopen(forecast_file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + forecast_file);
  if (!header_comment.empty()) std::fprintf(fp, "# %s\n", header_comment.c_str());
  std::fprintf(fp, "issue_time,farm_id,horizon_steps,forecast_mw\n");
  for (std::size_t i = 0; i < panel.issue_times.size(); ++i) {
    std::string ts = format_iso8601(panel.issue_times[i]);
    for (int w = 0; w < panel.n_farms(); ++w) {
      for (int tau = 1; tau <= panel.n_tau; ++tau) {
        double v = panel.nwp_cell(static_cast<std::ptrdiff_t>(i), w, tau);
        if (is_missing(v)) continue;
        std::fprintf(fp, "%s,%s,%d,%.3f\n", ts.c_str(), registry.farm(w).id.c_str(),
                     tau, v);
      }
    }
  }
  std::fclose(fp);
}

SeriesPanel slice_window(const SeriesPanel& panel, TimePoint start, TimePoint end) {
  if (start >= end) throw std::invalid_argument("slice_window: start >= end");
  auto lo = std::lower_bound(panel.times.begin(), panel.times.end(), start);
  auto hi = std::lower_bound(panel.times.begin(), panel.times.end(), end);
  if (lo == hi) throw std::invalid_argument("slice_window: empty result window");

  SeriesPanel out;
  out.step_sec = panel.step_sec;
  out.n_tau = panel.n_tau;
  out.issue_step_sec = panel.issue_step_sec;
  out.times.assign(lo, hi);
  std::ptrdiff_t t0 = lo - panel.times.begin();
  out.power = panel.power.middleRows(t0, hi - lo);

  // Keep the issue at or before `start` so nwp_at(start, ...) still resolves.
  std::ptrdiff_t i0 = panel.issue_index(start);
  if (i0 < 0) i0 = 0;
  auto ihi = std::lower_bound(panel.issue_times.begin(), panel.issue_times.end(), end);
  std::ptrdiff_t i1 = ihi - panel.issue_times.begin();
  if (i1 <= i0) i1 = i0 + 1;
  out.issue_times.assign(panel.issue_times.begin() + i0, panel.issue_times.begin() + i1);
  std::size_t stride = static_cast<std::size_t>(panel.n_farms()) * panel.n_tau;
  out.nwp.assign(panel.nwp.begin() + i0 * stride, panel.nwp.begin() + i1 * stride);
  return out;
}

SeriesPanel aggregate_panel(const SeriesPanel& panel) {
  SeriesPanel out;
  out.times = panel.times;
  out.step_sec = panel.step_sec;
  out.issue_times = panel.issue_times;
  out.issue_step_sec = panel.issue_step_sec;
  out.n_tau = panel.n_tau;
  out.power.setConstant(panel.power.rows(), 1, kMissing);
  for (Eigen::Index i = 0; i < panel.power.rows(); ++i) {
    double s = 0.0;
    bool ok = true;
    for (Eigen::Index w = 0; w < panel.power.cols(); ++w) {
      double v = panel.power(i, w);
      if (is_missing(v)) { ok = false; break; }
      s += v;
    }
    if (ok) out.power(i, 0) = s;
  }
  out.nwp.assign(panel.issue_times.size() * out.n_tau, kMissing);
  for (std::size_t i = 0; i < panel.issue_times.size(); ++i) {
    for (int tau = 1; tau <= panel.n_tau; ++tau) {
      double s = 0.0;
      bool ok = true;
      for (int w = 0; w < panel.n_farms(); ++w) {
        double v = panel.nwp_cell(static_cast<std::ptrdiff_t>(i), w, tau);
        if (is_missing(v)) { ok = false; break; }
        s += v;
      }
      if (ok) out.nwp_cell(static_cast<std::ptrdiff_t>(i), 0, tau) = s;
    }
  }
  return out;
}

FarmRegistry aggregate_registry(const FarmRegistry& registry) {
  double cap = 0.0;
  for (const auto& f : registry.farms()) cap += f.capacity_mw;
  return FarmRegistry({Farm{"AGGREGATE", cap, {}}});
}

}  // namespace windscen
