#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "windscen/panel.hpp"
#include "windscen/registry.hpp"

namespace testutil {

/// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("windscen-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

/// Bit-exact matrix comparison (NaN-safe, unlike floating == semantics).
inline bool bit_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Kolmogorov-Smirnov statistic of `x` against the uniform distribution on
/// [0, 1].
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, std::fabs((i + 1) / n - x[i]));
    d = std::max(d, std::fabs(x[i] - i / n));
  }
  return d;
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Small panel with a complete power grid and a complete per-step NWP grid,
/// filled from user callbacks.
template <typename PowerFn, typename NwpFn>
windscen::SeriesPanel make_panel(int n_times, int n_farms, int n_tau,
                                 PowerFn power, NwpFn nwp,
                                 windscen::TimePoint t0 = 1700000000,
                                 std::int64_t step = 300) {
  windscen::SeriesPanel p;
  p.step_sec = step;
  p.issue_step_sec = step;
  p.n_tau = n_tau;
  p.times.resize(n_times);
  for (int i = 0; i < n_times; ++i) p.times[i] = t0 + i * step;
  p.power.resize(n_times, n_farms);
  for (int i = 0; i < n_times; ++i) {
    for (int w = 0; w < n_farms; ++w) p.power(i, w) = power(i, w);
  }
  p.issue_times = p.times;
  p.nwp.assign(static_cast<std::size_t>(n_times) * n_farms * n_tau,
               windscen::kMissing);
  for (int i = 0; i < n_times; ++i) {
    for (int w = 0; w < n_farms; ++w) {
      for (int tau = 1; tau <= n_tau; ++tau) p.nwp_cell(i, w, tau) = nwp(i, w, tau);
    }
  }
  return p;
}

inline windscen::FarmRegistry simple_registry(int n_farms, double capacity = 100.0) {
  std::vector<windscen::Farm> farms(n_farms);
  for (int w = 0; w < n_farms; ++w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "F%03d", w + 1);
    farms[w].id = buf;
    farms[w].capacity_mw = capacity;
  }
  for (int w = 0; w < n_farms; ++w) {
    for (int v = 0; v < n_farms; ++v) {
      if (v != w) farms[w].neighbors.push_back(farms[v].id);
    }
  }
  return windscen::FarmRegistry(std::move(farms));
}

}  // namespace testutil
