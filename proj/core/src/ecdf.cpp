#include "windscen/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windscen {

EcdfTable EcdfTable::from_samples(std::vector<double> samples, int max_knots) {
  if (samples.empty()) throw std::invalid_argument("EcdfTable: no samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("EcdfTable: non-finite sample");
  }
  std::sort(samples.begin(), samples.end());
  if (max_knots > 1 && static_cast<int>(samples.size()) > max_knots) {
    std::vector<double> thin(max_knots);
    const std::size_t n = samples.size();
    for (int i = 0; i < max_knots; ++i) {
      std::size_t j = static_cast<std::size_t>(
          std::llround(static_cast<double>(i) * (n - 1) / (max_knots - 1)));
      thin[i] = samples[j];
    }
    samples = std::move(thin);
  }
  EcdfTable t;
  t.sorted_u_ = std::move(samples);
  return t;
}

EcdfTable EcdfTable::from_sorted(std::vector<double> sorted) {
  if (sorted.empty()) throw std::invalid_argument("EcdfTable: no samples");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("EcdfTable: values not sorted");
  }
  EcdfTable t;
  t.sorted_u_ = std::move(sorted);
  return t;
}

double EcdfTable::eval(double z) const {
  const int nn = n();
  if (nn == 0) throw std::logic_error("EcdfTable: empty");
  const double pmin = p_min();
  if (z <= sorted_u_.front()) return pmin;
  if (z >= sorted_u_.back()) return 1.0 - pmin;
  // Last index with value <= z; ties collapse onto the highest position.
  auto it = std::upper_bound(sorted_u_.begin(), sorted_u_.end(), z);
  std::size_t b = it - sorted_u_.begin();  // first value > z, b >= 1
  std::size_t a = b - 1;
  double ua = sorted_u_[a], ub = sorted_u_[b];
  double pa = (a + 0.5) / nn, pb = (b + 0.5) / nn;
  return pa + (pb - pa) * (z - ua) / (ub - ua);
}

double EcdfTable::inverse(double p) const {
  const int nn = n();
  if (nn == 0) throw std::logic_error("EcdfTable: empty");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("EcdfTable::inverse: p outside (0,1)");
  const double pmin = p_min();
  if (p <= pmin) return sorted_u_.front();
  if (p >= 1.0 - pmin) return sorted_u_.back();
  double pos = p * nn - 0.5;  // fractional order-statistic index
  std::size_t a = static_cast<std::size_t>(pos);
  if (a + 1 >= sorted_u_.size()) a = sorted_u_.size() - 2;
  double frac = pos - a;
  return sorted_u_[a] + frac * (sorted_u_[a + 1] - sorted_u_[a]);
}

double EcdfTable::mean() const {
  double s = 0.0;
  for (double v : sorted_u_) s += v;
  return s / n();
}

double EcdfTable::stddev() const {
  double m = mean(), s = 0.0;
  for (double v : sorted_u_) s += (v - m) * (v - m);
  return n() > 1 ? std::sqrt(s / (n() - 1)) : 0.0;
}

}  // namespace windscen
