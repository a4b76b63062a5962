#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "windscen/dist.hpp"
#include "windscen/ecdf.hpp"
#include "windscen/rng.hpp"

using namespace windscen;

TEST_SUITE("dist") {
  TEST_CASE("normal quantile matches reference values") {
    // Abramowitz & Stegun / R qnorm reference points.
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(normal_quantile(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-12));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
  }

  TEST_CASE("normal cdf and quantile are inverses") {
    for (double p = 0.001; p < 1.0; p += 0.0173) {
      CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    for (double z = -6.0; z <= 6.0; z += 0.37) {
      CHECK(normal_quantile(normal_cdf(z)) == doctest::Approx(z).epsilon(1e-9));
    }
  }

  TEST_CASE("student t against closed forms") {
    // nu = 1 (Cauchy): F(x) = 1/2 + atan(x)/pi; Q(p) = tan(pi (p - 1/2)).
    for (double x : {-3.0, -0.5, 0.0, 1.2, 7.0}) {
      CHECK(student_t_cdf(x, 1.0) ==
            doctest::Approx(0.5 + std::atan(x) / M_PI).epsilon(1e-10));
    }
    for (double p : {0.05, 0.25, 0.5, 0.8, 0.99}) {
      CHECK(student_t_quantile(p, 1.0) ==
            doctest::Approx(std::tan(M_PI * (p - 0.5))).epsilon(1e-8));
    }
    // nu = 2: Q(p) = (2p - 1) / sqrt(2 p (1 - p)).
    for (double p : {0.1, 0.3, 0.5, 0.75, 0.95}) {
      double expect = (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p));
      CHECK(student_t_quantile(p, 2.0) == doctest::Approx(expect).epsilon(1e-8));
    }
    // Large nu approaches the normal distribution.
    CHECK(student_t_quantile(0.975, 1e6) ==
          doctest::Approx(normal_quantile(0.975)).epsilon(1e-4));
  }

  TEST_CASE("student t cdf and quantile are inverses") {
    for (double nu : {2.5, 4.0, 10.0}) {
      for (double p = 0.01; p < 1.0; p += 0.07) {
        CHECK(student_t_cdf(student_t_quantile(p, nu), nu) ==
              doctest::Approx(p).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("rng determinism and uniform range") {
    Rng a(123), b(123), c(124);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
      double ua = a.uniform01(), ub = b.uniform01(), uc = c.uniform01();
      CHECK(ua > 0.0);
      CHECK(ua < 1.0);
      all_equal = all_equal && (ua == ub);
      any_diff = any_diff || (ua != uc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
  }

  TEST_CASE("seed derivation separates purposes") {
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(7, "scenario-block") == derive_seed(7, "scenario-block"));
  }
}

TEST_SUITE("ecdf") {
  TEST_CASE("three-point table evaluation") {
    auto t = EcdfTable::from_samples({1.0, -1.0, 0.0});
    CHECK(t.eval(0.0) == doctest::Approx(0.5));          // (2 - 0.5) / 3
    CHECK(t.eval(-5.0) == doctest::Approx(t.p_min()));   // clamp below
    CHECK(t.eval(5.0) == doctest::Approx(1.0 - t.p_min()));
    CHECK(t.p_min() == doctest::Approx(1.0 / 6.0));
  }

  TEST_CASE("inverse clamps and hits the median") {
    auto t = EcdfTable::from_samples({-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK(t.inverse(0.5) == doctest::Approx(0.0));       // symmetric median
    CHECK(t.inverse(0.01) == doctest::Approx(-2.0));     // below p_min
    CHECK(t.inverse(0.99) == doctest::Approx(2.0));
    CHECK_THROWS_AS(t.inverse(0.0), std::invalid_argument);
    CHECK_THROWS_AS(t.inverse(1.0), std::invalid_argument);
  }

  TEST_CASE("eval and inverse are mutual inverses on interior points") {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd(0.0, 1.3);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> samples(50 + trial * 11);
      for (auto& s : samples) s = nd(rng);
      auto t = EcdfTable::from_samples(samples);
      for (double p = 0.02; p < 1.0; p += 0.031) {
        if (p <= t.p_min() || p >= 1.0 - t.p_min()) continue;
        CHECK(t.eval(t.inverse(p)) == doctest::Approx(p).epsilon(1e-9));
      }
      for (double q = 0.05; q < 1.0; q += 0.09) {
        double z = t.inverse(q);
        if (z <= t.min() || z >= t.max()) continue;
        CHECK(t.inverse(t.eval(z)) == doctest::Approx(z).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("eval is monotone, inverse is monotone") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ud(-5.0, 5.0);
    std::vector<double> samples(400);
    for (auto& s : samples) s = ud(rng);
    auto t = EcdfTable::from_samples(samples);
    double prev = -1.0;
    for (double z = -6.0; z <= 6.0; z += 0.05) {
      double p = t.eval(z);
      CHECK(p >= prev);
      prev = p;
    }
    prev = t.inverse(0.001);
    for (double p = 0.002; p < 1.0; p += 0.002) {
      double z = t.inverse(p);
      CHECK(z >= prev);
      prev = z;
    }
  }

  TEST_CASE("empirical quantiles approach normal quantiles") {
    Rng rng(31);
    std::vector<double> samples(10000);
    for (auto& s : samples) s = rng.normal();
    auto t = EcdfTable::from_samples(samples);
    for (double p = 0.05; p <= 0.951; p += 0.05) {
      CHECK(std::fabs(t.inverse(p) - normal_quantile(p)) < 0.05);
    }
  }

  TEST_CASE("thinning preserves the quantile shape") {
    Rng rng(77);
    std::vector<double> samples(20000);
    for (auto& s : samples) s = rng.normal();
    auto full = EcdfTable::from_samples(samples);
    auto thin = EcdfTable::from_samples(samples, 512);
    CHECK(thin.n() == 512);
    CHECK(thin.min() == full.min());
    CHECK(thin.max() == full.max());
    for (double p = 0.02; p < 1.0; p += 0.017) {
      CHECK(thin.inverse(p) == doctest::Approx(full.inverse(p)).epsilon(0.02));
    }
  }

  TEST_CASE("non-finite samples are rejected") {
    CHECK_THROWS(EcdfTable::from_samples({1.0, std::nan(""), 2.0}));
    CHECK_THROWS(EcdfTable::from_samples({1.0, HUGE_VAL}));
    CHECK_THROWS(EcdfTable::from_samples({}));
  }

  TEST_CASE("moments of a known table") {
    auto t = EcdfTable::from_samples({1.0, 2.0, 3.0, 4.0});
    CHECK(t.mean() == doctest::Approx(2.5));
    CHECK(t.stddev() == doctest::Approx(std::sqrt(5.0 / 3.0)));
  }
}
