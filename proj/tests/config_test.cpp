#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "helpers.hpp"
#include "windscen/config.hpp"

using namespace windscen;

namespace {

struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& value) : name(n) {
    ::setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    RunConfig c;
    CHECK(c.horizon.n_tau == 36);
    CHECK(c.horizon.step_sec == 300);
    CHECK(c.issue_step_sec == 900);
    CHECK(c.regression_days == 28);
    CHECK(c.distribution_days == 90);
    CHECK(c.s_max == 10000);
    CHECK(c.copula_stride_steps == 6);
    REQUIRE(c.levels.size() == 19);
    CHECK(c.levels.front() == doctest::Approx(0.05));
    CHECK(c.levels.back() == doctest::Approx(0.95));
  }

  TEST_CASE("json round-trip preserves every field") {
    RunConfig c;
    c.registry_path = "/data/reg.csv";
    c.power_path = "/data/p.csv";
    c.horizon.n_tau = 12;
    c.regression_days = 14;
    c.s_max = 2500;
    c.beta_scale = 3.5;
    c.levels = {0.1, 0.5, 0.9};
    c.features.power_lags = 4;
    c.oracle.n_farms = 9;
    c.oracle.seed = 77;
    c.seed = 1234;
    RunConfig back = config_from_json(config_to_json(c));
    CHECK(back.registry_path == "/data/reg.csv");
    CHECK(back.power_path == "/data/p.csv");
    CHECK(back.horizon.n_tau == 12);
    CHECK(back.regression_days == 14);
    CHECK(back.s_max == 2500);
    CHECK(back.beta_scale == doctest::Approx(3.5));
    CHECK(back.levels == c.levels);
    CHECK(back.features.power_lags == 4);
    CHECK(back.oracle.n_farms == 9);
    CHECK(back.oracle.seed == 77);
    CHECK(back.seed == 1234);
    // Canonical form is stable: serialize twice, identical text.
    CHECK(config_to_json(back) == config_to_json(c));
  }

  TEST_CASE("partial json keeps defaults for missing keys") {
    RunConfig c = config_from_json(R"({"training": {"s_max": 500}})");
    CHECK(c.s_max == 500);
    CHECK(c.horizon.n_tau == 36);
    CHECK(c.regression_days == 28);
  }

  TEST_CASE("environment variables override file values") {
    EnvGuard e1("WINDSCEN_TRAINING_S_MAX", "321");
    EnvGuard e2("WINDSCEN_PATHS_OUT_DIR", "/tmp/elsewhere");
    EnvGuard e3("WINDSCEN_METRICS_LEVELS", "[0.25, 0.75]");
    RunConfig c = config_from_json(R"({
      "paths": {"out_dir": "/tmp/original"},
      "training": {"s_max": 100},
      "metrics": {"levels": [0.5]}
    })");
    CHECK(c.s_max == 321);
    CHECK(c.out_dir == "/tmp/elsewhere");
    CHECK(c.levels == std::vector<double>{0.25, 0.75});
  }

  TEST_CASE("load_config reads a file and applies overrides") {
    testutil::TempDir dir("config");
    {
      std::ofstream out(dir.file("cfg.json"));
      out << R"({"seed": 5, "horizons": {"n_tau": 8}})";
    }
    RunConfig a = load_config(dir.file("cfg.json"));
    CHECK(a.seed == 5);
    CHECK(a.horizon.n_tau == 8);
    {
      EnvGuard e("WINDSCEN_HORIZONS_N_TAU", "16");
      RunConfig b = load_config(dir.file("cfg.json"));
      CHECK(b.horizon.n_tau == 16);
    }
    CHECK_THROWS(load_config(dir.file("missing.json")));
    CHECK_THROWS(config_from_json("{not json"));
  }

  TEST_CASE("invalid settings are rejected") {
    CHECK_THROWS(config_from_json(R"({"horizons": {"n_tau": 0}})"));
    CHECK_THROWS(config_from_json(R"({"training": {"s_max": 0}})"));
    CHECK_THROWS(config_from_json(R"({"features": {"power_lags": -1}})"));
  }

  TEST_CASE("config hash is stable and sensitive") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.s_max = 9999;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.registry_path = "x";
    CHECK(config_hash(a) != config_hash(b));
  }
}
