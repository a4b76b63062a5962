#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "windscen/csv.hpp"
#include "windscen/registry.hpp"
#include "windscen/time.hpp"

using namespace windscen;

TEST_SUITE("time") {
  TEST_CASE("parse and format round-trip") {
    const char* stamps[] = {"1970-01-01T00:00:00Z", "2000-02-29T23:59:59Z",
                            "2024-12-31T12:34:56Z", "2025-06-15T00:05:00Z",
                            "1969-07-20T20:17:40Z"};
    for (const char* s : stamps) {
      CHECK(format_iso8601(parse_iso8601(s)) == s);
    }
  }

  TEST_CASE("known epoch values") {
    CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601("1970-01-02T00:00:00Z") == kSecondsPerDay);
    CHECK(parse_iso8601("2001-09-09T01:46:40Z") == 1000000000);
  }

  TEST_CASE("malformed input throws") {
    CHECK_THROWS_AS(parse_iso8601("2024-13-01T00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("2024-02-30T00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("2024-01-01 00:00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("2024-01-01T00:00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601("nonsense"), std::invalid_argument);
  }

  TEST_CASE("format round-trips arbitrary instants") {
    for (TimePoint t : {TimePoint{0}, TimePoint{1735689600}, TimePoint{951868799},
                        TimePoint{-86400}}) {
      CHECK(parse_iso8601(format_iso8601(t)) == t);
    }
  }
}

TEST_SUITE("csv") {
  TEST_CASE("reads header and records, skips comments") {
    testutil::TempDir dir("csv");
    {
      std::ofstream out(dir.file("a.csv"));
      out << "# generated\n# more\nh1,h2\n1,2\n3,4\n";
    }
    CsvReader r(dir.file("a.csv"));
    REQUIRE(r.header() == std::vector<std::string>{"h1", "h2"});
    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK(f == std::vector<std::string>{"1", "2"});
    REQUIRE(r.next(f));
    CHECK(f == std::vector<std::string>{"3", "4"});
    CHECK(r.line_number() == 5);
    CHECK_FALSE(r.next(f));
  }

  TEST_CASE("parse errors carry file and line context") {
    testutil::TempDir dir("csv");
    {
      std::ofstream out(dir.file("b.csv"));
      out << "h\nnot_a_number\n";
    }
    CsvReader r(dir.file("b.csv"));
    std::vector<std::string> f;
    REQUIRE(r.next(f));
    CHECK_THROWS_WITH_AS(parse_double_field(f[0], r),
                         doctest::Contains("b.csv:2"), std::invalid_argument);
  }

  TEST_CASE("missing file throws") {
    CHECK_THROWS(CsvReader("/nonexistent/definitely/not/here.csv"));
  }

  TEST_CASE("split handles empty fields") {
    std::vector<std::string> out;
    split_csv("a,,c", ',', out);
    CHECK(out == std::vector<std::string>{"a", "", "c"});
    split_csv("", ',', out);
    CHECK(out == std::vector<std::string>{""});
  }
}

TEST_SUITE("registry") {
  TEST_CASE("load and write round-trip") {
    testutil::TempDir dir("reg");
    FarmRegistry reg = testutil::simple_registry(3, 150.0);
    write_registry(reg, dir.file("r.csv"));
    FarmRegistry back = load_registry(dir.file("r.csv"));
    REQUIRE(back.n_farms() == 3);
    for (int w = 0; w < 3; ++w) {
      CHECK(back.farm(w).id == reg.farm(w).id);
      CHECK(back.farm(w).capacity_mw == doctest::Approx(150.0));
      CHECK(back.farm(w).neighbors == reg.farm(w).neighbors);
    }
  }

  TEST_CASE("index and neighbor lookups") {
    FarmRegistry reg = testutil::simple_registry(3);
    CHECK(reg.index_of("F002") == 1);
    CHECK(reg.index_of("missing") == -1);
    CHECK(reg.neighbor_indices(0) == std::vector<int>{1, 2});
  }

  TEST_CASE("validation rejects bad registries") {
    CHECK_THROWS(FarmRegistry({{"A", 10.0, {}}, {"A", 10.0, {}}}));       // dup id
    CHECK_THROWS(FarmRegistry({{"A", 10.0, {"A"}}}));                     // self
    CHECK_THROWS(FarmRegistry({{"A", 10.0, {"Z"}}}));                     // unknown
    CHECK_THROWS(FarmRegistry({{"A", 0.0, {}}}));                        // capacity
    CHECK_THROWS(FarmRegistry({{"A", -5.0, {}}}));
  }
}
