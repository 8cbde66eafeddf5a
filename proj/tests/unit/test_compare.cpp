#include "dce3/compare.hpp"
#include "dce3/error.hpp"

#include <doctest.h>

using namespace dce3;

namespace {

const char* kA = "t,eps_t,mean_n,p_1_0\n0,0,0,1\n100,0.1,0.5,0.75\n200,0.2,1.0,0.5\n";
const char* kB = "t,eps_t,mean_n,p_1_0,p_3_0\n0,0,0,1,0\n100,0.1,0.51,0.75,0.001\n200,0.2,1.2,0.5,0.002\n";

}  // namespace

TEST_SUITE("compare") {

TEST_CASE("a run matches itself") {
  const auto a = parse_csv_table(kA, "a");
  const auto r = compare_tables(a, a, {});
  CHECK(r.pass);
  for (const auto& c : r.columns) {
    CHECK(c.max_abs == 0.0);
    CHECK(c.max_rel == 0.0);
  }
  CHECK(r.rows_compared == 3);
}

TEST_CASE("differences and tolerances") {
  const auto a = parse_csv_table(kA, "a");
  const auto b = parse_csv_table(kB, "b");
  CompareOptions o;
  o.tolerances = parse_tolerances("*=abs:1e-2,mean_n=rel:0.2");
  auto r = compare_tables(a, b, o);
  REQUIRE(r.columns.size() == 3);
  CHECK(r.columns[0].name == "mean_n");
  CHECK(r.columns[0].max_abs == doctest::Approx(0.2));
  CHECK(r.columns[0].max_rel == doctest::Approx(0.2 / 1.2));
  CHECK(r.columns[0].pass);
  CHECK(r.columns[2].name == "p_3_0");
  CHECK(r.columns[2].max_abs == doctest::Approx(0.002));
  CHECK(r.pass);

  o.tolerances = parse_tolerances("mean_n=abs:0.1");
  r = compare_tables(a, b, o);
  CHECK(r.columns.size() == 1);
  CHECK_FALSE(r.pass);

  o.window = std::pair{0.0, 0.15};
  r = compare_tables(a, b, o);
  CHECK(r.rows_compared == 2);
  CHECK(r.pass);
  CHECK(format_report(r).find("PASS") != std::string::npos);
}

TEST_CASE("grid mismatch") {
  const auto a = parse_csv_table(kA);
  const auto shifted = parse_csv_table("t,eps_t,mean_n\n0,0,0\n100,0.1,0\n210,0.21,0\n");
  const auto shorter = parse_csv_table("t,eps_t,mean_n\n0,0,0\n");
  CHECK_THROWS_AS(compare_tables(a, shifted, {}), ComparisonError);
  CHECK_THROWS_AS(compare_tables(a, shorter, {}), ComparisonError);
  CHECK_THROWS_AS(compare_tables(a, parse_csv_table("x,y\n1,2\n"), {}), ComparisonError);
}

TEST_CASE("tolerance parsing") {
  const auto t = parse_tolerances("p_*=rel:0.05, mean_n=abs:1e-3");
  REQUIRE(t.size() == 2);
  CHECK(t[0].pattern == "p_*");
  CHECK(t[0].kind == Tolerance::Kind::Rel);
  CHECK(t[0].value == 0.05);
  CHECK(t[1].kind == Tolerance::Kind::Abs);
  CHECK(parse_tolerances("").size() == 1);
  CHECK_THROWS_AS(parse_tolerances("mean_n"), ComparisonError);
  CHECK_THROWS_AS(parse_tolerances("mean_n=sq:1"), ComparisonError);
  CHECK_THROWS_AS(parse_tolerances("mean_n=abs:-1"), ComparisonError);
  CHECK_THROWS_AS(parse_tolerances("mean_n=abs:x"), ComparisonError);
}

TEST_CASE("malformed CSV") {
  CHECK_THROWS_AS(parse_csv_table(""), ComparisonError);
  CHECK_THROWS_AS(parse_csv_table("t,eps_t\n1\n"), ComparisonError);
  CHECK_THROWS_AS(parse_csv_table("t,eps_t\n1,zz\n"), ComparisonError);
  CHECK_THROWS_AS(resolve_run_csv("/nonexistent/run"), ComparisonError);
}

}
