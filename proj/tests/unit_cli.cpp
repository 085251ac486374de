#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uncertlab/experiments.hpp"
#include "uncertlab/suites.hpp"

using namespace uncertlab;
using namespace uncertlab::cli;

TEST_CASE("figure tuples are emitted verbatim") {
  RunOptions opt;
  const auto rep = run_experiment("stretch-figure1", "{}", opt);
  auto value_of = [&](const std::string& key) {
    for (const auto& [k, v] : rep.params)
      if (k == key) return v;
    return std::string();
  };
  CHECK(value_of("sigma_stretched") == "3,4,7,8,9,10,13,14,17,18,19,20,21");
  CHECK(value_of("prefix_stretched") == "3,4,7,8,9,10,13,14,19,20,21");
  CHECK(value_of("suffix_stretched") == "7,8,9,10,13,14,17,18,19,20,21");
}

TEST_CASE("unknown keys and kinds fail closed") {
  RunOptions opt;
  CHECK_THROWS_AS(run_experiment("distance", R"({"bogus":1})", opt), ConfigError);
  CHECK_THROWS_AS(run_experiment("no-such-experiment", "{}", opt), ConfigError);
  CHECK_THROWS_AS(run_experiment("distance", "not json", opt), ConfigError);
  CHECK_THROWS_AS(
      run_from_document(R"({"experiment":"distance","mystery":2})", opt, {}),
      ConfigError);
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), ConfigError);
}

TEST_CASE("identical functions give a zero distance estimate") {
  RunOptions opt;
  opt.trials = 2000;
  const auto rep = run_experiment(
      "distance", R"({"family":"subset-majority","ell":8,"gap":0,"n":8})", opt);
  CHECK(rep.primary().value == 0.0);
  CHECK(rep.primary().stderr_ == 0.0);
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
  RunOptions a;
  a.seed = 123;
  a.trials = 30000;
  a.workers = 1;
  RunOptions b = a;
  b.workers = 4;
  const auto r1 = run_experiment("stability", R"({"k":5,"rho":0.5})", a);
  const auto r2 = run_experiment("stability", R"({"k":5,"rho":0.5})", b);
  CHECK(report_csv(r1) == report_csv(r2));
  const auto r3 = run_experiment("stability", R"({"k":5,"rho":0.5})", a);
  CHECK(report_csv(r1) == report_csv(r3));
}

TEST_CASE("csv rows echo the seed and the named parameters") {
  RunOptions opt;
  opt.seed = 777;
  opt.trials = 1000;
  const auto rep = run_experiment("stability", R"({"k":3,"rho":0.25})", opt);
  const std::string csv = report_csv(rep);
  CHECK(csv.find("experiment_id,metric,k,rho,trials,estimate") !=
        std::string::npos);
  CHECK(csv.find(",777\n") != std::string::npos);
  CHECK(csv.find("stability,stability,3,0.25,1000,") != std::string::npos);
}

TEST_CASE("document overrides follow the precedence rules") {
  RunOptions opt;
  opt.seed = 9;
  const auto rep = run_from_document(
      R"({"experiment":"stability","params":{"k":3,"rho":0.5},"trials":500,"seed":31})",
      opt, {"seed"});
  CHECK(rep.master_seed == 9);   // flag wins
  CHECK(rep.trials == 500);      // document value kept
}

TEST_CASE("chromatic experiment carries the bound") {
  RunOptions opt;
  const auto rep = run_experiment("chromatic", R"({"m":6,"t":3})", opt);
  REQUIRE(rep.estimates.size() == 2);
  CHECK(rep.estimates[0].value >= rep.estimates[1].value);
}

TEST_CASE("bruteforce experiment reproduces the micro cases") {
  RunOptions opt;
  CHECK(run_experiment("bruteforce", R"({"case":"identity-c1"})", opt)
            .primary()
            .value == doctest::Approx(0.0));
  CHECK(run_experiment("bruteforce", R"({"case":"xor-c0"})", opt)
            .primary()
            .value == doctest::Approx(0.5));
  CHECK(run_experiment("bruteforce", R"({"case":"xor-c1"})", opt)
            .primary()
            .value == doctest::Approx(0.0));
}

TEST_CASE("calibration suite regenerates deterministically") {
  SuiteOptions so;
  so.fast = true;
  const auto results = run_suite("calibration", so);
  for (const auto& r : results) CHECK(r.passed);
}
