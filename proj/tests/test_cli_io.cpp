#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "coupledrd/scenario_io.hpp"

using namespace crd;

TEST_CASE("scenario file roundtrip") {
  std::string path = "test_scenario_roundtrip.json";
  {
    nlohmann::json j = builtin_scenario("flat_polynomial");
    j["name"] = "from_file";
    std::ofstream(path) << j.dump(2);
  }
  Scenario sc = load_scenario(path);
  CHECK(sc.name == "from_file");
  CHECK(sc.n_species == 2);
  CHECK(sc.transmission.has_value());
  std::remove(path.c_str());
}

TEST_CASE("built-in scenarios load and validate") {
  for (const std::string& name : builtin_scenario_names()) {
    Scenario sc = load_scenario(name);
    CHECK(sc.name == name);
    CHECK(sc.n_species >= 1);
  }
}

TEST_CASE("missing scenario file") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("overrides") {
  nlohmann::json j = builtin_scenario("flat_linear");
  apply_override(j, "solver.epsilon=0.25");
  apply_override(j, "resolution=32");
  apply_override(j, "name=renamed");
  CHECK(j["solver"]["epsilon"] == 0.25);
  CHECK(j["resolution"] == 32);
  CHECK(j["name"] == "renamed");
  Scenario sc = scenario_from_json(j);
  CHECK(sc.epsilon == 0.25);
  CHECK(sc.resolution == 32);
  CHECK_THROWS_AS(apply_override(j, "no_equals_sign"), ConfigError);
}

TEST_CASE("invalid scenario values are rejected") {
  nlohmann::json j = builtin_scenario("flat_linear");
  apply_override(j, "solver.dt_init=-1");
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);

  j = builtin_scenario("flat_linear");
  apply_override(j, "diffusion.a_plus=0");
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);

  j = builtin_scenario("flat_linear");
  apply_override(j, "model.transmission_variant=bogus");
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
}
